use super::{AlgebraSpec, GenKind, Letter, NCElement};
use crate::error::{Error, Result};
use crate::scalars::Coeff;

/// The families of generator pairs with closed-form power straightening.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerPair {
    /// x^i_m against x^j_n (or ∂ against ∂) with i > j.
    CrossRow,
    /// x^i_m against x^i_n (or ∂ against ∂) with m > n.
    SameRow,
    /// ∂^i_m against x^j_n.
    Mixed,
}

impl PowerPair {
    pub fn classify<S: Coeff>(spec: &AlgebraSpec<S>, g: usize, h: usize) -> Option<PowerPair> {
        let (a, b) = (&spec.gens()[g], &spec.gens()[h]);
        if a.site != b.site {
            return None;
        }
        match (a.kind, b.kind) {
            (GenKind::X, GenKind::X) | (GenKind::Del, GenKind::Del) => {
                if a.upper > b.upper {
                    Some(PowerPair::CrossRow)
                } else if a.upper == b.upper && a.lower > b.lower {
                    Some(PowerPair::SameRow)
                } else {
                    None
                }
            }
            (GenKind::Del, GenKind::X) => Some(PowerPair::Mixed),
            _ => None,
        }
    }
}

struct Coeffs<S> {
    q: S,
}

impl<S: Coeff> Coeffs<S> {
    fn qp(&self, k: i64) -> S {
        self.q.pow_i(k).expect("q is invertible")
    }

    fn kappa(&self) -> S {
        self.qp(1).minus(&self.qp(-1))
    }

    fn int(&self, n: i64) -> S {
        self.q.from_int_like(n)
    }
}

fn delta(a: u32, b: u32) -> i64 {
    (a == b) as i64
}

fn find<S: Coeff>(spec: &AlgebraSpec<S>, site: u32, kind: GenKind, upper: u32, lower: u32) -> Option<usize> {
    spec.gens().iter().position(|g| g.site == site && g.kind == kind && g.upper == upper && g.lower == lower)
}

/// Accumulates coefficient · word terms and normalizes them in the algebra.
struct Builder<'a, S: Coeff> {
    spec: &'a AlgebraSpec<S>,
    out: NCElement<S>,
}

impl<'a, S: Coeff> Builder<'a, S> {
    fn push(&mut self, c: &S, word: &[(usize, i64)]) -> Result<()> {
        if c.vanishes() || word.iter().any(|&(_, e)| e < 0) {
            return Ok(());
        }
        let nf = self.spec.normal_form(word)?;
        self.out = self.out.add(&nf.scale(c));
        Ok(())
    }
}

/// The closed-form expansion of g^r·h^s for an out-of-order pair of a
/// Kronecker edge algebra, with the expansion's words brought to normal form.
///
/// Cross-row and mixed pairs need r = 1 or s = 1; same-row pairs take any
/// r, s ≥ 1.
pub fn straighten_power<S: Coeff>(spec: &AlgebraSpec<S>, g: usize, h: usize, r: u32, s: u32) -> Result<NCElement<S>> {
    let unsupported = || {
        Error::Unsupported(format!(
            "no closed form for {}^{r}·{}^{s}",
            spec.letter_label(Letter::new(g)),
            spec.letter_label(Letter::new(h))
        ))
    };
    if r == 0 || s == 0 {
        return Err(Error::Domain("powers must be positive".into()));
    }
    let kind = PowerPair::classify(spec, g, h).ok_or_else(unsupported)?;
    let c = Coeffs { q: spec.q().clone() };
    let (ga, gb) = (spec.gens()[g].clone(), spec.gens()[h].clone());
    let site = ga.site;
    let mut b = Builder { spec, out: spec.zero() };
    let (r, s) = (r as i64, s as i64);
    match kind {
        PowerPair::SameRow => {
            // (g^i_m)^r (g^i_n)^s = q^{-rs} (g^i_n)^s (g^i_m)^r
            b.push(&c.qp(-r * s), &[(h, s), (g, r)])?;
        }
        PowerPair::CrossRow => {
            if r != 1 && s != 1 {
                return Err(unsupported());
            }
            let (i, m, j, n) = (ga.upper, ga.lower, gb.upper, gb.lower);
            let k = r.max(s);
            let theta = (n > m) as i64;
            let t_k = c.int(theta).times(&c.qp(2 * k - 1).minus(&c.qp(-1)));
            let g_jm = find(spec, site, ga.kind, j, m).ok_or_else(unsupported)?;
            let g_in = find(spec, site, ga.kind, i, n).ok_or_else(unsupported)?;
            if s == k {
                // g (h)^k = q^{kδ} h^k g + t_k h^{k-1} g^j_m g^i_n
                b.push(&c.qp(k * delta(m, n)), &[(h, k), (g, 1)])?;
                b.push(&t_k, &[(h, k - 1), (g_jm, 1), (g_in, 1)])?;
            } else {
                // g^k h = q^{kδ} h g^k + t_k g^j_m g^i_n g^{k-1}
                b.push(&c.qp(k * delta(m, n)), &[(h, 1), (g, k)])?;
                b.push(&t_k, &[(g_jm, 1), (g_in, 1), (g, k - 1)])?;
            }
        }
        PowerPair::Mixed => {
            if r != 1 && s != 1 {
                return Err(unsupported());
            }
            let (i, m, j, n) = (ga.upper, ga.lower, gb.upper, gb.lower);
            let k = r.max(s);
            let (din, djm) = (delta(i, n), delta(j, m));
            let kap = c.kappa();
            let a_k = c.int(din).times(&c.qp(djm * k)).times(&c.qp(k).minus(&c.qp(-k)));
            let b_k = c.int(djm).times(&c.qp(din * (k - 1) + 1)).times(&c.qp(k).minus(&c.qp(-k)));
            let c_k = c.int(din * djm).times(&c.qp(2 * k).minus(&c.int(1))).times(&c.int(1).minus(&c.qp(-2 * (k - 1))));
            let d_k = c
                .int(din * djm)
                .times(&c.qp(2 * k).minus(&c.int(1)).div_exact(&kap).ok_or_else(|| Error::NotDivisible("d_r".into()))?);
            let lead = c.qp((din + djm) * k);
            let xs = |up: u32, low: u32| find(spec, site, GenKind::X, up, low);
            let ds = |up: u32, low: u32| find(spec, site, GenKind::Del, up, low);
            // x upper indices range over ∂ lower indices and vice versa.
            let max_low = spec.gens().iter().filter(|x| x.site == site && x.kind == GenKind::X).map(|x| x.lower).max().unwrap_or(0);
            if s == k {
                // ∂ (x^j_n)^k
                b.push(&lead, &[(h, k), (g, 1)])?;
                for p in (i + 1)..=max_low {
                    if let (Some(x), Some(d)) = (xs(j, p), ds(p, m)) {
                        b.push(&a_k, &[(h, k - 1), (x, 1), (d, 1)])?;
                    }
                }
                for p in 1..j {
                    if let (Some(d), Some(x)) = (ds(i, p), xs(p, n)) {
                        b.push(&b_k, &[(h, k - 1), (d, 1), (x, 1)])?;
                    }
                }
                if k >= 2 {
                    for p in (n + 1)..=max_low {
                        for pp in 1..m {
                            if let (Some(x1), Some(d), Some(x2)) = (xs(m, p), ds(p, pp), xs(pp, n)) {
                                b.push(&c_k, &[(h, k - 2), (x1, 1), (d, 1), (x2, 1)])?;
                            }
                        }
                    }
                }
                b.push(&d_k, &[(h, k - 1)])?;
            } else {
                // (∂^i_m)^k x
                b.push(&lead, &[(h, 1), (g, k)])?;
                for p in (i + 1)..=max_low {
                    if let (Some(x), Some(d)) = (xs(j, p), ds(p, m)) {
                        b.push(&a_k, &[(x, 1), (d, 1), (g, k - 1)])?;
                    }
                }
                for p in 1..j {
                    if let (Some(d), Some(x)) = (ds(i, p), xs(p, n)) {
                        b.push(&b_k, &[(d, 1), (x, 1), (g, k - 1)])?;
                    }
                }
                if k >= 2 {
                    for p in (n + 1)..=max_low {
                        for pp in 1..m {
                            if let (Some(d1), Some(x), Some(d2)) = (ds(i, pp), xs(pp, p), ds(p, m)) {
                                b.push(&c_k, &[(d1, 1), (x, 1), (d2, 1), (g, k - 2)])?;
                            }
                        }
                    }
                }
                b.push(&d_k, &[(g, k - 1)])?;
            }
        }
    }
    Ok(b.out)
}
