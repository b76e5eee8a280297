//! First-order degeneration at t = ζ: Hayashi derivations, the induced
//! Poisson bracket on the Frobenius center, the closed-form edge bivector and
//! the classical shadow of the moment map.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ncalg::{subalgebra_membership, AlgebraSpec, GenKind, MembershipWitness, NCElement};
use crate::qalgebras::{braided_tensor, build_kronecker, frobenius_center, moment_map, quantum_torus, EdgeAlgebra, TensorFactor};
use crate::scalars::{Coeff, CycScalar, LaurentScalar};

/// A generic-mode algebra, its specialization at t = ζ_ℓ and the Frobenius
/// center of the latter.
pub struct PoissonOrderCtx {
    pub ell: u32,
    pub generic: EdgeAlgebra<LaurentScalar>,
    pub root: EdgeAlgebra<CycScalar>,
    /// Generator indices whose ℓ-th powers generate Z.
    pub z_indices: Vec<usize>,
    pub z_gens: Vec<NCElement<CycScalar>>,
}

impl PoissonOrderCtx {
    /// Pairs two builds of the same algebra; fails if their generators differ
    /// or a Frobenius generator is not central at the root.
    pub fn new(generic: EdgeAlgebra<LaurentScalar>, root: EdgeAlgebra<CycScalar>, ell: u32) -> Result<Self> {
        let labels = |g: &[crate::ncalg::Generator]| g.iter().map(|g| g.label()).collect::<Vec<_>>();
        if labels(generic.spec.gens()) != labels(root.spec.gens()) {
            return Err(Error::SpecMismatch("generic and root algebras have different generators".into()));
        }
        if root.spec.q() != &CycScalar::zeta(ell) || generic.spec.q() != &LaurentScalar::t_pow(ell, 1) {
            return Err(Error::Domain(format!("expected q = t and q = ζ_{ell}")));
        }
        let (z_gens, _) = frobenius_center(&root, ell)?;
        let z_indices = root.frobenius_generators();
        Ok(PoissonOrderCtx { ell, generic, root, z_indices, z_gens })
    }

    pub fn kronecker(n: usize, m: usize, ell: u32) -> Result<Self> {
        Self::new(build_kronecker(n, m, &LaurentScalar::t_pow(ell, 1))?, build_kronecker(n, m, &CycScalar::zeta(ell))?, ell)
    }

    pub fn torus(skew: &[Vec<i64>], ell: u32) -> Result<Self> {
        Self::new(quantum_torus(skew, &LaurentScalar::t_pow(ell, 1))?, quantum_torus(skew, &CycScalar::zeta(ell))?, ell)
    }

    pub fn root_spec(&self) -> &AlgebraSpec<CycScalar> {
        &self.root.spec
    }

    /// The t-constant lift of a root-mode element.
    pub fn lift(&self, a: &NCElement<CycScalar>) -> Result<NCElement<LaurentScalar>> {
        self.generic.spec.import(&self.root.spec, a, |c| LaurentScalar::constant(c.clone()))
    }

    /// Coefficientwise evaluation at t = ζ.
    pub fn specialize(&self, a: &NCElement<LaurentScalar>) -> Result<NCElement<CycScalar>> {
        self.root.spec.import(&self.generic.spec, a, |c| c.eval_root())
    }

    /// Spot check that specialization is multiplicative on random words.
    pub fn check_specialization(&self, samples: usize, seed: u64) -> Result<bool> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let ng = self.root.spec.ngens();
        for _ in 0..samples {
            let word = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<(usize, i64)> {
                (0..rng.gen_range(1..4)).map(|_| (rng.gen_range(0..ng), 1)).collect()
            };
            let (u, v) = (word(&mut rng), word(&mut rng));
            let gu = self.generic.spec.normal_form(&u)?;
            let gv = self.generic.spec.normal_form(&v)?;
            let lhs = self.specialize(&self.generic.spec.multiply(&gu, &gv)?)?;
            let rhs = self.root.spec.multiply(&self.specialize(&gu)?, &self.specialize(&gv)?)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// D(π(lift))(π(a)) = π((lift·a − a·lift)/(t − ζ)) for an explicit lift.
pub fn hayashi_with_lift(ctx: &PoissonOrderCtx, lift: &NCElement<LaurentScalar>, a: &NCElement<CycScalar>) -> Result<NCElement<CycScalar>> {
    let spec = &ctx.generic.spec;
    let c = spec.commutator(lift, &ctx.lift(a)?)?;
    let z = CycScalar::zeta(ctx.ell);
    let mut out = ctx.root.spec.zero();
    for (m, f) in c.terms() {
        let g = f.div_linear(&z).ok_or_else(|| {
            Error::NotDivisible(format!("commutator coefficient {f} does not vanish at t = ζ; the element is not central"))
        })?;
        out = out.add(&ctx.root.spec.monomial(m.clone()).scale(&g.eval_root()));
    }
    Ok(out)
}

/// The Hayashi derivation D(z)(a) with the t-constant lift of z.
pub fn hayashi_derivation(ctx: &PoissonOrderCtx, z: &NCElement<CycScalar>, a: &NCElement<CycScalar>) -> Result<NCElement<CycScalar>> {
    hayashi_with_lift(ctx, &ctx.lift(z)?, a)
}

/// The Poisson bracket {z₁, z₂} = D(z₁)(z₂) on the center.
pub fn bracket_on_z(ctx: &PoissonOrderCtx, z1: &NCElement<CycScalar>, z2: &NCElement<CycScalar>) -> Result<NCElement<CycScalar>> {
    hayashi_derivation(ctx, z1, z2)
}

#[derive(Clone, Debug, Serialize)]
pub struct BracketEntry {
    pub pair: [usize; 2],
    pub bracket: String,
    /// Words in the Z generators with coefficients.
    pub witness: Vec<(Vec<usize>, String)>,
}

/// Closure, antisymmetry, Jacobi and Leibniz on the generators of Z.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub ell: u32,
    pub generators: Vec<String>,
    pub pairs: Vec<BracketEntry>,
    pub closed: bool,
    pub antisymmetric: bool,
    pub jacobi: bool,
    pub leibniz: bool,
    pub failures: Vec<String>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.closed && self.antisymmetric && self.jacobi && self.leibniz
    }
}

fn witness_text(w: &MembershipWitness<CycScalar>) -> Vec<(Vec<usize>, String)> {
    w.words.iter().map(|(word, c)| (word.clone(), c.to_string())).collect()
}

pub fn verify_hayashi_closure(ctx: &PoissonOrderCtx) -> Result<ClosureReport> {
    let spec = ctx.root_spec();
    let zs = &ctx.z_gens;
    let k = zs.len();
    let idx: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
    let table: Vec<NCElement<CycScalar>> = idx.par_iter().map(|&(i, j)| bracket_on_z(ctx, &zs[i], &zs[j])).collect::<Result<_>>()?;
    let br = |i: usize, j: usize| &table[i * k + j];
    let mut failures = Vec::new();

    let mut pairs = Vec::new();
    let mut closed = true;
    for i in 0..k {
        for j in (i + 1)..k {
            let b = br(i, j);
            let wit = subalgebra_membership(spec, b, zs)?;
            match &wit {
                Some(w) => pairs.push(BracketEntry { pair: [i, j], bracket: spec.element_text(b), witness: witness_text(w) }),
                None => {
                    closed = false;
                    failures.push(format!("{{{i},{j}}} = {} is not in Z", spec.element_text(b)));
                    pairs.push(BracketEntry { pair: [i, j], bracket: spec.element_text(b), witness: vec![] });
                }
            }
        }
    }

    let mut antisymmetric = true;
    for i in 0..k {
        for j in 0..k {
            if !br(i, j).add(br(j, i)).is_zero() {
                antisymmetric = false;
                failures.push(format!("antisymmetry fails on ({i},{j})"));
            }
        }
    }

    let triples: Vec<(usize, usize, usize)> =
        (0..k).flat_map(|a| ((a + 1)..k).flat_map(move |b| ((b + 1)..k).map(move |c| (a, b, c)))).collect();
    let jac: Vec<Option<String>> = triples
        .par_iter()
        .map(|&(a, b, c)| -> Result<Option<String>> {
            let t1 = bracket_on_z(ctx, &zs[a], br(b, c))?;
            let t2 = bracket_on_z(ctx, &zs[b], br(c, a))?;
            let t3 = bracket_on_z(ctx, &zs[c], br(a, b))?;
            let s = t1.add(&t2).add(&t3);
            Ok((!s.is_zero()).then(|| format!("Jacobi fails on ({a},{b},{c}): {}", spec.element_text(&s))))
        })
        .collect::<Result<_>>()?;
    let jacobi = jac.iter().all(|x| x.is_none());
    failures.extend(jac.into_iter().flatten());

    let all_triples: Vec<(usize, usize, usize)> = (0..k).flat_map(|a| (0..k).flat_map(move |b| (b..k).map(move |c| (a, b, c)))).collect();
    let leib: Vec<Option<String>> = all_triples
        .par_iter()
        .map(|&(a, b, c)| -> Result<Option<String>> {
            let prod = spec.multiply(&zs[b], &zs[c])?;
            let lhs = bracket_on_z(ctx, &zs[a], &prod)?;
            let rhs = spec.multiply(br(a, b), &zs[c])?.add(&spec.multiply(&zs[b], br(a, c))?);
            Ok((lhs != rhs).then(|| format!("Leibniz fails on ({a},{b},{c})")))
        })
        .collect::<Result<_>>()?;
    let leibniz = leib.iter().all(|x| x.is_none());
    failures.extend(leib.into_iter().flatten());

    Ok(ClosureReport {
        ell: ctx.ell,
        generators: ctx.z_indices.iter().map(|&g| spec.gens()[g].label()).collect(),
        pairs,
        closed,
        antisymmetric,
        jacobi,
        leibniz,
        failures,
    })
}

/// A polynomial in the commuting coordinates y (from x) and z (from ∂),
/// keyed by sorted generator-index multisets.
pub type ClassicalPoly = BTreeMap<Vec<usize>, CycScalar>;

fn cp_add(p: &mut ClassicalPoly, mut vars: Vec<usize>, c: CycScalar) {
    if c.vanishes() {
        return;
    }
    vars.sort_unstable();
    let e = p.entry(vars).or_insert_with(|| c.zero_like());
    *e = e.plus(&c);
    if e.vanishes() {
        p.retain(|_, v| !v.vanishes());
    }
}

/// Which closed form of the edge bivector to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BivectorForm {
    /// As printed: 2((δ_in + δ_jm) y^j_n z^i_m + ...) in the mixed block.
    Printed,
    /// The mixed (δ_in + δ_jm) y^j_n z^i_m term without the factor 2, all other
    /// terms as printed.
    HalvedDiagonal,
}

/// The closed-form edge bivector as a table of brackets between coordinate
/// functions: entry (a, b) is {u_a, u_b} where u_g is y or z for generator g
/// of the Kronecker edge (n, m). The wedge ∂_u ∧ ∂_v contributes +c to {u, v}
/// and −c to {v, u}.
pub fn bivector_bracket(n: usize, m: usize, ell: u32, form: BivectorForm) -> Result<BTreeMap<(usize, usize), ClassicalPoly>> {
    let root = build_kronecker(n, m, &CycScalar::zeta(ell))?;
    let spec = &root.spec;
    let gi = |kind: GenKind, up: usize, low: usize| -> usize {
        spec.gens().iter().position(|g| g.kind == kind && g.upper as usize == up && g.lower as usize == low).unwrap()
    };
    let y = |i: usize, j: usize| gi(GenKind::X, i, j);
    let z = |i: usize, j: usize| gi(GenKind::Del, i, j);
    let one = CycScalar::one(ell);
    let two = CycScalar::from_int(ell, 2);
    let zeta = CycScalar::zeta(ell);
    let shift = zeta.pow_i(2).unwrap().minus(&one).pow_i(-(ell as i64)).ok_or_else(|| Error::Domain("q² = 1".into()))?;
    let mut table: BTreeMap<(usize, usize), ClassicalPoly> = BTreeMap::new();
    let mut wedge = |u: usize, v: usize, vars: Vec<usize>, c: CycScalar| {
        cp_add(table.entry((u, v)).or_default(), vars.clone(), c.clone());
        cp_add(table.entry((v, u)).or_default(), vars, c.negated());
    };
    // Same-block terms; `f` picks y or z, `up`/`low` are the index ranges.
    let block = |f: &dyn Fn(usize, usize) -> usize, up: usize, low: usize, wedge: &mut dyn FnMut(usize, usize, Vec<usize>, CycScalar)| {
        for i in 1..=up {
            for j in 1..i {
                for mm in 1..=low {
                    for nn in 1..=low {
                        if mm == nn {
                            wedge(f(i, mm), f(j, nn), vec![f(j, nn), f(i, mm)], one.clone());
                        }
                        if nn > mm {
                            wedge(f(i, mm), f(j, nn), vec![f(j, mm), f(i, nn)], two.clone());
                        }
                    }
                }
            }
            for mm in 1..=low {
                for nn in 1..mm {
                    wedge(f(i, mm), f(i, nn), vec![f(i, nn), f(i, mm)], one.negated());
                }
            }
        }
    };
    block(&y, m, n, &mut wedge);
    block(&z, n, m, &mut wedge);
    for i in 1..=n {
        for mm in 1..=m {
            for j in 1..=m {
                for nn in 1..=n {
                    let (din, djm) = (i == nn, j == mm);
                    let (u, v) = (z(i, mm), y(j, nn));
                    let k = din as i64 + djm as i64;
                    if k > 0 {
                        let c = if form == BivectorForm::Printed { 2 * k } else { k };
                        wedge(u, v, vec![y(j, nn), z(i, mm)], CycScalar::from_int(ell, c));
                    }
                    if din {
                        for p in (i + 1)..=n {
                            wedge(u, v, vec![y(j, p), z(p, mm)], two.clone());
                        }
                    }
                    if djm {
                        for p in 1..j {
                            wedge(u, v, vec![y(p, nn), z(i, p)], two.clone());
                        }
                    }
                    if din && djm {
                        wedge(u, v, vec![], two.times(&shift));
                    }
                }
            }
        }
    }
    table.retain(|_, p| !p.is_empty());
    Ok(table)
}

/// Evaluates a classical polynomial at y = x^ℓ, z = ∂^ℓ in the root algebra.
pub fn evaluate_classical(spec: &AlgebraSpec<CycScalar>, ell: u32, p: &ClassicalPoly) -> Result<NCElement<CycScalar>> {
    let mut out = spec.zero();
    for (vars, c) in p {
        let word: Vec<(usize, i64)> = vars.iter().map(|&g| (g, ell as i64)).collect();
        out = out.add(&spec.normal_form(&word)?.scale(c));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct BivectorEntry {
    pub pair: [usize; 2],
    pub bracket: String,
    pub bivector: String,
    /// c with bracket = c·bivector, if one exists.
    pub scalar: Option<String>,
    pub matches_bivector: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BivectorReport {
    pub n: usize,
    pub m: usize,
    pub ell: u32,
    pub generators: Vec<String>,
    pub form: BivectorForm,
    pub constant: Option<String>,
    pub proportional: bool,
    pub entries: Vec<BivectorEntry>,
}

/// The ratio c with a = c·b, or None if there is none.
fn ratio(a: &NCElement<CycScalar>, b: &NCElement<CycScalar>) -> Option<Option<CycScalar>> {
    if b.is_zero() {
        return a.is_zero().then_some(None);
    }
    let (m, bc) = b.terms().iter().next().unwrap();
    let c = a.coeff(m).cloned().unwrap_or_else(|| bc.zero_like()).times(&bc.inverse()?);
    (b.scale(&c) == *a).then_some(Some(c))
}

/// Compares the degeneration bracket with the closed-form bivector on every
/// pair of Z generators; one global constant is allowed.
pub fn compare_with_degeneration(n: usize, m: usize, ell: u32) -> Result<BivectorReport> {
    compare_bivector_form(n, m, ell, BivectorForm::Printed)
}

pub fn compare_bivector_form(n: usize, m: usize, ell: u32, form: BivectorForm) -> Result<BivectorReport> {
    let ctx = PoissonOrderCtx::kronecker(n, m, ell)?;
    let spec = ctx.root_spec();
    let table = bivector_bracket(n, m, ell, form)?;
    let k = ctx.z_indices.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| ((a + 1)..k).map(move |b| (a, b))).collect();
    let entries: Vec<(BivectorEntry, Option<Option<CycScalar>>)> = pairs
        .par_iter()
        .map(|&(a, b)| -> Result<_> {
            let br = bracket_on_z(&ctx, &ctx.z_gens[a], &ctx.z_gens[b])?;
            let key = (ctx.z_indices[a], ctx.z_indices[b]);
            let biv = match table.get(&key) {
                Some(p) => evaluate_classical(spec, ell, p)?,
                None => spec.zero(),
            };
            let r = ratio(&br, &biv);
            Ok((
                BivectorEntry {
                    pair: [a, b],
                    bracket: spec.element_text(&br),
                    bivector: spec.element_text(&biv),
                    scalar: r.clone().flatten().map(|c| c.to_string()),
                    matches_bivector: false,
                },
                r,
            ))
        })
        .collect::<Result<_>>()?;
    let constant = entries.iter().find_map(|(_, r)| r.clone().flatten());
    let mut proportional = true;
    let mut out = Vec::new();
    for (mut e, r) in entries {
        e.matches_bivector = match (&r, &constant) {
            (Some(None), _) => true,
            (Some(Some(c)), Some(k)) => c == k,
            _ => false,
        };
        proportional &= e.matches_bivector;
        out.push(e);
    }
    Ok(BivectorReport {
        n,
        m,
        ell,
        generators: ctx.z_indices.iter().map(|&g| spec.gens()[g].label()).collect(),
        form,
        constant: constant.map(|c| c.to_string()),
        proportional,
        entries: out,
    })
}

/// Moment shadow: (g^α)^ℓ for a rank-one edge written in the center.
#[derive(Clone, Debug, Serialize)]
pub struct MomentShadow {
    pub ell: u32,
    pub power: String,
    pub in_center: bool,
    /// Coefficients c_k of (y z)^k in (g^α)^ℓ = Σ_k c_k (yz)^k.
    pub coefficients: Vec<String>,
    pub witness: Vec<(Vec<usize>, String)>,
    /// c in 1 + c·zy when the shadow is linear in zy.
    pub linear_constant: Option<String>,
}

fn shadow_of(spec: &AlgebraSpec<CycScalar>, ell: u32, power: &NCElement<CycScalar>, z: &[NCElement<CycScalar>]) -> Result<(Option<MembershipWitness<CycScalar>>, Vec<CycScalar>)> {
    let wit = subalgebra_membership(spec, power, z)?;
    let mut coeffs = Vec::new();
    if let Some(w) = &wit {
        // Z is commutative, so a word determines a monomial in y, z.
        let mut by_deg: BTreeMap<usize, CycScalar> = BTreeMap::new();
        for (word, c) in &w.words {
            let e = by_deg.entry(word.len() / 2).or_insert_with(|| CycScalar::zero(ell));
            *e = e.plus(c);
        }
        let top = by_deg.keys().copied().max().unwrap_or(0);
        coeffs = (0..=top).map(|k| by_deg.get(&k).cloned().unwrap_or_else(|| CycScalar::zero(ell))).collect();
    }
    Ok((wit, coeffs))
}

/// For the (1,1) edge: (g^α)^ℓ with g^α = 1 + (q − q^{-1})∂x lies in Z and is
/// a polynomial in yz; its coefficients are reported.
pub fn classical_shadow_of_moment(ell: u32) -> Result<MomentShadow> {
    let root = build_kronecker(1, 1, &CycScalar::zeta(ell))?;
    let spec = &*root.spec;
    let mm = moment_map(&root, 0)?;
    let g = mm.alpha.get(0, 0);
    let power = spec.pow(g, ell)?;
    let (z, _) = frobenius_center(&root, ell)?;
    let (wit, coeffs) = shadow_of(spec, ell, &power, &z)?;
    let linear = (coeffs.len() == 2 && coeffs[0].is_one()).then(|| coeffs[1].to_string());
    Ok(MomentShadow {
        ell,
        power: spec.element_text(&power),
        in_center: wit.is_some(),
        coefficients: coeffs.iter().map(|c| c.to_string()).collect(),
        witness: wit.as_ref().map(witness_text).unwrap_or_default(),
        linear_constant: linear,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FusedShadow {
    pub ell: u32,
    pub fused_in_center: bool,
    pub product_of_shadows: bool,
}

/// Two rank-one edges 0 → 1 → 2 fused at vertex 1: the ℓ-th power of
/// g^β(first)·g^α(second) lies in Z and equals the product of the two edge
/// shadows.
pub fn fused_shadow(ell: u32) -> Result<FusedShadow> {
    let q = CycScalar::zeta(ell);
    let e = build_kronecker(1, 1, &q)?;
    let t = braided_tensor(&[TensorFactor::new(&e, vec![0, 1]), TensorFactor::new(&e, vec![1, 2])], &[1, 1, 1])?;
    let spec = &*t.spec;
    let g1 = moment_map(&t, 0)?.beta.get(0, 0).clone();
    let g2 = moment_map(&t, 1)?.alpha.get(0, 0).clone();
    let fused = spec.multiply(&g1, &g2)?;
    let fp = spec.pow(&fused, ell)?;
    let (z, _) = frobenius_center(&t, ell)?;
    let wit = subalgebra_membership(spec, &fp, &z)?;
    let prod = spec.multiply(&spec.pow(&g1, ell)?, &spec.pow(&g2, ell)?)?;
    Ok(FusedShadow { ell, fused_in_center: wit.is_some(), product_of_shadows: prod == fp })
}

#[derive(Clone, Debug, Serialize)]
pub struct TorusScaling {
    pub skew: Vec<Vec<i64>>,
    /// Per ℓ: the scalar c_ℓ with {u_i, u_j} = c_ℓ·n_ij·u_i u_j.
    pub scalars: Vec<(u32, Option<String>)>,
    pub proportional: bool,
    pub failures: Vec<String>,
}

/// Brackets {X_i^ℓ, X_j^ℓ} of a quantum torus for each ℓ, checked against
/// c_ℓ·n_ij·u_i u_j with one scalar per ℓ.
pub fn torus_bracket_scaling(skew: &[Vec<i64>], ells: &[u32]) -> Result<TorusScaling> {
    let k = skew.len();
    let mut scalars = Vec::new();
    let mut failures = Vec::new();
    for &ell in ells {
        let ctx = PoissonOrderCtx::torus(skew, ell)?;
        let spec = ctx.root_spec();
        let mut c_ell: Option<CycScalar> = None;
        for i in 0..k {
            for j in (i + 1)..k {
                let br = bracket_on_z(&ctx, &ctx.z_gens[i], &ctx.z_gens[j])?;
                let uu = spec.multiply(&ctx.z_gens[i], &ctx.z_gens[j])?;
                let target = uu.scale(&CycScalar::from_int(ell, skew[i][j]));
                match ratio(&br, &target) {
                    Some(None) => {}
                    Some(Some(c)) => match &c_ell {
                        None => c_ell = Some(c),
                        Some(prev) if *prev == c => {}
                        Some(_) => failures.push(format!("ℓ = {ell}: pair ({i},{j}) has a different scalar")),
                    },
                    None => failures.push(format!("ℓ = {ell}: {{u{i},u{j}}} is not proportional to n_ij u_i u_j")),
                }
            }
        }
        scalars.push((ell, c_ell.map(|c| c.to_string())));
    }
    Ok(TorusScaling { skew: skew.to_vec(), scalars, proportional: failures.is_empty(), failures })
}
