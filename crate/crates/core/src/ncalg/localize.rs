use super::{AlgebraSpec, Letter, NCElement};
use crate::error::{Error, Result};
use crate::scalars::Coeff;

/// Localizes at a q-central element.
///
/// Scalars give back an identical copy. A monomial is inverted by inverting
/// each of its generators, which must be q-central individually; the new
/// rules are h^a·g^b = λ^{ab}·g^b·h^a for h after g with h·g = λ·g·h.
/// Non-monomial q-central elements need Ore localization and are refused.
pub fn adjoin_inverse<S: Coeff>(spec: &AlgebraSpec<S>, z: &NCElement<S>) -> Result<AlgebraSpec<S>> {
    spec.check(z)?;
    if z.is_zero() {
        return Err(Error::Domain("cannot invert zero".into()));
    }
    if let Some(Some(_)) = z.as_scalar() {
        return Ok(spec.clone());
    }
    let single = z.terms().len() == 1;
    let support: Vec<usize> = if single {
        let m = z.terms().keys().next().unwrap();
        m.exps().iter().enumerate().filter(|(_, &e)| e != 0).map(|(g, _)| g).collect()
    } else {
        vec![]
    };
    let mut tables = Vec::new();
    if single {
        for &h in &support {
            match spec.is_q_central(&spec.gen(h))? {
                Some(t) => tables.push((h, t)),
                None => break,
            }
        }
    }
    if !single || tables.len() < support.len() {
        return Err(match spec.is_q_central(z)? {
            None => Error::NotQCentral(spec.element_text(z)),
            Some(_) => Error::Unsupported(format!(
                "localization at {} needs Ore localization",
                spec.element_text(z)
            )),
        });
    }
    let mut out = spec.clone();
    for (h, _) in &tables {
        out.set_invertible(*h);
    }
    let lambda_of = |a: usize, b: usize| -> Option<S> {
        // λ with gen(a)·gen(b) = λ·gen(b)·gen(a), read off whichever side is q-central.
        if let Some((_, t)) = tables.iter().find(|(h, _)| *h == a) {
            return Some(t[b].clone());
        }
        if let Some((_, t)) = tables.iter().find(|(h, _)| *h == b) {
            return t[a].inverse();
        }
        None
    };
    let n = out.ngens();
    for a in 0..n {
        for b in 0..a {
            let new_a = tables.iter().any(|(h, _)| *h == a);
            let new_b = tables.iter().any(|(h, _)| *h == b);
            if !new_a && !new_b {
                continue;
            }
            let Some(lambda) = lambda_of(a, b) else { continue };
            for sa in [1i8, -1] {
                for sb in [1i8, -1] {
                    if (sa < 0 && !out.gens()[a].invertible) || (sb < 0 && !out.gens()[b].invertible) {
                        continue;
                    }
                    if sa > 0 && sb > 0 {
                        continue;
                    }
                    let c = lambda.pow_i((sa as i64) * (sb as i64)).ok_or_else(|| Error::Domain("λ is not invertible".into()))?;
                    let la = Letter { gen: a, exp: sa };
                    let lb = Letter { gen: b, exp: sb };
                    out.add_rule(la, lb, vec![(vec![lb, la], c)])?;
                }
            }
        }
    }
    Ok(out)
}
