use std::collections::BTreeMap;

use serde::Serialize;

use super::{AlgebraSpec, Monomial, NCElement};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalars::Coeff;

const WORD_CAP: usize = 20_000;

/// z = Σ c_w · gens[w_1]·gens[w_2]···, with the empty word standing for 1.
#[derive(Clone, Debug, Serialize)]
pub struct MembershipWitness<S> {
    pub words: Vec<(Vec<usize>, S)>,
}

impl<S: Coeff> MembershipWitness<S> {
    /// Re-evaluates the witness in the algebra.
    pub fn evaluate(&self, spec: &AlgebraSpec<S>, gens: &[NCElement<S>]) -> Result<NCElement<S>> {
        let mut out = spec.zero();
        for (w, c) in &self.words {
            let factors: Vec<&NCElement<S>> = w.iter().map(|&i| &gens[i]).collect();
            out = out.add(&spec.multiply_all(&factors)?.scale(c));
        }
        Ok(out)
    }
}

fn nondecreasing_words(k: usize, degs: &[i64], budget: i64, commutative: bool) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<(Vec<usize>, i64)> = vec![(vec![], 0)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (w, d) in &frontier {
            let start = if commutative { w.last().copied().unwrap_or(0) } else { 0 };
            for g in start..k {
                let nd = d + degs[g];
                if nd <= budget {
                    let mut nw = w.clone();
                    nw.push(g);
                    out.push(nw.clone());
                    next.push((nw, nd));
                }
            }
        }
        frontier = next;
        if out.len() > WORD_CAP {
            break;
        }
    }
    out
}

/// Decides whether z lies in the subalgebra generated by `gens`, searching
/// the span of products of generators whose degrees sum to at most deg(z).
///
/// Generators must have positive degree; the unit is always included.
pub fn subalgebra_membership<S: Coeff>(
    spec: &AlgebraSpec<S>,
    z: &NCElement<S>,
    gens: &[NCElement<S>],
) -> Result<Option<MembershipWitness<S>>> {
    let gens: Vec<NCElement<S>> = gens.iter().filter(|g| g.degree() > 0).cloned().collect();
    let degs: Vec<i64> = gens.iter().map(|g| g.degree()).collect();
    let mut commutative = true;
    'outer: for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            if !spec.commutator(&gens[a], &gens[b])?.is_zero() {
                commutative = false;
                break 'outer;
            }
        }
    }
    let words = nondecreasing_words(gens.len(), &degs, z.degree(), commutative);
    if words.len() > WORD_CAP {
        return Err(Error::DegreeBudget(format!("more than {WORD_CAP} candidate products")));
    }
    let mut columns = Vec::with_capacity(words.len());
    for w in &words {
        let factors: Vec<&NCElement<S>> = w.iter().map(|&i| &gens[i]).collect();
        columns.push(spec.multiply_all(&factors)?);
    }
    let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
    for x in columns.iter().chain(std::iter::once(z)) {
        for m in x.terms().keys() {
            let n = rows.len();
            rows.entry(m.clone()).or_insert(n);
        }
    }
    let like = spec.q().clone();
    let mut mat = Mat::zeros(rows.len(), columns.len(), &like);
    for (j, col) in columns.iter().enumerate() {
        for (m, c) in col.terms() {
            mat.set(rows[m], j, c.clone());
        }
    }
    let mut rhs = vec![like.zero_like(); rows.len()];
    for (m, c) in z.terms() {
        rhs[rows[m]] = c.clone();
    }
    if rows.is_empty() {
        return Ok(Some(MembershipWitness { words: vec![] }));
    }
    Ok(mat.solve(&rhs, &like).map(|x| MembershipWitness {
        words: words.into_iter().zip(x).filter(|(_, c)| !c.vanishes()).collect(),
    }))
}
