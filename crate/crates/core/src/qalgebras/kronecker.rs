use std::sync::Arc;

use super::free::{rules_from_relations, FreeMat, FreePoly};
use super::rmatrix::standard_r;
use super::{EdgeAlgebra, EdgeKind};
use crate::error::Result;
use crate::ncalg::{AlgebraSpec, GenKind, Generator, Letter, Rhs};
use crate::scalars::Coeff;

/// Generator list of the Kronecker edge algebra N → M: first x^i_j
/// (i ∈ 1..=M, j ∈ 1..=N) in lexicographic order, then ∂^k_l
/// (k ∈ 1..=N, l ∈ 1..=M). Weights live on (α_1..α_N, β_1..β_M):
/// x^i_j has +α_j − β_i and ∂^k_l has +β_l − α_k.
pub fn kronecker_generators(n: usize, m: usize) -> Vec<Generator> {
    let mut gens = Vec::new();
    let w = |alpha: Option<usize>, beta: Option<usize>, sign: i64| {
        let mut v = vec![0i64; n + m];
        if let Some(a) = alpha {
            v[a - 1] += sign;
        }
        if let Some(b) = beta {
            v[n + b - 1] -= sign;
        }
        v
    };
    for i in 1..=m {
        for j in 1..=n {
            gens.push(Generator::new(0, GenKind::X, i as u32, j as u32, w(Some(j), Some(i), 1)));
        }
    }
    for k in 1..=n {
        for l in 1..=m {
            gens.push(Generator::new(0, GenKind::Del, k as u32, l as u32, w(Some(k), Some(l), -1)));
        }
    }
    gens
}

pub(crate) fn x_index(n: usize, i: u32, j: u32) -> usize {
    (i as usize - 1) * n + (j as usize - 1)
}

pub(crate) fn d_index(n: usize, m: usize, k: u32, l: u32) -> usize {
    n * m + (k as usize - 1) * m + (l as usize - 1)
}

/// The Kronecker edge algebra with the coordinate relations
///
/// x^i_m x^j_n = q^{δmn} x^j_n x^i_m + θ(n−m)(q−q^{-1}) x^j_m x^i_n   (i > j)
/// x^i_m x^i_n = q^{-1} x^i_n x^i_m                                   (m > n)
/// the same two families for ∂, and
/// ∂^i_m x^j_n = q^{δin+δjm} x^j_n ∂^i_m + δin q^{δjm}(q−q^{-1}) Σ_{p>i} x^j_p ∂^p_m
///             + δjm (q²−1) Σ_{p<j} ∂^i_p x^p_n + q δin δjm,
/// with θ the strict step function.
pub fn build_kronecker<S: Coeff>(n: usize, m: usize, q: &S) -> Result<EdgeAlgebra<S>> {
    assert!(n >= 1 && m >= 1, "dimensions must be positive");
    let gens = kronecker_generators(n, m);
    let mut spec = AlgebraSpec::new(format!("kronecker_{n}x{m}"), gens, q.clone());
    let one = q.one_like();
    let qp = |k: i64| q.pow_i(k).expect("q must be invertible");
    let kappa = qp(1).minus(&qp(-1));
    let x = |i: u32, j: u32| Letter::new(x_index(n, i, j));
    let d = |k: u32, l: u32| Letter::new(d_index(n, m, k, l));
    let (mm, nn) = (m as u32, n as u32);
    // Same-block rules; `pick` chooses the x or ∂ letters.
    let block = |spec: &mut AlgebraSpec<S>, pick: &dyn Fn(u32, u32) -> Letter, up: u32, low: u32| -> Result<()> {
        for i in 1..=up {
            for a in 1..=low {
                for j in 1..=i {
                    for b in 1..=low {
                        if (j, b) >= (i, a) {
                            continue;
                        }
                        let mut rhs: Rhs<S> = Vec::new();
                        if i > j {
                            rhs.push((vec![pick(j, b), pick(i, a)], qp((a == b) as i64)));
                            if b > a {
                                rhs.push((vec![pick(j, a), pick(i, b)], kappa.clone()));
                            }
                        } else {
                            rhs.push((vec![pick(i, b), pick(i, a)], qp(-1)));
                        }
                        spec.add_rule(pick(i, a), pick(j, b), rhs)?;
                    }
                }
            }
        }
        Ok(())
    };
    block(&mut spec, &x, mm, nn)?;
    block(&mut spec, &d, nn, mm)?;
    for i in 1..=nn {
        for mi in 1..=mm {
            for j in 1..=mm {
                for ni in 1..=nn {
                    let (din, djm) = (i == ni, j == mi);
                    let mut rhs: Rhs<S> = vec![(vec![x(j, ni), d(i, mi)], qp(din as i64 + djm as i64))];
                    if din {
                        let c = qp(djm as i64).times(&kappa);
                        for p in (i + 1)..=nn {
                            rhs.push((vec![x(j, p), d(p, mi)], c.clone()));
                        }
                    }
                    if djm {
                        let c = qp(2).minus(&one);
                        for p in 1..j {
                            rhs.push((vec![d(i, p), x(p, ni)], c.clone()));
                        }
                    }
                    if din && djm {
                        rhs.push((vec![], q.clone()));
                    }
                    spec.add_rule(d(i, mi), x(j, ni), rhs)?;
                }
            }
        }
    }
    Ok(EdgeAlgebra { spec: Arc::new(spec), kind: EdgeKind::Kronecker { n, m } })
}

/// The coordinate relations obtained by expanding RX₂X₁ = X₁X₂R₂₁,
/// RD₂D₁ = D₁D₂R₂₁ and D₂R^{-1}X₁ = X₁RD₂ + Ω, where X is the M×N array
/// (x^i_j) indexed by (upper, lower), D the N×M array (∂^k_l), and each R acts
/// on the tensor square of the space its neighbouring indices live in.
pub fn kronecker_matrix_relations<S: Coeff>(n: usize, m: usize, q: &S) -> Vec<FreePoly<S>> {
    let one = q.one_like();
    let rm = standard_r(m, q);
    let rn = standard_r(n, q);
    let xm = FreeMat::from_fn(m, n, |i, j| FreePoly::letter(x_index(n, i as u32 + 1, j as u32 + 1), &one));
    let dm = FreeMat::from_fn(n, m, |k, l| FreePoly::letter(d_index(n, m, k as u32 + 1, l as u32 + 1), &one));
    let mut rels = Vec::new();
    // X: rows carry GL_M indices, columns GL_N indices.
    let lhs = FreeMat::from_scalar(&rm.r).mul(&xm.second(m).mul(&xm.first(n)));
    let rhs = xm.first(m).mul(&xm.second(n)).mul(&FreeMat::from_scalar(&rn.r21()));
    rels.extend(lhs.sub(&rhs).data);
    let lhs = FreeMat::from_scalar(&rn.r).mul(&dm.second(n).mul(&dm.first(m)));
    let rhs = dm.first(n).mul(&dm.second(m)).mul(&FreeMat::from_scalar(&rm.r21()));
    rels.extend(lhs.sub(&rhs).data);
    // Mixed, as maps C^N ⊗ C^M → C^M ⊗ C^N; Ω is the flip e_a ⊗ f_b ↦ f_b ⊗ e_a.
    let lhs = dm.second(m).mul(&FreeMat::from_scalar(&rm.r_inv)).mul(&xm.first(m));
    let rhs = xm.first(n).mul(&FreeMat::from_scalar(&rn.r)).mul(&dm.second(n));
    let omega = FreeMat::from_fn(m * n, n * m, |r, c| {
        let (b, a) = (r / n, r % n);
        let (a2, b2) = (c / m, c % m);
        if a == a2 && b == b2 {
            FreePoly::constant(one.clone())
        } else {
            FreePoly::zero()
        }
    });
    rels.extend(lhs.sub(&rhs).sub(&omega).data);
    rels
}

/// Rules obtained by solving the matrix relations; used to cross-check the
/// printed coordinate relations.
pub fn kronecker_rules_from_matrix_relations<S: Coeff>(n: usize, m: usize, q: &S) -> Result<std::collections::HashMap<(Letter, Letter), Rhs<S>>> {
    rules_from_relations(&kronecker_matrix_relations(n, m, q), q)
}
