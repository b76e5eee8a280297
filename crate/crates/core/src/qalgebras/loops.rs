use std::sync::Arc;

use serde::Serialize;

use super::free::{rules_from_relations, FreeMat, FreePoly};
use super::rmatrix::standard_r;
use super::{EdgeAlgebra, EdgeKind};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::ncalg::{adjoin_inverse, AlgebraSpec, GenKind, Generator, Letter, Monomial, NCElement};
use crate::scalars::Coeff;

fn matrix_generators(n: usize, kind: GenKind) -> Vec<Generator> {
    let mut gens = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let mut w = vec![0i64; n];
            w[i - 1] += 1;
            w[j - 1] -= 1;
            gens.push(Generator::new(0, kind, i as u32, j as u32, w));
        }
    }
    gens
}

fn letter_matrix<S: Coeff>(n: usize, offset: usize, one: &S) -> FreeMat<S> {
    FreeMat::from_fn(n, n, |i, j| FreePoly::letter(offset + i * n + j, one))
}

/// The reflection-equation relations R₂₁A₁RA₂ = A₂R₂₁A₁R for the n×n matrix of
/// generators starting at `offset`.
fn rea_relations<S: Coeff>(n: usize, offset: usize, q: &S) -> Vec<FreePoly<S>> {
    let one = q.one_like();
    let r = standard_r(n, q);
    let (rr, r21) = (FreeMat::from_scalar(&r.r), FreeMat::from_scalar(&r.r21()));
    let a = letter_matrix(n, offset, &one);
    let (a1, a2) = (a.first(n), a.second(n));
    let lhs = r21.mul(&a1).mul(&rr).mul(&a2);
    let rhs = a2.mul(&r21).mul(&a1).mul(&rr);
    lhs.sub(&rhs).data
}

fn install_rules<S: Coeff>(spec: &mut AlgebraSpec<S>, relations: &[FreePoly<S>], q: &S) -> Result<()> {
    let rules = rules_from_relations(relations, q)?;
    let n = spec.ngens();
    for a in 0..n {
        for b in 0..a {
            let key = (Letter::new(a), Letter::new(b));
            let rhs = rules.get(&key).cloned().ok_or_else(|| {
                Error::Confluence(format!(
                    "relations leave {}·{} undetermined",
                    spec.letter_label(key.0),
                    spec.letter_label(key.1)
                ))
            })?;
            spec.add_rule(key.0, key.1, rhs)?;
        }
    }
    Ok(())
}

/// The reflection equation algebra on generators a^i_j (i, j ≤ n).
pub fn build_rea<S: Coeff>(n: usize, q: &S) -> Result<EdgeAlgebra<S>> {
    let mut spec = AlgebraSpec::new(format!("rea_{n}"), matrix_generators(n, GenKind::A), q.clone());
    install_rules(&mut spec, &rea_relations(n, 0, q), q)?;
    Ok(EdgeAlgebra { spec: Arc::new(spec), kind: EdgeKind::Rea { n } })
}

/// The loop algebra on a^i_j, d^i_j with
/// R₂₁A₁RA₂ = A₂R₂₁A₁R, R₂₁D₁RD₂ = D₂R₂₁D₁R, R₂₁D₁RA₂ = A₂R₂₁D₁R₂₁^{-1}.
///
/// For n = 1 both generators are q-central and are inverted, giving the
/// quantum torus a·d = q²·d·a. For larger n the unlocalized algebra is
/// returned; see [`loop_localization_certificate`].
pub fn build_loop<S: Coeff>(n: usize, q: &S) -> Result<EdgeAlgebra<S>> {
    let one = q.one_like();
    let mut gens = matrix_generators(n, GenKind::A);
    gens.extend(matrix_generators(n, GenKind::D));
    let mut spec = AlgebraSpec::new(format!("loop_{n}"), gens, q.clone());
    let mut rels = rea_relations(n, 0, q);
    rels.extend(rea_relations(n, n * n, q));
    let r = standard_r(n, q);
    let (rr, r21, r21i) = (FreeMat::from_scalar(&r.r), FreeMat::from_scalar(&r.r21()), FreeMat::from_scalar(&r.r21_inv()));
    let a = letter_matrix(n, 0, &one);
    let d = letter_matrix(n, n * n, &one);
    let lhs = r21.mul(&d.first(n)).mul(&rr).mul(&a.second(n));
    let rhs = a.second(n).mul(&r21).mul(&d.first(n)).mul(&r21i);
    rels.extend(lhs.sub(&rhs).data);
    install_rules(&mut spec, &rels, q)?;
    if n == 1 {
        let a = spec.gen(0);
        spec = adjoin_inverse(&spec, &a)?;
        let d = spec.gen(1);
        spec = adjoin_inverse(&spec, &d)?;
    }
    Ok(EdgeAlgebra { spec: Arc::new(spec), kind: EdgeKind::Loop { n } })
}

/// The quantum torus X_i X_j = q^{n_ij} X_j X_i with all generators inverted.
pub fn quantum_torus<S: Coeff>(skew: &[Vec<i64>], q: &S) -> Result<EdgeAlgebra<S>> {
    let k = skew.len();
    for i in 0..k {
        if skew[i].len() != k {
            return Err(Error::Domain("skew matrix must be square".into()));
        }
        for j in 0..k {
            if skew[i][j] != -skew[j][i] {
                return Err(Error::Domain("matrix is not skew-symmetric".into()));
            }
        }
    }
    let gens = (1..=k).map(|i| Generator::new(0, GenKind::Torus, i as u32, 0, vec![])).collect();
    let mut spec = AlgebraSpec::new(format!("torus_{k}"), gens, q.clone());
    for j in 0..k {
        for i in 0..j {
            // X_j X_i = q^{n_ji} X_i X_j
            let c = q.pow_i(skew[j][i]).ok_or_else(|| Error::Domain("q must be invertible".into()))?;
            spec.add_rule(Letter::new(j), Letter::new(i), vec![(vec![Letter::new(i), Letter::new(j)], c)])?;
        }
    }
    for i in 0..k {
        let x = spec.gen(i);
        spec = adjoin_inverse(&spec, &x)?;
    }
    Ok(EdgeAlgebra { spec: Arc::new(spec), kind: EdgeKind::Torus { skew: skew.to_vec() } })
}

/// A basis of the right kernel of an integral-domain matrix, computed without
/// division beyond exact Bareiss steps.
fn kernel_fraction_free<S: Coeff>(m: &Mat<S>, like: &S) -> Result<Vec<Vec<S>>> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<S>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut prev = like.one_like();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].vanishes()) else { continue };
        a.swap(r, p);
        let pv = a[r][c].clone();
        let prow = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let mic = row[c].clone();
            for j in 0..cols {
                row[j] = pv.times(&row[j]).minus(&mic.times(&prow[j])).div_exact(&prev).ok_or_else(|| Error::NotDivisible("Bareiss step".into()))?;
            }
        }
        prev = pv;
        pivots.push((r, c));
        r += 1;
    }
    let mut out = Vec::new();
    for f in (0..cols).filter(|c| !pivots.iter().any(|&(_, pc)| pc == *c)) {
        let mut v = vec![like.zero_like(); cols];
        v[f] = prev.clone();
        for &(row, pc) in &pivots {
            v[pc] = a[row][f].negated();
        }
        out.push(v);
    }
    Ok(out)
}

/// The quantum determinant of the reflection equation algebra, found as the
/// central element in the weight-zero degree-n span with no (a^1_1)^n term;
/// normalized so the coefficient of a^1_1·a^2_2···a^n_n is 1 when that
/// division is exact.
pub fn quantum_det<S: Coeff>(rea: &AlgebraSpec<S>, n: usize) -> Result<NCElement<S>> {
    quantum_det_at(rea, n, 0)
}

pub(crate) fn quantum_det_at<S: Coeff>(spec: &AlgebraSpec<S>, n: usize, offset: usize) -> Result<NCElement<S>> {
    if n > 2 {
        return Err(Error::Unsupported("quantum determinant beyond n = 2".into()));
    }
    let like = spec.q().clone();
    let ng = spec.ngens();
    if n == 1 {
        return Ok(spec.gen(offset));
    }
    let idx = |i: usize, j: usize| offset + (i - 1) * n + (j - 1);
    // Weight-zero ordered quadratic monomials in this block.
    let block: Vec<usize> = (0..n * n).map(|k| offset + k).collect();
    let mut cands: Vec<Monomial> = Vec::new();
    for (ai, &a) in block.iter().enumerate() {
        for &b in &block[ai..] {
            let mut m = Monomial::one(ng);
            m.0[a] += 1;
            m.0[b] += 1;
            let w = spec.weight(&m);
            if w.iter().all(|&x| x == 0) {
                cands.push(m);
            }
        }
    }
    let elems: Vec<NCElement<S>> = cands.iter().map(|m| spec.monomial(m.clone())).collect();
    let mut rows: Vec<(usize, Monomial)> = Vec::new();
    let mut comms: Vec<Vec<NCElement<S>>> = Vec::new();
    for g in &block {
        let gen = spec.gen(*g);
        comms.push(elems.iter().map(|e| spec.commutator(e, &gen)).collect::<Result<_>>()?);
    }
    for (gi, col) in comms.iter().enumerate() {
        for e in col {
            for m in e.terms().keys() {
                if !rows.iter().any(|(g, mm)| *g == gi && mm == m) {
                    rows.push((gi, m.clone()));
                }
            }
        }
    }
    let mut mat = Mat::zeros(rows.len().max(1), cands.len(), &like);
    for (ri, (gi, m)) in rows.iter().enumerate() {
        for (ci, e) in comms[*gi].iter().enumerate() {
            if let Some(c) = e.coeff(m) {
                mat.set(ri, ci, c.clone());
            }
        }
    }
    let kernel = kernel_fraction_free(&mat, &like)?;
    let pos = |m: &Monomial| cands.iter().position(|c| c == m);
    let mut sq = Monomial::one(ng);
    sq.0[idx(1, 1)] = 2;
    let mut diag = Monomial::one(ng);
    diag.0[idx(1, 1)] += 1;
    diag.0[idx(2, 2)] += 1;
    let sq_pos = pos(&sq).expect("(a^1_1)^2 is a candidate");
    let diag_pos = pos(&diag).expect("a^1_1 a^2_2 is a candidate");
    let vec = match kernel.len() {
        0 => return Err(Error::Verification("no central quadratic element".into())),
        1 => kernel[0].clone(),
        _ => {
            let (v1, v2) = (&kernel[0], &kernel[1]);
            let (c1, c2) = (v1[sq_pos].clone(), v2[sq_pos].clone());
            if c1.vanishes() {
                v1.clone()
            } else {
                v2.iter().zip(v1).map(|(x, y)| c1.times(x).minus(&c2.times(y))).collect()
            }
        }
    };
    let lead = vec[diag_pos].clone();
    let norm = |c: &S| c.div_exact(&lead);
    let exact = !lead.vanishes() && vec.iter().all(|c| norm(c).is_some());
    let mut out = spec.zero();
    for (m, c) in cands.iter().zip(&vec) {
        let c = if exact { norm(c).unwrap() } else { c.clone() };
        out = out.add(&spec.monomial(m.clone()).scale(&c));
    }
    Ok(out)
}

/// q-centrality of det_q(A)·det_q(D) in the unlocalized loop algebra.
#[derive(Clone, Debug, Serialize)]
pub struct LocalizationCertificate {
    pub element: String,
    pub q_central: bool,
    pub table: Vec<String>,
    pub det_a_q_central: bool,
    pub det_d_q_central: bool,
}

pub fn loop_localization_certificate<S: Coeff>(lp: &EdgeAlgebra<S>) -> Result<LocalizationCertificate> {
    let EdgeKind::Loop { n } = lp.kind else {
        return Err(Error::Domain("not a loop algebra".into()));
    };
    let spec = &lp.spec;
    let (da, dd) = if n == 1 { (spec.gen(0), spec.gen(1)) } else { (quantum_det_at(spec, n, 0)?, quantum_det_at(spec, n, n * n)?) };
    let z = spec.multiply(&da, &dd)?;
    let table = spec.is_q_central(&z)?;
    Ok(LocalizationCertificate {
        element: spec.element_text(&z),
        q_central: table.is_some(),
        table: table.unwrap_or_default().iter().map(|c| c.to_string()).collect(),
        det_a_q_central: spec.is_q_central(&da)?.is_some(),
        det_d_q_central: spec.is_q_central(&dd)?.is_some(),
    })
}
