use serde::Serialize;

use super::rmatrix::standard_r;
use super::EdgeAlgebra;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::ncalg::{AlgebraSpec, GenKind, NCElement};
use crate::scalars::Coeff;

/// A matrix with entries in a PBW algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct NCMat<S: Coeff> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<NCElement<S>>,
}

impl<S: Coeff> NCMat<S> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Result<NCElement<S>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j)?);
            }
        }
        Ok(NCMat { rows, cols, data })
    }

    pub fn identity(spec: &AlgebraSpec<S>, n: usize) -> Self {
        Self::scalar(spec, &Mat::identity(n, spec.q()))
    }

    pub fn scalar(spec: &AlgebraSpec<S>, m: &Mat<S>) -> Self {
        Self::from_fn(m.rows, m.cols, |i, j| Ok(spec.scalar(m.get(i, j).clone()))).unwrap()
    }

    pub fn get(&self, i: usize, j: usize) -> &NCElement<S> {
        &self.data[i * self.cols + j]
    }

    pub fn mul(&self, spec: &AlgebraSpec<S>, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::Domain("matrix shapes do not match".into()));
        }
        Self::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = spec.zero();
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), o.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&spec.multiply(a, b)?);
                }
            }
            Ok(acc)
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect();
        NCMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect();
        NCMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &S) -> Self {
        NCMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.scale(c)).collect() }
    }

    /// G ⊗ Id_k.
    pub fn first(&self, spec: &AlgebraSpec<S>, k: usize) -> Self {
        Self::from_fn(self.rows * k, self.cols * k, |r, c| {
            Ok(if r % k == c % k { self.get(r / k, c / k).clone() } else { spec.zero() })
        })
        .unwrap()
    }

    /// Id_k ⊗ G.
    pub fn second(&self, spec: &AlgebraSpec<S>, k: usize) -> Self {
        let (n, m) = (self.rows, self.cols);
        Self::from_fn(k * n, k * m, |r, c| Ok(if r / n == c / m { self.get(r % n, c % m).clone() } else { spec.zero() })).unwrap()
    }
}

/// The quantum moment map of a Kronecker edge in cleared form.
///
/// μ_q sends the source-side REA generators through (g^α)^{-1} and the target
/// side through g^β; both matrices are kept as polynomials, with
/// g^α = Id + (q − q^{-1})·DX (N×N, (DX)^i_j = Σ_k ∂^i_k x^k_j) and
/// g^β = Id + (q − q^{-1})·XD (M×M, (XD)^s_r = Σ_k x^s_k ∂^k_r).
#[derive(Clone, Debug)]
pub struct MomentMatrix<S: Coeff> {
    pub site: u32,
    pub n: usize,
    pub m: usize,
    pub alpha: NCMat<S>,
    pub beta: NCMat<S>,
}

fn kronecker_dims<S: Coeff>(spec: &AlgebraSpec<S>, site: u32) -> Result<(usize, usize)> {
    let xs: Vec<_> = spec.gens().iter().filter(|g| g.kind == GenKind::X && g.site == site).collect();
    if xs.is_empty() {
        return Err(Error::Domain(format!("no Kronecker edge at site {site}")));
    }
    let n = xs.iter().map(|g| g.lower).max().unwrap() as usize;
    let m = xs.iter().map(|g| g.upper).max().unwrap() as usize;
    Ok((n, m))
}

fn find<S: Coeff>(spec: &AlgebraSpec<S>, kind: GenKind, upper: usize, lower: usize, site: u32) -> Result<NCElement<S>> {
    spec.gens()
        .iter()
        .position(|g| g.kind == kind && g.upper as usize == upper && g.lower as usize == lower && g.site == site)
        .map(|i| spec.gen(i))
        .ok_or_else(|| Error::UnknownGenerator(format!("{kind:?}{upper}_{lower}@{site}")))
}

/// Moment matrices of the Kronecker edge at `site` (0 for a bare edge).
pub fn moment_map<S: Coeff>(alg: &EdgeAlgebra<S>, site: u32) -> Result<MomentMatrix<S>> {
    let spec = &*alg.spec;
    let (n, m) = kronecker_dims(spec, site)?;
    let q = spec.q();
    let kappa = q.minus(&q.inverse().ok_or_else(|| Error::Domain("q must be invertible".into()))?);
    let x = NCMat::from_fn(m, n, |i, j| find(spec, GenKind::X, i + 1, j + 1, site))?;
    let d = NCMat::from_fn(n, m, |k, l| find(spec, GenKind::Del, k + 1, l + 1, site))?;
    let alpha = NCMat::identity(spec, n).add(&d.mul(spec, &x)?.scale(&kappa));
    let beta = NCMat::identity(spec, m).add(&x.mul(spec, &d)?.scale(&kappa));
    Ok(MomentMatrix { site, n, m, alpha, beta })
}

/// Which moment matrix of an edge enters a fused product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Alpha,
    Beta,
}

/// Fused moment at a vertex: the product, in the given order, of the moment
/// matrices of the edges meeting it, following Δ(a^i_j) = Σ_k a^i_k ⊗ a^k_j.
pub fn fused_moment<S: Coeff>(alg: &EdgeAlgebra<S>, parts: &[(u32, Side)]) -> Result<NCMat<S>> {
    let spec = &*alg.spec;
    let mut acc: Option<NCMat<S>> = None;
    for &(site, side) in parts {
        let mm = moment_map(alg, site)?;
        let g = match side {
            Side::Alpha => mm.alpha,
            Side::Beta => mm.beta,
        };
        acc = Some(match acc {
            None => g,
            Some(a) => a.mul(spec, &g)?,
        });
    }
    acc.ok_or_else(|| Error::Domain("fused moment of no edges".into()))
}

/// Outcome of the algebra-map check for the cleared moment matrices.
#[derive(Clone, Debug, Serialize)]
pub struct MomentCheck {
    pub identities: usize,
    pub failures: Vec<String>,
}

impl MomentCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn record<S: Coeff>(spec: &AlgebraSpec<S>, tag: &str, diff: &NCMat<S>, out: &mut MomentCheck) {
    for (k, e) in diff.data.iter().enumerate() {
        out.identities += 1;
        if !e.is_zero() {
            out.failures.push(format!("{tag}[{},{}]: {}", k / diff.cols, k % diff.cols, spec.element_text(e)));
        }
    }
}

/// Checks that the cleared moment matrices generate a copy of the REA image:
/// g^α satisfies R₂₁G₁RG₂ = G₂R₂₁G₁R, g^β satisfies
/// G₂R^{-1}G₁R₂₁^{-1} = R^{-1}G₁R₂₁^{-1}G₂, and the entries of g^α commute
/// with those of g^β. Failures list the offending entries.
pub fn verify_moment_algebra_map<S: Coeff>(alg: &EdgeAlgebra<S>, site: u32) -> Result<MomentCheck> {
    let spec = &*alg.spec;
    let mm = moment_map(alg, site)?;
    let q = spec.q();
    let mut out = MomentCheck { identities: 0, failures: Vec::new() };

    let rn = standard_r(mm.n, q);
    let (r, r21) = (NCMat::scalar(spec, &rn.r), NCMat::scalar(spec, &rn.r21()));
    let (g1, g2) = (mm.alpha.first(spec, mm.n), mm.alpha.second(spec, mm.n));
    let lhs = r21.mul(spec, &g1)?.mul(spec, &r)?.mul(spec, &g2)?;
    let rhs = g2.mul(spec, &r21)?.mul(spec, &g1)?.mul(spec, &r)?;
    record(spec, "alpha", &lhs.sub(&rhs), &mut out);

    let rm = standard_r(mm.m, q);
    let (ri, r21i) = (NCMat::scalar(spec, &rm.r_inv), NCMat::scalar(spec, &rm.r21_inv()));
    let (g1, g2) = (mm.beta.first(spec, mm.m), mm.beta.second(spec, mm.m));
    let lhs = g2.mul(spec, &ri)?.mul(spec, &g1)?.mul(spec, &r21i)?;
    let rhs = ri.mul(spec, &g1)?.mul(spec, &r21i)?.mul(spec, &g2)?;
    record(spec, "beta", &lhs.sub(&rhs), &mut out);

    for (i, a) in mm.alpha.data.iter().enumerate() {
        for (j, b) in mm.beta.data.iter().enumerate() {
            out.identities += 1;
            let c = spec.commutator(a, b)?;
            if !c.is_zero() {
                out.failures.push(format!("cross[alpha {i}, beta {j}]: {}", spec.element_text(&c)));
            }
        }
    }
    Ok(out)
}
