use serde::Serialize;

use crate::linalg::Mat;
use crate::scalars::{first_order, Coeff, CycScalar, LaurentScalar};

/// The standard R-matrix of GL_N on C^N ⊗ C^N, basis e_a ⊗ e_b at index a·N + b:
/// R(e_a⊗e_b) = q^{δ_ab} e_a⊗e_b, plus (q − q^{-1}) e_b⊗e_a when b > a.
#[derive(Clone, Debug)]
pub struct RMatrix<S: Coeff> {
    pub n: usize,
    pub r: Mat<S>,
    pub r_inv: Mat<S>,
    /// P·R, the flip-composed form.
    pub rhat: Mat<S>,
}

pub fn flip<S: Coeff>(n: usize, like: &S) -> Mat<S> {
    let mut p = Mat::zeros(n * n, n * n, like);
    for a in 0..n {
        for b in 0..n {
            p.set(b * n + a, a * n + b, like.one_like());
        }
    }
    p
}

pub fn standard_r<S: Coeff>(n: usize, q: &S) -> RMatrix<S> {
    let one = q.one_like();
    let qi = q.inverse().expect("q must be invertible");
    let kappa = q.minus(&qi);
    let mut r = Mat::zeros(n * n, n * n, q);
    for a in 0..n {
        for b in 0..n {
            r.set(a * n + b, a * n + b, if a == b { q.clone() } else { one.clone() });
            if a > b {
                r.set(a * n + b, b * n + a, kappa.clone());
            }
        }
    }
    let r_inv = r.inverse().expect("R is invertible");
    let rhat = flip(n, q).mul(&r);
    RMatrix { n, r, r_inv, rhat }
}

impl<S: Coeff> RMatrix<S> {
    /// R₂₁ = P R P.
    pub fn r21(&self) -> Mat<S> {
        let p = flip(self.n, self.r.get(0, 0));
        p.mul(&self.r).mul(&p)
    }

    pub fn r21_inv(&self) -> Mat<S> {
        let p = flip(self.n, self.r.get(0, 0));
        p.mul(&self.r_inv).mul(&p)
    }

    /// The operator on (C^N)^{⊗3} acting as R on the factors (i, j).
    pub fn on_triple(&self, i: usize, j: usize) -> Mat<S> {
        let n = self.n;
        let like = self.r.get(0, 0);
        let dim = n * n * n;
        let mut out = Mat::zeros(dim, dim, like);
        let idx = |v: [usize; 3]| v[0] * n * n + v[1] * n + v[2];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let src = [a, b, c];
                    let (x, y) = (src[i], src[j]);
                    let col = x * n + y;
                    for x2 in 0..n {
                        for y2 in 0..n {
                            let v = self.r.get(x2 * n + y2, col);
                            if v.vanishes() {
                                continue;
                            }
                            let mut dst = src;
                            dst[i] = x2;
                            dst[j] = y2;
                            let k = 3 - i - j;
                            dst[k] = src[k];
                            out.set(idx(dst), idx(src), v.clone());
                        }
                    }
                }
            }
        }
        out
    }

    pub fn satisfies_qybe(&self) -> bool {
        let (r12, r13, r23) = (self.on_triple(0, 1), self.on_triple(0, 2), self.on_triple(1, 2));
        r12.mul(&r13).mul(&r23) == r23.mul(&r13).mul(&r12)
    }

    /// (R̂ − q)(R̂ + q^{-1}) = 0.
    pub fn satisfies_hecke(&self, q: &S) -> bool {
        let id = Mat::identity(self.n * self.n, q);
        let a = self.rhat.sub(&id.scale(q));
        let b = self.rhat.add(&id.scale(&q.inverse().unwrap()));
        a.mul(&b).is_zero()
    }
}

/// Outcome of the r-matrix degeneration check.
#[derive(Clone, Debug, Serialize)]
pub struct RDegenerationReport {
    pub n: usize,
    pub ell: u32,
    /// d/dt of standard_r at t = 1 equals 2·r_std.
    pub classical_limit: bool,
    /// First-order braiding on Frobenius weight vectors equals factor·r_std.
    pub root_of_unity: bool,
    pub factor: String,
}

/// The classical r-matrix ½ Σ E_aa⊗E_aa + Σ_{a>b} E_ab⊗E_ba on C^N ⊗ C^N.
pub fn r_std<S: Coeff>(n: usize, like: &S) -> Mat<S> {
    let half = like.from_int_like(2).inverse().unwrap();
    let mut m = Mat::zeros(n * n, n * n, like);
    for a in 0..n {
        m.set(a * n + a, a * n + a, half.clone());
        for b in 0..a {
            // E_ab ⊗ E_ba sends e_b ⊗ e_a to e_a ⊗ e_b.
            m.set(a * n + b, b * n + a, like.one_like());
        }
    }
    m
}

/// Checks the degeneration of the braiding to the classical r-matrix.
///
/// At t = 1 the derivative of the standard R-matrix is 2·r_std. At t = ζ_ℓ the
/// braiding on Frobenius-pulled-back weight vectors (weights ℓε_a) is
/// t^{−(μ,ν)} times the quasi R-matrix, whose only surviving first-order
/// terms are the n = ℓ divided-power terms; its first-order part must equal
/// −2ℓ²ζ^{-1}·r_std.
pub fn verify_r_degeneration(n: usize, ell: u32) -> RDegenerationReport {
    // Classical limit, with Laurent coefficients over Q.
    let t1 = LaurentScalar::t_pow(1, 1);
    let rt = standard_r(n, &t1).r;
    let deriv_at_one = rt.map(|f| {
        let d = f.derivative();
        d.eval_at(&CycScalar::one(1))
    });
    let classical_limit = deriv_at_one == r_std(n, &CycScalar::one(1)).scale(&CycScalar::from_int(1, 2));

    // Root of unity.
    let l = ell as i64;
    let t = LaurentScalar::t_pow(ell, 1);
    let mut theta = LaurentScalar::from_int(ell, if l % 2 == 0 { 1 } else { -1 }).times(&LaurentScalar::t_pow(ell, -l * (l - 1) / 2));
    for a in 1..=l {
        theta = theta.times(&t.pow_i(a).unwrap().minus(&t.pow_i(-a).unwrap()));
    }
    let theta1 = first_order(&theta);
    let z = CycScalar::zeta(ell);
    let mut braid1 = Mat::zeros(n * n, n * n, &z);
    for a in 0..n {
        for b in 0..n {
            let pairing = if a == b { l * l } else { 0 };
            braid1.set(a * n + b, a * n + b, first_order(&LaurentScalar::t_pow(ell, -pairing)));
            if a > b {
                // f_α ⊗ e_α for α = ε_b − ε_a sends e_b ⊗ e_a to e_a ⊗ e_b.
                braid1.set(a * n + b, b * n + a, theta1.clone());
            }
        }
    }
    let factor = CycScalar::from_int(ell, -2 * l * l).times(&z.inverse().unwrap());
    let root_of_unity = braid1 == r_std(n, &z).scale(&factor);
    RDegenerationReport { n, ell, classical_limit, root_of_unity, factor: factor.to_string() }
}
