use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Coeff, CycScalar, LaurentScalar};
use crate::error::{Error, Result};

/// Where q-numbers are evaluated: at the formal parameter t, or at ζ_ℓ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Generic,
    Root(u32),
}

/// A scalar of either level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Cyc(CycScalar),
    Laurent(LaurentScalar),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Cyc(c) => write!(f, "{c}"),
            Scalar::Laurent(l) => write!(f, "{l}"),
        }
    }
}

/// The balanced quantum integer (v^n − v^{-n})/(v − v^{-1}) at the given v.
pub fn qint_in<S: Coeff>(n: i64, v: &S) -> S {
    let vn = v.pow_i(n).expect("q must be invertible");
    let vmn = v.pow_i(-n).expect("q must be invertible");
    let vi = v.inverse().expect("q must be invertible");
    vn.minus(&vmn).div_exact(&v.minus(&vi)).expect("quantum integer division is exact")
}

/// Balanced q-binomial coefficient via the q-Pascal recursion
/// [n, k] = v^{-k}[n-1, k] + v^{n-k}[n-1, k-1].
pub fn qbinom_in<S: Coeff>(r: u64, s: u64, v: &S) -> Result<S> {
    if s > r {
        return Err(Error::Domain(format!("qbinom({r}, {s}) requires s <= r")));
    }
    let one = v.one_like();
    let mut row = vec![one.clone()];
    for n in 1..=r as i64 {
        let mut next = vec![one.clone(); n as usize + 1];
        for k in 1..n {
            let a = v.pow_i(-k).unwrap().times(&row[k as usize]);
            let b = v.pow_i(n - k).unwrap().times(&row[k as usize - 1]);
            next[k as usize] = a.plus(&b);
        }
        row = next;
    }
    Ok(row[s as usize].clone())
}

pub fn qint(n: i64, mode: Mode) -> Scalar {
    match mode {
        Mode::Generic => Scalar::Laurent(qint_in(n, &LaurentScalar::t_pow(1, 1))),
        Mode::Root(ell) => Scalar::Cyc(qint_in(n, &CycScalar::zeta(ell))),
    }
}

pub fn qbinom(r: u64, s: u64, mode: Mode) -> Result<Scalar> {
    Ok(match mode {
        Mode::Generic => Scalar::Laurent(qbinom_in(r, s, &LaurentScalar::t_pow(1, 1))?),
        Mode::Root(ell) => Scalar::Cyc(qbinom_in(r, s, &CycScalar::zeta(ell))?),
    })
}

/// f(ζ_ℓ), where ℓ is the cyclotomic order of f's coefficients.
pub fn eval_at_root(f: &LaurentScalar) -> CycScalar {
    f.eval_root()
}

/// The value at t = ζ of (f − f(ζ))/(t − ζ), which is f'(ζ).
pub fn first_order(f: &LaurentScalar) -> CycScalar {
    let z = CycScalar::zeta(f.ell());
    let shifted = f.minus(&LaurentScalar::constant(f.eval_root()));
    shifted.div_linear(&z).expect("f − f(ζ) vanishes at ζ").eval_at(&z)
}
