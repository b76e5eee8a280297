//! Exact scalars: the cyclotomic field Q(ζ_ℓ), Laurent polynomials over it,
//! first-order jets at t = ζ, q-numbers and the Cartan-data checker.

use std::fmt;

macro_rules! impl_field_ops {
    ($t:ty) => {
        impl std::ops::Add<&$t> for &$t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                $crate::scalars::Coeff::plus(self, o)
            }
        }
        impl std::ops::Sub<&$t> for &$t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                $crate::scalars::Coeff::minus(self, o)
            }
        }
        impl std::ops::Mul<&$t> for &$t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t {
                $crate::scalars::Coeff::times(self, o)
            }
        }
        impl std::ops::Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                $crate::scalars::Coeff::negated(self)
            }
        }
        impl std::ops::Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl std::ops::Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

mod cartan;
mod cyclo;
mod jet;
mod laurent;
mod qnum;

pub use cartan::{check_assumption, expand_label, AssumptionReport, CartanData, CartanSeries, LatticeForm};
pub use cyclo::{cyclotomic_poly, totient, CycScalar};
pub use jet::JetScalar;
pub use laurent::LaurentScalar;
pub use qnum::{eval_at_root, first_order, qbinom, qbinom_in, qint, qint_in, Mode, Scalar};

/// Commutative coefficient ring used by the rewriting engine.
///
/// Every value carries its own context (the cyclotomic order), so constants are
/// produced from an existing value.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, n: i64) -> Self;
    fn vanishes(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    /// Exact quotient, if it exists in the ring.
    fn div_exact(&self, o: &Self) -> Option<Self> {
        o.inverse().map(|i| self.times(&i))
    }

    fn pow_i(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = self.one_like();
        for _ in 0..e.unsigned_abs() {
            acc = acc.times(&base);
        }
        Some(acc)
    }
}
