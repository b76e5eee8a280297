use std::fmt;

use super::{Coeff, CycScalar, LaurentScalar};

/// A first-order jet `v + d·ε` with ε² = 0 over Q(ζ_ℓ).
///
/// Substituting t = ζ + ε into a Laurent polynomial f gives f(ζ) + f'(ζ)ε, so
/// rewriting with jet coefficients computes values and first-order terms at
/// once.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct JetScalar {
    pub value: CycScalar,
    pub deriv: CycScalar,
}

impl JetScalar {
    pub fn new(value: CycScalar, deriv: CycScalar) -> Self {
        assert_eq!(value.ell(), deriv.ell(), "mixing scalars of different cyclotomic orders");
        JetScalar { value, deriv }
    }

    pub fn constant(value: CycScalar) -> Self {
        let z = CycScalar::zero(value.ell());
        JetScalar { value, deriv: z }
    }

    /// The jet of t at t = ζ.
    pub fn t(ell: u32) -> Self {
        JetScalar { value: CycScalar::zeta(ell), deriv: CycScalar::one(ell) }
    }

    pub fn from_laurent(f: &LaurentScalar) -> Self {
        JetScalar { value: f.eval_root(), deriv: f.derivative().eval_root() }
    }

    pub fn ell(&self) -> u32 {
        self.value.ell()
    }
}

impl fmt::Display for JetScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*e", self.value, self.deriv)
    }
}

impl fmt::Debug for JetScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Coeff for JetScalar {
    fn zero_like(&self) -> Self {
        Self::constant(CycScalar::zero(self.ell()))
    }
    fn one_like(&self) -> Self {
        Self::constant(CycScalar::one(self.ell()))
    }
    fn from_int_like(&self, n: i64) -> Self {
        Self::constant(CycScalar::from_int(self.ell(), n))
    }
    fn vanishes(&self) -> bool {
        self.value.is_zero_val() && self.deriv.is_zero_val()
    }
    fn plus(&self, o: &Self) -> Self {
        JetScalar { value: self.value.add_ref(&o.value), deriv: self.deriv.add_ref(&o.deriv) }
    }
    fn minus(&self, o: &Self) -> Self {
        JetScalar { value: self.value.sub_ref(&o.value), deriv: self.deriv.sub_ref(&o.deriv) }
    }
    fn times(&self, o: &Self) -> Self {
        let value = self.value.mul_ref(&o.value);
        let deriv = if self.deriv.is_zero_val() {
            self.value.mul_ref(&o.deriv)
        } else if o.deriv.is_zero_val() {
            self.deriv.mul_ref(&o.value)
        } else {
            self.value.mul_ref(&o.deriv).add_ref(&self.deriv.mul_ref(&o.value))
        };
        JetScalar { value, deriv }
    }
    fn negated(&self) -> Self {
        JetScalar { value: self.value.neg_ref(), deriv: self.deriv.neg_ref() }
    }
    fn inverse(&self) -> Option<Self> {
        let vi = self.value.inv_ref()?;
        let deriv = self.deriv.mul_ref(&vi).mul_ref(&vi).neg_ref();
        Some(JetScalar { value: vi, deriv })
    }
}

impl_field_ops!(JetScalar);
