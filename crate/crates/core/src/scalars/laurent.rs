use std::collections::BTreeMap;
use std::fmt;

use super::{Coeff, CycScalar};

/// A Laurent polynomial in t with coefficients in Q(ζ_ℓ). Zero coefficients
/// are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentScalar {
    ell: u32,
    terms: BTreeMap<i64, CycScalar>,
}

impl LaurentScalar {
    pub fn zero(ell: u32) -> Self {
        LaurentScalar { ell, terms: BTreeMap::new() }
    }

    pub fn one(ell: u32) -> Self {
        Self::monomial(CycScalar::one(ell), 0)
    }

    pub fn from_int(ell: u32, n: i64) -> Self {
        Self::monomial(CycScalar::from_int(ell, n), 0)
    }

    pub fn constant(c: CycScalar) -> Self {
        Self::monomial(c, 0)
    }

    /// c·t^k.
    pub fn monomial(c: CycScalar, k: i64) -> Self {
        let ell = c.ell();
        let mut terms = BTreeMap::new();
        if !c.is_zero_val() {
            terms.insert(k, c);
        }
        LaurentScalar { ell, terms }
    }

    /// t^k.
    pub fn t_pow(ell: u32, k: i64) -> Self {
        Self::monomial(CycScalar::one(ell), k)
    }

    pub fn from_terms(ell: u32, terms: impl IntoIterator<Item = (i64, CycScalar)>) -> Self {
        let mut out = Self::zero(ell);
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn terms(&self) -> &BTreeMap<i64, CycScalar> {
        &self.terms
    }

    pub fn coeff(&self, k: i64) -> CycScalar {
        self.terms.get(&k).cloned().unwrap_or_else(|| CycScalar::zero(self.ell))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, k: i64, c: &CycScalar) {
        assert_eq!(self.ell, c.ell(), "mixing scalars of different cyclotomic orders");
        if c.is_zero_val() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v = v.add_ref(c);
                if v.is_zero_val() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    /// Value at t = ζ.
    pub fn eval_root(&self) -> CycScalar {
        self.eval_at(&CycScalar::zeta(self.ell))
    }

    pub fn eval_at(&self, x: &CycScalar) -> CycScalar {
        let mut acc = CycScalar::zero(self.ell);
        for (k, c) in &self.terms {
            let p = x.pow_i(*k).expect("evaluation point must be invertible");
            acc = acc.add_ref(&c.mul_ref(&p));
        }
        acc
    }

    /// Formal derivative d/dt.
    pub fn derivative(&self) -> Self {
        Self::from_terms(self.ell, self.terms.iter().filter(|(k, _)| **k != 0).map(|(k, c)| (k - 1, c.scale_int(*k))))
    }

    /// Exact division by (t − a); `None` if the remainder is nonzero.
    pub fn div_linear(&self, a: &CycScalar) -> Option<Self> {
        if self.terms.is_empty() {
            return Some(self.clone());
        }
        let lo = self.min_exp().unwrap();
        let hi = self.max_exp().unwrap();
        // Work with the polynomial p(t) = t^{-lo}·f, degree hi - lo.
        let deg = (hi - lo) as usize;
        let mut coeffs: Vec<CycScalar> = (0..=deg).map(|i| self.coeff(lo + i as i64)).collect();
        // Synthetic division from the top.
        let mut quot = vec![CycScalar::zero(self.ell); deg];
        let mut carry = CycScalar::zero(self.ell);
        for i in (0..=deg).rev() {
            let cur = coeffs[i].add_ref(&carry);
            if i == 0 {
                if !cur.is_zero_val() {
                    return None;
                }
            } else {
                quot[i - 1] = cur.clone();
                carry = cur.mul_ref(a);
            }
            coeffs[i] = CycScalar::zero(self.ell);
        }
        Some(Self::from_terms(self.ell, quot.into_iter().enumerate().map(|(i, c)| (lo + i as i64, c))))
    }

    /// Exact division by an arbitrary nonzero Laurent polynomial.
    pub fn div_exact_by(&self, d: &Self) -> Option<Self> {
        if d.terms.is_empty() {
            return None;
        }
        if self.terms.is_empty() {
            return Some(self.clone());
        }
        let (dlo, dhi) = (d.min_exp().unwrap(), d.max_exp().unwrap());
        let lead_inv = d.coeff(dhi).inv_ref()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.ell);
        let lo_bound = self.min_exp().unwrap() - dlo;
        while let Some(rhi) = rem.max_exp() {
            let shift = rhi - dhi;
            if shift < lo_bound {
                return None;
            }
            let c = rem.coeff(rhi).mul_ref(&lead_inv);
            let term = Self::monomial(c, shift);
            rem = rem.minus(&term.times(d));
            quot = quot.plus(&term);
        }
        Some(quot)
    }

    /// Substitutes t ↦ t^{-1}.
    pub fn bar(&self) -> Self {
        Self::from_terms(self.ell, self.terms.iter().map(|(k, c)| (-k, c.clone())))
    }

    pub fn parse(ell: u32, s: &str) -> Result<Self, String> {
        let s = s.trim();
        let mut out = Self::zero(ell);
        let mut depth = 0i32;
        let mut start = 0usize;
        let bytes = s.as_bytes();
        let mut pieces = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            match bytes[i] {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' if depth == 0 => {
                    pieces.push(s[start..i].trim());
                    start = i + 1;
                }
                _ => {}
            }
            i += 1;
        }
        pieces.push(s[start..].trim());
        for p in pieces {
            let (c, k) = match p.rfind(")*t") {
                Some(pos) => {
                    let rest = &p[pos + 3..];
                    let k = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(|| format!("bad t-power {p}"))?.parse::<i64>().map_err(|e| e.to_string())?
                    };
                    (&p[..=pos], k)
                }
                None => (p, 0),
            };
            out.add_term(k, &CycScalar::parse(ell, c)?);
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "(0)");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Coeff for LaurentScalar {
    fn zero_like(&self) -> Self {
        Self::zero(self.ell)
    }
    fn one_like(&self) -> Self {
        Self::one(self.ell)
    }
    fn from_int_like(&self, n: i64) -> Self {
        Self::from_int(self.ell, n)
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, c);
        }
        out
    }
    fn minus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, &c.neg_ref());
        }
        out
    }
    fn times(&self, o: &Self) -> Self {
        assert_eq!(self.ell, o.ell, "mixing scalars of different cyclotomic orders");
        let mut out = Self::zero(self.ell);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                out.add_term(a + b, &ca.mul_ref(cb));
            }
        }
        out
    }
    fn negated(&self) -> Self {
        LaurentScalar { ell: self.ell, terms: self.terms.iter().map(|(k, c)| (*k, c.neg_ref())).collect() }
    }
    fn inverse(&self) -> Option<Self> {
        // Units of Q(ζ)[t, t^{-1}] are the monomials.
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next().unwrap();
        Some(Self::monomial(c.inv_ref()?, -k))
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        self.div_exact_by(o)
    }
}

impl_field_ops!(LaurentScalar);
