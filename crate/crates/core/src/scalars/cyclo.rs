use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use parking_lot::RwLock;

use super::Coeff;

static PHI_CACHE: RwLock<Option<HashMap<u32, Arc<Vec<BigInt>>>>> = RwLock::new(None);

/// Coefficients of the cyclotomic polynomial Φ_n, lowest degree first.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<BigInt>> {
    assert!(n >= 1, "cyclotomic order must be positive");
    if let Some(map) = PHI_CACHE.read().as_ref() {
        if let Some(p) = map.get(&n) {
            return p.clone();
        }
    }
    let poly = Arc::new(compute_cyclotomic(n));
    let mut guard = PHI_CACHE.write();
    guard
        .get_or_insert_with(HashMap::new)
        .entry(n)
        .or_insert_with(|| poly.clone())
        .clone()
}

fn compute_cyclotomic(n: u32) -> Vec<BigInt> {
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi = cyclotomic_poly(d);
            num = div_monic(&num, &phi);
        }
    }
    num
}

fn div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for k in (db..a.len()).rev() {
        let c = rem[k].clone();
        if c.is_zero() {
            continue;
        }
        quot[k - db] = c.clone();
        for (j, bj) in b.iter().enumerate() {
            rem[k - db + j] -= &c * bj;
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// Euler totient, the degree of Φ_n.
pub fn totient(n: u32) -> usize {
    cyclotomic_poly(n).len() - 1
}

/// An element of the cyclotomic field Q(ζ_ℓ) in the power basis, stored as an
/// integer numerator vector over a common positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycScalar {
    ell: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycScalar {
    pub fn zero(ell: u32) -> Self {
        let d = totient(ell);
        CycScalar { ell, num: vec![BigInt::zero(); d], den: BigInt::one() }
    }

    pub fn one(ell: u32) -> Self {
        Self::from_int(ell, 1)
    }

    pub fn from_int(ell: u32, n: i64) -> Self {
        let mut s = Self::zero(ell);
        s.num[0] = BigInt::from(n);
        s
    }

    pub fn from_rational(ell: u32, r: &BigRational) -> Self {
        let mut s = Self::zero(ell);
        s.num[0] = r.numer().clone();
        s.den = r.denom().clone();
        s.normalize();
        s
    }

    /// Builds an element from rational power-basis coefficients; higher powers
    /// are reduced modulo Φ_ℓ.
    pub fn from_coeffs(ell: u32, coeffs: &[BigRational]) -> Self {
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let num: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let mut s = CycScalar { ell, num: Vec::new(), den };
        s.num = reduce_mod_phi(ell, num);
        s.normalize();
        s
    }

    /// ζ^k for any integer k.
    pub fn zeta_pow(ell: u32, k: i64) -> Self {
        let e = k.rem_euclid(ell as i64) as usize;
        let mut v = vec![BigInt::zero(); e + 1];
        v[e] = BigInt::one();
        let mut s = CycScalar { ell, num: reduce_mod_phi(ell, v), den: BigInt::one() };
        s.normalize();
        s
    }

    pub fn zeta(ell: u32) -> Self {
        Self::zeta_pow(ell, 1)
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// Rational coefficients in the power basis ζ^0..ζ^{φ(ℓ)-1}.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    pub fn is_rational(&self) -> bool {
        self.num.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    fn check_ctx(&self, o: &Self) {
        assert_eq!(self.ell, o.ell, "mixing scalars of different cyclotomic orders");
    }

    fn normalize(&mut self) {
        if self.num.iter().all(|c| c.is_zero()) {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in self.num.iter_mut() {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        self.check_ctx(o);
        if o.is_zero_val() {
            return self.clone();
        }
        if self.is_zero_val() {
            return o.clone();
        }
        let mut out = if self.den == o.den {
            let num = self.num.iter().zip(&o.num).map(|(a, b)| a + b).collect();
            CycScalar { ell: self.ell, num, den: self.den.clone() }
        } else {
            let num = self.num.iter().zip(&o.num).map(|(a, b)| a * &o.den + b * &self.den).collect();
            CycScalar { ell: self.ell, num, den: &self.den * &o.den }
        };
        out.normalize();
        out
    }

    pub fn neg_ref(&self) -> Self {
        CycScalar { ell: self.ell, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        self.check_ctx(o);
        if self.is_zero_val() || o.is_zero_val() {
            return Self::zero(self.ell);
        }
        let d = self.num.len();
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut out = CycScalar { ell: self.ell, num: reduce_mod_phi(self.ell, prod), den: &self.den * &o.den };
        out.normalize();
        out
    }

    pub fn scale_int(&self, n: i64) -> Self {
        let mut out = CycScalar {
            ell: self.ell,
            num: self.num.iter().map(|c| c * n).collect(),
            den: self.den.clone(),
        };
        out.normalize();
        out
    }

    pub fn is_zero_val(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x].
    pub fn inv_ref(&self) -> Option<Self> {
        if self.is_zero_val() {
            return None;
        }
        let phi: Vec<BigRational> = cyclotomic_poly(self.ell).iter().map(|c| BigRational::from(c.clone())).collect();
        let a: Vec<BigRational> = self.coeffs();
        let (g, s) = ext_gcd_first(&a, &phi);
        // g is a nonzero constant since Φ_ℓ is irreducible.
        let g0 = g[0].clone();
        let s: Vec<BigRational> = s.into_iter().map(|c| c / &g0).collect();
        Some(Self::from_coeffs(self.ell, &s))
    }

    pub fn pow_i(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv_ref()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Self::one(self.ell);
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_ref(&b);
            }
            n >>= 1;
            if n > 0 {
                b = b.mul_ref(&b);
            }
        }
        Some(acc)
    }

    /// Galois conjugate under ζ ↦ ζ^k (k coprime to ℓ).
    pub fn galois(&self, k: i64) -> Self {
        let mut acc = Self::zero(self.ell);
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = Self::zeta_pow(self.ell, k * i as i64);
            let scaled = CycScalar {
                ell: self.ell,
                num: term.num.iter().map(|t| t * c).collect(),
                den: self.den.clone(),
            };
            acc = acc.add_ref(&scaled);
        }
        acc
    }

    pub fn parse(ell: u32, s: &str) -> Result<Self, String> {
        let s = s.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| format!("cyclotomic scalar must be parenthesized: {s}"))?;
        let mut coeffs: Vec<BigRational> = Vec::new();
        for term in inner.split(" + ") {
            let term = term.trim();
            let (c, k) = if let Some((c, z)) = term.split_once('*') {
                let k = if z == "z" {
                    1
                } else {
                    z.strip_prefix("z^").ok_or_else(|| format!("bad power term {term}"))?.parse::<usize>().map_err(|e| e.to_string())?
                };
                (c, k)
            } else {
                (term, 0)
            };
            let c: BigRational = c.parse().map_err(|_| format!("bad rational {c}"))?;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigRational::zero());
            }
            coeffs[k] += c;
        }
        Ok(Self::from_coeffs(ell, &coeffs))
    }
}

fn reduce_mod_phi(ell: u32, mut v: Vec<BigInt>) -> Vec<BigInt> {
    let phi = cyclotomic_poly(ell);
    let d = phi.len() - 1;
    for k in (d..v.len()).rev() {
        let c = std::mem::take(&mut v[k]);
        if c.is_zero() {
            continue;
        }
        for (j, pj) in phi.iter().enumerate().take(d) {
            if !pj.is_zero() {
                v[k - d + j] -= &c * pj;
            }
        }
    }
    v.resize(d, BigInt::zero());
    v
}

fn trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![BigRational::zero()], r);
    }
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len() - db];
    for k in (db..r.len()).rev() {
        let c = &r[k] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            r[k - db + j] -= t;
        }
        q[k - db] = c;
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

fn poly_sub_mul(a: &[BigRational], q: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = a.to_vec();
    let n = q.len() + b.len() - 1;
    if out.len() < n {
        out.resize(n, BigRational::zero());
    }
    for (i, qi) in q.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] -= qi * bj;
        }
    }
    trim(&mut out);
    out
}

/// Returns (g, s) with g = gcd(a, b) and s·a ≡ g mod b.
fn ext_gcd_first(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = a.to_vec();
    trim(&mut r0);
    let mut r1 = b.to_vec();
    trim(&mut r1);
    let mut s0 = vec![BigRational::one()];
    let mut s1 = vec![BigRational::zero()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub_mul(&s0, &q, &s1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

fn fmt_rational(n: &BigInt, d: &BigInt) -> String {
    let r = BigRational::new(n.clone(), d.clone());
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let c = fmt_rational(c, &self.den);
                match k {
                    0 => c,
                    1 => format!("{c}*z"),
                    _ => format!("{c}*z^{k}"),
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "(0)")
        } else {
            write!(f, "({})", terms.join(" + "))
        }
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Coeff for CycScalar {
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
        self.is_zero_val()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add_ref(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub_ref(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul_ref(o)
    }
    fn negated(&self) -> Self {
        self.neg_ref()
    }
    fn inverse(&self) -> Option<Self> {
        self.inv_ref()
    }
    fn pow_i(&self, e: i64) -> Option<Self> {
        CycScalar::pow_i(self, e)
    }
}

impl_field_ops!(CycScalar);
