use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalars::Coeff;

/// Exponent vector over the total generator order of an algebra. Negative
/// entries occur only for invertible generators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn single(n: usize, g: usize, e: i32) -> Self {
        let mut v = vec![0; n];
        v[g] = e;
        Monomial(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e.unsigned_abs() as i64).sum()
    }

    /// Index of the last generator with a nonzero exponent.
    pub fn last(&self) -> Option<usize> {
        self.0.iter().rposition(|&e| e != 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.0.iter().position(|&e| e != 0)
    }

    pub fn exps(&self) -> &[i32] {
        &self.0
    }

    /// The monomial as a letter sequence in generator order.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for (g, &e) in self.0.iter().enumerate() {
            let s = e.signum() as i8;
            for _ in 0..e.unsigned_abs() {
                out.push(Letter { gen: g, exp: s });
            }
        }
        out
    }

    /// Graded lexicographic comparison of the underlying letter words.
    pub fn deglex_cmp(&self, o: &Self) -> std::cmp::Ordering {
        word_cmp(&self.letters(), &o.letters())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A generator or the inverse of an invertible generator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub exp: i8,
}

impl Letter {
    pub fn new(gen: usize) -> Self {
        Letter { gen, exp: 1 }
    }

    pub fn inv(gen: usize) -> Self {
        Letter { gen, exp: -1 }
    }
}

/// Graded lexicographic order on words: length first, then letters from the
/// left.
pub fn word_cmp(a: &[Letter], b: &[Letter]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// A normal-ordered noncommutative polynomial: a finite map from ordered
/// monomials to nonzero scalars.
#[derive(Clone, PartialEq)]
pub struct NCElement<S> {
    pub(crate) spec_id: u64,
    pub(crate) ngens: usize,
    pub(crate) terms: BTreeMap<Monomial, S>,
}

impl<S: Coeff> NCElement<S> {
    pub(crate) fn zero_in(spec_id: u64, ngens: usize) -> Self {
        NCElement { spec_id, ngens, terms: BTreeMap::new() }
    }

    pub(crate) fn mono_in(spec_id: u64, m: Monomial, c: S) -> Self {
        let ngens = m.0.len();
        let mut terms = BTreeMap::new();
        if !c.vanishes() {
            terms.insert(m, c);
        }
        NCElement { spec_id, ngens, terms }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, S> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&S> {
        self.terms.get(m)
    }

    /// Maximal total degree of a term, 0 for scalars and zero.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, m: &Monomial, c: &S) {
        if c.vanishes() {
            return;
        }
        match self.terms.get_mut(m) {
            Some(v) => {
                *v = v.plus(c);
                if v.vanishes() {
                    self.terms.remove(m);
                }
            }
            None => {
                self.terms.insert(m.clone(), c.clone());
            }
        }
    }

    /// self += c · other.
    pub(crate) fn add_scaled(&mut self, c: &S, other: &Self) {
        for (m, x) in &other.terms {
            self.add_term(m, &c.times(x));
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero_in(self.spec_id, self.ngens);
        if c.vanishes() {
            return out;
        }
        for (m, x) in &self.terms {
            out.add_term(m, &x.times(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        NCElement { spec_id: self.spec_id, ngens: self.ngens, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.negated())).collect() }
    }

    /// Sum; panics on elements of different algebras.
    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.spec_id, o.spec_id, "adding elements of different algebras");
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Coefficientwise map, e.g. evaluation t ↦ ζ; the result belongs to the
    /// algebra with the given id.
    pub fn map_coeffs<T: Coeff>(&self, target_id: u64, f: impl Fn(&S) -> T) -> NCElement<T> {
        let mut out = NCElement::zero_in(target_id, self.ngens);
        for (m, c) in &self.terms {
            out.add_term(m, &f(c));
        }
        out
    }

    /// The scalar part if the element is a multiple of 1.
    pub fn as_scalar(&self) -> Option<Option<&S>> {
        match self.terms.len() {
            0 => Some(None),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then_some(Some(c))
            }
            _ => None,
        }
    }

    pub fn spec_id(&self) -> u64 {
        self.spec_id
    }
}

impl<S: Coeff> fmt::Debug for NCElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c}*{m:?}")).collect();
        write!(f, "{}", if parts.is_empty() { "0".to_string() } else { parts.join(" + ") })
    }
}
