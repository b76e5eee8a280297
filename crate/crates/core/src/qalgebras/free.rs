//! Free-algebra polynomials and matrices, used to expand matrix relations
//! into coordinate relations and to solve them for straightening rules.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::ncalg::{word_cmp, Letter, Rhs};
use crate::scalars::Coeff;

/// A noncommutative polynomial in the free algebra: words to coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct FreePoly<S> {
    pub terms: BTreeMap<Vec<Letter>, S>,
}

impl<S: Coeff> FreePoly<S> {
    pub fn zero() -> Self {
        FreePoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: S) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![], c);
        p
    }

    pub fn letter(g: usize, one: &S) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![Letter::new(g)], one.clone());
        p
    }

    pub fn add_term(&mut self, w: Vec<Letter>, c: S) {
        if c.vanishes() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v = v.plus(&c);
                if v.vanishes() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.negated());
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x.times(c));
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, x.times(y));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A matrix with free-polynomial entries.
#[derive(Clone, Debug)]
pub struct FreeMat<S> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<FreePoly<S>>,
}

impl<S: Coeff> FreeMat<S> {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> FreePoly<S>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        FreeMat { rows, cols, data }
    }

    pub fn from_scalar(m: &Mat<S>) -> Self {
        Self::from_fn(m.rows, m.cols, |i, j| FreePoly::constant(m.get(i, j).clone()))
    }

    pub fn get(&self, i: usize, j: usize) -> &FreePoly<S> {
        &self.data[i * self.cols + j]
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        Self::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = FreePoly::zero();
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), o.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(o.get(i, j)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(o.get(i, j)))
    }

    /// G ⊗ Id_k.
    pub fn first(&self, k: usize) -> Self {
        Self::from_fn(self.rows * k, self.cols * k, |r, c| {
            let (a, b) = (r / k, r % k);
            let (cc, d) = (c / k, c % k);
            if b == d {
                self.get(a, cc).clone()
            } else {
                FreePoly::zero()
            }
        })
    }

    /// Id_k ⊗ G.
    pub fn second(&self, k: usize) -> Self {
        let (n, m) = (self.rows, self.cols);
        Self::from_fn(k * n, k * m, |r, c| {
            let (a, b) = (r / n, r % n);
            let (cc, d) = (c / m, c % m);
            if a == cc {
                self.get(b, d).clone()
            } else {
                FreePoly::zero()
            }
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = &FreePoly<S>> {
        self.data.iter()
    }
}

/// Solves a set of relations for straightening rules by fraction-free
/// Gauss-Jordan elimination, pivoting on out-of-order words from the largest
/// down. Every out-of-order two-letter word must become a pivot and no pivot
/// may land on a normal word.
pub fn rules_from_relations<S: Coeff>(relations: &[FreePoly<S>], like: &S) -> Result<HashMap<(Letter, Letter), Rhs<S>>> {
    let mut words: BTreeSet<Vec<Letter>> = BTreeSet::new();
    for r in relations {
        words.extend(r.terms.keys().cloned());
    }
    let is_bad = |w: &Vec<Letter>| w.len() == 2 && w[0].gen > w[1].gen;
    let mut order: Vec<Vec<Letter>> = words.into_iter().collect();
    order.sort_by(|a, b| is_bad(b).cmp(&is_bad(a)).then_with(|| word_cmp(b, a)));
    let col_of: HashMap<&Vec<Letter>, usize> = order.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let cols = order.len();
    let mut m: Vec<Vec<S>> = relations
        .iter()
        .filter(|r| !r.is_zero())
        .map(|r| {
            let mut row = vec![like.zero_like(); cols];
            for (w, c) in &r.terms {
                row[col_of[w]] = c.clone();
            }
            row
        })
        .collect();
    let rows = m.len();
    let mut prev = like.one_like();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].vanishes()) else {
            continue;
        };
        m.swap(r, p);
        let pv = m[r][c].clone();
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let mic = row[c].clone();
            for j in 0..cols {
                let v = pv.times(&row[j]).minus(&mic.times(&prow[j]));
                row[j] = v.div_exact(&prev).ok_or_else(|| Error::NotDivisible("fraction-free elimination".into()))?;
            }
        }
        prev = pv;
        pivots.push((r, c));
        r += 1;
    }
    let mut rules = HashMap::new();
    for &(row, c) in &pivots {
        let w = &order[c];
        if !is_bad(w) {
            return Err(Error::Confluence(format!("relations force a dependency among normal words at {w:?}")));
        }
        let pv = m[row][c].clone();
        let mut rhs: Rhs<S> = Vec::new();
        for (j, x) in m[row].iter().enumerate() {
            if j == c || x.vanishes() {
                continue;
            }
            if pivots.iter().any(|&(_, pc)| pc == j) {
                return Err(Error::Confluence("elimination did not reach reduced form".into()));
            }
            let coef = x.negated().div_exact(&pv).ok_or_else(|| Error::NotDivisible(format!("rule coefficient for {w:?}")))?;
            rhs.push((order[j].clone(), coef));
        }
        rules.insert((w[0], w[1]), rhs);
    }
    Ok(rules)
}
