//! Dense and sparse exact linear algebra over any coefficient field.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalars::Coeff;

impl Coeff for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn from_int_like(&self, n: i64) -> Self {
        BigRational::from(BigInt::from(n))
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// A dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<F> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: Coeff> Mat<F> {
    pub fn filled(rows: usize, cols: usize, v: F) -> Self {
        Mat { rows, cols, data: vec![v; rows * cols] }
    }

    pub fn zeros(rows: usize, cols: usize, like: &F) -> Self {
        Self::filled(rows, cols, like.zero_like())
    }

    pub fn identity(n: usize, like: &F) -> Self {
        let mut m = Self::zeros(n, n, like);
        for i in 0..n {
            m.data[i * n + i] = like.one_like();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in matrix product");
        let like = self.data.first().or(o.data.first()).expect("empty matrix product");
        let mut out = Self::zeros(self.rows, o.cols, like);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.vanishes() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.vanishes() {
                        let idx = i * o.cols + j;
                        out.data[idx] = out.data[idx].plus(&a.times(b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.plus(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.minus(b)).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.times(c)).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Mat { rows: self.cols, cols: self.rows, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.vanishes())
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).vanishes()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).inverse().expect("nonzero pivot must be invertible");
            for j in c..self.cols {
                let v = self.get(r, j).times(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.vanishes() {
                    continue;
                }
                for j in c..self.cols {
                    let v = self.get(i, j).minus(&f.times(self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let like = self.data.first().cloned();
        let Some(like) = like else {
            panic!("determinant of an empty matrix needs a field witness");
        };
        let mut m = self.clone();
        let mut det = like.one_like();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).vanishes()) else {
                return like.zero_like();
            };
            if p != c {
                m.swap_rows(p, c);
                det = det.negated();
            }
            let pv = m.get(c, c).clone();
            det = det.times(&pv);
            let inv = pv.inverse().unwrap();
            for i in c + 1..n {
                let f = m.get(i, c).times(&inv);
                if f.vanishes() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).minus(&f.times(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let like = self.data.first()?.clone();
        let mut aug = Self::zeros(n, 2 * n, &like);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, like.one_like());
        }
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut out = Self::zeros(n, n, &like);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(out)
    }

    /// A basis of the right kernel {v : M v = 0}.
    pub fn kernel(&self, like: &F) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let piv = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![like.zero_like(); self.cols];
                v[f] = like.one_like();
                for (r, &p) in piv.iter().enumerate() {
                    v[p] = m.get(r, f).negated();
                }
                v
            })
            .collect()
    }

    /// One solution x of M x = b, if any.
    pub fn solve(&self, b: &[F], like: &F) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1, like);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let piv = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![like.zero_like(); self.cols];
        for (r, &p) in piv.iter().enumerate() {
            x[p] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// Determinants of the leading principal k×k submatrices, k = 1..n.
    pub fn leading_minors(&self) -> Vec<F> {
        (1..=self.rows).map(|k| self.submatrix(0..k, 0..k).det()).collect()
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut data = Vec::new();
        for i in rows.clone() {
            for j in cols.clone() {
                data.push(self.get(i, j).clone());
            }
        }
        Mat { rows: rows.len(), cols: cols.len(), data }
    }

    pub fn map<G: Coeff>(&self, f: impl Fn(&F) -> G) -> Mat<G> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<F: Coeff> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Sparse vector keyed by coordinate.
pub type SparseVec<F> = BTreeMap<usize, F>;

pub fn sparse_axpy<F: Coeff>(v: &mut SparseVec<F>, c: &F, w: &SparseVec<F>) {
    for (k, x) in w {
        let t = c.times(x);
        match v.get_mut(k) {
            Some(e) => {
                *e = e.plus(&t);
                if e.vanishes() {
                    v.remove(k);
                }
            }
            None => {
                if !t.vanishes() {
                    v.insert(*k, t);
                }
            }
        }
    }
}

/// Incrementally maintained echelon basis of a subspace, used for span growth.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F> {
    rows: BTreeMap<usize, SparseVec<F>>,
}

impl<F: Coeff> Default for EchelonBasis<F> {
    fn default() -> Self {
        EchelonBasis { rows: BTreeMap::new() }
    }
}

impl<F: Coeff> EchelonBasis<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces v against the basis; the result is zero iff v lies in the span.
    pub fn reduce(&self, mut v: SparseVec<F>) -> SparseVec<F> {
        let mut floor = 0usize;
        loop {
            let Some((&lead, c)) = v.range(floor..).find(|(k, _)| self.rows.contains_key(k)) else {
                return v;
            };
            let c = c.negated();
            sparse_axpy(&mut v, &c, &self.rows[&lead]);
            floor = lead + 1;
        }
    }

    /// Inserts v; returns true when the span grew.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        let r = self.reduce(v);
        let Some((&lead, c)) = r.iter().next() else {
            return false;
        };
        let inv = c.inverse().expect("field element");
        let normed: SparseVec<F> = r.iter().map(|(k, x)| (*k, x.times(&inv))).collect();
        // Keep every stored row free of other pivots so reduction is one pass.
        for row in self.rows.values_mut() {
            if let Some(x) = row.get(&lead).cloned() {
                sparse_axpy(row, &x.negated(), &normed);
            }
        }
        self.rows.insert(lead, normed);
        true
    }

    pub fn contains(&self, v: SparseVec<F>) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<F>> {
        self.rows.values()
    }
}
