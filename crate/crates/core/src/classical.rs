//! Classical multiplicative geometry over exact rationals: moment maps of
//! doubled-quiver and character-variety points, the big cell and the dual
//! group factorization, the nondegeneracy determinant, fusion, good points,
//! simplicity and King stability.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{rat, EchelonBasis, Mat, SparseVec};
use crate::qalgebras::Quiver;

pub type QMat = Mat<BigRational>;

fn zero() -> BigRational {
    BigRational::zero()
}

fn one() -> BigRational {
    BigRational::one()
}

pub fn identity(n: usize) -> QMat {
    Mat::identity(n, &one())
}

fn zeros(r: usize, c: usize) -> QMat {
    Mat::zeros(r, c, &one())
}

fn det(m: &QMat) -> BigRational {
    if m.rows == 0 {
        one()
    } else {
        m.det()
    }
}

fn inverse(m: &QMat) -> Option<QMat> {
    if m.rows == 0 {
        Some(m.clone())
    } else {
        m.inverse()
    }
}

fn mat_text(m: &QMat) -> Vec<Vec<String>> {
    (0..m.rows).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect()
}

/// A small random rational: numerator in [−5, 5], denominator in [1, 3].
pub fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-5i64..=5)), BigInt::from(rng.gen_range(1i64..=3)))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> QMat {
    Mat { rows: r, cols: c, data: (0..r * c).map(|_| random_rational(rng)).collect() }
}

pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> QMat {
    loop {
        let m = random_matrix(rng, n, n);
        if n == 0 || !m.det().is_zero() {
            return m;
        }
    }
}

/// A point of the gauge group: one invertible block per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupPoint {
    pub blocks: Vec<QMat>,
}

impl GroupPoint {
    pub fn new(blocks: Vec<QMat>) -> Result<Self> {
        if let Some(v) = blocks.iter().position(|b| !b.is_square() || det(b).is_zero()) {
            return Err(Error::Domain(format!("block {v} is not invertible")));
        }
        Ok(GroupPoint { blocks })
    }

    pub fn identity(dims: &[usize]) -> Self {
        GroupPoint { blocks: dims.iter().map(|&d| identity(d)).collect() }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.rows).collect()
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.dims() != o.dims() {
            return Err(Error::Domain("group points have different shapes".into()));
        }
        Ok(GroupPoint { blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| a.mul(b)).collect() })
    }

    pub fn inverse(&self) -> Self {
        GroupPoint { blocks: self.blocks.iter().map(|b| inverse(b).expect("invertible block")).collect() }
    }

    /// g·h·g^{-1} blockwise.
    pub fn conjugate(&self, h: &Self) -> Result<Self> {
        self.mul(h)?.mul(&self.inverse())
    }

    pub fn text(&self) -> Vec<Vec<Vec<String>>> {
        self.blocks.iter().map(mat_text).collect()
    }
}

/// A representation of the doubled quiver: X_e : source → target and
/// X_{e∨} : target → source for each edge e, in the order of the quiver.
#[derive(Clone, Debug, PartialEq)]
pub struct QuiverRep {
    pub quiver: Quiver,
    pub x: Vec<QMat>,
    pub x_dual: Vec<QMat>,
}

impl QuiverRep {
    pub fn new(quiver: Quiver, x: Vec<QMat>, x_dual: Vec<QMat>) -> Result<Self> {
        quiver.validate()?;
        let d = &quiver.dims;
        if x.len() != quiver.edges.len() || x_dual.len() != quiver.edges.len() {
            return Err(Error::Domain("one matrix pair per edge is required".into()));
        }
        for (k, e) in quiver.edges.iter().enumerate() {
            let (s, t) = (d[e.source], d[e.target]);
            if (x[k].rows, x[k].cols) != (t, s) || (x_dual[k].rows, x_dual[k].cols) != (s, t) {
                return Err(Error::Domain(format!("edge {k}: matrices do not match the dimension vector")));
            }
        }
        Ok(QuiverRep { quiver, x, x_dual })
    }

    pub fn zero(quiver: Quiver) -> Result<Self> {
        let d = quiver.dims.clone();
        let x = quiver.edges.iter().map(|e| zeros(d[e.target], d[e.source])).collect();
        let xd = quiver.edges.iter().map(|e| zeros(d[e.source], d[e.target])).collect();
        Self::new(quiver, x, xd)
    }

    pub fn random(quiver: Quiver, rng: &mut ChaCha8Rng) -> Result<Self> {
        let d = quiver.dims.clone();
        let x = quiver.edges.iter().map(|e| random_matrix(rng, d[e.target], d[e.source])).collect();
        let xd = quiver.edges.iter().map(|e| random_matrix(rng, d[e.source], d[e.target])).collect();
        Self::new(quiver, x, xd)
    }

    /// g·X: X_e ↦ g_t X_e g_s^{-1}, X_{e∨} ↦ g_s X_{e∨} g_t^{-1}.
    pub fn act(&self, g: &GroupPoint) -> Result<Self> {
        if g.dims() != self.quiver.dims {
            return Err(Error::Domain("group point does not match the dimension vector".into()));
        }
        let gi = g.inverse();
        let mut out = self.clone();
        for (k, e) in self.quiver.edges.iter().enumerate() {
            let (s, t) = (e.source, e.target);
            out.x[k] = g.blocks[t].mul(&self.x[k]).mul(&gi.blocks[s]);
            out.x_dual[k] = g.blocks[s].mul(&self.x_dual[k]).mul(&gi.blocks[t]);
        }
        Ok(out)
    }
}

/// The multiplicative moment map μ̃(X) = ∏ (Id_α + X_{e∨}X_e)^{ε(e)}, the
/// product running over the edges in file order and then over their duals.
/// An edge s → t contributes Id + X_{e∨}X_e at s, its dual contributes
/// (Id + X_e X_{e∨})^{-1} at t.
pub fn classical_moment(rep: &QuiverRep) -> Result<GroupPoint> {
    let d = &rep.quiver.dims;
    let mut blocks: Vec<QMat> = d.iter().map(|&n| identity(n)).collect();
    let edges = &rep.quiver.edges;
    for (k, e) in edges.iter().enumerate() {
        let f = identity(d[e.source]).add(&rep.x_dual[k].mul(&rep.x[k]));
        if det(&f).is_zero() {
            return Err(Error::Domain(format!("Id + X_e∨X_e is singular for edge {k}")));
        }
        blocks[e.source] = blocks[e.source].mul(&f);
    }
    for (k, e) in edges.iter().enumerate() {
        let f = identity(d[e.target]).add(&rep.x[k].mul(&rep.x_dual[k]));
        let fi = inverse(&f).ok_or_else(|| Error::Domain(format!("Id + X_eX_e∨ is singular for edge {k}")))?;
        blocks[e.target] = blocks[e.target].mul(&fi);
    }
    Ok(GroupPoint { blocks })
}

/// Fusion of moment values at shared vertices: the blockwise product in the
/// given order.
pub fn fusion_moment(points: &[GroupPoint]) -> Result<GroupPoint> {
    let (first, rest) = points.split_first().ok_or_else(|| Error::Domain("fusion of no factors".into()))?;
    rest.iter().try_fold(first.clone(), |acc, p| acc.mul(p))
}

/// Membership in the big cell: every leading principal minor is nonzero.
pub fn big_cell_test(g: &QMat) -> bool {
    g.is_square() && g.leading_minors().iter().all(|m| !m.is_zero())
}

/// √r written as a·√s with s free of small square factors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Surd {
    pub coeff: String,
    pub radicand: String,
    #[serde(skip)]
    pub a: BigRational,
    #[serde(skip)]
    pub s: BigInt,
}

fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut rest = n.abs();
    let mut out = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest && p < BigInt::from(10_000) {
        let pp = &p * &p;
        while (&rest % &pp).is_zero() {
            rest /= &pp;
            out *= &p;
        }
        p += 1;
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        out *= r;
        rest = BigInt::one();
    }
    (out, sign * rest)
}

impl Surd {
    /// The square root of a nonzero rational.
    pub fn sqrt(x: &BigRational) -> Self {
        // √(p/q) = √(pq)/q
        let pq = x.numer() * x.denom();
        let (o, s) = split_square(&pq);
        let a = BigRational::new(o, x.denom().clone());
        Surd { coeff: a.to_string(), radicand: s.to_string(), a, s }
    }

    pub fn is_rational(&self) -> bool {
        self.s.is_one()
    }
}

/// The factorization g = b₊·b₋^{-1} through the dual group: b₊ lower and b₋
/// upper triangular with p₊(b₊)·p₋(b₋) = 1.
///
/// With g = L·D·U (L lower, U upper unipotent) and S = √D, b₊ = L·S and
/// b₋^{-1} = S·U. Column j of b₊ and row j of b₋^{-1} are rational multiples of
/// √s_j; `b_plus` and `b_minus_inv` hold those rational parts.
#[derive(Clone, Debug)]
pub struct GStarFactor {
    pub l: QMat,
    pub d: Vec<BigRational>,
    pub u: QMat,
    pub sqrt_d: Vec<Surd>,
    pub b_plus: QMat,
    pub b_minus_inv: QMat,
    pub needs_extension: bool,
}

impl GStarFactor {
    /// Recomputes b₊·b₋^{-1} exactly; entries are rational since √s_k² = s_k.
    pub fn product(&self) -> QMat {
        let n = self.d.len();
        let mut out = zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = zero();
                for k in 0..n {
                    acc += self.b_plus.get(i, k) * self.b_minus_inv.get(k, j) * BigRational::from(self.sqrt_d[k].s.clone());
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// p₊(b₊)·p₋(b₋) = 1, entrywise on the diagonal.
    pub fn balanced(&self) -> bool {
        (0..self.d.len()).all(|i| {
            let bp = self.b_plus.get(i, i);
            let bm_inv = self.b_minus_inv.get(i, i);
            !bm_inv.is_zero() && bp == bm_inv
        })
    }
}

/// LDU decomposition without pivoting; None off the big cell.
pub fn ldu(g: &QMat) -> Option<(QMat, Vec<BigRational>, QMat)> {
    if !g.is_square() {
        return None;
    }
    let n = g.rows;
    let mut a = g.clone();
    let mut l = identity(n);
    for c in 0..n {
        let p = a.get(c, c).clone();
        if p.is_zero() {
            return None;
        }
        for i in c + 1..n {
            let f = a.get(i, c) / &p;
            l.set(i, c, f.clone());
            for j in c..n {
                let v = a.get(i, j) - &f * a.get(c, j);
                a.set(i, j, v);
            }
        }
    }
    let d: Vec<BigRational> = (0..n).map(|i| a.get(i, i).clone()).collect();
    let mut u = identity(n);
    for i in 0..n {
        for j in i + 1..n {
            u.set(i, j, a.get(i, j) / &d[i]);
        }
    }
    Some((l, d, u))
}

pub fn gstar_factor(g: &QMat) -> Option<GStarFactor> {
    let (l, d, u) = ldu(g)?;
    let n = d.len();
    let sqrt_d: Vec<Surd> = d.iter().map(Surd::sqrt).collect();
    let mut b_plus = l.clone();
    let mut b_minus_inv = u.clone();
    for j in 0..n {
        for i in 0..n {
            b_plus.set(i, j, l.get(i, j) * &sqrt_d[j].a);
            b_minus_inv.set(j, i, u.get(j, i) * &sqrt_d[j].a);
        }
    }
    let needs_extension = sqrt_d.iter().any(|s| !s.is_rational());
    Some(GStarFactor { l, d, u, sqrt_d, b_plus, b_minus_inv, needs_extension })
}

/// The matrix of the modified biderivation on the coordinates y_i^j = x^j_i
/// then z_k^l = ∂^l_k, assembled entry by entry from the block formulas.
pub fn nondeg_matrix(x: &QMat, d: &QMat) -> QMat {
    let (m, n) = (x.rows, x.cols);
    // y_i^j: i ∈ [0,n), j ∈ [0,m); z_k^l: k ∈ [0,m), l ∈ [0,n)
    let y = |i: usize, j: usize| x.get(j, i).clone();
    let z = |k: usize, l: usize| d.get(l, k).clone();
    let delta = |a: usize, b: usize| if a == b { one() } else { zero() };
    let ys: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    let zs: Vec<(usize, usize)> = (0..m).flat_map(|k| (0..n).map(move |l| (k, l))).collect();
    let nm = n * m;
    let mut out = zeros(2 * nm, 2 * nm);
    for (a, &(i, j)) in ys.iter().enumerate() {
        for (b, &(k, l)) in ys.iter().enumerate() {
            out.set(a, b, -(y(k, j) * y(i, l)));
        }
        for (b, &(k, l)) in zs.iter().enumerate() {
            out.set(a, nm + b, -(delta(i, l) * delta(k, j)));
        }
    }
    for (a, &(i, j)) in zs.iter().enumerate() {
        for (b, &(k, l)) in zs.iter().enumerate() {
            out.set(nm + a, nm + b, -(z(k, j) * z(i, l)));
        }
    }
    // {z_k^l, y_i^j}' = Σ_p z_p^l y_i^p δ^j_k + Σ_p z_k^p y_p^j δ^l_i + δ^j_k δ^l_i
    for (a, &(k, l)) in zs.iter().enumerate() {
        for (b, &(i, j)) in ys.iter().enumerate() {
            let mut v = delta(j, k) * delta(l, i);
            if j == k {
                for p in 0..m {
                    v += z(p, l) * y(i, p);
                }
            }
            if l == i {
                for p in 0..n {
                    v += z(k, p) * y(p, j);
                }
            }
            out.set(nm + a, b, v);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct NondegReport {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub samples: usize,
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl NondegReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked == self.samples
    }
}

fn nondeg_holds(x: &QMat, d: &QMat) -> std::result::Result<bool, ()> {
    let (m, n) = (x.rows, x.cols);
    let base = det(&identity(n).add(&d.mul(x)));
    if base.is_zero() {
        return Err(());
    }
    let lhs = det(&nondeg_matrix(x, d));
    Ok(lhs == num_traits::pow(base, n + m))
}

/// Checks det(M) = det(1 + DX)^{N+M} at random rational points, X of shape
/// M×N and D of shape N×M; points with det(1 + DX) = 0 are redrawn.
pub fn nondeg_identity_check(n: usize, m: usize, samples: usize, seed: u64) -> NondegReport {
    let results: Vec<(usize, Option<String>)> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            let mut skipped = 0;
            loop {
                let x = random_matrix(&mut rng, m, n);
                let d = random_matrix(&mut rng, n, m);
                match nondeg_holds(&x, &d) {
                    Err(()) => skipped += 1,
                    Ok(true) => return (skipped, None),
                    Ok(false) => return (skipped, Some(format!("sample {k}: X = {:?}, D = {:?}", mat_text(&x), mat_text(&d)))),
                }
            }
        })
        .collect();
    let failures: Vec<String> = results.iter().filter_map(|(_, f)| f.clone()).collect();
    NondegReport {
        n,
        m,
        seed,
        samples,
        checked: samples,
        skipped: results.iter().map(|(s, _)| s).sum(),
        failures,
    }
}

/// The identity at (N, M) = (1, 1) as polynomials in y, z: det M − (1 + zy)²
/// has degree at most 4 in each variable, so vanishing on a 5×5 grid of
/// integers proves it vanishes identically.
pub fn nondeg_symbolic_1x1() -> bool {
    (0..5).all(|a| {
        (0..5).all(|b| {
            let x = Mat::from_rows(vec![vec![rat(a - 2)]]);
            let d = Mat::from_rows(vec![vec![rat(b - 2)]]);
            let lhs = det(&nondeg_matrix(&x, &d));
            let yz = rat((a - 2) * (b - 2));
            lhs == (one() + &yz) * (one() + yz)
        })
    })
}

/// ∏ x_i y_i x_i^{-1} y_i^{-1} over the pairs of the tuple.
pub fn char_moment(tuple: &[QMat]) -> Result<QMat> {
    if tuple.is_empty() || tuple.len() % 2 != 0 {
        return Err(Error::Domain("expected a tuple (x1, y1, ..., xg, yg)".into()));
    }
    let n = tuple[0].rows;
    let mut out = identity(n);
    for pair in tuple.chunks(2) {
        let (x, y) = (&pair[0], &pair[1]);
        if x.rows != n || y.rows != n || !x.is_square() || !y.is_square() {
            return Err(Error::Domain("matrices of different sizes".into()));
        }
        let xi = inverse(x).ok_or_else(|| Error::Domain("singular matrix in the tuple".into()))?;
        let yi = inverse(y).ok_or_else(|| Error::Domain("singular matrix in the tuple".into()))?;
        out = out.mul(x).mul(y).mul(&xi).mul(&yi);
    }
    Ok(out)
}

fn flatten(m: &QMat) -> SparseVec<BigRational> {
    m.data.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (k, v.clone())).collect()
}

/// Dimension of the unital algebra generated by the matrices.
pub fn generated_algebra_dim(gens: &[QMat], n: usize) -> usize {
    let mut span = EchelonBasis::new();
    let id = identity(n);
    span.insert(flatten(&id));
    let mut frontier = vec![id];
    while !frontier.is_empty() && span.dim() < n * n {
        let mut next = Vec::new();
        for m in &frontier {
            for g in gens {
                let p = g.mul(m);
                if span.insert(flatten(&p)) {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    span.dim()
}

/// Dimension of {Z : Z g = g Z for every g}.
pub fn centralizer_dim(gens: &[QMat], n: usize) -> usize {
    let mut rows = Vec::new();
    for g in gens {
        // (gZ − Zg)_{ij} as a linear form in the entries Z_{ab}
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![zero(); n * n];
                for k in 0..n {
                    row[k * n + j] += g.get(i, k);
                    row[i * n + k] -= g.get(k, j);
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return n * n;
    }
    n * n - Mat::from_rows(rows).rank()
}

#[derive(Clone, Debug, Serialize)]
pub struct GoodPointReport {
    pub span_dim: usize,
    pub centralizer_dim: usize,
    pub good: bool,
}

/// Irreducibility (the tuple generates all of Mat_n) and trivial centralizer.
pub fn good_point_report(tuple: &[QMat]) -> Result<GoodPointReport> {
    let n = tuple.first().map(|m| m.rows).ok_or_else(|| Error::Domain("empty tuple".into()))?;
    if tuple.iter().any(|m| det(m).is_zero()) {
        return Err(Error::Domain("singular matrix in the tuple".into()));
    }
    let span_dim = generated_algebra_dim(tuple, n);
    let centralizer_dim = centralizer_dim(tuple, n);
    Ok(GoodPointReport { span_dim, centralizer_dim, good: span_dim == n * n && centralizer_dim == 1 })
}

pub fn is_good_point(tuple: &[QMat]) -> Result<bool> {
    Ok(good_point_report(tuple)?.good)
}

/// The doubled-quiver maps as blocks of one matrix on ⊕_v C^{d_v}.
fn block_maps(rep: &QuiverRep) -> (usize, Vec<usize>, Vec<QMat>) {
    let d = &rep.quiver.dims;
    let offs: Vec<usize> = d.iter().scan(0, |acc, &x| {
        let o = *acc;
        *acc += x;
        Some(o)
    }).collect();
    let total: usize = d.iter().sum();
    let embed = |m: &QMat, from: usize, to: usize| {
        let mut out = zeros(total, total);
        for i in 0..m.rows {
            for j in 0..m.cols {
                out.set(offs[to] + i, offs[from] + j, m.get(i, j).clone());
            }
        }
        out
    };
    let mut maps = Vec::new();
    for (v, &dv) in d.iter().enumerate() {
        maps.push(embed(&identity(dv), v, v));
    }
    for (k, e) in rep.quiver.edges.iter().enumerate() {
        maps.push(embed(&rep.x[k], e.source, e.target));
        maps.push(embed(&rep.x_dual[k], e.target, e.source));
    }
    (total, offs, maps)
}

/// Simplicity over an algebraically closed field: the path algebra, vertex
/// idempotents included, maps onto End(⊕_v C^{d_v}).
pub fn is_simple_rep(rep: &QuiverRep) -> bool {
    let (total, _, maps) = block_maps(rep);
    total > 0 && generated_algebra_dim(&maps, total) == total * total
}

/// The subrepresentation generated by a vector of ⊕_v C^{d_v}, as its
/// dimension vector.
fn spin(maps: &[QMat], offs: &[usize], dims: &[usize], v: Vec<BigRational>) -> Vec<usize> {
    let total = v.len();
    let mut span: EchelonBasis<BigRational> = EchelonBasis::new();
    let to_sparse = |w: &[BigRational]| -> SparseVec<BigRational> {
        w.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (k, x.clone())).collect()
    };
    let mut frontier = Vec::new();
    if span.insert(to_sparse(&v)) {
        frontier.push(v);
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for m in maps {
                let p: Vec<BigRational> =
                    (0..total).map(|i| (0..total).fold(zero(), |acc, j| acc + m.get(i, j) * &w[j])).collect();
                if span.insert(to_sparse(&p)) {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    // the idempotents are among the maps, so the span is graded
    let pivots: Vec<usize> = span.rows().filter_map(|r| r.keys().next().copied()).collect();
    (0..dims.len()).map(|v| pivots.iter().filter(|&&p| p >= offs[v] && p < offs[v] + dims[v]).count()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Stability {
    Stable,
    Unstable { witness: Vec<usize> },
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub simple: bool,
    pub verdict: Stability,
    pub subreps_found: Vec<Vec<usize>>,
    pub trials: usize,
    pub error_bound: String,
}

/// King stability for the slope θ·dim/|dim|. Simple representations are
/// stable. Otherwise subrepresentations are searched by spinning coordinate
/// vectors, random homogeneous vectors and kernel vectors of random path
/// algebra elements, and the first one with slope not below that of the whole
/// representation is returned as a witness.
pub fn theta_stability(rep: &QuiverRep, theta: &[i64], trials: usize, seed: u64) -> Result<StabilityReport> {
    let dims = rep.quiver.dims.clone();
    if theta.len() != dims.len() {
        return Err(Error::Domain("θ needs one entry per vertex".into()));
    }
    let simple = is_simple_rep(rep);
    let error_bound = format!("2^-{trials}");
    if simple {
        return Ok(StabilityReport { simple, verdict: Stability::Stable, subreps_found: Vec::new(), trials, error_bound });
    }
    let (total, offs, maps) = block_maps(rep);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..total {
        let mut v = vec![zero(); total];
        v[i] = one();
        candidates.push(v);
    }
    for _ in 0..trials {
        let v_idx = rng.gen_range(0..dims.len());
        let mut v = vec![zero(); total];
        for k in 0..dims[v_idx] {
            v[offs[v_idx] + k] = random_rational(&mut rng);
        }
        candidates.push(v);
        // kernel of a random word combination, restricted to one vertex
        let mut a = zeros(total, total);
        let mut word = identity(total);
        for _ in 0..3 {
            let g = &maps[rng.gen_range(0..maps.len())];
            word = g.mul(&word);
            a = a.add(&word.scale(&random_rational(&mut rng)));
        }
        let e = &maps[v_idx];
        for k in a.mul(e).kernel(&one()) {
            let k = e.mul(&Mat { rows: total, cols: 1, data: k }).data;
            if k.iter().any(|x| !x.is_zero()) {
                candidates.push(k);
            }
        }
    }
    let slope = |dv: &[usize]| {
        let num: i64 = dv.iter().zip(theta).map(|(&a, &t)| a as i64 * t).sum();
        let den: i64 = dv.iter().sum::<usize>() as i64;
        BigRational::new(num.into(), den.into())
    };
    let whole = slope(&dims);
    let mut found: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
    for v in candidates {
        let sub = spin(&maps, &offs, &dims, v);
        if sub.iter().sum::<usize>() > 0 && sub != dims {
            found.insert(sub, ());
        }
    }
    let subreps_found: Vec<Vec<usize>> = found.into_keys().collect();
    let verdict = match subreps_found.iter().find(|s| slope(s) >= whole) {
        Some(w) => Stability::Unstable { witness: w.clone() },
        None => Stability::Inconclusive,
    };
    Ok(StabilityReport { simple, verdict, subreps_found, trials, error_bound })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Leaf {
    OpenLeaf,
    /// Per vertex, the sizes k of the vanishing k×k leading minors.
    Boundary { vanishing_minors: Vec<Vec<usize>> },
}

/// The open leaf is the preimage of the big cell at every vertex.
pub fn leaf_label(rep: &QuiverRep) -> Result<Leaf> {
    let mu = classical_moment(rep)?;
    let profile: Vec<Vec<usize>> = mu
        .blocks
        .iter()
        .map(|b| b.leading_minors().iter().enumerate().filter(|(_, m)| m.is_zero()).map(|(k, _)| k + 1).collect())
        .collect();
    if profile.iter().all(|p| p.is_empty()) {
        Ok(Leaf::OpenLeaf)
    } else {
        Ok(Leaf::Boundary { vanishing_minors: profile })
    }
}

/// One classical sample as emitted by the sampler.
#[derive(Clone, Debug, Serialize)]
pub struct SampleRecord {
    pub seed: u64,
    pub point_hash: String,
    pub moment: Vec<Vec<Vec<String>>>,
    pub big_cell: bool,
    pub leaf: Leaf,
    pub stability: Stability,
}

fn point_hash(rep: &QuiverRep) -> String {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    for m in rep.x.iter().chain(&rep.x_dual) {
        for v in &m.data {
            v.hash(&mut h);
        }
    }
    format!("{:016x}", h.finish())
}

/// Random representations with per-sample seeds seed + k, skipping points off
/// the circle locus.
pub fn classical_samples(quiver: &Quiver, theta: &[i64], count: usize, seed: u64) -> Result<Vec<SampleRecord>> {
    (0..count)
        .into_par_iter()
        .map(|k| {
            let s = seed.wrapping_add(k as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            loop {
                let rep = QuiverRep::random(quiver.clone(), &mut rng)?;
                let Ok(mu) = classical_moment(&rep) else { continue };
                let stab = theta_stability(&rep, theta, 8, s)?;
                return Ok(SampleRecord {
                    seed: s,
                    point_hash: point_hash(&rep),
                    moment: mu.text(),
                    big_cell: mu.blocks.iter().all(big_cell_test),
                    leaf: leaf_label(&rep)?,
                    stability: stab.verdict,
                });
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub samples: usize,
    pub equivariance_failures: Vec<u64>,
    pub big_cell_failures: Vec<u64>,
    pub open_leaf: usize,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.equivariance_failures.is_empty() && self.big_cell_failures.is_empty()
    }
}

/// Per sample seed: μ̃(g·X) = g μ̃(X) g^{-1} for a random gauge point g, and
/// big_cell_test agrees with gstar_factor on every vertex block of μ̃(X).
pub fn classical_consistency(quiver: &Quiver, count: usize, seed: u64) -> Result<ConsistencyReport> {
    let rows: Vec<(u64, bool, bool, bool)> = (0..count)
        .into_par_iter()
        .map(|k| {
            let s = seed.wrapping_add(k as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            loop {
                let rep = QuiverRep::random(quiver.clone(), &mut rng)?;
                let g = GroupPoint::new(quiver.dims.iter().map(|&d| random_invertible(&mut rng, d)).collect())?;
                let Ok(mu) = classical_moment(&rep) else { continue };
                let equivariant = classical_moment(&rep.act(&g)?)? == g.conjugate(&mu)?;
                let agrees = mu.blocks.iter().all(|b| {
                    let f = gstar_factor(b);
                    big_cell_test(b) == f.is_some() && f.map_or(true, |f| f.product() == *b && f.balanced())
                });
                let open = leaf_label(&rep)? == Leaf::OpenLeaf;
                return Ok((s, equivariant, agrees, open));
            }
        })
        .collect::<Result<_>>()?;
    Ok(ConsistencyReport {
        samples: count,
        equivariance_failures: rows.iter().filter(|r| !r.1).map(|r| r.0).collect(),
        big_cell_failures: rows.iter().filter(|r| !r.2).map(|r| r.0).collect(),
        open_leaf: rows.iter().filter(|r| r.3).count(),
    })
}
