use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{rat, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CartanSeries {
    GL,
    A,
    B,
    C,
    D,
    G,
}

/// Which lattice X the torus characters live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LatticeForm {
    SimplyConnected,
    Adjoint,
}

/// Root datum of a reductive group: Cartan matrix, symmetrizers and the
/// symmetrized pairing on the root lattice (short roots of norm 2).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanData {
    pub series: CartanSeries,
    pub rank: usize,
    pub lattice: LatticeForm,
    pub cartan: Vec<Vec<i64>>,
    pub symmetrizers: Vec<i64>,
    pub root_gram: Vec<Vec<i64>>,
}

impl CartanData {
    pub fn new(series: CartanSeries, rank: usize, lattice: LatticeForm) -> Result<Self> {
        let gram = root_gram(series, rank)?;
        let n = gram.len();
        let symmetrizers: Vec<i64> = (0..n).map(|i| (gram[i][i] / 2).max(1)).collect();
        let cartan = (0..n).map(|i| (0..n).map(|j| 2 * gram[i][j] / gram[i][i]).collect()).collect();
        Ok(CartanData { series, rank, lattice, cartan, symmetrizers, root_gram: gram })
    }

    /// Parses labels such as `GL3`, `A2`, `A2-adjoint`, `G2`, `B3-sc`.
    pub fn parse(label: &str) -> Result<Self> {
        let (base, lattice) = match label.rsplit_once('-') {
            Some((b, "adjoint")) | Some((b, "ad")) => (b, LatticeForm::Adjoint),
            Some((b, "sc")) => (b, LatticeForm::SimplyConnected),
            Some(_) => return Err(Error::Unsupported(format!("type label {label}"))),
            None => (label, LatticeForm::SimplyConnected),
        };
        if let Some(r) = base.strip_prefix("GL") {
            let rank = r.parse().map_err(|_| Error::Unsupported(format!("type label {label}")))?;
            return Self::new(CartanSeries::GL, rank, lattice);
        }
        let mut chars = base.chars();
        let series = match chars.next() {
            Some('A') => CartanSeries::A,
            Some('B') => CartanSeries::B,
            Some('C') => CartanSeries::C,
            Some('D') => CartanSeries::D,
            Some('G') => CartanSeries::G,
            _ => return Err(Error::Unsupported(format!("type label {label}"))),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| Error::Unsupported(format!("type label {label}")))?;
        Self::new(series, rank, lattice)
    }

    pub fn cartan_det(&self) -> BigInt {
        if self.series == CartanSeries::GL {
            return BigInt::one();
        }
        let m = Mat::from_rows(self.cartan.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect());
        m.det().to_integer()
    }

    /// Gram matrix of the pairing on X in its standard basis: the
    /// fundamental weights (simply connected) or simple roots (adjoint).
    pub fn weight_gram(&self) -> Mat<BigRational> {
        let n = self.root_gram.len();
        let b = Mat::from_rows(self.root_gram.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect());
        if self.series == CartanSeries::GL || self.lattice == LatticeForm::Adjoint {
            return b;
        }
        // (ω_i, ω_j) = d_i d_j (B^{-1})_{ij}.
        let binv = b.inverse().expect("root pairing is nondegenerate");
        let mut out = binv.clone();
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, binv.get(i, j) * rat(self.symmetrizers[i] * self.symmetrizers[j]));
            }
        }
        out
    }
}

/// Expands a label into concrete root data; `GLn` stands for GL_1..GL_6.
pub fn expand_label(label: &str) -> Result<Vec<CartanData>> {
    if label == "GLn" {
        return (1..=6).map(|n| CartanData::new(CartanSeries::GL, n, LatticeForm::SimplyConnected)).collect();
    }
    Ok(vec![CartanData::parse(label)?])
}

impl fmt::Display for CartanData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let form = match self.lattice {
            LatticeForm::SimplyConnected => "sc",
            LatticeForm::Adjoint => "adjoint",
        };
        write!(f, "{:?}{}-{}", self.series, self.rank, form)
    }
}

fn root_gram(series: CartanSeries, n: usize) -> Result<Vec<Vec<i64>>> {
    let bad = |msg: &str| Err(Error::Unsupported(format!("{series:?}{n}: {msg}")));
    if n == 0 {
        return bad("rank must be positive");
    }
    let mut g = vec![vec![0i64; n]; n];
    match series {
        CartanSeries::GL => {
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = 1;
            }
            return Ok(g);
        }
        CartanSeries::A => chain(&mut g, 2),
        CartanSeries::B => {
            if n < 2 {
                return bad("B series needs rank >= 2");
            }
            chain(&mut g, 4);
            g[n - 1][n - 1] = 2;
            g[n - 2][n - 1] = -2;
            g[n - 1][n - 2] = -2;
        }
        CartanSeries::C => {
            if n < 2 {
                return bad("C series needs rank >= 2");
            }
            chain(&mut g, 2);
            g[n - 1][n - 1] = 4;
            g[n - 2][n - 1] = -2;
            g[n - 1][n - 2] = -2;
        }
        CartanSeries::D => {
            if n < 3 {
                return bad("D series needs rank >= 3");
            }
            chain(&mut g, 2);
            g[n - 2][n - 1] = 0;
            g[n - 1][n - 2] = 0;
            g[n - 3][n - 1] = -1;
            g[n - 1][n - 3] = -1;
        }
        CartanSeries::G => {
            if n != 2 {
                return bad("G series exists only in rank 2");
            }
            g = vec![vec![2, -3], vec![-3, 6]];
        }
    }
    Ok(g)
}

fn chain(g: &mut [Vec<i64>], norm: i64) {
    let n = g.len();
    for i in 0..n {
        g[i][i] = norm;
        if i + 1 < n {
            g[i][i + 1] = -norm / 2;
            g[i + 1][i] = -norm / 2;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssumptionReport {
    pub label: String,
    pub ell: u32,
    pub cartan_det: String,
    /// Smallest D with D·(λ, μ) integral on X.
    pub denominator: String,
    /// Determinant of A = 2D(−,−) on X.
    pub pairing_det: String,
    pub cartan_coprime: bool,
    pub pairing_nondegenerate: bool,
    pub g2_exclusion: bool,
    pub offending_primes: Vec<u64>,
    pub holds: bool,
}

/// Decides whether the mod-ℓ pairing A(λ, μ) = 2D(λ, μ) on X/ℓX is
/// nondegenerate, together with the coprimality and G₂ conditions.
pub fn check_assumption(g: &CartanData, ell: u32) -> Result<AssumptionReport> {
    if ell < 3 || ell % 2 == 0 {
        return Err(Error::Domain(format!("ℓ must be odd and > 1, got {ell}")));
    }
    let omega = g.weight_gram();
    let mut den = BigInt::one();
    for x in &omega.data {
        den = den.lcm(x.denom());
    }
    let two_d = BigRational::from(&den * 2);
    let a = omega.scale(&two_d);
    let pairing_det = a.det().to_integer();
    let cartan_det = g.cartan_det();
    let l = BigInt::from(ell);
    let cartan_coprime = cartan_det.gcd(&l).is_one();
    let pairing_nondegenerate = pairing_det.gcd(&l).is_one();
    let g2_exclusion = g.series == CartanSeries::G && ell % 3 == 0;
    let mut offending = Vec::new();
    for p in prime_factors(ell as u64) {
        let bp = BigInt::from(p);
        let hits_pairing = (&pairing_det % &bp).is_zero();
        let hits_cartan = (&cartan_det % &bp).is_zero();
        if hits_pairing || hits_cartan || (g2_exclusion && p == 3) {
            offending.push(p);
        }
    }
    let holds = cartan_coprime && pairing_nondegenerate && !g2_exclusion;
    Ok(AssumptionReport {
        label: g.to_string(),
        ell,
        cartan_det: cartan_det.to_string(),
        denominator: den.to_string(),
        pairing_det: pairing_det.to_string(),
        cartan_coprime,
        pairing_nondegenerate,
        g2_exclusion,
        offending_primes: offending,
        holds,
    })
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
