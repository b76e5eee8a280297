//! Fibers of the quantized algebras over points of the Frobenius center:
//! truncated PBW presentations, the explicit simple module of the zero fiber,
//! the leading-index reduction, matrix-algebra certificates by span growth and
//! rank-one quantum Hamiltonian reduction.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{sparse_axpy, EchelonBasis, Mat, SparseVec};
use crate::ncalg::{AlgebraSpec, GenKind, Letter, Monomial, NCElement};
use crate::qalgebras::{build_kronecker, EdgeAlgebra, EdgeKind, QuiverAlgebra};
use crate::scalars::{Coeff, CycScalar};

/// Coordinates with respect to a truncated basis.
pub type Vector = SparseVec<CycScalar>;

/// Largest module dimension built by [`build_module`].
pub const MODULE_BUDGET: usize = 1 << 12;
/// Largest fiber dimension built by [`FiberAlgebra::new`].
pub const FIBER_BUDGET: usize = 1 << 15;

/// Monomials in a chosen set of generators with exponents in [0, ℓ),
/// indexed in mixed radix with the first slot varying slowest.
#[derive(Clone, Debug)]
struct Truncation {
    ell: u32,
    ngens: usize,
    slots: Vec<usize>,
}

impl Truncation {
    fn size(&self) -> usize {
        (self.ell as usize).pow(self.slots.len() as u32)
    }

    fn monomial(&self, mut idx: usize) -> Monomial {
        let l = self.ell as usize;
        let mut m = vec![0; self.ngens];
        for &g in self.slots.iter().rev() {
            m[g] = (idx % l) as i32;
            idx /= l;
        }
        Monomial(m)
    }

    fn index(&self, exps: &[i32]) -> usize {
        self.slots.iter().fold(0, |acc, &g| acc * self.ell as usize + exps[g] as usize)
    }
}

fn budget_check(ell: u32, n: usize, cap: usize, what: &str) -> Result<()> {
    let size = (ell as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(Error::DegreeBudget(format!("{what} of dimension {ell}^{n} exceeds {cap}")));
    }
    Ok(())
}

fn unit(ell: u32, i: usize) -> Vector {
    Vector::from([(i, CycScalar::one(ell))])
}

/// Applies a dense matrix to a sparse vector.
pub fn apply(m: &Mat<CycScalar>, v: &Vector) -> Vector {
    let mut out = Vector::new();
    for (&j, c) in v {
        for i in 0..m.rows {
            let a = m.get(i, j);
            if !a.vanishes() {
                sparse_axpy(&mut out, c, &Vector::from([(i, a.clone())]));
            }
        }
    }
    out
}

/// A finite-dimensional representation: one action matrix per generator.
#[derive(Clone, Debug)]
pub struct Representation {
    pub ell: u32,
    pub dim: usize,
    pub labels: Vec<String>,
    pub actions: Vec<Mat<CycScalar>>,
}

/// Exact relation checks of a representation.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationCheck {
    pub identities: usize,
    pub failures: Vec<String>,
}

impl RelationCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Representation {
    fn letter(&self, l: Letter) -> Option<Mat<CycScalar>> {
        let m = &self.actions[l.gen];
        if l.exp > 0 {
            Some(m.clone())
        } else {
            m.inverse()
        }
    }

    /// Checks every rewriting rule of `spec` as a matrix identity, and that
    /// each generator's ℓ-th power acts by its central value.
    pub fn check_relations(&self, spec: &AlgebraSpec<CycScalar>, central: &[CycScalar]) -> RelationCheck {
        let one = CycScalar::one(self.ell);
        let mut rules: Vec<_> = spec.rules().iter().collect();
        rules.sort_by(|a, b| a.0.cmp(b.0));
        let results: Vec<Option<String>> = rules
            .par_iter()
            .map(|((a, b), rhs)| {
                let label = format!("{} {}", spec.letter_label(*a), spec.letter_label(*b));
                let (Some(ma), Some(mb)) = (self.letter(*a), self.letter(*b)) else {
                    return Some(format!("{label}: inverse letter acts singularly"));
                };
                let lhs = ma.mul(&mb);
                let mut acc = Mat::zeros(self.dim, self.dim, &one);
                for (w, c) in rhs.iter() {
                    let mut p = Mat::identity(self.dim, &one);
                    for l in w {
                        match self.letter(*l) {
                            Some(m) => p = p.mul(&m),
                            None => return Some(format!("{label}: inverse letter acts singularly")),
                        }
                    }
                    acc = acc.add(&p.scale(c));
                }
                (lhs != acc).then(|| format!("relation {label} fails"))
            })
            .collect();
        let mut out = RelationCheck { identities: results.len(), failures: results.into_iter().flatten().collect() };
        for (g, m) in self.actions.iter().enumerate() {
            out.identities += 1;
            let mut p = Mat::identity(self.dim, &one);
            for _ in 0..self.ell {
                p = p.mul(m);
            }
            if p != Mat::identity(self.dim, &one).scale(&central[g]) {
                out.failures.push(format!("{}^{} is not {}", self.labels[g], self.ell, central[g]));
            }
        }
        out
    }
}

/// The fiber of a PBW algebra at a root of unity over a character of the
/// central subalgebra generated by the ℓ-th powers of its generators.
///
/// An ordered monomial containing g^e with e ≥ ℓ equals g^ℓ times the
/// monomial with e lowered by ℓ, so the fiber has the truncated monomials as a
/// basis and products reduce by substituting the character. Inverse letters
/// are reduced the same way, which needs a nonzero value; fibers with a zero
/// value on an invertible generator are taken on the subalgebra generated by
/// the generators themselves.
#[derive(Debug)]
pub struct FiberAlgebra {
    pub alg: EdgeAlgebra<CycScalar>,
    pub ell: u32,
    pub character: Vec<CycScalar>,
    basis: Truncation,
    left: OnceLock<Vec<Vec<Vector>>>,
    right: OnceLock<Vec<Vec<Vector>>>,
}

impl FiberAlgebra {
    pub fn new(alg: EdgeAlgebra<CycScalar>, ell: u32, character: Vec<CycScalar>) -> Result<Self> {
        let spec = &*alg.spec;
        let n = spec.ngens();
        if character.len() != n {
            return Err(Error::Domain(format!("character has {} values for {n} generators", character.len())));
        }
        if spec.q().ell() != ell {
            return Err(Error::SpecMismatch(format!("algebra is defined over Q(ζ_{}), not Q(ζ_{ell})", spec.q().ell())));
        }
        budget_check(ell, n, FIBER_BUDGET, "fiber")?;
        for g in 0..n {
            let p = spec.normal_form(&[(g, ell as i64)])?;
            if !spec.is_central(&p)? {
                return Err(Error::NotQCentral(format!("{}^{ell} is not central", spec.gens()[g].label())));
            }
        }
        let basis = Truncation { ell, ngens: n, slots: (0..n).collect() };
        Ok(FiberAlgebra { alg, ell, character, basis, left: OnceLock::new(), right: OnceLock::new() })
    }

    pub fn spec(&self) -> &AlgebraSpec<CycScalar> {
        &self.alg.spec
    }

    pub fn dim(&self) -> usize {
        self.basis.size()
    }

    pub fn basis_monomial(&self, i: usize) -> Monomial {
        self.basis.monomial(i)
    }

    pub fn unit(&self) -> Vector {
        unit(self.ell, 0)
    }

    /// Coordinates of an algebra element in the fiber.
    pub fn reduce(&self, x: &NCElement<CycScalar>) -> Result<Vector> {
        let l = self.ell as i32;
        let mut out = Vector::new();
        for (m, c) in x.terms() {
            let mut coeff = c.clone();
            let mut exps = m.0.clone();
            for (g, e) in exps.iter_mut().enumerate() {
                let k = e.div_euclid(l);
                if k != 0 {
                    let v = self.character[g].pow_i(k as i64).ok_or_else(|| {
                        Error::Domain(format!("inverse of {} needs a nonzero central value", self.spec().gens()[g].label()))
                    })?;
                    coeff = coeff.times(&v);
                }
                *e = e.rem_euclid(l);
            }
            sparse_axpy(&mut out, &coeff, &unit(self.ell, self.basis.index(&exps)));
        }
        Ok(out)
    }

    /// Lifts coordinates back to an algebra element.
    pub fn element(&self, v: &Vector) -> NCElement<CycScalar> {
        self.spec().element(v.iter().map(|(&i, c)| (self.basis.monomial(i), c.clone())))
    }

    fn gen_table(&self, left: bool) -> Result<&Vec<Vec<Vector>>> {
        let cell = if left { &self.left } else { &self.right };
        if let Some(t) = cell.get() {
            return Ok(t);
        }
        let spec = self.spec();
        let table = (0..spec.ngens())
            .map(|g| {
                (0..self.dim())
                    .into_par_iter()
                    .map(|i| {
                        let (a, b) = (spec.gen(g), spec.monomial(self.basis.monomial(i)));
                        let p = if left { spec.multiply(&a, &b)? } else { spec.multiply(&b, &a)? };
                        self.reduce(&p)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(cell.get_or_init(|| table))
    }

    fn gen_mul(&self, g: usize, v: &Vector, left: bool) -> Result<Vector> {
        let t = self.gen_table(left)?;
        let mut out = Vector::new();
        for (&i, c) in v {
            sparse_axpy(&mut out, c, &t[g][i]);
        }
        Ok(out)
    }

    /// g·v.
    pub fn left_gen(&self, g: usize, v: &Vector) -> Result<Vector> {
        self.gen_mul(g, v, true)
    }

    /// v·g.
    pub fn right_gen(&self, g: usize, v: &Vector) -> Result<Vector> {
        self.gen_mul(g, v, false)
    }

    pub fn mul(&self, a: &Vector, b: &Vector) -> Result<Vector> {
        let spec = self.spec();
        let mut out = Vector::new();
        for (&i, c) in a {
            for (&j, d) in b {
                let p = spec.multiply(&spec.monomial(self.basis.monomial(i)), &spec.monomial(self.basis.monomial(j)))?;
                sparse_axpy(&mut out, &c.times(d), &self.reduce(&p)?);
            }
        }
        Ok(out)
    }

    /// The left regular representation.
    pub fn regular_representation(&self) -> Result<Representation> {
        let one = CycScalar::one(self.ell);
        let t = self.gen_table(true)?;
        let actions = t
            .iter()
            .map(|cols| {
                let mut m = Mat::zeros(self.dim(), self.dim(), &one);
                for (j, col) in cols.iter().enumerate() {
                    for (&i, c) in col {
                        m.set(i, j, c.clone());
                    }
                }
                m
            })
            .collect();
        let labels = self.spec().gens().iter().map(|g| g.label()).collect();
        Ok(Representation { ell: self.ell, dim: self.dim(), labels, actions })
    }

    /// Echelon basis of the two-sided ideal generated by the given vectors.
    pub fn two_sided_ideal(&self, gens: &[Vector]) -> Result<EchelonBasis<CycScalar>> {
        let mut span = EchelonBasis::new();
        let mut frontier: Vec<Vector> = gens.iter().filter(|v| span.insert((*v).clone())).cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for v in &frontier {
                for g in 0..self.spec().ngens() {
                    for w in [self.left_gen(g, v)?, self.right_gen(g, v)?] {
                        if span.insert(w.clone()) {
                            next.push(w);
                        }
                    }
                }
            }
            frontier = next;
        }
        Ok(span)
    }
}

/// The fiber of the Kronecker edge N → M at ζ_ℓ over the zero point.
pub fn build_zero_fiber(n: usize, m: usize, ell: u32) -> Result<FiberAlgebra> {
    let alg = build_kronecker(n, m, &CycScalar::zeta(ell))?;
    let chi = vec![CycScalar::zero(ell); alg.spec.ngens()];
    FiberAlgebra::new(alg, ell, chi)
}

/// A point of S = ([1,M]×[1,N]) ⊔ {0}: the variable x^upper_lower or the
/// minimal element. (i, n) ≻ (j, m) when n > m, or n = m and i < j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LeadingIndex {
    Zero,
    At { upper: u32, lower: u32 },
}

impl Ord for LeadingIndex {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (LeadingIndex::Zero, LeadingIndex::Zero) => Ordering::Equal,
            (LeadingIndex::Zero, _) => Ordering::Less,
            (_, LeadingIndex::Zero) => Ordering::Greater,
            (LeadingIndex::At { upper: i, lower: n }, LeadingIndex::At { upper: j, lower: m }) => n.cmp(m).then(j.cmp(i)),
        }
    }
}

impl PartialOrd for LeadingIndex {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// The module D_q/(D_q·∂) with x^ℓ = 0, on which the zero fiber acts.
///
/// The basis consists of the x-monomials with exponents below ℓ; the action of
/// a generator on a basis vector is the normal form of the product with all
/// terms ending in a ∂ dropped.
#[derive(Clone, Debug)]
pub struct FiberModule {
    pub alg: EdgeAlgebra<CycScalar>,
    pub ell: u32,
    pub x_gens: Vec<usize>,
    pub rep: Representation,
    pub relations: RelationCheck,
    basis: Truncation,
}

/// Builds the module of the zero fiber of an algebra generated by X and ∂
/// generators, such as a Kronecker edge or a braided product of them.
pub fn build_module_for(alg: EdgeAlgebra<CycScalar>, ell: u32) -> Result<FiberModule> {
    let spec = alg.spec.clone();
    if let Some(g) = spec.gens().iter().find(|g| !matches!(g.kind, GenKind::X | GenKind::Del)) {
        return Err(Error::Unsupported(format!("module construction needs x and ∂ generators only, found {}", g.label())));
    }
    let x_gens: Vec<usize> = (0..spec.ngens()).filter(|&g| spec.gens()[g].kind == GenKind::X).collect();
    budget_check(ell, x_gens.len(), MODULE_BUDGET, "module")?;
    let basis = Truncation { ell, ngens: spec.ngens(), slots: x_gens.clone() };
    let dim = basis.size();
    let one = CycScalar::one(ell);
    let is_del: Vec<bool> = spec.gens().iter().map(|g| g.kind == GenKind::Del).collect();
    let actions = (0..spec.ngens())
        .map(|g| {
            let cols = (0..dim)
                .into_par_iter()
                .map(|j| spec.multiply(&spec.gen(g), &spec.monomial(basis.monomial(j))))
                .collect::<Result<Vec<_>>>()?;
            let mut m = Mat::zeros(dim, dim, &one);
            for (j, p) in cols.iter().enumerate() {
                for (mono, c) in p.terms() {
                    let e = mono.exps();
                    if e.iter().zip(&is_del).any(|(&k, &d)| d && k != 0) || e.iter().any(|&k| k >= ell as i32) {
                        continue;
                    }
                    m.set(basis.index(e), j, c.clone());
                }
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let labels = spec.gens().iter().map(|g| g.label()).collect();
    let rep = Representation { ell, dim, labels, actions };
    let relations = rep.check_relations(&spec, &vec![CycScalar::zero(ell); spec.ngens()]);
    if !relations.passed() {
        return Err(Error::Verification(format!("module relations fail: {}", relations.failures.join("; "))));
    }
    Ok(FiberModule { alg, ell, x_gens, rep, relations, basis })
}

/// The module of the zero fiber of the Kronecker edge N → M at ζ_ℓ.
pub fn build_module(n: usize, m: usize, ell: u32) -> Result<FiberModule> {
    build_module_for(build_kronecker(n, m, &CycScalar::zeta(ell))?, ell)
}

/// One step of the leading-index reduction: ∂ applied `power` times.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionStep {
    pub index: LeadingIndex,
    pub generator: usize,
    pub power: u32,
}

/// Outcome of [`FiberModule::reduce_to_one`]. `word` lists generator indices
/// in order of application; applying it to the input gives `scalar`·1.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionWitness {
    pub steps: Vec<ReductionStep>,
    pub word: Vec<usize>,
    pub scalar: Option<String>,
    pub stalled: Option<String>,
    #[serde(skip)]
    pub value: Option<CycScalar>,
}

impl ReductionWitness {
    pub fn succeeded(&self) -> bool {
        self.stalled.is_none() && self.value.is_some()
    }
}

impl FiberModule {
    pub fn dim(&self) -> usize {
        self.rep.dim
    }

    pub fn basis_monomial(&self, i: usize) -> Monomial {
        self.basis.monomial(i)
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        unit(self.ell, i)
    }

    /// The basis vector of an x-monomial given by generator labels.
    pub fn vector_of(&self, labels: &[&str]) -> Result<Vector> {
        let x = self.alg.spec.normal_form_labels(labels)?;
        let mut out = Vector::new();
        for (m, c) in x.terms() {
            let e = m.exps();
            if e.iter().enumerate().any(|(g, &k)| k != 0 && !self.x_gens.contains(&g)) {
                return Err(Error::Domain("module vectors are x-monomials".into()));
            }
            if e.iter().all(|&k| k < self.ell as i32) {
                sparse_axpy(&mut out, c, &unit(self.ell, self.basis.index(e)));
            }
        }
        Ok(out)
    }

    pub fn act(&self, g: usize, v: &Vector) -> Vector {
        apply(&self.rep.actions[g], v)
    }

    pub fn apply_word(&self, word: &[usize], v: &Vector) -> Vector {
        word.iter().fold(v.clone(), |acc, &g| self.act(g, &acc))
    }

    fn kronecker(&self) -> Result<()> {
        match self.alg.kind {
            EdgeKind::Kronecker { .. } => Ok(()),
            _ => Err(Error::Unsupported("leading indices are defined for a single Kronecker edge".into())),
        }
    }

    fn monomial_index(&self, i: usize) -> LeadingIndex {
        let m = self.basis.monomial(i);
        self.x_gens
            .iter()
            .filter(|&&g| m.0[g] != 0)
            .map(|&g| {
                let gen = &self.alg.spec.gens()[g];
                LeadingIndex::At { upper: gen.upper, lower: gen.lower }
            })
            .max()
            .unwrap_or(LeadingIndex::Zero)
    }

    /// The largest leading index among the monomials of a nonzero vector.
    pub fn leading_index(&self, v: &Vector) -> Result<LeadingIndex> {
        self.kronecker()?;
        v.keys()
            .map(|&i| self.monomial_index(i))
            .max()
            .ok_or_else(|| Error::Domain("the zero vector has no leading index".into()))
    }

    /// Reduces v to a multiple of 1 by lowering the leading index: at index
    /// (j, n) apply (∂^n_j)^r, r the top power of x^j_n in v.
    pub fn reduce_to_one(&self, v: &Vector) -> Result<ReductionWitness> {
        self.kronecker()?;
        let spec = &self.alg.spec;
        let mut cur = v.clone();
        let mut w = ReductionWitness { steps: Vec::new(), word: Vec::new(), scalar: None, stalled: None, value: None };
        let mut li = self.leading_index(&cur)?;
        while let LeadingIndex::At { upper, lower } = li {
            let x = spec.gens().iter().position(|g| g.kind == GenKind::X && g.upper == upper && g.lower == lower).unwrap();
            let d = spec
                .gens()
                .iter()
                .position(|g| g.kind == GenKind::Del && g.upper == lower && g.lower == upper)
                .ok_or_else(|| Error::UnknownGenerator(format!("del{lower}_{upper}")))?;
            let r = cur.keys().map(|&i| self.basis.monomial(i).0[x]).max().unwrap_or(0) as u32;
            for _ in 0..r {
                cur = self.act(d, &cur);
                w.word.push(d);
            }
            w.steps.push(ReductionStep { index: li, generator: d, power: r });
            if cur.is_empty() {
                w.stalled = Some(format!("(∂^{lower}_{upper})^{r} annihilated the vector"));
                return Ok(w);
            }
            let next = self.leading_index(&cur)?;
            if next >= li {
                w.stalled = Some(format!("leading index did not drop below {li:?}"));
                return Ok(w);
            }
            li = next;
        }
        let c = cur.get(&0).cloned().ok_or_else(|| Error::Verification("reduced vector lost its constant term".into()))?;
        w.scalar = Some(c.to_string());
        w.value = Some(c);
        Ok(w)
    }

    /// Replays a witness: true when the word sends v to the recorded multiple of 1.
    pub fn replay(&self, w: &ReductionWitness, v: &Vector) -> bool {
        match &w.value {
            Some(c) => self.apply_word(&w.word, v) == Vector::from([(0, c.clone())]),
            None => false,
        }
    }
}

/// Dimension of the span of all products of action matrices.
#[derive(Clone, Debug, Serialize)]
pub struct SpanReport {
    pub module_dim: usize,
    pub span_dim: usize,
    pub max_word_length: usize,
    pub word_length_reached: usize,
    pub stabilized: bool,
}

fn column_lists(m: &Mat<CycScalar>) -> Vec<Vec<(usize, CycScalar)>> {
    (0..m.cols).map(|k| (0..m.rows).filter(|&i| !m.get(i, k).vanishes()).map(|i| (i, m.get(i, k).clone())).collect()).collect()
}

/// Span growth from the identity by left multiplication with generators,
/// word length capped at `cap`.
pub fn burnside_span(rep: &Representation, cap: usize) -> SpanReport {
    let n = rep.dim;
    let target = n * n;
    let gens: Vec<_> = rep.actions.iter().map(column_lists).collect();
    let mut span = EchelonBasis::new();
    let id: Vector = (0..n).map(|i| (i * n + i, CycScalar::one(rep.ell))).collect();
    let mut frontier = if n > 0 && span.insert(id.clone()) { vec![id] } else { Vec::new() };
    let mut length = 0;
    while !frontier.is_empty() && length < cap && span.dim() < target {
        length += 1;
        let products: Vec<Vector> = frontier
            .par_iter()
            .flat_map_iter(|m| {
                gens.iter().map(move |g| {
                    let mut out = Vector::new();
                    for (&key, val) in m {
                        let (k, j) = (key / n, key % n);
                        for (i, a) in &g[k] {
                            sparse_axpy(&mut out, &a.times(val), &Vector::from([(i * n + j, CycScalar::one(rep.ell))]));
                        }
                    }
                    out
                })
            })
            .collect();
        frontier = products.into_iter().filter(|p| span.insert(p.clone())).collect();
    }
    SpanReport {
        module_dim: n,
        span_dim: span.dim(),
        max_word_length: cap,
        word_length_reached: length,
        stabilized: frontier.is_empty() || span.dim() == target,
    }
}

/// Matrix-algebra certificate of a fiber acting on a module.
#[derive(Clone, Debug, Serialize)]
pub struct MatrixCertificate {
    pub module_dim: usize,
    pub span_dim: usize,
    pub target_dim: usize,
    pub is_matrix_algebra: bool,
    pub span: SpanReport,
    pub relation_identities: usize,
    pub witnesses: Vec<(usize, ReductionWitness)>,
    pub all_reduced: bool,
}

/// Certificate from a representation alone: span dimension against dim².
pub fn matrix_certificate(rep: &Representation, ngens: usize) -> MatrixCertificate {
    let span = burnside_span(rep, 2 * rep.ell as usize * ngens);
    MatrixCertificate {
        module_dim: rep.dim,
        span_dim: span.span_dim,
        target_dim: rep.dim * rep.dim,
        is_matrix_algebra: span.span_dim == rep.dim * rep.dim,
        span,
        relation_identities: 0,
        witnesses: Vec::new(),
        all_reduced: true,
    }
}

/// Matrix-algebra certificate for a zero-fiber module: the span of the action
/// is all of End(module), and for a single edge every basis vector reduces to
/// a nonzero multiple of 1.
pub fn is_matrix_algebra(module: &FiberModule) -> Result<MatrixCertificate> {
    let mut cert = matrix_certificate(&module.rep, module.alg.spec.ngens());
    cert.relation_identities = module.relations.identities;
    if matches!(module.alg.kind, EdgeKind::Kronecker { .. }) {
        cert.witnesses = (0..module.dim())
            .into_par_iter()
            .map(|i| module.reduce_to_one(&module.basis_vector(i)).map(|w| (i, w)))
            .collect::<Result<Vec<_>>>()?;
        cert.all_reduced = cert.witnesses.iter().all(|(i, w)| w.succeeded() && module.replay(w, &module.basis_vector(*i)));
    }
    Ok(cert)
}

/// Outcome of [`boundary_obstruction`].
#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub candidate: String,
    pub q_central_table: Vec<String>,
    pub fiber_dim: usize,
    pub ideal_dim: usize,
    pub nonzero: bool,
    pub proper: bool,
    pub obstruction: bool,
}

/// Tests whether a q-central element generates a proper nonzero two-sided
/// ideal of the fiber, which rules out a matrix-algebra fiber.
pub fn boundary_obstruction(fiber: &FiberAlgebra, candidate: &NCElement<CycScalar>) -> Result<ObstructionReport> {
    let spec = fiber.spec();
    if candidate.is_zero() {
        return Err(Error::Domain("the candidate element is zero".into()));
    }
    let table = spec.is_q_central(candidate)?.ok_or_else(|| Error::NotQCentral(spec.element_text(candidate)))?;
    let v = fiber.reduce(candidate)?;
    let ideal = fiber.two_sided_ideal(&[v])?;
    let (dim, idim) = (fiber.dim(), ideal.dim());
    Ok(ObstructionReport {
        candidate: spec.element_text(candidate),
        q_central_table: table.iter().map(|c| c.to_string()).collect(),
        fiber_dim: dim,
        ideal_dim: idim,
        nonzero: idim > 0,
        proper: idim < dim,
        obstruction: idim > 0 && idim < dim,
    })
}

/// The weight-zero part of a fiber modulo the left ideal of a moment
/// character, presented by a multiplication table.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub xi: Vec<String>,
    pub fiber_dim: usize,
    pub weight_zero_dim: usize,
    pub ideal_dim: usize,
    pub dim: usize,
    pub basis: Vec<String>,
    /// table[i][j] lists (k, c) with e_i·e_j = Σ c·e_k.
    pub table: Vec<Vec<Vec<(usize, String)>>>,
    pub unit: Vec<(usize, String)>,
    pub associative: bool,
    pub center_central: bool,
}

/// Rank-one quantum Hamiltonian reduction of a quiver fiber.
///
/// With μ_v = num_v·den_v^{-1} the left ideal is generated by the cleared
/// elements num_v − ξ_v·den_v; its weight-zero part is divided out of the
/// weight-zero part of the fiber, on which the product is well defined.
pub fn abelian_reduction(qa: &QuiverAlgebra<CycScalar>, character: &[CycScalar], xi: &[CycScalar], ell: u32) -> Result<ReductionReport> {
    if !qa.quiver.rank_one() {
        return Err(Error::Unsupported("abelian reduction needs every gauge rank equal to 1".into()));
    }
    if xi.len() != qa.quiver.dims.len() {
        return Err(Error::Domain(format!("{} character values for {} vertices", xi.len(), qa.quiver.dims.len())));
    }
    if xi.iter().any(|c| c.vanishes()) {
        return Err(Error::Domain("ξ must take invertible values".into()));
    }
    let fiber = FiberAlgebra::new(qa.alg.clone(), ell, character.to_vec())?;
    let spec = fiber.spec();
    let mut rels = Vec::new();
    for (v, x) in xi.iter().enumerate() {
        let (num, den) = qa.rank_one_moment(v)?;
        let r = fiber.reduce(&num.sub(&den.scale(x)))?;
        if !r.is_empty() {
            rels.push(r);
        }
    }
    let zero_wt: Vec<usize> = (0..fiber.dim()).filter(|&i| spec.weight(&fiber.basis_monomial(i)).iter().all(|&w| w == 0)).collect();
    let products: Vec<Vector> = zero_wt
        .par_iter()
        .flat_map_iter(|&b| rels.iter().map(move |r| (b, r)))
        .map(|(b, r)| fiber.mul(&unit(ell, b), r))
        .collect::<Result<Vec<_>>>()?;
    let mut ideal = EchelonBasis::new();
    for p in products {
        ideal.insert(p);
    }
    let pivots: BTreeSet<usize> = ideal.rows().filter_map(|r| r.keys().next().copied()).collect();
    let qbasis: Vec<usize> = zero_wt.iter().copied().filter(|i| !pivots.contains(i)).collect();
    let pos: HashMap<usize, usize> = qbasis.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let to_quot = |v: Vector| -> Result<Vector> {
        ideal
            .reduce(v)
            .into_iter()
            .map(|(i, c)| pos.get(&i).map(|&k| (k, c)).ok_or_else(|| Error::Verification("product left the weight-zero part".into())))
            .collect()
    };

    let d = qbasis.len();
    let mut table = vec![vec![Vector::new(); d]; d];
    for (a, &i) in qbasis.iter().enumerate() {
        for (b, &j) in qbasis.iter().enumerate() {
            table[a][b] = to_quot(fiber.mul(&unit(ell, i), &unit(ell, j))?)?;
        }
    }
    let mul = |x: &Vector, y: &Vector| {
        let mut out = Vector::new();
        for (&a, c) in x {
            for (&b, e) in y {
                sparse_axpy(&mut out, &c.times(e), &table[a][b]);
            }
        }
        out
    };
    let mut associative = true;
    'outer: for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                if mul(&table[a][b], &unit(ell, c)) != mul(&unit(ell, a), &table[b][c]) {
                    associative = false;
                    break 'outer;
                }
            }
        }
    }
    let unit_class = to_quot(fiber.unit())?;
    let mut center_central = true;
    for g in 0..spec.ngens() {
        let z = to_quot(fiber.reduce(&spec.normal_form(&[(g, ell as i64)])?)?)?;
        center_central &= (0..d).all(|k| mul(&z, &unit(ell, k)) == mul(&unit(ell, k), &z));
    }
    let show = |v: &Vector| v.iter().map(|(&k, c)| (k, c.to_string())).collect::<Vec<_>>();
    Ok(ReductionReport {
        xi: xi.iter().map(|c| c.to_string()).collect(),
        fiber_dim: fiber.dim(),
        weight_zero_dim: zero_wt.len(),
        ideal_dim: ideal.dim(),
        dim: d,
        basis: qbasis.iter().map(|&i| spec.monomial_text(&fiber.basis_monomial(i))).collect(),
        table: table.iter().map(|row| row.iter().map(show).collect()).collect(),
        unit: show(&unit_class),
        associative,
        center_central,
    })
}
