use std::cell::Cell;
use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use super::element::{word_cmp, Letter, Monomial, NCElement};
use crate::error::{Error, Result};
use crate::scalars::Coeff;

static NEXT_SPEC_ID: AtomicU64 = AtomicU64::new(1);

const DEFAULT_BUDGET: u64 = 50_000_000;
const MAX_DEPTH: u32 = 100_000;

thread_local! {
    static STEPS: Cell<u64> = const { Cell::new(0) };
    static DEPTH: Cell<u32> = const { Cell::new(0) };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GenKind {
    X,
    Del,
    A,
    D,
    Torus,
    Inv,
}

impl GenKind {
    fn prefix(self) -> &'static str {
        match self {
            GenKind::X => "x",
            GenKind::Del => "del",
            GenKind::A => "a",
            GenKind::D => "d",
            GenKind::Torus => "X",
            GenKind::Inv => "w",
        }
    }
}

/// A generator of a PBW algebra with its torus weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub site: u32,
    pub kind: GenKind,
    pub upper: u32,
    pub lower: u32,
    pub weight: Vec<i64>,
    pub invertible: bool,
}

impl Generator {
    pub fn new(site: u32, kind: GenKind, upper: u32, lower: u32, weight: Vec<i64>) -> Self {
        Generator { site, kind, upper, lower, weight, invertible: false }
    }

    /// Text label such as `x2_1`, `del1_2` or `X3`; a nonzero site is
    /// appended as `@site`.
    pub fn label(&self) -> String {
        let mut s = match self.kind {
            GenKind::Torus => format!("{}{}", self.kind.prefix(), self.upper),
            _ => format!("{}{}_{}", self.kind.prefix(), self.upper, self.lower),
        };
        if self.site != 0 {
            let _ = write!(s, "@{}", self.site);
        }
        s
    }
}

/// Right-hand side of a straightening rule: words with coefficients.
pub type Rhs<S> = Vec<(Vec<Letter>, S)>;

/// Outcome of the overlap (diamond) test.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ConfluenceReport {
    pub overlaps_checked: usize,
    pub failures: Vec<String>,
}

impl ConfluenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// An ordered generator list with a terminating straightening-rule table.
///
/// Normal forms are computed by right-multiplying ordered monomials by single
/// letters; every such product is memoized, so high powers are straightened
/// once and reused.
pub struct AlgebraSpec<S: Coeff> {
    id: u64,
    name: String,
    gens: Vec<Generator>,
    q: S,
    rules: HashMap<(Letter, Letter), Rhs<S>>,
    memo: RwLock<HashMap<(Monomial, Letter), Arc<NCElement<S>>>>,
    budget: u64,
}

impl<S: Coeff> Clone for AlgebraSpec<S> {
    fn clone(&self) -> Self {
        AlgebraSpec {
            id: NEXT_SPEC_ID.fetch_add(1, Ordering::Relaxed),
            name: self.name.clone(),
            gens: self.gens.clone(),
            q: self.q.clone(),
            rules: self.rules.clone(),
            memo: RwLock::new(HashMap::new()),
            budget: self.budget,
        }
    }
}

impl<S: Coeff> fmt::Debug for AlgebraSpec<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraSpec({}, {} generators, {} rules)", self.name, self.gens.len(), self.rules.len())
    }
}

struct DepthGuard;

impl DepthGuard {
    fn enter() -> Result<Self> {
        let d = DEPTH.with(|c| {
            let d = c.get() + 1;
            c.set(d);
            d
        });
        if d > MAX_DEPTH {
            DEPTH.with(|c| c.set(c.get() - 1));
            return Err(Error::NonTerminating { budget: MAX_DEPTH as u64, context: "recursion depth".into() });
        }
        Ok(DepthGuard)
    }
}

impl Drop for DepthGuard {
    fn drop(&mut self) {
        DEPTH.with(|c| c.set(c.get() - 1));
    }
}

impl<S: Coeff> AlgebraSpec<S> {
    /// An algebra with the given generators (in their total order) and the
    /// deformation parameter q; rules are added with [`AlgebraSpec::add_rule`].
    pub fn new(name: impl Into<String>, gens: Vec<Generator>, q: S) -> Self {
        AlgebraSpec {
            id: NEXT_SPEC_ID.fetch_add(1, Ordering::Relaxed),
            name: name.into(),
            gens,
            q,
            rules: HashMap::new(),
            memo: RwLock::new(HashMap::new()),
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn q(&self) -> &S {
        &self.q
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn rules(&self) -> &HashMap<(Letter, Letter), Rhs<S>> {
        &self.rules
    }

    pub fn set_budget(&mut self, budget: u64) {
        self.budget = budget;
    }

    pub fn gen_index(&self, label: &str) -> Result<usize> {
        self.gens.iter().position(|g| g.label() == label).ok_or_else(|| Error::UnknownGenerator(label.to_string()))
    }

    pub fn letter_label(&self, l: Letter) -> String {
        let base = self.gens[l.gen].label();
        if l.exp < 0 {
            format!("{base}^-1")
        } else {
            base
        }
    }

    /// Installs the rewrite a·b → rhs for an out-of-order pair.
    pub fn add_rule(&mut self, a: Letter, b: Letter, rhs: Rhs<S>) -> Result<()> {
        if a.gen <= b.gen {
            return Err(Error::Domain(format!(
                "rule {}·{} is not an out-of-order pair",
                self.letter_label(a),
                self.letter_label(b)
            )));
        }
        let rhs: Rhs<S> = rhs.into_iter().filter(|(_, c)| !c.vanishes()).collect();
        self.rules.insert((a, b), rhs);
        self.memo.write().clear();
        Ok(())
    }

    pub(crate) fn set_invertible(&mut self, g: usize) {
        self.gens[g].invertible = true;
        self.memo.write().clear();
    }

    pub fn zero(&self) -> NCElement<S> {
        NCElement::zero_in(self.id, self.gens.len())
    }

    pub fn one(&self) -> NCElement<S> {
        self.scalar(self.q.one_like())
    }

    pub fn scalar(&self, c: S) -> NCElement<S> {
        NCElement::mono_in(self.id, Monomial::one(self.gens.len()), c)
    }

    pub fn gen(&self, g: usize) -> NCElement<S> {
        self.monomial(Monomial::single(self.gens.len(), g, 1))
    }

    pub fn gen_inv(&self, g: usize) -> Result<NCElement<S>> {
        if !self.gens[g].invertible {
            return Err(Error::Domain(format!("{} is not invertible", self.gens[g].label())));
        }
        Ok(self.monomial(Monomial::single(self.gens.len(), g, -1)))
    }

    pub fn monomial(&self, m: Monomial) -> NCElement<S> {
        assert_eq!(m.0.len(), self.gens.len(), "monomial length does not match the algebra");
        NCElement::mono_in(self.id, m, self.q.one_like())
    }

    /// Builds an element of this algebra from (monomial, coefficient) terms.
    pub fn element(&self, terms: impl IntoIterator<Item = (Monomial, S)>) -> NCElement<S> {
        let mut out = self.zero();
        for (m, c) in terms {
            assert_eq!(m.0.len(), self.gens.len(), "monomial length does not match the algebra");
            out.add_term(&m, &c);
        }
        out
    }

    /// Re-homes an element of another algebra with the same generators,
    /// mapping coefficients.
    pub fn import<T: Coeff>(&self, other: &AlgebraSpec<T>, x: &NCElement<T>, f: impl Fn(&T) -> S) -> Result<NCElement<S>> {
        if other.gens.len() != self.gens.len() || other.gens.iter().zip(&self.gens).any(|(a, b)| a.label() != b.label()) {
            return Err(Error::SpecMismatch(format!("cannot import from {} into {}", other.name, self.name)));
        }
        other.check(x)?;
        Ok(x.map_coeffs(self.id, f))
    }

    pub(crate) fn check(&self, x: &NCElement<S>) -> Result<()> {
        if x.spec_id != self.id {
            return Err(Error::SpecMismatch(format!("element does not belong to {}", self.name)));
        }
        Ok(())
    }

    fn with_budget<T>(&self, context: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let top = DEPTH.with(|c| c.get()) == 0;
        if top {
            STEPS.with(|c| c.set(0));
        }
        let _g = DepthGuard::enter()?;
        f().map_err(|e| match e {
            Error::NonTerminating { budget, .. } if top => Error::NonTerminating { budget, context: context.to_string() },
            e => e,
        })
    }

    fn step(&self) -> Result<()> {
        let s = STEPS.with(|c| {
            let s = c.get() + 1;
            c.set(s);
            s
        });
        if s > self.budget {
            return Err(Error::NonTerminating { budget: self.budget, context: String::new() });
        }
        Ok(())
    }

    fn check_letter(&self, l: Letter) -> Result<()> {
        let g = self.gens.get(l.gen).ok_or_else(|| Error::UnknownGenerator(format!("index {}", l.gen)))?;
        if l.exp < 0 && !g.invertible {
            return Err(Error::Domain(format!("{} is not invertible", g.label())));
        }
        Ok(())
    }

    /// Normal form of a word given as generator powers (negative powers only
    /// for invertible generators).
    pub fn normal_form(&self, word: &[(usize, i64)]) -> Result<NCElement<S>> {
        let letters: Vec<Letter> = word
            .iter()
            .flat_map(|&(g, e)| std::iter::repeat_n(Letter { gen: g, exp: e.signum() as i8 }, e.unsigned_abs() as usize))
            .collect();
        self.normal_form_letters(&letters)
    }

    pub fn normal_form_letters(&self, letters: &[Letter]) -> Result<NCElement<S>> {
        for &l in letters {
            self.check_letter(l)?;
        }
        self.with_budget("normal form", || self.nf_word(letters))
    }

    /// Normal form of a word given by generator labels, e.g. `["del1_1", "x1_1"]`.
    pub fn normal_form_labels(&self, labels: &[&str]) -> Result<NCElement<S>> {
        let word: Vec<(usize, i64)> = labels.iter().map(|l| self.gen_index(l).map(|g| (g, 1))).collect::<Result<_>>()?;
        self.normal_form(&word)
    }

    fn nf_word(&self, letters: &[Letter]) -> Result<NCElement<S>> {
        let n = self.gens.len();
        let mut cur = NCElement::mono_in(self.id, Monomial::one(n), self.q.one_like());
        for &l in letters {
            let mut next = self.zero();
            for (m, c) in &cur.terms {
                let p = self.mul_mono_letter(m, l)?;
                next.add_scaled(c, &p);
            }
            cur = next;
        }
        Ok(cur)
    }

    fn mul_mono_letter(&self, m: &Monomial, g: Letter) -> Result<Arc<NCElement<S>>> {
        let key = (m.clone(), g);
        if let Some(v) = self.memo.read().get(&key) {
            return Ok(v.clone());
        }
        self.step()?;
        let _guard = DepthGuard::enter()?;
        let res = Arc::new(self.compute_mono_letter(m, g)?);
        self.memo.write().insert(key, res.clone());
        Ok(res)
    }

    fn compute_mono_letter(&self, m: &Monomial, g: Letter) -> Result<NCElement<S>> {
        let n = self.gens.len();
        let one = self.q.one_like();
        let Some(h) = m.last() else {
            return Ok(NCElement::mono_in(self.id, Monomial::single(n, g.gen, g.exp as i32), one));
        };
        if g.gen >= h {
            let mut out = m.clone();
            out.0[g.gen] += g.exp as i32;
            return Ok(NCElement::mono_in(self.id, out, one));
        }
        let e = m.0[h];
        let s = e.signum();
        if m.first() != Some(h) {
            // m = prefix · h^e; straighten h^e·g first, then multiply the prefix in.
            let mut prefix = m.clone();
            prefix.0[h] = 0;
            let tail = Monomial::single(n, h, e);
            let p = self.mul_mono_letter(&tail, g)?;
            let mut out = self.zero();
            for (w, c) in &p.terms {
                out.add_scaled(c, &self.mul_mono_mono(&prefix, w)?);
            }
            return Ok(out);
        }
        let hl = Letter { gen: h, exp: s as i8 };
        let rhs = self.rules.get(&(hl, g)).ok_or_else(|| {
            Error::Domain(format!("no straightening rule for {}·{}", self.letter_label(hl), self.letter_label(g)))
        })?;
        let mut first = self.zero();
        for (word, c) in rhs {
            first.add_scaled(c, &self.nf_word(word)?);
        }
        if e.abs() == 1 {
            return Ok(first);
        }
        let rest = Monomial::single(n, h, e - s);
        let mut out = self.zero();
        for (w, c) in &first.terms {
            out.add_scaled(c, &self.mul_mono_mono(&rest, w)?);
        }
        Ok(out)
    }

    fn mul_mono_mono(&self, a: &Monomial, b: &Monomial) -> Result<NCElement<S>> {
        let one = self.q.one_like();
        match (a.last(), b.first()) {
            (None, _) => return Ok(NCElement::mono_in(self.id, b.clone(), one)),
            (_, None) => return Ok(NCElement::mono_in(self.id, a.clone(), one)),
            (Some(la), Some(fb)) if la <= fb => {
                let sum = Monomial(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
                return Ok(NCElement::mono_in(self.id, sum, one));
            }
            _ => {}
        }
        let mut cur = NCElement::mono_in(self.id, a.clone(), one);
        for l in b.letters() {
            let mut next = self.zero();
            for (m, c) in &cur.terms {
                next.add_scaled(c, &*self.mul_mono_letter(m, l)?);
            }
            cur = next;
        }
        Ok(cur)
    }

    pub fn multiply(&self, a: &NCElement<S>, b: &NCElement<S>) -> Result<NCElement<S>> {
        self.check(a)?;
        self.check(b)?;
        self.with_budget("product", || {
            let mut out = self.zero();
            for (ma, ca) in &a.terms {
                for (mb, cb) in &b.terms {
                    out.add_scaled(&ca.times(cb), &self.mul_mono_mono(ma, mb)?);
                }
            }
            Ok(out)
        })
    }

    pub fn multiply_all(&self, xs: &[&NCElement<S>]) -> Result<NCElement<S>> {
        let mut acc = self.one();
        for x in xs {
            acc = self.multiply(&acc, x)?;
        }
        Ok(acc)
    }

    pub fn commutator(&self, a: &NCElement<S>, b: &NCElement<S>) -> Result<NCElement<S>> {
        Ok(self.multiply(a, b)?.sub(&self.multiply(b, a)?))
    }

    pub fn pow(&self, a: &NCElement<S>, k: u32) -> Result<NCElement<S>> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.multiply(&acc, a)?;
        }
        Ok(acc)
    }

    /// All letters: generators and the inverses of invertible generators.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            out.push(Letter::new(i));
            if g.invertible {
                out.push(Letter::inv(i));
            }
        }
        out
    }

    fn letter_element(&self, l: Letter) -> NCElement<S> {
        self.monomial(Monomial::single(self.gens.len(), l.gen, l.exp as i32))
    }

    /// True when z commutes with every generator.
    pub fn is_central(&self, z: &NCElement<S>) -> Result<bool> {
        for i in 0..self.gens.len() {
            if !self.commutator(z, &self.gen(i))?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The table λ_g with z·g = λ_g·g·z for every generator, if it exists.
    pub fn is_q_central(&self, z: &NCElement<S>) -> Result<Option<Vec<S>>> {
        if z.is_zero() {
            return Ok(None);
        }
        let mut table = Vec::new();
        for i in 0..self.gens.len() {
            let g = self.gen(i);
            let zg = self.multiply(z, &g)?;
            let gz = self.multiply(&g, z)?;
            let Some((m, c)) = gz.terms.iter().next() else {
                return Ok(None);
            };
            let Some(d) = zg.coeff(m) else {
                return Ok(None);
            };
            let Some(lambda) = d.div_exact(c) else {
                return Ok(None);
            };
            if zg != gz.scale(&lambda) {
                return Ok(None);
            }
            table.push(lambda);
        }
        Ok(Some(table))
    }

    /// Verifies that each rule's right-hand side is smaller than its left-hand
    /// side in the graded lexicographic word order.
    pub fn check_termination(&self) -> Result<()> {
        for ((a, b), rhs) in &self.rules {
            let lhs = [*a, *b];
            for (w, _) in rhs {
                if word_cmp(w, &lhs) != std::cmp::Ordering::Less {
                    return Err(Error::Termination(format!(
                        "{}·{} -> {}",
                        self.letter_label(*a),
                        self.letter_label(*b),
                        w.iter().map(|l| self.letter_label(*l)).collect::<Vec<_>>().join("·")
                    )));
                }
            }
        }
        Ok(())
    }

    fn rule_element(&self, a: Letter, b: Letter) -> Result<NCElement<S>> {
        let mut out = self.zero();
        for (w, c) in &self.rules[&(a, b)] {
            out.add_scaled(c, &self.nf_word(w)?);
        }
        Ok(out)
    }

    /// Diamond test: every overlap a·b·c of two rules (and of a rule with an
    /// inverse cancellation) reduces to the same normal form along both
    /// paths.
    pub fn confluence_report(&self) -> Result<ConfluenceReport> {
        self.with_budget("confluence", || {
            let mut report = ConfluenceReport::default();
            let letters = self.letters();
            let words = |w: &[Letter]| w.iter().map(|l| self.letter_label(*l)).collect::<Vec<_>>().join("·");
            for &a in &letters {
                for &b in &letters {
                    if !self.rules.contains_key(&(a, b)) {
                        continue;
                    }
                    for &c in &letters {
                        if !self.rules.contains_key(&(b, c)) {
                            continue;
                        }
                        report.overlaps_checked += 1;
                        let left = self.right_mul_letter(&self.rule_element(a, b)?, c)?;
                        let right = self.left_mul_letter(a, &self.rule_element(b, c)?)?;
                        if left != right {
                            report.failures.push(words(&[a, b, c]));
                        }
                    }
                }
            }
            // Overlaps with h·h^{-1} = 1.
            for &h in &letters {
                if h.exp > 0 || !self.gens[h.gen].invertible {
                    continue;
                }
                for s in [1i8, -1] {
                    let hs = Letter { gen: h.gen, exp: s };
                    let hi = Letter { gen: h.gen, exp: -s };
                    for &g in &letters {
                        if g.gen < h.gen && self.rules.contains_key(&(hi, g)) {
                            report.overlaps_checked += 1;
                            let path = self.left_mul_letter(hs, &self.rule_element(hi, g)?)?;
                            if path != self.letter_element(g) {
                                report.failures.push(words(&[hs, hi, g]));
                            }
                        }
                        if g.gen > h.gen && self.rules.contains_key(&(g, hs)) {
                            report.overlaps_checked += 1;
                            let path = self.right_mul_letter(&self.rule_element(g, hs)?, hi)?;
                            if path != self.letter_element(g) {
                                report.failures.push(words(&[g, hs, hi]));
                            }
                        }
                    }
                }
            }
            Ok(report)
        })
    }

    fn right_mul_letter(&self, x: &NCElement<S>, l: Letter) -> Result<NCElement<S>> {
        let mut out = self.zero();
        for (m, c) in &x.terms {
            out.add_scaled(c, &*self.mul_mono_letter(m, l)?);
        }
        Ok(out)
    }

    fn left_mul_letter(&self, l: Letter, x: &NCElement<S>) -> Result<NCElement<S>> {
        let lm = Monomial::single(self.gens.len(), l.gen, l.exp as i32);
        let mut out = self.zero();
        for (m, c) in &x.terms {
            out.add_scaled(c, &self.mul_mono_mono(&lm, m)?);
        }
        Ok(out)
    }

    /// Multi-weight of a monomial.
    pub fn weight(&self, m: &Monomial) -> Vec<i64> {
        let dim = self.gens.first().map_or(0, |g| g.weight.len());
        let mut w = vec![0i64; dim];
        for (g, &e) in self.gens.iter().zip(&m.0) {
            for (k, x) in g.weight.iter().enumerate() {
                w[k] += x * e as i64;
            }
        }
        w
    }

    pub fn monomial_text(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(g, &e)| {
                let l = self.gens[g].label();
                if e == 1 {
                    l
                } else {
                    format!("{l}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Canonical text: `c*m + c*m ...` in monomial order.
    pub fn element_text(&self, x: &NCElement<S>) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.terms.iter().map(|(m, c)| format!("{c}*{}", self.monomial_text(m))).collect::<Vec<_>>().join(" + ")
    }

    /// Structured text listing generators, order and rules, sorted for diffing.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "algebra {}", self.name);
        let _ = writeln!(s, "q = {}", self.q);
        for (i, g) in self.gens.iter().enumerate() {
            let _ = writeln!(
                s,
                "gen {i} {} weight={:?}{}",
                g.label(),
                g.weight,
                if g.invertible { " invertible" } else { "" }
            );
        }
        let mut keys: Vec<_> = self.rules.keys().copied().collect();
        keys.sort();
        for (a, b) in keys {
            let rhs = &self.rules[&(a, b)];
            let r: Vec<String> = rhs
                .iter()
                .map(|(w, c)| {
                    let word = if w.is_empty() { "1".to_string() } else { w.iter().map(|l| self.letter_label(*l)).collect::<Vec<_>>().join("*") };
                    format!("{c}*{word}")
                })
                .collect();
            let _ = writeln!(
                s,
                "rule {}*{} -> {}",
                self.letter_label(a),
                self.letter_label(b),
                if r.is_empty() { "0".to_string() } else { r.join(" + ") }
            );
        }
        s
    }
}

/// Parses the canonical element text back into an element.
pub fn parse_element<S: Coeff>(
    spec: &AlgebraSpec<S>,
    text: &str,
    parse_coeff: impl Fn(&str) -> std::result::Result<S, String>,
) -> Result<NCElement<S>> {
    let text = text.trim();
    if text == "0" {
        return Ok(spec.zero());
    }
    let mut out = spec.zero();
    let mut depth = 0i32;
    let mut start = 0usize;
    let bytes = text.as_bytes();
    let mut pieces = Vec::new();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' if depth == 0 => {
                pieces.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push(text[start..].trim());
    for p in pieces {
        // The coefficient is everything up to the last top-level ")*".
        let pos = p.rfind(")*").ok_or_else(|| Error::Parse(format!("term without coefficient: {p}")))?;
        let c = parse_coeff(&p[..=pos]).map_err(Error::Parse)?;
        let mono = &p[pos + 2..];
        let mut m = Monomial::one(spec.ngens());
        if mono != "1" {
            for f in mono.split('*') {
                let (label, e) = match f.rsplit_once('^') {
                    Some((l, e)) => (l, e.parse::<i32>().map_err(|e| Error::Parse(e.to_string()))?),
                    None => (f, 1),
                };
                m.0[spec.gen_index(label)?] += e;
            }
        }
        out.add_term(&m, &c);
    }
    Ok(out)
}
