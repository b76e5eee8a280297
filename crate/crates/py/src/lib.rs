//! Python bindings: algebras and elements at a root of unity, the fiber and
//! reduction certificates, and the classical checks. Reports come back as
//! plain dicts and lists.

use std::str::FromStr;
use std::sync::Arc;

use num_rational::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;
use qmv_core::azumaya::{abelian_reduction, build_module_for, is_matrix_algebra};
use qmv_core::classical::{self, GroupPoint, QMat, QuiverRep};
use qmv_core::linalg::Mat;
use qmv_core::ncalg::{AlgebraSpec, NCElement};
use qmv_core::poisson::{self, PoissonOrderCtx};
use qmv_core::qalgebras::{self as qa, EdgeAlgebra, Quiver, QuiverMode};
use qmv_core::scalars::{self, CycScalar};
use serde::Serialize;

fn core_err(e: qmv_core::Error) -> PyErr {
    match e {
        qmv_core::Error::Domain(_) | qmv_core::Error::Parse(_) | qmv_core::Error::UnknownGenerator(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Runs f on a thread with a large stack; rewriting recurses deeply.
fn deep<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(256 << 20)
            .spawn_scoped(s, f)
            .expect("spawn worker thread")
            .join()
            .expect("worker thread panicked")
    })
}

fn to_py<'py>(py: Python<'py>, v: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_rational(v: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    let s = v.str()?.to_string();
    BigRational::from_str(s.trim()).map_err(|_| PyValueError::new_err(format!("not a rational number: {s}")))
}

fn parse_matrix(rows: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<QMat> {
    let data = rows.iter().map(|r| r.iter().map(parse_rational).collect::<PyResult<Vec<_>>>()).collect::<PyResult<Vec<_>>>()?;
    if data.windows(2).any(|w| w[0].len() != w[1].len()) {
        return Err(PyValueError::new_err("ragged matrix"));
    }
    Ok(Mat::from_rows(data))
}

fn matrix_text(m: &QMat) -> Vec<Vec<String>> {
    (0..m.rows).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect()
}

fn load_quiver(name_or_toml: &str) -> PyResult<Quiver> {
    match Quiver::builtin(name_or_toml) {
        Some(q) => Ok(q),
        None => Quiver::from_toml(name_or_toml).map_err(core_err),
    }
}

/// A quantized algebra at a primitive ℓ-th root of unity ζ.
#[pyclass(frozen, module = "qmv")]
pub struct Algebra {
    alg: EdgeAlgebra<CycScalar>,
    quiver: Option<Quiver>,
    ell: u32,
}

/// An element of an Algebra, kept in normal form.
#[pyclass(frozen, module = "qmv")]
pub struct Element {
    spec: Arc<AlgebraSpec<CycScalar>>,
    value: NCElement<CycScalar>,
}

impl Element {
    fn wrap(&self, value: NCElement<CycScalar>) -> Element {
        Element { spec: self.spec.clone(), value }
    }

    fn same(&self, o: &Element) -> PyResult<()> {
        if self.spec.id() != o.spec.id() {
            return Err(PyValueError::new_err("elements belong to different algebras"));
        }
        Ok(())
    }
}

#[pymethods]
impl Element {
    fn __add__(&self, o: PyRef<'_, Element>) -> PyResult<Element> {
        self.same(&o)?;
        Ok(self.wrap(self.value.add(&o.value)))
    }

    fn __sub__(&self, o: PyRef<'_, Element>) -> PyResult<Element> {
        self.same(&o)?;
        Ok(self.wrap(self.value.sub(&o.value)))
    }

    fn __mul__(&self, o: PyRef<'_, Element>) -> PyResult<Element> {
        self.same(&o)?;
        let spec = self.spec.clone();
        let (a, b) = (self.value.clone(), o.value.clone());
        deep(move || spec.multiply(&a, &b)).map(|v| self.wrap(v)).map_err(core_err)
    }

    fn __neg__(&self) -> Element {
        self.wrap(self.value.neg())
    }

    fn __pow__(&self, k: u32, _modulo: Option<Py<PyAny>>) -> PyResult<Element> {
        let spec = self.spec.clone();
        let a = self.value.clone();
        deep(move || spec.pow(&a, k)).map(|v| self.wrap(v)).map_err(core_err)
    }

    fn __eq__(&self, o: PyRef<'_, Element>) -> bool {
        self.spec.id() == o.spec.id() && self.value == o.value
    }

    fn __str__(&self) -> String {
        self.spec.element_text(&self.value)
    }

    fn __repr__(&self) -> String {
        format!("Element({})", self.spec.element_text(&self.value))
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Scales by ζ^k.
    fn times_zeta(&self, k: i64) -> Element {
        self.wrap(self.value.scale(&CycScalar::zeta_pow(self.spec.q().ell(), k)))
    }

    fn scale(&self, c: i64) -> Element {
        self.wrap(self.value.scale(&CycScalar::from_int(self.spec.q().ell(), c)))
    }
}

#[pymethods]
impl Algebra {
    /// The Kronecker edge algebra with source rank n and target rank m.
    #[staticmethod]
    fn kronecker(n: usize, m: usize, ell: u32) -> PyResult<Algebra> {
        let alg = qa::build_kronecker(n, m, &CycScalar::zeta(ell)).map_err(core_err)?;
        Ok(Algebra { alg, quiver: None, ell })
    }

    #[staticmethod]
    #[pyo3(name = "loop")]
    fn loop_(n: usize, ell: u32) -> PyResult<Algebra> {
        let alg = deep(|| qa::build_loop(n, &CycScalar::zeta(ell))).map_err(core_err)?;
        Ok(Algebra { alg, quiver: None, ell })
    }

    #[staticmethod]
    fn torus(skew: Vec<Vec<i64>>, ell: u32) -> PyResult<Algebra> {
        let alg = qa::quantum_torus(&skew, &CycScalar::zeta(ell)).map_err(core_err)?;
        Ok(Algebra { alg, quiver: None, ell })
    }

    /// From a bundled quiver name or the text of a quiver TOML file.
    #[staticmethod]
    #[pyo3(signature = (quiver, ell=None))]
    fn from_quiver(quiver: &str, ell: Option<u32>) -> PyResult<Algebra> {
        let mut q = load_quiver(quiver)?;
        if let Some(l) = ell {
            q.ell = l;
        }
        if q.mode != QuiverMode::Root {
            return Err(PyValueError::new_err("only root-of-unity quivers are supported"));
        }
        let ell = q.ell;
        let built = deep(|| qa::build_quiver(&q, &CycScalar::zeta(ell))).map_err(core_err)?;
        Ok(Algebra { alg: built.alg, quiver: Some(q), ell })
    }

    #[getter]
    fn ell(&self) -> u32 {
        self.ell
    }

    fn generators(&self) -> Vec<String> {
        self.alg.spec.gens().iter().map(|g| g.label()).collect()
    }

    fn gen(&self, label: &str) -> PyResult<Element> {
        let i = self.alg.spec.gen_index(label).map_err(core_err)?;
        Ok(Element { spec: self.alg.spec.clone(), value: self.alg.spec.gen(i) })
    }

    fn one(&self) -> Element {
        Element { spec: self.alg.spec.clone(), value: self.alg.spec.one() }
    }

    /// Normal form of a word given as generator labels.
    fn word(&self, labels: Vec<String>) -> PyResult<Element> {
        let spec = self.alg.spec.clone();
        let v = deep(|| {
            let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
            spec.normal_form_labels(&refs)
        })
        .map_err(core_err)?;
        Ok(Element { spec: self.alg.spec.clone(), value: v })
    }

    fn is_central(&self, e: PyRef<'_, Element>) -> PyResult<bool> {
        let spec = self.alg.spec.clone();
        let v = e.value.clone();
        deep(move || spec.is_central(&v)).map_err(core_err)
    }

    fn confluent(&self) -> PyResult<bool> {
        let spec = self.alg.spec.clone();
        deep(move || spec.confluence_report()).map(|r| r.passed()).map_err(core_err)
    }

    /// The ℓ-th powers of the generators.
    fn frobenius_center(&self) -> PyResult<Vec<Element>> {
        let (zs, _) = deep(|| qa::frobenius_center(&self.alg, self.ell)).map_err(core_err)?;
        Ok(zs.into_iter().map(|value| Element { spec: self.alg.spec.clone(), value }).collect())
    }

    /// Matrix-algebra certificate of the fiber over zero (x and ∂ generators only).
    fn zero_fiber<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let (alg, ell) = (self.alg.clone(), self.ell);
        let cert = deep(move || build_module_for(alg, ell).and_then(|m| is_matrix_algebra(&m))).map_err(core_err)?;
        to_py(py, &cert)
    }

    /// Reduction at ξ = (ζ^{k_v}) with the default central character.
    fn reduce_abelian<'py>(&self, py: Python<'py>, xi_powers: Vec<i64>) -> PyResult<Bound<'py, PyAny>> {
        let q = self.quiver.clone().ok_or_else(|| PyValueError::new_err("algebra was not built from a quiver"))?;
        let ell = self.ell;
        let xi: Vec<CycScalar> = xi_powers.iter().map(|&k| CycScalar::zeta_pow(ell, k)).collect();
        let chi: Vec<CycScalar> =
            self.alg.spec.gens().iter().map(|g| if g.invertible { CycScalar::one(ell) } else { CycScalar::zero(ell) }).collect();
        let built = qa::QuiverAlgebra { quiver: q, alg: self.alg.clone() };
        let rep = deep(move || abelian_reduction(&built, &chi, &xi, ell)).map_err(core_err)?;
        to_py(py, &rep)
    }

    fn __repr__(&self) -> String {
        format!("Algebra({} generators, ell={})", self.alg.spec.ngens(), self.ell)
    }
}

/// Hayashi closure, antisymmetry, Jacobi and Leibniz on a Kronecker edge.
#[pyfunction]
fn poisson_closure<'py>(py: Python<'py>, n: usize, m: usize, ell: u32) -> PyResult<Bound<'py, PyAny>> {
    let rep = deep(move || PoissonOrderCtx::kronecker(n, m, ell).and_then(|c| poisson::verify_hayashi_closure(&c))).map_err(core_err)?;
    to_py(py, &rep)
}

#[pyfunction]
fn torus_scaling<'py>(py: Python<'py>, skew: Vec<Vec<i64>>, ells: Vec<u32>) -> PyResult<Bound<'py, PyAny>> {
    let rep = deep(move || poisson::torus_bracket_scaling(&skew, &ells)).map_err(core_err)?;
    to_py(py, &rep)
}

/// The root-of-unity condition for a root datum label such as "GLn" or "G2".
#[pyfunction]
fn check_assumption<'py>(py: Python<'py>, label: &str, ell: u32) -> PyResult<Bound<'py, PyAny>> {
    let reports = scalars::expand_label(label)
        .and_then(|gs| gs.iter().map(|g| scalars::check_assumption(g, ell)).collect::<Result<Vec<_>, _>>())
        .map_err(core_err)?;
    to_py(py, &reports)
}

/// μ̃ at a representation: one matrix per edge in each of x and x_dual.
#[pyfunction]
fn classical_moment(
    quiver: &str,
    x: Vec<Vec<Vec<Bound<'_, PyAny>>>>,
    x_dual: Vec<Vec<Vec<Bound<'_, PyAny>>>>,
) -> PyResult<Vec<Vec<Vec<String>>>> {
    let q = load_quiver(quiver)?;
    let x = x.into_iter().map(parse_matrix).collect::<PyResult<Vec<_>>>()?;
    let xd = x_dual.into_iter().map(parse_matrix).collect::<PyResult<Vec<_>>>()?;
    let rep = QuiverRep::new(q, x, xd).map_err(core_err)?;
    let mu: GroupPoint = classical::classical_moment(&rep).map_err(core_err)?;
    Ok(mu.text())
}

#[pyfunction]
fn big_cell_test(g: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<bool> {
    Ok(classical::big_cell_test(&parse_matrix(g)?))
}

/// (L, D, U) and the rational parts of b₊, b₋^{-1} with the radicands of √D,
/// or None off the big cell.
#[pyfunction]
fn gstar_factor<'py>(py: Python<'py>, g: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Option<Bound<'py, PyAny>>> {
    let Some(f) = classical::gstar_factor(&parse_matrix(g)?) else { return Ok(None) };
    let out = serde_json::json!({
        "l": matrix_text(&f.l),
        "d": f.d.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "u": matrix_text(&f.u),
        "sqrt_d": f.sqrt_d,
        "b_plus": matrix_text(&f.b_plus),
        "b_minus_inv": matrix_text(&f.b_minus_inv),
        "needs_extension": f.needs_extension,
    });
    to_py(py, &out).map(Some)
}

#[pyfunction]
#[pyo3(signature = (n, m, samples=100, seed=0))]
fn nondeg_identity_check<'py>(py: Python<'py>, n: usize, m: usize, samples: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &classical::nondeg_identity_check(n, m, samples, seed))
}

#[pyfunction]
fn char_moment(tuple: Vec<Vec<Vec<Bound<'_, PyAny>>>>) -> PyResult<Vec<Vec<String>>> {
    let t = tuple.into_iter().map(parse_matrix).collect::<PyResult<Vec<_>>>()?;
    Ok(matrix_text(&classical::char_moment(&t).map_err(core_err)?))
}

#[pyfunction]
fn is_good_point(tuple: Vec<Vec<Vec<Bound<'_, PyAny>>>>) -> PyResult<bool> {
    let t = tuple.into_iter().map(parse_matrix).collect::<PyResult<Vec<_>>>()?;
    classical::is_good_point(&t).map_err(core_err)
}

/// Sample records as dicts, seeds seed, seed + 1, ...
#[pyfunction]
#[pyo3(signature = (quiver, samples=10, seed=0, theta=None))]
fn classical_samples<'py>(py: Python<'py>, quiver: &str, samples: usize, seed: u64, theta: Option<Vec<i64>>) -> PyResult<Bound<'py, PyAny>> {
    let q = load_quiver(quiver)?;
    let theta = theta.unwrap_or_else(|| vec![0; q.dims.len()]);
    let recs = classical::classical_samples(&q, &theta, samples, seed).map_err(core_err)?;
    to_py(py, &recs)
}

#[pymodule]
fn qmv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Algebra>()?;
    m.add_class::<Element>()?;
    m.add_function(wrap_pyfunction!(poisson_closure, m)?)?;
    m.add_function(wrap_pyfunction!(torus_scaling, m)?)?;
    m.add_function(wrap_pyfunction!(check_assumption, m)?)?;
    m.add_function(wrap_pyfunction!(classical_moment, m)?)?;
    m.add_function(wrap_pyfunction!(big_cell_test, m)?)?;
    m.add_function(wrap_pyfunction!(gstar_factor, m)?)?;
    m.add_function(wrap_pyfunction!(nondeg_identity_check, m)?)?;
    m.add_function(wrap_pyfunction!(char_moment, m)?)?;
    m.add_function(wrap_pyfunction!(is_good_point, m)?)?;
    m.add_function(wrap_pyfunction!(classical_samples, m)?)?;
    Ok(())
}
