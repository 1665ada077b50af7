//! Python bindings for casim.
//!
//! ```python
//! import casim
//!
//! b = casim.LocalAlgebra.eca(150)
//! print(b.power(3).fit_affine(2).components[1])
//! print(casim.simulates(casim.LocalAlgebra.eca(90), b).kind)
//! ```

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use casim_core::affine::{check_structure, classify_affine, component_matrices, e0_evolution, verify_splitting};
use casim_core::format::{print_affine, print_ca, Document};
use casim_core::render::{grid, to_text};
use casim_core::simulation::{self, Bounds, Verdict};
use casim_core::{
    are_isomorphic, fit_affine, AffineAlgebra, Boundary, CanonicalAdditive, Caps, Congruence, Error, LocalAlgebra,
};

create_exception!(casim, CapExceededError, PyRuntimeError, "A work limit was reached; pass a larger cap.");

fn err(e: Error) -> PyErr {
    match e {
        Error::CapExceeded { .. } => CapExceededError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn caps(cap: u64) -> Caps {
    Caps::default().scaled(cap)
}

/// Converts any serializable report to plain Python data.
fn to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn matrix_rows(m: &casim_core::linalg::FpMatrix) -> Vec<Vec<u32>> {
    m.row_vecs()
}

/// A finite local algebra: a cellular automaton rule given by its table.
#[pyclass(name = "LocalAlgebra", module = "casim", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyLocalAlgebra(LocalAlgebra);

#[pymethods]
impl PyLocalAlgebra {
    #[new]
    fn new(states: usize, radius: usize, table: Vec<u32>) -> PyResult<Self> {
        LocalAlgebra::new(states, radius, table).map(Self).map_err(err)
    }

    /// Elementary rule by Wolfram number.
    #[staticmethod]
    fn eca(number: u8) -> Self {
        Self(LocalAlgebra::eca(number))
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        match Document::parse(text).map_err(err)? {
            Document::Ca(a) => Ok(Self(a)),
            Document::Affine(a) => a.to_table(&Caps::default()).map(Self).map_err(err),
        }
    }

    #[staticmethod]
    #[pyo3(signature = (factors, cap = 1))]
    fn product(factors: Vec<PyRef<'_, PyLocalAlgebra>>, cap: u64) -> PyResult<Self> {
        let fs: Vec<LocalAlgebra> = factors.iter().map(|f| f.0.clone()).collect();
        LocalAlgebra::product(&fs, &caps(cap)).map(Self).map_err(err)
    }

    #[getter]
    fn states(&self) -> usize {
        self.0.states()
    }

    #[getter]
    fn radius(&self) -> usize {
        self.0.radius()
    }

    #[getter]
    fn table(&self) -> Vec<u32> {
        self.0.table().to_vec()
    }

    fn apply(&self, neighborhood: Vec<u32>) -> PyResult<u32> {
        if neighborhood.len() != self.0.arity() || neighborhood.iter().any(|&s| s as usize >= self.0.states()) {
            return Err(PyValueError::new_err("neighborhood has the wrong length or an invalid state"));
        }
        Ok(self.0.apply(&neighborhood))
    }

    fn unravel(&self, word: Vec<u32>, iterations: usize) -> PyResult<Vec<u32>> {
        self.0.unravel(&word, iterations).map_err(err)
    }

    #[pyo3(signature = (n, cap = 1))]
    fn power(&self, n: usize, cap: u64) -> PyResult<Self> {
        self.0.power(n, &caps(cap)).map(Self).map_err(err)
    }

    /// Rows of the space-time diagram. Give `cyclic` for a ring, otherwise
    /// the word sits in a uniform `background`.
    #[pyo3(signature = (word, steps, background = 0, cyclic = None))]
    fn evolve(&self, word: Vec<u32>, steps: usize, background: u32, cyclic: Option<usize>) -> PyResult<Vec<Vec<u32>>> {
        let boundary = cyclic.map_or(Boundary::Background(background), Boundary::Cyclic);
        self.0.evolve(&word, boundary, steps).map(|d| grid(&d)).map_err(err)
    }

    #[pyo3(signature = (word, steps, dots = false))]
    fn render(&self, word: Vec<u32>, steps: usize, dots: bool) -> PyResult<String> {
        let d = self.0.evolve(&word, Boundary::Background(0), steps).map_err(err)?;
        Ok(to_text(&d, dots))
    }

    fn idempotents(&self) -> Vec<u32> {
        self.0.idempotents()
    }

    fn permutivity(&self) -> (Option<isize>, Option<isize>) {
        self.0.permutivity()
    }

    #[pyo3(signature = (cap = 1))]
    fn subalgebras(&self, cap: u64) -> PyResult<Vec<Vec<u32>>> {
        self.0.subalgebras(&caps(cap)).map_err(err)
    }

    /// Congruences as lists of blocks.
    #[pyo3(signature = (cap = 1))]
    fn congruences(&self, cap: u64) -> PyResult<Vec<Vec<Vec<u32>>>> {
        Ok(self.0.congruences(&caps(cap)).map_err(err)?.iter().map(Congruence::blocks).collect())
    }

    fn restrict(&self, carrier: Vec<u32>) -> PyResult<Self> {
        self.0.restrict(&carrier).map(Self).map_err(err)
    }

    fn quotient(&self, blocks: Vec<Vec<u32>>) -> PyResult<Self> {
        let c = Congruence::from_blocks(self.0.states(), &blocks).map_err(err)?;
        self.0.quotient(&c).map(Self).map_err(err)
    }

    /// A state map onto `other`, or `None`.
    #[pyo3(signature = (other, cap = 1))]
    fn isomorphism(&self, other: &PyLocalAlgebra, cap: u64) -> PyResult<Option<Vec<u32>>> {
        Ok(are_isomorphic(&self.0, &other.0, &caps(cap)).map_err(err)?.map(|m| m.0))
    }

    /// Affine form over F_p in this encoding, or `None`.
    fn fit_affine(&self, p: u32) -> PyResult<Option<PyAffineAlgebra>> {
        Ok(fit_affine(&self.0, p).map_err(err)?.map(PyAffineAlgebra))
    }

    fn to_text(&self) -> String {
        print_ca(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("LocalAlgebra(states={}, radius={})", self.0.states(), self.0.radius())
    }
}

/// The linear rule `x ↦ Σ a_i x_i` over F_p.
#[pyclass(name = "CanonicalAdditive", module = "casim", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyCanonicalAdditive(CanonicalAdditive);

#[pymethods]
impl PyCanonicalAdditive {
    #[new]
    fn new(p: u32, coefficients: Vec<u32>) -> PyResult<Self> {
        CanonicalAdditive::new(p, coefficients).map(Self).map_err(err)
    }

    #[getter]
    fn p(&self) -> u32 {
        self.0.p()
    }

    #[getter]
    fn radius(&self) -> usize {
        self.0.radius()
    }

    #[getter]
    fn coefficients(&self) -> Vec<u32> {
        self.0.coefficients().to_vec()
    }

    fn is_doubly_bijective(&self) -> bool {
        self.0.is_doubly_bijective()
    }

    #[pyo3(signature = (cap = 1))]
    fn to_table(&self, cap: u64) -> PyResult<PyLocalAlgebra> {
        self.0.to_table(&caps(cap)).map(PyLocalAlgebra).map_err(err)
    }

    fn to_affine(&self) -> PyAffineAlgebra {
        PyAffineAlgebra(self.0.to_affine())
    }

    /// `F^n(e^0)` on positions `-nr..=nr`.
    fn e0(&self, n: usize) -> PyResult<Vec<u32>> {
        e0_evolution(&self.0, n).map(|p| p.values).map_err(err)
    }

    fn component_matrices(&self, n: usize) -> PyResult<Vec<Vec<Vec<u32>>>> {
        Ok(component_matrices(&self.0, n).map_err(err)?.iter().map(matrix_rows).collect())
    }

    fn check_structure<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &check_structure(&self.0, n).map_err(err)?)
    }

    #[pyo3(signature = (k, l, cap = 1))]
    fn splits(&self, k: u32, l: usize, cap: u64) -> PyResult<bool> {
        verify_splitting(&self.0, k, l, &caps(cap)).map(|r| r.holds).map_err(err)
    }

    /// Capacity class 1, 2 or 3 of a radius-one rule.
    fn capacity(&self) -> PyResult<u8> {
        simulation::classify_canonical(&self.0).map(|c| c.number()).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("CanonicalAdditive(p={}, coefficients={:?})", self.0.p(), self.0.coefficients())
    }
}

/// An affine rule on F_p^d.
#[pyclass(name = "AffineAlgebra", module = "casim", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyAffineAlgebra(AffineAlgebra);

#[pymethods]
impl PyAffineAlgebra {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        casim_core::format::parse_affine(text).map(Self).map_err(err)
    }

    #[getter]
    fn p(&self) -> u32 {
        self.0.p()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn radius(&self) -> usize {
        self.0.radius()
    }

    #[getter]
    fn components(&self) -> Vec<Vec<Vec<u32>>> {
        self.0.components().iter().map(matrix_rows).collect()
    }

    #[getter]
    fn constant(&self) -> Vec<u32> {
        self.0.constant().to_vec()
    }

    #[pyo3(signature = (cap = 1))]
    fn to_table(&self, cap: u64) -> PyResult<PyLocalAlgebra> {
        self.0.to_table(&caps(cap)).map(PyLocalAlgebra).map_err(err)
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &classify_affine(&self.0))
    }

    fn to_text(&self) -> String {
        print_affine(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("AffineAlgebra(p={}, dim={}, radius={})", self.0.p(), self.0.dim(), self.0.radius())
    }
}

/// Answer of a simulation query.
#[pyclass(name = "Verdict", module = "casim", frozen, get_all)]
struct PyVerdict {
    /// `"yes"`, `"no"` or `"unknown"`.
    kind: &'static str,
    reason: Option<String>,
    derivation: Option<String>,
    iso: Option<Vec<u32>>,
    method: Option<&'static str>,
}

#[pymethods]
impl PyVerdict {
    fn __repr__(&self) -> String {
        format!("Verdict({})", self.kind)
    }
}

fn bounds(n_max: usize, k_max: usize, size_cap: usize, cap: u64) -> Bounds {
    Bounds::new(n_max, k_max, size_cap).with_caps(caps(cap))
}

/// Whether `b` simulates `a`.
#[pyfunction]
#[pyo3(signature = (a, b, n_max = 2, k_max = 2, size_cap = 16, cap = 1))]
fn simulates(
    a: &PyLocalAlgebra,
    b: &PyLocalAlgebra,
    n_max: usize,
    k_max: usize,
    size_cap: usize,
    cap: u64,
) -> PyResult<PyVerdict> {
    let v = simulation::simulates(&a.0, &b.0, &bounds(n_max, k_max, size_cap, cap)).map_err(err)?;
    let none = PyVerdict { kind: "unknown", reason: None, derivation: None, iso: None, method: None };
    Ok(match v {
        Verdict::Yes(w) => PyVerdict {
            kind: "yes",
            derivation: Some(w.derivation.describe()),
            iso: Some(w.iso.0),
            method: Some(w.method),
            ..none
        },
        Verdict::No(why) => PyVerdict { kind: "no", reason: Some(why), ..none },
        Verdict::Unknown(_) => none,
    })
}

/// Bounded check that every closure member is a product of powers.
#[pyfunction]
#[pyo3(signature = (b, n_max = 2, k_max = 2, size_cap = 16, cap = 1))]
fn verify_characterization<'py>(
    py: Python<'py>,
    b: &PyCanonicalAdditive,
    n_max: usize,
    k_max: usize,
    size_cap: usize,
    cap: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let rep = simulation::verify_characterization(&b.0, &bounds(n_max, k_max, size_cap, cap)).map_err(err)?;
    to_py(py, &rep)
}

/// Bounded check that every closure member stays in the affine class.
#[pyfunction]
#[pyo3(signature = (b, n_max = 2, k_max = 2, size_cap = 16, cap = 1))]
fn verify_affine_closure<'py>(
    py: Python<'py>,
    b: &PyAffineAlgebra,
    n_max: usize,
    k_max: usize,
    size_cap: usize,
    cap: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let rep = simulation::verify_affine_closure(&b.0, &bounds(n_max, k_max, size_cap, cap)).map_err(err)?;
    to_py(py, &rep)
}

#[pymodule]
fn casim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLocalAlgebra>()?;
    m.add_class::<PyCanonicalAdditive>()?;
    m.add_class::<PyAffineAlgebra>()?;
    m.add_class::<PyVerdict>()?;
    m.add_function(wrap_pyfunction!(simulates, m)?)?;
    m.add_function(wrap_pyfunction!(verify_characterization, m)?)?;
    m.add_function(wrap_pyfunction!(verify_affine_closure, m)?)?;
    m.add("CapExceededError", m.py().get_type::<CapExceededError>())?;
    Ok(())
}
