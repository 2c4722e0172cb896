//! Python module `symdiam_py`. Structured results are returned as JSON
//! strings with the same schema as the command-line reports.

use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use symdiam::perm::{Perm, Word};
use symdiam::reducer::{run_reduction, select_case, ReductionConfig, UniformConditional};
use symdiam::spectrum::{aggregate_entries, reference_polys, DeltaPoly};
use symdiam::treenum::{enumerate_admitting_trees, CycleRule, EnumConstraints};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_json<T: serde::Serialize + ?Sized>(x: &T) -> PyResult<String> {
    serde_json::to_string(x).map_err(err)
}

fn reference(name: &str) -> PyResult<DeltaPoly> {
    let r = reference_polys();
    match name {
        "f" => Ok(r.f),
        "h2" => Ok(r.h2),
        "h3" => Ok(r.h3),
        other => Err(PyValueError::new_err(format!("unknown reference {other:?}; use f, h2 or h3"))),
    }
}

/// A permutation of `{1..n}` acting on the right.
#[pyclass(name = "Perm", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPerm(Perm);

#[pymethods]
impl PyPerm {
    /// Parses cycle notation such as `"(1,2)(3,4,5)"`.
    #[new]
    #[pyo3(signature = (n, cycles = ""))]
    fn new(n: usize, cycles: &str) -> PyResult<Self> {
        Perm::parse_cycles(n, cycles).map(PyPerm).map_err(err)
    }

    #[staticmethod]
    fn from_images(images: Vec<u32>) -> PyResult<Self> {
        Perm::from_images(&images).map(PyPerm).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn images(&self) -> Vec<u32> {
        self.0.images()
    }

    fn image(&self, x: u32) -> PyResult<u32> {
        if x == 0 || x as usize > self.0.n() {
            return Err(PyValueError::new_err(format!("point {x} outside 1..={}", self.0.n())));
        }
        Ok(self.0.image(x))
    }

    /// `self` followed by `other`.
    fn compose(&self, other: &PyPerm) -> PyResult<PyPerm> {
        self.0.compose(&other.0).map(PyPerm).map_err(err)
    }

    fn __mul__(&self, other: &PyPerm) -> PyResult<PyPerm> {
        self.compose(other)
    }

    fn inverse(&self) -> PyPerm {
        PyPerm(self.0.inverse())
    }

    /// `r⁻¹ · self · r`.
    fn conjugate(&self, r: &PyPerm) -> PyResult<PyPerm> {
        self.0.conjugate(&r.0).map(PyPerm).map_err(err)
    }

    fn __pow__(&self, k: i64, _modulo: Option<i64>) -> PyPerm {
        PyPerm(self.0.pow(k))
    }

    fn order(&self) -> BigUint {
        self.0.order()
    }

    fn support_size(&self) -> usize {
        self.0.support_size()
    }

    fn fixed_count(&self) -> usize {
        self.0.fixed_count()
    }

    fn cycle_type(&self) -> Vec<usize> {
        self.0.cycle_type()
    }

    fn __str__(&self) -> String {
        self.0.to_cycle_string()
    }

    fn __repr__(&self) -> String {
        format!("Perm({}, {:?})", self.0.n(), self.0.to_cycle_string())
    }
}

/// A reduced word in `a`, `b`, `A = a⁻¹`, `B = b⁻¹`.
#[pyclass(name = "Word", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyWord(Word);

#[pymethods]
impl PyWord {
    #[new]
    fn new(spelling: &str) -> PyResult<Self> {
        spelling.parse().map(PyWord).map_err(err)
    }

    #[staticmethod]
    fn w0() -> Self {
        PyWord(Word::w0())
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn inverse(&self) -> PyWord {
        PyWord(self.0.inverse())
    }

    #[pyo3(signature = (a, b, power = 1))]
    fn evaluate(&self, a: &PyPerm, b: &PyPerm, power: u64) -> PyResult<PyPerm> {
        self.0.evaluate_power(power, &a.0, &b.0).map(PyPerm).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word({:?})", self.0.to_string())
    }
}

/// Catalog JSON of the trees admitted by `word^power` under the given limits.
#[pyfunction]
#[pyo3(signature = (word = "AbaBABab", kappa = 16, max_path = 4, cycle_mode = "none", power = 60, power_limit = None))]
fn enumerate_trees(
    word: &str,
    kappa: usize,
    max_path: usize,
    cycle_mode: &str,
    power: u64,
    power_limit: Option<u64>,
) -> PyResult<String> {
    let w: Word = word.parse().map_err(err)?;
    let cycles: CycleRule = cycle_mode.parse().map_err(err)?;
    let mut c = EnumConstraints::new(kappa, max_path, cycles, power);
    if let Some(l) = power_limit {
        c = c.with_power_limit(l);
    }
    let records = enumerate_admitting_trees(&w, &c).map_err(err)?;
    let entries: Vec<_> = records.iter().map(|r| r.to_entry()).collect();
    Ok(symdiam::abgraph::write_catalog(&entries))
}

/// `(polynomial, equal, surplus, deficit)` for a catalog against `f`, `h2` or `h3`.
#[pyfunction]
#[pyo3(signature = (catalog, against = "f"))]
fn compare_catalog(catalog: &str, against: &str) -> PyResult<(String, bool, String, String)> {
    let entries = symdiam::abgraph::read_catalog(catalog).map_err(err)?;
    let poly = aggregate_entries(&entries);
    let want = reference(against)?;
    let (surplus, deficit) = poly.diff(&want);
    Ok((poly.to_string(), poly == want, surplus.to_string(), deficit.to_string()))
}

#[pyfunction]
#[pyo3(signature = (poly = "f", scale = 0.999))]
fn threshold(poly: &str, scale: f64) -> PyResult<f64> {
    symdiam::spectrum::solve_threshold(&reference(poly)?, scale).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (poly = "f", scale = 0.999, start = 0.63, steps = 9))]
fn iterate_map(poly: &str, scale: f64, start: f64, steps: usize) -> PyResult<Vec<f64>> {
    symdiam::spectrum::iterate_map(&reference(poly)?, scale, start, steps).map_err(err)
}

#[pyfunction]
fn mixing_length(n: u64, k: u32, eps: f64) -> PyResult<BigUint> {
    symdiam::walks::mixing_length(n, k, eps).map_err(err)
}

/// `(case, anchor points, anchor images)`.
#[pyfunction(name = "select_case")]
fn py_select_case(a: &PyPerm) -> PyResult<(String, Vec<u32>, Vec<u32>)> {
    let sel = select_case(&a.0).map_err(err)?;
    let case = serde_json::to_value(sel.case_id).map_err(err)?;
    Ok((
        case.as_str().unwrap_or_default().to_string(),
        sel.anchor.points().to_vec(),
        sel.anchor.images().to_vec(),
    ))
}

/// Runs the reduction pipeline from `a`; returns the report JSON.
#[pyfunction]
#[pyo3(signature = (a, seed, target = 1.0 / 3.0 - 0.01, trials = 20, max_steps = 12))]
fn reduce(py: Python<'_>, a: &PyPerm, seed: u64, target: f64, trials: usize, max_steps: usize) -> PyResult<String> {
    let cfg = ReductionConfig { target, trials, max_steps, seed };
    let a0 = a.0.clone();
    let run = py.detach(move || run_reduction(&[], &a0, &cfg, &UniformConditional)).map_err(err)?;
    to_json(&run)
}

#[pyfunction]
fn verify_lemma5() -> PyResult<String> {
    to_json(&symdiam::reducer::verify_lemma5())
}

/// The full acceptance suite as JSON.
#[pyfunction]
fn verify_all(py: Python<'_>, seed: u64) -> PyResult<String> {
    let report = py.detach(move || symdiam::verify::verify_all(seed));
    to_json(&report)
}

#[pymodule]
fn symdiam_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPerm>()?;
    m.add_class::<PyWord>()?;
    m.add_function(wrap_pyfunction!(enumerate_trees, m)?)?;
    m.add_function(wrap_pyfunction!(compare_catalog, m)?)?;
    m.add_function(wrap_pyfunction!(threshold, m)?)?;
    m.add_function(wrap_pyfunction!(iterate_map, m)?)?;
    m.add_function(wrap_pyfunction!(mixing_length, m)?)?;
    m.add_function(wrap_pyfunction!(py_select_case, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(verify_lemma5, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
