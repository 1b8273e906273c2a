//! Python bindings. The extension module is importable as `weylstack`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use weylstack::classify::classify as classify_twist;
use weylstack::cli::{self, OutputFormat, RunConfig, Suite, DEFAULT_SEED};
use weylstack::graded::{koszul_homology_window, Window};
use weylstack::semigroup;
use weylstack::weyl::parse_weyl;
use weylstack::{TwistParameter, WeightSystem, WeylElement};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn weight_system(weights: Vec<u64>) -> PyResult<WeightSystem> {
    WeightSystem::new(weights).map_err(value_error)
}

fn parse_twist(s: &str) -> PyResult<TwistParameter> {
    s.parse().map_err(value_error)
}

/// An element of the Weyl algebra in normal order.
#[pyclass(name = "WeylElement", module = "weylstack", frozen)]
struct PyWeylElement {
    inner: WeylElement,
}

impl PyWeylElement {
    fn same_arity(&self, other: &Self) -> PyResult<()> {
        if self.inner.nvars() != other.inner.nvars() {
            return Err(value_error(format!(
                "arity mismatch: {} vs {} variables",
                self.inner.nvars(),
                other.inner.nvars()
            )));
        }
        Ok(())
    }

    fn wrap(inner: WeylElement) -> Self {
        PyWeylElement { inner }
    }
}

#[pymethods]
impl PyWeylElement {
    /// Parses `expr`; `weights` fixes the arity and enables `E`.
    #[new]
    #[pyo3(signature = (expr, weights = None))]
    fn new(expr: &str, weights: Option<Vec<u64>>) -> PyResult<Self> {
        let w = weights.map(weight_system).transpose()?;
        parse_weyl(expr, w.as_ref()).map(Self::wrap).map_err(value_error)
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Highest total power of the d_i; raises on zero.
    fn order(&self) -> PyResult<u32> {
        self.inner.order().map_err(value_error)
    }

    /// Weighted degree, `None` for zero; raises when not homogeneous.
    fn degree(&self, weights: Vec<u64>) -> PyResult<Option<i64>> {
        let w = weight_system(weights)?;
        self.inner.homogeneous_degree(&w).map_err(value_error)
    }

    fn commutator(&self, other: &Self) -> PyResult<Self> {
        self.same_arity(other)?;
        Ok(Self::wrap(self.inner.commutator(&other.inner)))
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.same_arity(other)?;
        Ok(Self::wrap(self.inner.multiply(&other.inner)))
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.same_arity(other)?;
        Ok(Self::wrap(self.inner.add(&other.inner)))
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.same_arity(other)?;
        Ok(Self::wrap(self.inner.sub(&other.inner)))
    }

    fn __neg__(&self) -> Self {
        Self::wrap(self.inner.neg())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("WeylElement('{}')", self.inner)
    }
}

#[pyfunction]
fn frobenius(weights: Vec<u64>) -> PyResult<i64> {
    semigroup::frobenius(&weight_system(weights)?).map_err(value_error)
}

#[pyfunction]
fn gaps(weights: Vec<u64>) -> PyResult<Vec<u64>> {
    semigroup::gaps(&weight_system(weights)?).map_err(value_error)
}

#[pyfunction]
fn is_member(weights: Vec<u64>, k: i64) -> PyResult<bool> {
    Ok(semigroup::is_member(&weight_system(weights)?, k))
}

/// The classification as a JSON document.
#[pyfunction]
fn classify(weights: Vec<u64>, twist: &str) -> PyResult<String> {
    Ok(classify_twist(&weight_system(weights)?, &parse_twist(twist)?).to_json())
}

fn window(
    w: &WeightSystem,
    degree_lo: Option<i64>,
    degree_hi: Option<i64>,
    order: Option<u32>,
    padding: Option<u64>,
) -> PyResult<Window> {
    let d = Window::default_for(w);
    Window::new(
        degree_lo.unwrap_or(d.degree_lo),
        degree_hi.unwrap_or(d.degree_hi),
        order.unwrap_or(d.order_bound),
        padding.unwrap_or(d.padding),
    )
    .map_err(value_error)
}

/// The windowed Koszul report as a JSON document.
#[pyfunction]
#[pyo3(signature = (weights, twist, degree_lo = None, degree_hi = None, order = None, padding = None))]
fn koszul_window(
    py: Python<'_>,
    weights: Vec<u64>,
    twist: &str,
    degree_lo: Option<i64>,
    degree_hi: Option<i64>,
    order: Option<u32>,
    padding: Option<u64>,
) -> PyResult<String> {
    let w = weight_system(weights)?;
    let lam = parse_twist(twist)?;
    let win = window(&w, degree_lo, degree_hi, order, padding)?;
    let report = py
        .detach(|| koszul_homology_window(&w, &lam, &win))
        .map_err(value_error)?;
    Ok(report.to_json().to_string())
}

/// Runs a verification suite; returns `(passed, checks as JSON)`.
#[pyfunction]
#[pyo3(signature = (weights, twist = "0", suite = "all", seed = DEFAULT_SEED))]
fn verify(py: Python<'_>, weights: Vec<u64>, twist: &str, suite: &str, seed: u64) -> PyResult<(bool, String)> {
    let suite = match suite {
        "euler" => Suite::Euler,
        "delta" => Suite::Delta,
        "koszul" => Suite::Koszul,
        "witnesses" => Suite::Witnesses,
        "all" => Suite::All,
        other => return Err(value_error(format!("unknown suite `{other}`"))),
    };
    let w = weight_system(weights)?;
    let cfg = RunConfig {
        window: Window::default_for(&w),
        weights: w,
        twist: parse_twist(twist)?,
        output: OutputFormat::Json,
        seed,
    };
    let checks = py.detach(|| cli::run_suite(&cfg, suite));
    let passed = checks.iter().all(|c| c.passed);
    let doc = serde_json::to_string(&checks).map_err(value_error)?;
    Ok((passed, doc))
}

/// Runs the command-line program in-process: `(exit code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let mut full = vec!["weylstack".to_string()];
    full.extend(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(full, &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}

#[pymodule]
#[pyo3(name = "weylstack")]
fn weylstack_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWeylElement>()?;
    m.add_function(wrap_pyfunction!(frobenius, m)?)?;
    m.add_function(wrap_pyfunction!(gaps, m)?)?;
    m.add_function(wrap_pyfunction!(is_member, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(koszul_window, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
