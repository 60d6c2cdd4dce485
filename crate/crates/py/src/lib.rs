//! Python bindings: high-precision reals, moments by route, exact tables and
//! verification suites.

use cotmoments::cfn;
use cotmoments::hp::DEFAULT_DIGITS;
use cotmoments::moments::{self, Route};
use cotmoments::suites::{self, Suite, SuiteConfig};
use cotmoments::Error;
use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

const DEFAULT_N: usize = 100_000;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidArgument(m) => PyValueError::new_err(m),
        e @ Error::NonConvergence { .. } => PyArithmeticError::new_err(e.to_string()),
        e => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Arbitrary-precision real with a fixed number of decimal digits.
#[pyclass(name = "HpReal", module = "cotmoments_py", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyHpReal {
    pub inner: cotmoments::HpReal,
}

impl From<cotmoments::HpReal> for PyHpReal {
    fn from(inner: cotmoments::HpReal) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyHpReal {
    #[new]
    #[pyo3(signature = (text, digits = DEFAULT_DIGITS))]
    fn new(text: &str, digits: u32) -> PyResult<Self> {
        cotmoments::HpReal::parse(text, digits)
            .map(Self::from)
            .ok_or_else(|| PyValueError::new_err(format!("cannot parse '{text}' as a real")))
    }

    #[getter]
    fn digits(&self) -> u32 {
        self.inner.digits()
    }

    /// Decimal string with `sig` significant digits (default: full precision).
    #[pyo3(signature = (sig = None))]
    fn to_decimal(&self, sig: Option<usize>) -> String {
        self.inner.to_decimal(sig.unwrap_or(self.inner.digits() as usize))
    }

    fn __float__(&self) -> f64 {
        self.inner.to_f64()
    }

    fn __str__(&self) -> String {
        self.to_decimal(None)
    }

    fn __repr__(&self) -> String {
        format!("HpReal('{}', digits={})", self.to_decimal(None), self.inner.digits())
    }

    fn __add__(&self, o: &Self) -> Self {
        (&self.inner + &o.inner).into()
    }

    fn __sub__(&self, o: &Self) -> Self {
        (&self.inner - &o.inner).into()
    }

    fn __mul__(&self, o: &Self) -> Self {
        (&self.inner * &o.inner).into()
    }

    fn __truediv__(&self, o: &Self) -> PyResult<Self> {
        if o.inner.is_zero() {
            return Err(PyZeroDivisionError::new_err("division by zero"));
        }
        Ok((&self.inner / &o.inner).into())
    }

    fn __neg__(&self) -> Self {
        (-&self.inner).into()
    }

    fn __abs__(&self) -> Self {
        self.inner.abs().into()
    }

    fn __eq__(&self, o: &Self) -> bool {
        self.inner == o.inner
    }

    fn __lt__(&self, o: &Self) -> bool {
        self.inner < o.inner
    }

    fn __gt__(&self, o: &Self) -> bool {
        self.inner > o.inner
    }
}

/// `C(m)` from one route, with its error bound.
#[pyclass(name = "MomentValue", module = "cotmoments_py", frozen, get_all)]
pub struct PyMomentValue {
    pub m: u32,
    pub route: String,
    pub value: PyHpReal,
    pub terms: Option<usize>,
    pub error_bound: f64,
}

#[pymethods]
impl PyMomentValue {
    fn __repr__(&self) -> String {
        format!("MomentValue(m={}, route='{}', value={}, error_bound={:e})", self.m, self.route, self.value.inner, self.error_bound)
    }
}

/// Outcome of a verification suite.
#[pyclass(name = "VerificationReport", module = "cotmoments_py", frozen)]
pub struct PyReport {
    inner: cotmoments::VerificationReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn suite(&self) -> &str {
        &self.inner.suite
    }

    #[getter]
    fn passed(&self) -> usize {
        self.inner.summary.pass
    }

    #[getter]
    fn failed(&self) -> usize {
        self.inner.summary.fail
    }

    pub fn all_pass(&self) -> bool {
        self.inner.all_pass()
    }

    /// Ids of the failing checks.
    pub fn failures(&self) -> Vec<String> {
        self.inner.failures().map(|c| c.id.clone()).collect()
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.checks.len()
    }

    fn __repr__(&self) -> String {
        format!("VerificationReport(suite='{}', passed={}, failed={})", self.inner.suite, self.inner.summary.pass, self.inner.summary.fail)
    }
}

fn tol_or_default(tol: Option<f64>, digits: u32) -> f64 {
    tol.unwrap_or_else(|| suites::default_tol(digits))
}

/// `C(m)` by route `eta`, `quad`, `cfn` or `nested`.
#[pyfunction]
#[pyo3(signature = (m, route = "eta", digits = DEFAULT_DIGITS, n = DEFAULT_N, tol = None))]
pub fn moment(py: Python<'_>, m: u32, route: &str, digits: u32, n: usize, tol: Option<f64>) -> PyResult<PyMomentValue> {
    let r = Route::parse(route).ok_or_else(|| PyValueError::new_err(format!("unknown route '{route}'")))?;
    let tol = tol_or_default(tol, digits);
    let v = py.detach(|| moments::moment(m, r, digits, n, tol)).map_err(to_py)?;
    Ok(PyMomentValue { m: v.m, route: v.route.name().to_string(), value: v.value.into(), terms: v.terms, error_bound: v.error_bound })
}

/// Exact table `t0`, `t1`, `h0` or `h1` as rows of `fractions.Fraction`.
#[pyfunction]
pub fn table(py: Python<'_>, which: &str, kmax: usize, nmax: usize) -> PyResult<Vec<Vec<Py<PyAny>>>> {
    let grid = match which {
        "t0" => cfn::build_t0(kmax, nmax).map(|t| t.grid),
        "t1" => cfn::build_t1(kmax, nmax).map(|t| t.grid),
        "h0" => cfn::build_h0(kmax, nmax).map(|t| t.grid),
        "h1" => cfn::build_h1(kmax, nmax).map(|t| t.grid),
        _ => return Err(PyValueError::new_err(format!("unknown table '{which}'"))),
    }
    .map_err(to_py)?;
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    grid.rows()
        .iter()
        .map(|row| row.iter().map(|q| fraction.call1((q.to_string(),)).map(Bound::unbind)).collect())
        .collect()
}

/// Run a verification suite (`all`, `tables`, `closed-forms`, `consequences`,
/// `gf`, `routes`, `h-reduction`).
#[pyfunction]
#[pyo3(signature = (suite = "all", digits = DEFAULT_DIGITS, n = DEFAULT_N, tol = None))]
pub fn verify(py: Python<'_>, suite: &str, digits: u32, n: usize, tol: Option<f64>) -> PyResult<PyReport> {
    let s: Suite = suite.parse().map_err(to_py)?;
    let cfg = SuiteConfig::new(digits, n, tol).map_err(to_py)?;
    let inner = py.detach(|| suites::run(s, &cfg)).map_err(to_py)?;
    Ok(PyReport { inner })
}

/// Named constant: `pi`, `log2`, `etaN` or `zetaN`.
#[pyfunction]
#[pyo3(signature = (name, digits = DEFAULT_DIGITS))]
pub fn constant(name: &str, digits: u32) -> PyResult<PyHpReal> {
    suites::constant(name, digits).map(PyHpReal::from).map_err(to_py)
}

#[pymodule]
fn cotmoments_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHpReal>()?;
    m.add_class::<PyMomentValue>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(moment, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(constant, m)?)?;
    Ok(())
}
