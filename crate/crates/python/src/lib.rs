//! Python bindings: sequences, certified reals, searches, reductions and
//! the proof pipeline.

use num_bigint::{BigInt, BigUint};
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

use fibluc::bounds::{self, Precision};
use fibluc::cli::{emit_report, parse_certificate, run_pipeline, Format, PipelineConfig, ProofCertificate};
use fibluc::realfield::{self, cf_expand};
use fibluc::reduction::{gamma_fib, gamma_sqrt5};
use fibluc::search::{self, SearchDomain, SearchOptions};
use fibluc::sequences;

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn precision(start: u32, cap: u32) -> PyResult<Precision> {
    if start < 32 || cap < start {
        return Err(value_err("need 32 <= precision <= precision_cap"));
    }
    Ok(Precision { start, cap })
}

#[pyfunction]
fn fib(n: u64) -> BigUint {
    sequences::fib(n)
}

#[pyfunction]
fn lucas(n: u64) -> BigUint {
    sequences::lucas(n)
}

/// Index `r` with `L_r == v`, or `None`.
#[pyfunction]
fn lucas_index(v: BigUint) -> PyResult<Option<u64>> {
    sequences::lucas_index_of(&v).map_err(value_err)
}

#[pyclass(frozen, eq, ord, hash, skip_from_py_object, module = "fibluc")]
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Solution {
    #[pyo3(get)]
    n: u64,
    #[pyo3(get)]
    m: u64,
    #[pyo3(get)]
    r: u64,
    #[pyo3(get)]
    x: u64,
}

#[pymethods]
impl Solution {
    #[new]
    fn new(n: u64, m: u64, r: u64, x: u64) -> Self {
        Solution { n, m, r, x }
    }

    /// Whether `F_n^x - F_m^x == L_r` holds exactly.
    fn holds(&self) -> bool {
        search::Solution::new(self.n, self.m, self.r, self.x).holds()
    }

    fn in_theorem_list(&self) -> bool {
        search::in_theorem_list(&search::Solution::new(self.n, self.m, self.r, self.x))
    }

    fn __repr__(&self) -> String {
        format!("Solution(n={}, m={}, r={}, x={})", self.n, self.m, self.r, self.x)
    }
}

impl From<search::Solution> for Solution {
    fn from(s: search::Solution) -> Self {
        Solution { n: s.n, m: s.m, r: s.r, x: s.x }
    }
}

/// Exhaustive search over `n in [4, n_cap]`, `n <= 2m + 4`, `x in [2, x_cap]`.
#[pyfunction]
#[pyo3(signature = (n_cap = 270, x_cap = 102, workers = 0, prefilter = true, prune = true))]
fn exhaustive_search(
    py: Python<'_>,
    n_cap: u64,
    x_cap: u64,
    workers: usize,
    prefilter: bool,
    prune: bool,
) -> PyResult<Vec<Solution>> {
    let mut d = SearchDomain::main(n_cap, x_cap);
    d.r_prune = prune;
    let found = py
        .detach(|| search::exhaustive_search(&d, SearchOptions { workers, prefilter }))
        .map_err(value_err)?;
    Ok(found.into_iter().map(Solution::from).collect())
}

/// All `(r, x)` with `p^x - q^x == L_r` for `x <= x_cap`.
#[pyfunction]
#[pyo3(signature = (p, q, x_cap = 102))]
fn corollary_search(p: u64, q: u64, x_cap: u64) -> PyResult<Vec<(u64, u64)>> {
    search::corollary_search(p, q, x_cap).map_err(value_err)
}

/// Certified partial quotients of `log F_n / log alpha` (`n` given) or of
/// `log sqrt5 / log alpha` (`n` omitted).
#[pyfunction]
#[pyo3(signature = (count, n = None, precision_cap = 8192))]
fn continued_fraction(py: Python<'_>, count: usize, n: Option<u64>, precision_cap: u32) -> PyResult<Vec<BigUint>> {
    let cf = py.detach(|| match n {
        Some(n) if n >= 3 => cf_expand(&gamma_fib(n), count, precision_cap).map_err(value_err),
        Some(_) => Err(value_err("need n >= 3")),
        None => cf_expand(&gamma_sqrt5, count, precision_cap).map_err(value_err),
    })?;
    Ok(cf.quotients().to_vec())
}

/// Upper bound on `x` for `n <= n_cap`.
#[pyfunction]
#[pyo3(signature = (n_cap = 270, precision = 192, precision_cap = 8192))]
fn x_bound_small_n(n_cap: u64, precision: u32, precision_cap: u32) -> PyResult<BigUint> {
    bounds::solve_x_bound_small_n(n_cap, self::precision(precision, precision_cap)?).map_err(value_err)
}

/// `(m_bound, x_bound)` of the case `n > n_cap`.
#[pyfunction]
#[pyo3(signature = (precision = 192, precision_cap = 8192))]
fn bound_chain(precision: u32, precision_cap: u32) -> PyResult<(BigUint, BigUint)> {
    let p = self::precision(precision, precision_cap)?;
    let m = bounds::solve_m_bound(p).map_err(value_err)?;
    let x = bounds::x_bound_from_m(&m, p).map_err(value_err)?;
    Ok((m, x))
}

/// A real number known to lie in `[lo, hi]`.
#[pyclass(frozen, skip_from_py_object, module = "fibluc")]
#[derive(Clone)]
struct CertifiedReal(realfield::CertifiedReal);

#[pymethods]
impl CertifiedReal {
    #[new]
    #[pyo3(signature = (num, den = None, precision = 192))]
    fn new(num: BigInt, den: Option<BigInt>, precision: u32) -> PyResult<Self> {
        let den = den.unwrap_or_else(|| BigInt::from(1));
        if den == BigInt::from(0) {
            return Err(PyZeroDivisionError::new_err("zero denominator"));
        }
        Ok(CertifiedReal(realfield::CertifiedReal::from_ratio(num, den, precision)))
    }

    #[staticmethod]
    #[pyo3(signature = (text, precision = 192))]
    fn from_decimal(text: &str, precision: u32) -> Self {
        CertifiedReal(realfield::CertifiedReal::from_decimal(text, precision))
    }

    #[staticmethod]
    #[pyo3(signature = (precision = 192))]
    fn alpha(precision: u32) -> Self {
        CertifiedReal(realfield::const_alpha(precision))
    }

    #[getter]
    fn lo(&self) -> f64 {
        self.0.lo().to_f64()
    }

    #[getter]
    fn hi(&self) -> f64 {
        self.0.hi().to_f64()
    }

    #[getter]
    fn precision(&self) -> u32 {
        self.0.precision()
    }

    fn __float__(&self) -> f64 {
        self.0.to_f64()
    }

    fn contains(&self, num: BigInt, den: BigInt) -> bool {
        self.0.contains_ratio(&num, &den)
    }

    /// `True`/`False` when certain, `None` when the balls overlap.
    fn lt(&self, other: &CertifiedReal) -> Option<bool> {
        self.0.lt(&other.0)
    }

    fn __add__(&self, o: &CertifiedReal) -> Self {
        CertifiedReal(&self.0 + &o.0)
    }

    fn __sub__(&self, o: &CertifiedReal) -> Self {
        CertifiedReal(&self.0 - &o.0)
    }

    fn __mul__(&self, o: &CertifiedReal) -> Self {
        CertifiedReal(&self.0 * &o.0)
    }

    fn __truediv__(&self, o: &CertifiedReal) -> PyResult<Self> {
        self.0.div(&o.0).map(CertifiedReal).map_err(|e| PyZeroDivisionError::new_err(e.to_string()))
    }

    fn __neg__(&self) -> Self {
        CertifiedReal(-&self.0)
    }

    fn __pow__(&self, k: i64, _modulo: Option<i64>) -> PyResult<Self> {
        self.0.powi(k).map(CertifiedReal).map_err(value_err)
    }

    fn sqrt(&self) -> PyResult<Self> {
        self.0.sqrt().map(CertifiedReal).map_err(value_err)
    }

    fn ln(&self) -> PyResult<Self> {
        self.0.ln().map(CertifiedReal).map_err(value_err)
    }

    fn exp(&self) -> PyResult<Self> {
        self.0.exp().map(CertifiedReal).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!("CertifiedReal([{:e}, {:e}], {} bits)", self.lo(), self.hi(), self.0.precision())
    }
}

/// A proof certificate produced by [`prove`].
#[pyclass(frozen, module = "fibluc")]
struct Certificate(ProofCertificate);

#[pymethods]
impl Certificate {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_certificate(text).map(Certificate).map_err(value_err)
    }

    #[getter]
    fn verdict(&self) -> &'static str {
        self.0.verdict.as_str()
    }

    /// `(stage, label, verdict)` for every stage report.
    #[getter]
    fn stages(&self) -> Vec<(u8, String, &'static str)> {
        self.0.stages.iter().map(|s| (s.stage, s.report.label.clone(), s.report.verdict.as_str())).collect()
    }

    fn number(&self, stage: u8, key: &str) -> Option<String> {
        self.0.number(stage, key).map(str::to_owned)
    }

    fn to_json(&self) -> String {
        emit_report(&self.0, Format::Json)
    }

    fn __str__(&self) -> String {
        emit_report(&self.0, Format::Text)
    }

    fn __repr__(&self) -> String {
        format!("Certificate(verdict={:?}, stages={})", self.verdict(), self.0.stages.len())
    }
}

/// Runs the proof pipeline. `stages=None` runs every proof stage.
#[pyfunction]
#[pyo3(signature = (n_cap = 270, x_cap = 102, precision = 192, precision_cap = 8192, workers = 0, prefilter = true, stages = None))]
#[allow(clippy::too_many_arguments)]
fn prove(
    py: Python<'_>,
    n_cap: u64,
    x_cap: u64,
    precision: u32,
    precision_cap: u32,
    workers: usize,
    prefilter: bool,
    stages: Option<Vec<u8>>,
) -> PyResult<Certificate> {
    let cfg = PipelineConfig {
        precision,
        precision_cap,
        n_cap,
        x_cap,
        workers,
        prefilter,
        stages: stages.unwrap_or_default(),
        out: None,
    };
    cfg.validate().map_err(value_err)?;
    Ok(Certificate(py.detach(|| run_pipeline(&cfg))))
}

#[pymodule]
#[pyo3(name = "fibluc")]
fn fibluc_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Solution>()?;
    m.add_class::<CertifiedReal>()?;
    m.add_class::<Certificate>()?;
    m.add_function(wrap_pyfunction!(fib, m)?)?;
    m.add_function(wrap_pyfunction!(lucas, m)?)?;
    m.add_function(wrap_pyfunction!(lucas_index, m)?)?;
    m.add_function(wrap_pyfunction!(exhaustive_search, m)?)?;
    m.add_function(wrap_pyfunction!(corollary_search, m)?)?;
    m.add_function(wrap_pyfunction!(continued_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(x_bound_small_n, m)?)?;
    m.add_function(wrap_pyfunction!(bound_chain, m)?)?;
    m.add_function(wrap_pyfunction!(prove, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pyo3::types::PyDict;

    fn with_module(code: &std::ffi::CStr) {
        Python::attach(|py| {
            let m = PyModule::new(py, "fibluc").unwrap();
            fibluc_module(&m).unwrap();
            let globals = PyDict::new(py);
            globals.set_item("fibluc", m).unwrap();
            py.run(code, Some(&globals), None).unwrap();
        });
    }

    #[test]
    fn sequences_and_search() {
        with_module(
            c"
assert fibluc.fib(100) == 354224848179261915075
assert fibluc.lucas_index(fibluc.lucas(300)) == 300
assert fibluc.lucas_index(5) is None
assert fibluc.exhaustive_search(40, 20) == []
s = fibluc.Solution(6, 2, 4, 1)
assert s.holds()
assert fibluc.corollary_search(5, 1) == [(3, 1)]
",
        );
    }

    #[test]
    fn reals_and_bounds() {
        with_module(
            c"
a = fibluc.CertifiedReal.alpha(256)
r = a * a - a - fibluc.CertifiedReal(1)
assert abs(float(r)) < 1e-60
third = fibluc.CertifiedReal(1, 3)
assert third.contains(1, 3)
assert third.lt(fibluc.CertifiedReal(1, 2)) is True
assert fibluc.continued_fraction(49)[20] == 29
assert fibluc.x_bound_small_n() < 643 * 10**11
",
        );
    }

    #[test]
    fn certificate() {
        with_module(
            c"
c = fibluc.prove(stages=[6, 7, 8])
assert c.verdict == 'verified', str(c)
assert c.number(7, 'x_cap_out') == '100'
assert fibluc.Certificate.from_json(c.to_json()).verdict == 'verified'
",
        );
    }
}
