//! Python bindings. Rationals cross as `fractions.Fraction`, counts as `int`.

use binrep_core as core;
use binrep_core::Error;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(binrep, HypothesisError, PyValueError, "The alphabet has no odd digit.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::OddElementRequired { .. } => HypothesisError::new_err(e.to_string()),
        e if e.is_input_error() => PyValueError::new_err(e.to_string()),
        e => PyRuntimeError::new_err(e.to_string()),
    }
}

/// A digit alphabet containing 0, e.g. `DigitSet("0,1,8")` or `DigitSet([0, 1, 8])`.
#[pyclass(name = "DigitSet", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyDigitSet(core::DigitSet);

#[pymethods]
impl PyDigitSet {
    #[new]
    fn new(digits: &Bound<'_, PyAny>) -> PyResult<Self> {
        let set = match digits.extract::<String>() {
            Ok(text) => core::DigitSet::parse(&text),
            Err(_) => core::DigitSet::new(digits.extract::<Vec<u64>>()?),
        };
        set.map(PyDigitSet).map_err(to_py)
    }

    #[getter]
    fn elements(&self) -> Vec<u64> {
        self.0.elements().to_vec()
    }

    #[getter]
    fn evens(&self) -> Vec<u64> {
        self.0.evens().to_vec()
    }

    #[getter]
    fn odds(&self) -> Vec<u64> {
        self.0.odds().to_vec()
    }

    #[getter]
    fn max_digit(&self) -> u64 {
        self.0.max_digit()
    }

    fn has_odd(&self) -> bool {
        self.0.has_odd()
    }

    /// `{a_z - a : a in A}`.
    fn reflect(&self) -> Self {
        PyDigitSet(self.0.reflect())
    }

    fn __len__(&self) -> usize {
        self.0.cardinality()
    }

    fn __contains__(&self, digit: i64) -> bool {
        self.0.contains(digit)
    }

    fn __str__(&self) -> String {
        self.0.braced()
    }

    fn __repr__(&self) -> String {
        format!("DigitSet(\"{}\")", self.0)
    }
}

/// Memoized `f_A`; keep one per alphabet to reuse its table.
#[pyclass(name = "Counter")]
struct PyCounter(core::CountingContext);

#[pymethods]
impl PyCounter {
    #[new]
    fn new(alphabet: &PyDigitSet) -> Self {
        PyCounter(core::CountingContext::new(alphabet.0.clone()))
    }

    fn count(&mut self, n: BigInt) -> BigUint {
        self.0.count(n)
    }

    fn omega(&mut self, k: u32, m: u64) -> Vec<BigUint> {
        self.0.omega(k, m).entries
    }

    fn summatory(&mut self, r: u32, m: u64) -> PyResult<BigUint> {
        self.0.summatory(r, m).map_err(to_py)
    }

    fn summatory_series(&mut self, r_end: u32, m: u64) -> PyResult<Vec<BigUint>> {
        self.0.summatory_series(r_end, m).map_err(to_py)
    }

    fn h_term(&mut self, r: u32, m: u64) -> PyResult<BigInt> {
        if r == 0 {
            return Err(PyValueError::new_err("h_term needs r >= 1"));
        }
        Ok(self.0.h_term(r, m))
    }

    fn __len__(&self) -> usize {
        self.0.memo_len()
    }
}

#[pyfunction]
fn count(alphabet: &PyDigitSet, n: BigInt) -> BigUint {
    core::CountingContext::new(alphabet.0.clone()).count(n)
}

/// Enumerates digit strings directly; slow, for cross-checks.
#[pyfunction]
fn count_bruteforce(alphabet: &PyDigitSet, n: u64) -> PyResult<u64> {
    core::count_bruteforce(&alphabet.0, n).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (alphabet, r, m = 1))]
fn summatory(alphabet: &PyDigitSet, r: u32, m: u64) -> PyResult<BigUint> {
    core::CountingContext::new(alphabet.0.clone()).summatory(r, m).map_err(to_py)
}

#[pyfunction]
fn transfer_matrix(alphabet: &PyDigitSet) -> Vec<Vec<u8>> {
    core::TransferMatrix::build(&alphabet.0).rows()
}

/// Coefficients of `det(M_A - xI)`, constant term first.
#[pyfunction]
fn char_poly(alphabet: &PyDigitSet) -> PyResult<Vec<BigInt>> {
    let g = core::TransferMatrix::build(&alphabet.0).char_poly().map_err(to_py)?;
    Ok(g.coefficients().to_vec())
}

#[pyfunction]
fn row_sum_bound<'py>(py: Python<'py>, alphabet: &PyDigitSet) -> PyResult<Bound<'py, PyDict>> {
    let rep = core::TransferMatrix::build(&alphabet.0)
        .row_sum_bound_check(&alphabet.0)
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("max_row_sum", rep.max_row_sum)?;
    d.set_item("bound", rep.bound)?;
    d.set_item("holds", rep.holds)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (alphabet, m = 1, r_max = core::asymptotics::DEFAULT_R_MAX))]
fn growth_coefficient<'py>(
    py: Python<'py>,
    alphabet: &PyDigitSet,
    m: u64,
    r_max: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let options = core::GrowthOptions { r_max, ..Default::default() };
    let rep = core::growth_coefficient_with(&alphabet.0, m, &options).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("c", rep.coefficient.clone())?;
    d.set_item("decimal", rep.decimal.clone())?;
    d.set_item("r_used", rep.r_used)?;
    d.set_item("window", rep.stability_window.clone())?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (alphabet, r, m = 1))]
fn annihilated_sum(alphabet: &PyDigitSet, r: u32, m: u64) -> PyResult<BigInt> {
    core::annihilated_sum(&alphabet.0, r, m).map_err(to_py)
}

/// `[(r, s(r, m) / |A|^r)]` for `0 <= r <= r_max`.
#[pyfunction]
#[pyo3(signature = (alphabet, m = 1, r_max = 25))]
fn ratio_trace(alphabet: &PyDigitSet, m: u64, r_max: u32) -> PyResult<Vec<(u32, BigRational)>> {
    core::ratio_trace(&alphabet.0, m, r_max).map_err(to_py)
}

/// `(k, lower, upper)` bounding `c({0,1,t}, 1)`.
#[pyfunction]
fn bounds_01t(t: u64) -> PyResult<(u32, BigRational, BigRational)> {
    let b = core::bounds_01t(t).map_err(to_py)?;
    Ok((b.k, b.lower, b.upper))
}

#[pyfunction]
fn verify_reflection<'py>(py: Python<'py>, alphabet: &PyDigitSet) -> PyResult<Bound<'py, PyDict>> {
    let rep = core::verify_reflection(&alphabet.0).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("reflected", PyDigitSet(rep.reflected.clone()))?;
    d.set_item("entry_mismatch", rep.entry_mismatch)?;
    d.set_item("similar", rep.similar)?;
    d.set_item("charpoly_equal", rep.charpoly_equal())?;
    d.set_item("passed", rep.passed())?;
    Ok(d)
}

/// `(c(A, m), c(Ã, m))`.
#[pyfunction]
#[pyo3(signature = (alphabet, m = 1))]
fn compare_growth_pair(alphabet: &PyDigitSet, m: u64) -> PyResult<(BigRational, BigRational)> {
    let p = core::compare_growth_pair(&alphabet.0, m).map_err(to_py)?;
    Ok((p.c, p.c_reflected))
}

#[pymodule]
fn binrep(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDigitSet>()?;
    m.add_class::<PyCounter>()?;
    m.add("HypothesisError", m.py().get_type::<HypothesisError>())?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(count_bruteforce, m)?)?;
    m.add_function(wrap_pyfunction!(summatory, m)?)?;
    m.add_function(wrap_pyfunction!(transfer_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(char_poly, m)?)?;
    m.add_function(wrap_pyfunction!(row_sum_bound, m)?)?;
    m.add_function(wrap_pyfunction!(growth_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(annihilated_sum, m)?)?;
    m.add_function(wrap_pyfunction!(ratio_trace, m)?)?;
    m.add_function(wrap_pyfunction!(bounds_01t, m)?)?;
    m.add_function(wrap_pyfunction!(verify_reflection, m)?)?;
    m.add_function(wrap_pyfunction!(compare_growth_pair, m)?)?;
    Ok(())
}
