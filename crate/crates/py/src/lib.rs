//! Python bindings. Rational values cross the boundary as
//! `fractions.Fraction`; rational arguments accept anything whose `str()` is
//! `"p/q"` or `"p"` (ints, Fractions, strings).

use polybern::harness::{Row, VerifyRequest};
use polybern::{
    Error, FamilyQuery, Identity, IndexVector, Rational, StirlingKind, StirlingTable,
    TruncatedSeries,
};
use pyo3::exceptions::{PyIndexError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyList;

fn to_pyerr(e: Error) -> PyErr {
    if e.is_internal() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn rat_arg(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = obj.str()?.to_string();
    text.parse::<Rational>().map_err(to_pyerr)
}

fn opt_rat(obj: Option<&Bound<'_, PyAny>>) -> PyResult<Rational> {
    obj.map(rat_arg).transpose().map(|v| v.unwrap_or_else(Rational::zero))
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.to_string(),))
}

fn fractions<'py>(py: Python<'py>, values: &[Rational]) -> PyResult<Bound<'py, PyList>> {
    let items = values.iter().map(|v| fraction(py, v)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

type RowTuple<'py> = (String, usize, Bound<'py, PyAny>, Bound<'py, PyAny>, bool);

fn index(ks: Vec<i64>) -> PyResult<IndexVector> {
    IndexVector::new(ks).map_err(to_pyerr)
}

/// Truncated power series with exact rational coefficients.
#[pyclass(name = "Series", module = "pypolybern", skip_from_py_object)]
#[derive(Clone)]
struct PySeries {
    inner: TruncatedSeries,
}

#[pymethods]
impl PySeries {
    #[new]
    fn new(coeffs: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        if coeffs.is_empty() {
            return Err(PyValueError::new_err("a series needs at least one coefficient"));
        }
        let coeffs = coeffs.iter().map(rat_arg).collect::<PyResult<Vec<_>>>()?;
        Ok(PySeries { inner: TruncatedSeries::from_coeffs(coeffs) })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn coeffs<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        fractions(py, self.inner.coeffs())
    }

    fn __len__(&self) -> usize {
        self.inner.coeffs().len()
    }

    fn __getitem__<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
        match self.inner.coeffs().get(n) {
            Some(c) => fraction(py, c),
            None => Err(PyIndexError::new_err(format!("coefficient {n} is past order {}", self.inner.order()))),
        }
    }

    fn __add__(&self, other: &PySeries) -> PySeries {
        PySeries { inner: self.inner.add(&other.inner) }
    }

    fn __sub__(&self, other: &PySeries) -> PySeries {
        PySeries { inner: self.inner.sub(&other.inner) }
    }

    fn __mul__(&self, other: &PySeries) -> PySeries {
        PySeries { inner: self.inner.mul(&other.inner) }
    }

    fn __eq__(&self, other: &PySeries) -> bool {
        self.inner == other.inner
    }

    fn invert(&self) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.invert().map_err(to_pyerr)? })
    }

    /// `self(inner(t))`; `inner` must have zero constant term.
    fn compose(&self, inner: &PySeries) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.compose(&inner.inner).map_err(to_pyerr)? })
    }

    fn div_tpow(&self, r: usize) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.div_tpow(r).map_err(to_pyerr)? })
    }

    fn derive(&self) -> PySeries {
        PySeries { inner: self.inner.derive() }
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("series serialize")
    }

    fn __repr__(&self) -> String {
        let parts: Vec<String> = self.inner.coeffs().iter().map(|c| c.to_string()).collect();
        format!("Series(order={}, [{}])", self.inner.order(), parts.join(", "))
    }
}

/// Values `n = 0..=order` of one Bernoulli-type family.
#[pyclass(name = "SequenceResult", module = "pypolybern")]
struct PySequence {
    inner: polybern::SequenceResult,
}

#[pymethods]
impl PySequence {
    #[getter]
    fn family(&self) -> &'static str {
        self.inner.family.name()
    }

    #[getter]
    fn ks(&self) -> Vec<i64> {
        self.inner.ks.ks().to_vec()
    }

    #[getter]
    fn lam<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.lambda)
    }

    #[getter]
    fn x<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.x)
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order
    }

    #[getter]
    fn values<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        fractions(py, &self.inner.values)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("result serializes")
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn __repr__(&self) -> String {
        format!(
            "SequenceResult(family={}, ks={}, lambda={}, x={}, order={})",
            self.inner.family, self.inner.ks, self.inner.lambda, self.inner.x, self.inner.order
        )
    }
}

/// Result of one identity check.
#[pyclass(name = "VerificationReport", module = "pypolybern")]
struct PyReport {
    inner: polybern::VerificationReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn identity(&self) -> &'static str {
        self.inner.identity.name()
    }

    /// `"pass"`, `"fail"` or `"diagnostic"`.
    #[getter]
    fn status(&self) -> String {
        serde_json::to_value(self.inner.status)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default()
    }

    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed()
    }

    /// `(check, n, lhs, rhs, equal)` tuples.
    fn rows<'py>(&self, py: Python<'py>) -> PyResult<Vec<RowTuple<'py>>> {
        self.inner
            .rows
            .iter()
            .map(|Row { check, n, lhs, rhs, equal }| {
                Ok((check.clone(), *n, fraction(py, lhs)?, fraction(py, rhs)?, *equal))
            })
            .collect()
    }

    /// `(n, M, residual_decimal)` tuples for partial-sum diagnostics.
    fn residuals(&self) -> Vec<(usize, usize, String)> {
        self.inner
            .residuals
            .iter()
            .map(|r| (r.n, r.m, r.residual_decimal.clone()))
            .collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }
}

#[pyfunction]
fn multi_polylog(ks: Vec<i64>, order: usize) -> PyResult<PySeries> {
    Ok(PySeries { inner: polybern::multi_polylog(&index(ks)?, order) })
}

#[pyfunction]
#[pyo3(signature = (x, lam, order))]
fn degenerate_exp(x: &Bound<'_, PyAny>, lam: &Bound<'_, PyAny>, order: usize) -> PyResult<PySeries> {
    Ok(PySeries { inner: polybern::degenerate_exp(&rat_arg(x)?, &rat_arg(lam)?, order) })
}

#[pyfunction]
fn one_minus_exp_neg(order: usize) -> PySeries {
    PySeries { inner: polybern::one_minus_exp_neg(order) }
}

#[pyfunction]
fn log1p_series(order: usize) -> PySeries {
    PySeries { inner: polybern::log1p_series(order) }
}

#[pyfunction]
fn polyexp_ei(k: i64, order: usize) -> PySeries {
    PySeries { inner: polybern::polyexp_ei(k, order) }
}

/// Stirling triangle as nested lists of Python ints; `kind` is
/// `"second"`, `"first-unsigned"` or `"first-signed"`.
#[pyfunction]
fn stirling<'py>(py: Python<'py>, kind: &str, max_n: usize) -> PyResult<Bound<'py, PyList>> {
    let kind: StirlingKind = kind.parse().map_err(to_pyerr)?;
    let table = StirlingTable::new(kind, max_n);
    let int = py.import("builtins")?.getattr("int")?;
    let rows = table
        .rows()
        .iter()
        .map(|row| {
            let vals = row.iter().map(|v| int.call1((v.to_string(),))).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, vals)
        })
        .collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, rows)
}

#[pyfunction]
#[pyo3(signature = (ks, lam=None, x=None, order=16))]
fn degen_multi_poly_bernoulli(
    ks: Vec<i64>,
    lam: Option<&Bound<'_, PyAny>>,
    x: Option<&Bound<'_, PyAny>>,
    order: usize,
) -> PyResult<PySequence> {
    let query = FamilyQuery::new(index(ks)?, opt_rat(lam)?, opt_rat(x)?, order);
    Ok(PySequence { inner: polybern::degen_multi_poly_bernoulli(&query).map_err(to_pyerr)? })
}

#[pyfunction]
#[pyo3(signature = (r, lam=None, x=None, order=16))]
fn carlitz_degenerate(
    r: usize,
    lam: Option<&Bound<'_, PyAny>>,
    x: Option<&Bound<'_, PyAny>>,
    order: usize,
) -> PyResult<PySequence> {
    let inner = polybern::carlitz_degenerate(r, &opt_rat(lam)?, &opt_rat(x)?, order).map_err(to_pyerr)?;
    Ok(PySequence { inner })
}

#[pyfunction]
#[pyo3(signature = (ks, x=None, order=16))]
fn multi_poly_bernoulli(ks: Vec<i64>, x: Option<&Bound<'_, PyAny>>, order: usize) -> PyResult<PySequence> {
    let inner = polybern::multi_poly_bernoulli(&index(ks)?, &opt_rat(x)?, order).map_err(to_pyerr)?;
    Ok(PySequence { inner })
}

#[pyfunction]
#[pyo3(signature = (k, x=None, order=16))]
fn poly_bernoulli(k: i64, x: Option<&Bound<'_, PyAny>>, order: usize) -> PyResult<PySequence> {
    let inner = polybern::poly_bernoulli(k, &opt_rat(x)?, order).map_err(to_pyerr)?;
    Ok(PySequence { inner })
}

#[pyfunction]
#[pyo3(signature = (k, x=None, order=16))]
fn type2_poly_bernoulli(k: i64, x: Option<&Bound<'_, PyAny>>, order: usize) -> PyResult<PySequence> {
    let inner = polybern::type2_poly_bernoulli(k, &opt_rat(x)?, order).map_err(to_pyerr)?;
    Ok(PySequence { inner })
}

/// `(coefficient, degree)` pairs of the expansion in `(x)_{m,lambda}`.
#[pyfunction]
#[pyo3(signature = (ks, lam, n))]
fn falling_factorial_expansion<'py>(
    py: Python<'py>,
    ks: Vec<i64>,
    lam: &Bound<'py, PyAny>,
    n: usize,
) -> PyResult<Vec<(Bound<'py, PyAny>, usize)>> {
    let terms = polybern::falling_factorial_expansion(&index(ks)?, &rat_arg(lam)?, n).map_err(to_pyerr)?;
    terms.iter().map(|t| Ok((fraction(py, &t.coeff)?, t.degree))).collect()
}

#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (identity, ks=None, r=None, lam=None, x=None, y=None, order=16, truncate=32))]
fn verify(
    identity: &str,
    ks: Option<Vec<i64>>,
    r: Option<usize>,
    lam: Option<&Bound<'_, PyAny>>,
    x: Option<&Bound<'_, PyAny>>,
    y: Option<&Bound<'_, PyAny>>,
    order: usize,
    truncate: usize,
) -> PyResult<PyReport> {
    let identity: Identity = identity.parse().map_err(to_pyerr)?;
    let request = VerifyRequest {
        identity,
        ks: ks.map(index).transpose()?,
        r,
        lambda: opt_rat(lam)?,
        x: opt_rat(x)?,
        y: opt_rat(y)?,
        order,
        truncate,
    };
    Ok(PyReport { inner: request.run().map_err(to_pyerr)? })
}

#[pymodule]
fn pypolybern(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeries>()?;
    m.add_class::<PySequence>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(multi_polylog, m)?)?;
    m.add_function(wrap_pyfunction!(degenerate_exp, m)?)?;
    m.add_function(wrap_pyfunction!(one_minus_exp_neg, m)?)?;
    m.add_function(wrap_pyfunction!(log1p_series, m)?)?;
    m.add_function(wrap_pyfunction!(polyexp_ei, m)?)?;
    m.add_function(wrap_pyfunction!(stirling, m)?)?;
    m.add_function(wrap_pyfunction!(degen_multi_poly_bernoulli, m)?)?;
    m.add_function(wrap_pyfunction!(carlitz_degenerate, m)?)?;
    m.add_function(wrap_pyfunction!(multi_poly_bernoulli, m)?)?;
    m.add_function(wrap_pyfunction!(poly_bernoulli, m)?)?;
    m.add_function(wrap_pyfunction!(type2_poly_bernoulli, m)?)?;
    m.add_function(wrap_pyfunction!(falling_factorial_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
