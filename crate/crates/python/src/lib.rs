//! Python bindings: exact rational functions of `q` as `QRat`, exact
//! rationals as `fractions.Fraction`, and the constant-term operations.

use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::exceptions::{PyOverflowError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::PyTuple;

use qmorris_core::arith::parse_rational;
use qmorris_core::closed_forms::{self as cf, ParamSet};
use qmorris_core::ct_engine::{self as ce, Lemma42Verdict};
use qmorris_core::kernels::{build_hk_kernel, build_qdyson_kernel};
use qmorris_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::DivisionByZero => PyZeroDivisionError::new_err(e.to_string()),
        Error::Overflow | Error::ExponentOverflow(_) => PyOverflowError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_fraction<'py>(py: Python<'py>, r: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((r.numer().clone(), r.denom().clone()))
}

/// Accepts an `int`, a `fractions.Fraction` or a string such as `"3/2"`.
fn from_py_rational(obj: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    if let Ok(s) = obj.extract::<String>() {
        return parse_rational(&s).map_err(py_err);
    }
    if let Ok(i) = obj.extract::<BigInt>() {
        return Ok(BigRational::from_integer(i));
    }
    let num: BigInt = obj.getattr("numerator")?.extract()?;
    let den: BigInt = obj.getattr("denominator")?.extract()?;
    if den == BigInt::from(0) {
        return Err(PyZeroDivisionError::new_err("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

fn params(n: usize, a: i64, b: i64, m: usize, l: usize, k: i64) -> PyResult<ParamSet> {
    ParamSet::new(n, a, b, m, l, k).map_err(py_err)
}

/// An exact rational function of `q` in lowest terms.
#[pyclass(name = "QRat", module = "qmorris", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyQRat(qmorris_core::QRat);

#[pymethods]
impl PyQRat {
    /// `QRat(c)` for an integer constant `c`.
    #[new]
    #[pyo3(signature = (c = 0))]
    fn new(c: i64) -> Self {
        PyQRat(qmorris_core::QRat::from(c))
    }

    /// The monomial `q^e`.
    #[staticmethod]
    fn q_pow(e: i64) -> Self {
        PyQRat(qmorris_core::QPoly::q_pow(e).into())
    }

    /// Value at `q = q0`.
    fn eval<'py>(&self, py: Python<'py>, q0: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        to_fraction(py, &self.0.eval(&from_py_rational(q0)?).map_err(py_err)?)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `(exponent, coefficient)` pairs of the numerator, lowest first.
    fn numerator(&self) -> Vec<(i64, BigInt)> {
        self.0.num().terms().map(|(e, c)| (e, c.clone())).collect()
    }

    /// `(exponent, coefficient)` pairs of the denominator, lowest first.
    fn denominator(&self) -> Vec<(i64, BigInt)> {
        self.0.den().terms().map(|(e, c)| (e, c.clone())).collect()
    }

    fn __add__(&self, other: &PyQRat) -> Self {
        PyQRat(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &PyQRat) -> Self {
        PyQRat(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &PyQRat) -> Self {
        PyQRat(&self.0 * &other.0)
    }

    fn __truediv__(&self, other: &PyQRat) -> PyResult<Self> {
        self.0.checked_div(&other.0).map(PyQRat).map_err(py_err)
    }

    fn __neg__(&self) -> Self {
        PyQRat(-&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("QRat('{}')", self.0)
    }
}

/// Constant term of the q-Dyson kernel with exponents `a`.
#[pyfunction]
fn qdyson_ct(a: Vec<i64>) -> PyResult<PyQRat> {
    let f = build_qdyson_kernel(&a).map_err(py_err)?;
    ce::ct_direct(&f).map(PyQRat).map_err(py_err)
}

/// `(q)_{|a|} / prod (q)_{a_i}`.
#[pyfunction]
fn qdyson_rhs(a: Vec<i64>) -> PyResult<PyQRat> {
    cf::qdyson_rhs(&a).map(PyQRat).map_err(py_err)
}

/// Constant term of the Dyson kernel at `q = 1`.
#[pyfunction]
fn dyson_ct<'py>(py: Python<'py>, a: Vec<i64>) -> PyResult<Bound<'py, PyAny>> {
    let f = build_qdyson_kernel(&a).map_err(py_err)?;
    to_fraction(py, &ce::ct_direct_at_one(&f).map_err(py_err)?)
}

/// The multinomial coefficient `|a|! / prod a_i!`.
#[pyfunction]
fn dyson_rhs(a: Vec<i64>) -> PyResult<BigInt> {
    cf::dyson_rhs(&a).map_err(py_err)
}

/// Constant term of the q-Morris kernel.
#[pyfunction]
fn hk_ct(n: usize, a: i64, b: i64, m: usize, l: usize, k: i64) -> PyResult<PyQRat> {
    let f = build_hk_kernel(n, a, b, m, l, k).map_err(py_err)?;
    ce::ct_direct(&f).map(PyQRat).map_err(py_err)
}

/// The closed form `M_n(a, b, k, m, l; q)`; any integer `a`.
#[pyfunction]
fn morris_rhs(n: usize, a: i64, b: i64, m: usize, l: usize, k: i64) -> PyResult<PyQRat> {
    cf::morris_rhs(&params(n, a, b, m, l, k)?)
        .map(PyQRat)
        .map_err(py_err)
}

/// The Gaussian binomial `[big_n, kk]`, also for negative `big_n`.
#[pyfunction]
fn gauss_binom(big_n: i64, kk: i64) -> PyResult<PyQRat> {
    cf::gauss_binom(big_n, kk).map(PyQRat).map_err(py_err)
}

/// Both sides of the finite summation identity, `(lhs, rhs)`.
#[pyfunction]
fn prop52(n: i64, b: i64, k: i64) -> PyResult<(PyQRat, PyQRat)> {
    Ok((
        PyQRat(cf::prop52_lhs(n, b, k).map_err(py_err)?),
        PyQRat(cf::prop52_rhs(n, b, k).map_err(py_err)?),
    ))
}

/// The root sets `(D1, D2, D3)`; needs `m, l < n`.
#[pyfunction]
fn vanishing_sets(
    n: usize,
    b: i64,
    m: usize,
    l: usize,
    k: i64,
) -> PyResult<(Vec<i64>, Vec<i64>, Vec<i64>)> {
    let s = cf::vanishing_sets(&params(n, 0, b, m, l, k)?).map_err(py_err)?;
    Ok((s.d1, s.d2, s.d3))
}

/// `(n - l - 1) k + b + 1`.
#[pyfunction]
fn extra_point(n: usize, b: i64, m: usize, l: usize, k: i64) -> PyResult<i64> {
    Ok(params(n, 0, b, m, l, k)?.extra_point())
}

/// `("early_small", i)`, `("close_pair", i, j)` or `("exceptional",)`,
/// indices 1-based.
#[pyfunction]
fn lemma_important<'py>(
    py: Python<'py>,
    k: i64,
    b: i64,
    t: Vec<i64>,
) -> PyResult<Bound<'py, PyTuple>> {
    match ce::lemma_important(k, b, t.len(), &t).map_err(py_err)? {
        Lemma42Verdict::EarlySmall(i) => ("early_small", i).into_pyobject(py),
        Lemma42Verdict::ClosePair(i, j) => ("close_pair", i, j).into_pyobject(py),
        Lemma42Verdict::Exceptional => ("exceptional",).into_pyobject(py),
    }
}

/// `CT Q(h)` by the chain recursion: `(value, certificate_json)`.
#[pyfunction]
fn ct_recursion(
    n: usize,
    b: i64,
    m: usize,
    l: usize,
    k: i64,
    h: i64,
) -> PyResult<(PyQRat, String)> {
    let (value, cert) = ce::ct_recursion(&params(n, 0, b, m, l, k)?, h).map_err(py_err)?;
    Ok((PyQRat(value), cert.to_json()))
}

/// The interpolated constant term, as a polynomial in `q^a`, at `a = -h`
/// and `q = q0`.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn mprime_at<'py>(
    py: Python<'py>,
    n: usize,
    b: i64,
    m: usize,
    l: usize,
    k: i64,
    h: i64,
    q0: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyAny>> {
    let v = ce::mprime_at(&params(n, 0, b, m, l, k)?, h, &from_py_rational(q0)?).map_err(py_err)?;
    to_fraction(py, &v)
}

/// Whether the constant term equals its expansion over compositions.
#[pyfunction]
fn aomoto_check(n: usize, a: i64, b: i64, m: usize, l: usize, k: i64) -> PyResult<bool> {
    ce::aomoto_expansion_check(&params(n, a, b, m, l, k)?).map_err(py_err)
}

#[pymodule]
fn qmorris(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQRat>()?;
    m.add_function(wrap_pyfunction!(qdyson_ct, m)?)?;
    m.add_function(wrap_pyfunction!(qdyson_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(dyson_ct, m)?)?;
    m.add_function(wrap_pyfunction!(dyson_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(hk_ct, m)?)?;
    m.add_function(wrap_pyfunction!(morris_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_binom, m)?)?;
    m.add_function(wrap_pyfunction!(prop52, m)?)?;
    m.add_function(wrap_pyfunction!(vanishing_sets, m)?)?;
    m.add_function(wrap_pyfunction!(extra_point, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_important, m)?)?;
    m.add_function(wrap_pyfunction!(ct_recursion, m)?)?;
    m.add_function(wrap_pyfunction!(mprime_at, m)?)?;
    m.add_function(wrap_pyfunction!(aomoto_check, m)?)?;
    Ok(())
}
