//! Python bindings: exact expansion/reconstruction over Q and the five
//! norm-Euclidean imaginary quadratic fields, the counting engines, the
//! spectral dimension/pole solvers, and the power-law fits.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use zaremba_core::asymptotics;
use zaremba_core::cf;
use zaremba_core::counting::{self, ComplexAlphabet, CountTable, ThickenedWindow};
use zaremba_core::quadratic::{self, Field, QuadInt};
use zaremba_core::spectral;

fn to_py_err(e: zaremba_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field(d: u32) -> PyResult<Field> {
    Field::new(d).map_err(to_py_err)
}

fn rational(numer: BigInt, denom: BigInt) -> PyResult<BigRational> {
    if denom.is_zero() {
        return Err(PyValueError::new_err("zero denominator"));
    }
    Ok(BigRational::new(numer, denom))
}

/// Canonical continued fraction digits of numer/denom in (0, 1).
#[pyfunction]
fn cf_expand(numer: BigInt, denom: BigInt) -> PyResult<Vec<BigInt>> {
    cf::cf_expand(&rational(numer, denom)?).map_err(to_py_err)
}

/// Exact value of [0; d_1, ..., d_l] as a reduced (numerator, denominator).
#[pyfunction]
fn reconstruct(digits: Vec<BigInt>) -> PyResult<(BigInt, BigInt)> {
    let x = cf::reconstruct(&digits).map_err(to_py_err)?;
    Ok((x.numer().clone(), x.denom().clone()))
}

/// One Gauss map step: (digit, (remainder numerator, remainder denominator)).
#[pyfunction]
fn gauss_step(numer: BigInt, denom: BigInt) -> PyResult<(BigInt, (BigInt, BigInt))> {
    let (digit, rem) = cf::gauss_step(&rational(numer, denom)?).map_err(to_py_err)?;
    Ok((digit, (rem.numer().clone(), rem.denom().clone())))
}

/// |h'(0)| = 1/q_l^2 for the digit string, as (numerator, denominator).
#[pyfunction]
fn branch_derivative_at_zero(digits: Vec<BigInt>) -> PyResult<(BigInt, BigInt)> {
    let x = cf::branch_derivative_at_zero(&digits).map_err(to_py_err)?;
    Ok((x.numer().clone(), x.denom().clone()))
}

/// Whether some a coprime to n has a/n with all digits <= a_bound.
#[pyfunction]
fn is_zaremba_denominator(n: u64, a_bound: u64) -> bool {
    cf::is_zaremba_denominator(n, a_bound)
}

/// Count table keyed by denominator (real case) or squared height (complex).
#[pyclass(name = "CountTable")]
struct PyCountTable {
    inner: CountTable,
}

#[pymethods]
impl PyCountTable {
    /// Largest key covered by the table.
    fn limit(&self) -> u64 {
        self.inner.limit()
    }

    /// |Sigma_key|.
    fn count(&self, key: u64) -> u64 {
        self.inner.count(key)
    }

    /// Total count (|Omega| up to the table limit).
    fn total(&self) -> u64 {
        self.inner.total()
    }

    fn total_up_to(&self, n: u64) -> u64 {
        self.inner.total_up_to(n)
    }

    /// Sum of e^{w * length} over the elements at this key.
    fn weighted(&self, key: u64, w: f64) -> f64 {
        self.inner.weighted(key, w)
    }

    /// Psi_w(n): cumulative weighted count.
    fn weighted_up_to(&self, n: u64, w: f64) -> f64 {
        self.inner.weighted_up_to(n, w)
    }

    /// Count over the window [N - floor(N eps), N] with eps = N^{-gamma/2}.
    fn thickened(&self, gamma: f64) -> PyResult<u64> {
        let window = ThickenedWindow::new(self.inner.limit(), gamma).map_err(to_py_err)?;
        self.inner.thickened_count(&window).map_err(to_py_err)
    }

    /// Keys with at least one element, ascending.
    fn keys(&self) -> Vec<u64> {
        self.inner.keys().collect()
    }

    /// The documented CSV schema (columns n, count, w_<value>...).
    fn to_csv(&self, ws: Vec<f64>) -> String {
        self.inner.to_csv(&ws)
    }
}

/// Enumerates Omega_{N,A} over Q.
#[pyfunction]
#[pyo3(signature = (a_bound, n_max, parallel = true))]
fn count_real(a_bound: u64, n_max: u64, parallel: bool) -> PyCountTable {
    let inner = if parallel {
        counting::enumerate_real_parallel(a_bound, n_max)
    } else {
        counting::enumerate_real(a_bound, n_max)
    };
    PyCountTable { inner }
}

/// Enumerates Omega_{N,A_d} over Q(sqrt(-d)), keyed by squared height, with
/// the default alphabet of attainable digits of norm <= max_norm.
#[pyfunction]
fn count_complex(d: u32, max_norm: u64, n_max: u64) -> PyResult<PyCountTable> {
    let alphabet = ComplexAlphabet::with_norm_bound(field(d)?, max_norm);
    Ok(PyCountTable {
        inner: counting::enumerate_complex_parallel(&alphabet, n_max),
    })
}

/// Hausdorff dimension result with bracket and cross-validation data.
#[pyclass(name = "DimensionResult", get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyDimensionResult {
    delta: f64,
    lo: f64,
    hi: f64,
    m: usize,
    residual: f64,
    delta_coarse: f64,
    m_coarse: usize,
}

/// delta_A by bisection of the transfer-operator eigenvalue, cross-validated
/// at node counts m and 2m.
#[pyfunction]
#[pyo3(signature = (a_bound, tol = 1e-12, m = 32))]
fn solve_dimension(a_bound: u64, tol: f64, m: usize) -> PyResult<PyDimensionResult> {
    let r = spectral::solve_dimension(a_bound, tol, m).map_err(to_py_err)?;
    Ok(PyDimensionResult {
        delta: r.delta,
        lo: r.lo,
        hi: r.hi,
        m: r.m_fine,
        residual: r.residual,
        delta_coarse: r.delta_coarse,
        m_coarse: r.m_coarse,
    })
}

/// s0(w): the sigma with lambda(sigma, w) = 1; s0(0) = delta_A.
#[pyfunction]
#[pyo3(signature = (a_bound, w, tol = 1e-12, m = 32))]
fn solve_pole(a_bound: u64, w: f64, tol: f64, m: usize) -> PyResult<f64> {
    spectral::solve_pole(a_bound, w, tol, m).map_err(to_py_err)
}

/// Dominant eigenvalue lambda(sigma, u) of the constrained transfer operator.
#[pyfunction]
#[pyo3(signature = (a_bound, sigma, u = 0.0, m = 32))]
fn eigenvalue(a_bound: u64, sigma: f64, u: f64, m: usize) -> PyResult<f64> {
    spectral::eigenvalue(a_bound, sigma, u, m).map_err(to_py_err)
}

/// Truncated operator series (L_sharp . sum L^n 1)(0).
#[pyfunction]
#[pyo3(signature = (a_bound, sigma, w, depth, m = 40))]
fn operator_series_at_zero(a_bound: u64, sigma: f64, w: f64, depth: usize, m: usize) -> f64 {
    spectral::operator_series_at_zero(a_bound, sigma, w, depth, m)
}

/// Exact-continuant orbit sum: the reference side of the operator identity.
#[pyfunction]
fn orbit_sum(a_bound: u64, sigma: f64, w: f64, depth: usize) -> f64 {
    spectral::orbit_sum(a_bound, sigma, w, depth)
}

/// Log-log least squares fit.
#[pyclass(name = "PowerLawFit", get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyPowerLawFit {
    slope: f64,
    intercept: f64,
    stderr: f64,
    n_min: u64,
    n_max: u64,
    points: usize,
}

impl From<asymptotics::PowerLawFit> for PyPowerLawFit {
    fn from(f: asymptotics::PowerLawFit) -> Self {
        PyPowerLawFit {
            slope: f.slope,
            intercept: f.intercept,
            stderr: f.stderr,
            n_min: f.n_min,
            n_max: f.n_max,
            points: f.points,
        }
    }
}

/// OLS fit of log(count) against log(N); zero counts are dropped.
#[pyfunction]
fn fit_exponent(samples: Vec<(u64, u64)>) -> PyResult<PyPowerLawFit> {
    Ok(asymptotics::fit_exponent(&samples).map_err(to_py_err)?.into())
}

/// Smoothing experiment summary.
#[pyclass(name = "SmoothingSummary", get_all, skip_from_py_object)]
#[derive(Clone)]
struct PySmoothingSummary {
    gamma: f64,
    delta: f64,
    slope: f64,
    predicted_exponent: f64,
    window_slope: Option<f64>,
    /// Rows (n, window_floor, sigma, thickened, omega).
    records: Vec<(u64, u64, u64, u64, u64)>,
}

/// Thickened-window counting experiment for digit bound A at exponent gamma.
#[pyfunction]
fn smoothing_experiment(
    a_bound: u64,
    gamma: f64,
    n_grid: Vec<u64>,
    delta: f64,
) -> PyResult<PySmoothingSummary> {
    let r = asymptotics::smoothing_experiment(a_bound, gamma, &n_grid, delta).map_err(to_py_err)?;
    Ok(PySmoothingSummary {
        gamma: r.gamma,
        delta: r.delta,
        slope: r.fitted.slope,
        predicted_exponent: r.predicted_exponent,
        window_slope: r.window_fit.as_ref().map(|f| f.slope),
        records: r
            .records
            .iter()
            .map(|x| (x.n, x.window_floor, x.sigma, x.thickened, x.omega))
            .collect(),
    })
}

/// Exponent fit of the complex counts for the norm-bounded default alphabet.
#[pyfunction]
fn complex_exponent_fit(d: u32, max_norm: u64, n_grid: Vec<u64>) -> PyResult<PyPowerLawFit> {
    let alphabet = ComplexAlphabet::with_norm_bound(field(d)?, max_norm);
    Ok(asymptotics::complex_exponent_fit(&alphabet, &n_grid)
        .map_err(to_py_err)?
        .into())
}

fn quad(pair: (BigInt, BigInt)) -> QuadInt {
    QuadInt::new(pair.0, pair.1)
}

/// Digits of (num)/(den) over Q(sqrt(-d)), as (a, b) coordinate pairs over
/// the module basis (1, omega).
#[pyfunction]
fn cf_expand_complex(
    d: u32,
    num: (BigInt, BigInt),
    den: (BigInt, BigInt),
) -> PyResult<Vec<(BigInt, BigInt)>> {
    let f = field(d)?;
    let z = quadratic::quadrat_from_pair(f, &quad(num), &quad(den)).map_err(to_py_err)?;
    let digits = quadratic::cf_expand_complex(f, &z).map_err(to_py_err)?;
    Ok(digits.into_iter().map(|q| (q.a, q.b)).collect())
}

/// Value of a complex digit string as a reduced fraction
/// ((num_a, num_b), (den_a, den_b)).
#[pyfunction]
fn reconstruct_complex(
    d: u32,
    digits: Vec<(BigInt, BigInt)>,
) -> PyResult<((BigInt, BigInt), (BigInt, BigInt))> {
    let f = field(d)?;
    let ds: Vec<QuadInt> = digits.into_iter().map(quad).collect();
    let z = quadratic::reconstruct_complex(f, &ds).map_err(to_py_err)?;
    let (num, den) = quadratic::quadrat_to_reduced(f, &z).map_err(to_py_err)?;
    Ok(((num.a, num.b), (den.a, den.b)))
}

/// Squared canonical height of (num)/(den) over Q(sqrt(-d)).
#[pyfunction]
fn height_squared(d: u32, num: (BigInt, BigInt), den: (BigInt, BigInt)) -> PyResult<BigInt> {
    let f = field(d)?;
    let z = quadratic::quadrat_from_pair(f, &quad(num), &quad(den)).map_err(to_py_err)?;
    Ok(quadratic::height_squared(f, &z))
}

/// Attainable digits of norm <= max_norm, as coordinate pairs.
#[pyfunction]
fn attainable_digits(d: u32, max_norm: u64) -> PyResult<Vec<(BigInt, BigInt)>> {
    Ok(quadratic::attainable_digits(field(d)?, max_norm)
        .into_iter()
        .map(|q| (q.a, q.b))
        .collect())
}

#[pymodule]
fn zaremba_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(cf_expand, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_step, m)?)?;
    m.add_function(wrap_pyfunction!(branch_derivative_at_zero, m)?)?;
    m.add_function(wrap_pyfunction!(is_zaremba_denominator, m)?)?;
    m.add_function(wrap_pyfunction!(count_real, m)?)?;
    m.add_function(wrap_pyfunction!(count_complex, m)?)?;
    m.add_function(wrap_pyfunction!(solve_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(solve_pole, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(operator_series_at_zero, m)?)?;
    m.add_function(wrap_pyfunction!(orbit_sum, m)?)?;
    m.add_function(wrap_pyfunction!(fit_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(smoothing_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(complex_exponent_fit, m)?)?;
    m.add_function(wrap_pyfunction!(cf_expand_complex, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct_complex, m)?)?;
    m.add_function(wrap_pyfunction!(height_squared, m)?)?;
    m.add_function(wrap_pyfunction!(attainable_digits, m)?)?;
    m.add_class::<PyCountTable>()?;
    m.add_class::<PyDimensionResult>()?;
    m.add_class::<PyPowerLawFit>()?;
    m.add_class::<PySmoothingSummary>()?;
    Ok(())
}
