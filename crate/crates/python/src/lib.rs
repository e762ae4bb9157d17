//! Python bindings for the de Bruijn triangle library.

use debruijn_core::asymptotics;
use debruijn_core::egf::{self, TruncatedEGF};
use debruijn_core::oracle;
use debruijn_core::spectral::{self, SpectralProblem};
use debruijn_core::{build_debruijn, build_named, build_signed, SystemName, UpDownPeriod};
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

create_exception!(debruijn, DebruijnError, PyValueError);

fn err(e: debruijn_core::Error) -> PyErr {
    DebruijnError::new_err(e.to_string())
}

/// A binary period `p_1 .. p_m` of an up-down sequence (1 = ascent).
#[pyclass(name = "Period", frozen, eq, hash, from_py_object, module = "debruijn")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Period {
    inner: UpDownPeriod,
}

#[pymethods]
impl Period {
    /// Accepts a string such as "1100" or "(1100)*", or a sequence of bits.
    #[new]
    fn new(spec: PeriodArg) -> PyResult<Self> {
        Ok(Period { inner: spec.into_period()? })
    }

    /// Bits as a list of ints (a `Vec<u8>` would surface as `bytes`).
    #[getter]
    fn bits(&self) -> Vec<u32> {
        self.inner.bits().iter().map(|&b| u32::from(b)).collect()
    }

    /// 1-based zero positions.
    #[getter]
    fn zeros(&self) -> Vec<usize> {
        self.inner.zeros().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn is_normalized(&self) -> bool {
        self.inner.is_normalized()
    }

    /// Returns `(normalized, reflected)`.
    fn normalized(&self) -> PyResult<(Period, bool)> {
        let (p, reflected) = debruijn_core::normalize(self.inner.bits()).map_err(err)?;
        Ok((Period { inner: p }, reflected))
    }

    fn complement(&self) -> Period {
        Period {
            inner: self.inner.complement(),
        }
    }

    /// `p_i` of the periodic extension; index 0 means `p_m`.
    fn bit_at(&self, i: usize) -> u8 {
        self.inner.bit_at(i)
    }

    /// `eps_i` for `i >= 1`.
    fn sign(&self, i: usize) -> PyResult<i8> {
        if i == 0 {
            return Err(PyValueError::new_err("sign is defined for i >= 1"));
        }
        Ok(self.inner.sign(i))
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Period('{}')", self.inner)
    }
}

#[derive(FromPyObject)]
enum PeriodArg {
    Period(Period),
    Text(String),
    Bits(Vec<u8>),
}

impl PeriodArg {
    fn into_period(self) -> PyResult<UpDownPeriod> {
        match self {
            PeriodArg::Period(p) => Ok(p.inner),
            PeriodArg::Text(s) => s.parse().map_err(err),
            PeriodArg::Bits(b) => UpDownPeriod::new(b).map_err(err),
        }
    }
}

/// Normalizes a period so that it ends in 0. Returns `(period, reflected)`.
#[pyfunction]
fn normalize(bits: PeriodArg) -> PyResult<(Period, bool)> {
    let p = bits.into_period()?;
    let (inner, reflected) = debruijn_core::normalize(p.bits()).map_err(err)?;
    Ok((Period { inner }, reflected))
}

/// `eps_i` of a period.
#[pyfunction]
fn sign(period: PeriodArg, i: usize) -> PyResult<i8> {
    if i == 0 {
        return Err(PyValueError::new_err("sign is defined for i >= 1"));
    }
    Ok(period.into_period()?.sign(i))
}

/// Rows of the de Bruijn triangle as lists of Python ints.
#[pyfunction]
#[pyo3(signature = (period, rows, signed = false))]
fn triangle(period: PeriodArg, rows: usize, signed: bool) -> PyResult<Vec<Vec<BigInt>>> {
    let p = period.into_period()?;
    let t = if signed { build_signed(&p, rows) } else { build_debruijn(&p, rows) }.map_err(err)?;
    Ok(t.rows().to_vec())
}

/// Brute-force counts of permutations of length `n` by last entry (n <= 10).
#[pyfunction]
fn counts_by_last(period: PeriodArg, n: usize) -> PyResult<Vec<u64>> {
    oracle::counts_by_last(&period.into_period()?, n).map_err(err)
}

fn fractions<'py>(py: Python<'py>, s: &TruncatedEGF) -> PyResult<Bound<'py, PyList>> {
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    let items = s
        .coeffs()
        .iter()
        .map(|c| fraction.call1((c.numer().clone(), c.denom().clone())))
        .collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

/// EGF coefficients (as `Fraction`) of the left edge of the signed triangle.
#[pyfunction]
fn theorem1_f<'py>(py: Python<'py>, period: PeriodArg, order: usize) -> PyResult<Bound<'py, PyList>> {
    let s = egf::theorem1_f(&period.into_period()?, order).map_err(err)?;
    fractions(py, &s)
}

/// EGF coefficients (as `Fraction`) of the total counts.
#[pyfunction]
fn corollary1_total<'py>(py: Python<'py>, period: PeriodArg, order: usize) -> PyResult<Bound<'py, PyList>> {
    let s = egf::corollary1_total(&period.into_period()?, order).map_err(err)?;
    fractions(py, &s)
}

/// First eigenvalue of the spectral problem.
#[pyfunction]
#[pyo3(signature = (period, phase = 0, tol = spectral::ROOT_TOL))]
fn find_lambda(period: PeriodArg, phase: usize, tol: f64) -> PyResult<f64> {
    let prob = SpectralProblem::new(&period.into_period()?, phase).map_err(err)?;
    spectral::find_lambda(&prob, tol).map_err(err)
}

/// `mu^(-1/m)` for the operator discretized on `n` points.
#[pyfunction]
#[pyo3(signature = (period, n = 400))]
fn operator_lambda(period: PeriodArg, n: usize) -> PyResult<f64> {
    spectral::discretize(&period.into_period()?, n)
        .and_then(|op| op.lambda_estimate(1e-13))
        .map_err(err)
}

/// Normalized first eigenfunction as a dict with keys `lambda`, `t`, `u`,
/// `imag_residue` and `null_residual`.
#[pyfunction]
#[pyo3(signature = (period, phase, samples = 101))]
fn eigenfunction<'py>(
    py: Python<'py>,
    period: PeriodArg,
    phase: usize,
    samples: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let sol = spectral::solve(&period.into_period()?, phase, samples).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("lambda", sol.lambda)?;
    d.set_item("t", sol.grid)?;
    d.set_item("u", sol.samples)?;
    d.set_item("imag_residue", sol.imag_residue)?;
    d.set_item("null_residual", sol.null_residual)?;
    Ok(d)
}

/// `max_j #_{k,j} lambda^k / (k-1)!` for row `k = mn + phase`.
#[pyfunction]
fn growth_constant(period: PeriodArg, phase: usize, n: usize) -> PyResult<f64> {
    asymptotics::growth_constant(&period.into_period()?, phase, n).map_err(err)
}

/// `[(row, sup error), ...]` for shape-normalized rows against `u_phase`.
#[pyfunction]
fn convergence_report(period: PeriodArg, phase: usize, rows: Vec<usize>) -> PyResult<Vec<(usize, f64)>> {
    let rep = asymptotics::convergence_report(&period.into_period()?, phase, &rows).map_err(err)?;
    Ok(rep.rows.into_iter().map(|r| (r.row, r.error)).collect())
}

/// Triangles of a named system, keyed "main" or "L"/"R".
#[pyfunction]
fn named<'py>(py: Python<'py>, name: &str, rows: usize) -> PyResult<Bound<'py, PyDict>> {
    let name: SystemName = name.parse().map_err(err)?;
    let sys = build_named(name, rows).map_err(err)?;
    let d = PyDict::new(py);
    for (label, t) in sys.triangles() {
        d.set_item(label, t.rows().to_vec())?;
    }
    Ok(d)
}

#[pymodule]
fn debruijn(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DebruijnError", m.py().get_type::<DebruijnError>())?;
    m.add_class::<Period>()?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(sign, m)?)?;
    m.add_function(wrap_pyfunction!(triangle, m)?)?;
    m.add_function(wrap_pyfunction!(counts_by_last, m)?)?;
    m.add_function(wrap_pyfunction!(theorem1_f, m)?)?;
    m.add_function(wrap_pyfunction!(corollary1_total, m)?)?;
    m.add_function(wrap_pyfunction!(find_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(operator_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(eigenfunction, m)?)?;
    m.add_function(wrap_pyfunction!(growth_constant, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_report, m)?)?;
    m.add_function(wrap_pyfunction!(named, m)?)?;
    Ok(())
}
