//! Python module `reciplab`.
//!
//! Rationals cross the boundary as strings (`"1/3"`, `"2"` on input,
//! `"num/den"` on output), evaluated values as Python `complex`, and reports
//! as objects that can also render the CLI's JSON document.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ::reciplab::engine::{self, SamplePolicy};
use ::reciplab::exact_numbers::parse_rational;
use ::reciplab::report::{emit_report, rational_string};
use ::reciplab::{ComplexP, Error, Kind, PiScaled, Rational, VerificationReport, DEFAULT_PRECISION};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

pub fn parse_kind(s: &str) -> PyResult<Kind> {
    s.parse().map_err(py_err)
}

pub fn parse_rationals(xs: &[String]) -> PyResult<Vec<Rational>> {
    xs.iter().map(|s| parse_rational(s).map_err(py_err)).collect()
}

fn to_complex(z: &ComplexP) -> Complex64 {
    let (re, im) = z.to_f64_pair();
    Complex64::new(re, im)
}

fn from_complex(z: Complex64, prec: u32) -> ComplexP {
    ComplexP::new(prec, z.re, z.im)
}

fn pi_scaled(x: &PiScaled) -> (String, u32) {
    (rational_string(&x.coeff), x.pi_power)
}

fn points(zs: Option<Vec<Complex64>>, samples: usize, seed: u64, prec: u32) -> PyResult<Vec<ComplexP>> {
    match zs {
        Some(zs) => Ok(zs.into_iter().map(|z| from_complex(z, prec)).collect()),
        None => SamplePolicy::with_seed(seed, samples).points(prec).map_err(py_err),
    }
}

/// Parameters `(a, m, w, j)` of a product `Π a_l^{m_l} φ_{m_l}(a_l z - w_l)`.
///
/// The first `j[0]` factors are of cotangent type, the remaining `j[1]` of
/// cosecant type. `m` defaults to all ones, `w` to zeros and `j` to all
/// cotangent.
#[pyclass(name = "Params", frozen, eq, skip_from_py_object, module = "reciplab")]
#[derive(Clone, PartialEq)]
pub struct PyParams {
    pub inner: ::reciplab::Params,
}

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (a, m=None, w=None, j=None))]
    pub fn new(a: Vec<u32>, m: Option<Vec<u32>>, w: Option<Vec<String>>, j: Option<(usize, usize)>) -> PyResult<Self> {
        let r = a.len();
        let m = m.unwrap_or_else(|| vec![1; r]);
        let w = match w {
            Some(w) => parse_rationals(&w)?,
            None => vec![Rational::new(); r],
        };
        let j = j.unwrap_or((r, 0));
        let inner = ::reciplab::Params::new(a, m, w, j).map_err(py_err)?;
        Ok(PyParams { inner })
    }

    #[getter]
    fn a(&self) -> Vec<u32> {
        self.inner.a().to_vec()
    }

    #[getter]
    fn m(&self) -> Vec<u32> {
        self.inner.m().to_vec()
    }

    #[getter]
    fn w(&self) -> Vec<String> {
        self.inner.w().iter().map(rational_string).collect()
    }

    #[getter]
    fn j(&self) -> (usize, usize) {
        self.inner.j()
    }

    /// `"I"` when the product is 1-periodic, `"II"` when it is 1-antiperiodic.
    #[getter]
    fn case(&self) -> String {
        ::reciplab::classify_case(&self.inner).to_string()
    }

    /// Poles in `[0, 1)` as `(rho, multiplicity)` pairs.
    fn poles(&self) -> Vec<(String, usize)> {
        ::reciplab::enumerate_poles(&self.inner)
            .iter()
            .map(|d| (rational_string(&d.rho), d.multiplicity()))
            .collect()
    }

    /// `Φ(z)` evaluated directly from the product.
    #[pyo3(signature = (z, precision=DEFAULT_PRECISION))]
    fn eval(&self, z: Complex64, precision: u32) -> PyResult<Complex64> {
        let v = engine::eval_phi(&self.inner, &from_complex(z, precision)).map_err(py_err)?;
        Ok(to_complex(&v))
    }

    /// `Φ(z)` evaluated through its pole expansion.
    #[pyo3(signature = (z, precision=DEFAULT_PRECISION))]
    fn expand(&self, z: Complex64, precision: u32) -> PyResult<Complex64> {
        let e = engine::Expansion::new(&self.inner, precision).map_err(py_err)?;
        let v = e.eval(&from_complex(z, e.work_prec())).map_err(py_err)?;
        Ok(to_complex(&v))
    }

    fn __repr__(&self) -> String {
        format!("Params({})", self.inner)
    }
}

#[pyclass(name = "Report", frozen, module = "reciplab")]
pub struct PyReport {
    inner: VerificationReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn law(&self) -> &str {
        &self.inner.law
    }

    #[getter]
    fn case(&self) -> String {
        self.inner.case.to_string()
    }

    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed
    }

    #[getter]
    fn samples(&self) -> usize {
        self.inner.samples
    }

    #[getter]
    fn precision_bits(&self) -> u32 {
        self.inner.precision_bits
    }

    #[getter]
    fn max_abs_err(&self) -> f64 {
        self.inner.max_abs_err
    }

    #[getter]
    fn max_rel_err(&self) -> f64 {
        self.inner.max_rel_err
    }

    #[getter]
    fn tolerance(&self) -> f64 {
        self.inner.tolerance
    }

    #[getter]
    fn params(&self) -> PyParams {
        PyParams {
            inner: self.inner.params.clone(),
        }
    }

    /// The report as the JSON document the CLI prints.
    fn to_json(&self) -> PyResult<String> {
        emit_report(&self.inner, None).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(law={:?}, passed={}, max_rel_err={:e})",
            self.inner.law, self.inner.passed, self.inner.max_rel_err
        )
    }
}

fn report(r: ::reciplab::Result<VerificationReport>) -> PyResult<PyReport> {
    r.map(|inner| PyReport { inner }).map_err(py_err)
}

/// Bernoulli number `B_n` as `"num/den"`.
#[pyfunction]
fn bernoulli(n: usize) -> String {
    rational_string(&::reciplab::bernoulli(n))
}

/// Laurent coefficient of `φ_1` at the origin, as `(coeff, pi_power)`.
#[pyfunction]
fn alpha(kind: &str, mu: u32) -> PyResult<(String, u32)> {
    Ok(pi_scaled(&::reciplab::alpha(parse_kind(kind)?, mu).map_err(py_err)?))
}

/// `φ_n(z)` for `kind` in `"I"`/`"cot"` or `"II"`/`"csc"`.
#[pyfunction]
#[pyo3(signature = (kind, n, z, precision=DEFAULT_PRECISION))]
fn phi(kind: &str, n: usize, z: Complex64, precision: u32) -> PyResult<Complex64> {
    let v = ::reciplab::phi(parse_kind(kind)?, n, &from_complex(z, precision)).map_err(py_err)?;
    Ok(to_complex(&v))
}

/// `φ_n(x)` at a rational point given as `"num/den"`.
#[pyfunction]
#[pyo3(signature = (kind, n, x, precision=DEFAULT_PRECISION))]
fn phi_at_rational(kind: &str, n: usize, x: &str, precision: u32) -> PyResult<Complex64> {
    let x = parse_rational(x).map_err(py_err)?;
    let v = ::reciplab::phi_at_rational(parse_kind(kind)?, n, &x, precision).map_err(py_err)?;
    Ok(to_complex(&v))
}

#[pyfunction]
#[pyo3(signature = (params, samples=20, seed=0x5eed, precision=DEFAULT_PRECISION))]
fn verify_identity(params: &PyParams, samples: usize, seed: u64, precision: u32) -> PyResult<PyReport> {
    report(engine::verify_identity(
        &params.inner,
        &SamplePolicy::with_seed(seed, samples),
        precision,
    ))
}

#[pyfunction]
#[pyo3(signature = (params, precision=DEFAULT_PRECISION))]
fn reciprocity(params: &PyParams, precision: u32) -> PyResult<PyReport> {
    report(engine::verify_reciprocity_sum(&params.inner, precision))
}

/// Coefficient law at `z0` for each `mu` in `mus`.
#[pyfunction]
#[pyo3(signature = (params, z0, mus, precision=DEFAULT_PRECISION))]
fn laurent(params: &PyParams, z0: &str, mus: Vec<u32>, precision: u32) -> PyResult<PyReport> {
    let z0 = parse_rational(z0).map_err(py_err)?;
    report(engine::verify_laurent_reciprocity(&params.inner, &z0, &mus, precision))
}

#[pyfunction]
#[pyo3(signature = (params, precision=DEFAULT_PRECISION))]
fn multiplicity_free(params: &PyParams, precision: u32) -> PyResult<PyReport> {
    report(engine::multiplicity_free_reciprocity(&params.inner, precision))
}

/// Laurent coefficient `M_n` of `Φ` at the origin, as `(coeff, pi_power)`.
#[pyfunction]
fn m_coefficient(params: &PyParams, n: u32) -> PyResult<(String, u32)> {
    Ok(pi_scaled(&engine::m_coefficient(&params.inner, n).map_err(py_err)?))
}

#[pyfunction]
#[pyo3(signature = (a, j=None, precision=DEFAULT_PRECISION))]
fn zagier(a: Vec<u32>, j: Option<(usize, usize)>, precision: u32) -> PyResult<PyReport> {
    let j = j.unwrap_or((a.len(), 0));
    report(engine::zagier_reciprocity(&a, j, precision))
}

/// `s_n(q; p)`.
#[pyfunction]
#[pyo3(signature = (n, q, p, precision=DEFAULT_PRECISION))]
fn apostol_sum(n: u32, q: u32, p: u32, precision: u32) -> PyResult<Complex64> {
    Ok(to_complex(&engine::apostol_sum(n, q, p, precision).map_err(py_err)?))
}

/// Closed form of the reciprocity combination for `s_{2k+1}`.
#[pyfunction]
fn apostol_rhs(k: u32, p: u32, q: u32) -> String {
    rational_string(&engine::apostol_rhs(k, p, q))
}

#[pyfunction]
#[pyo3(signature = (k, p, q, precision=DEFAULT_PRECISION))]
fn apostol(k: u32, p: u32, q: u32, precision: u32) -> PyResult<PyReport> {
    report(engine::apostol_reciprocity(k, p, q, precision))
}

#[pyfunction]
#[pyo3(signature = (case, p, q, z=None, samples=20, seed=0x5eed, precision=DEFAULT_PRECISION))]
fn fukuhara(
    case: u8,
    p: u32,
    q: u32,
    z: Option<Vec<Complex64>>,
    samples: usize,
    seed: u64,
    precision: u32,
) -> PyResult<PyReport> {
    let pts = points(z, samples, seed, precision)?;
    report(engine::fukuhara_instance(case, p, q, &pts, precision))
}

#[pyfunction]
#[pyo3(signature = (a, w=None, kinds=("I".to_string(), "I".to_string()), z=None, samples=20, seed=0x5eed, precision=DEFAULT_PRECISION))]
#[allow(clippy::too_many_arguments)]
fn r2(
    a: (u32, u32),
    w: Option<(String, String)>,
    kinds: (String, String),
    z: Option<Vec<Complex64>>,
    samples: usize,
    seed: u64,
    precision: u32,
) -> PyResult<PyReport> {
    let (w1, w2) = match w {
        Some((x, y)) => (parse_rational(&x).map_err(py_err)?, parse_rational(&y).map_err(py_err)?),
        None => (Rational::new(), Rational::new()),
    };
    let kinds = (parse_kind(&kinds.0)?, parse_kind(&kinds.1)?);
    let pts = points(z, samples, seed, precision)?;
    report(engine::r2_identity(a, (&w1, &w2), kinds, &pts, precision))
}

/// Seeded family of parameter sets used by the acceptance suite.
#[pyfunction]
fn random_family(seed: u64, count: usize) -> Vec<PyParams> {
    engine::random_family(seed, count)
        .into_iter()
        .map(|inner| PyParams { inner })
        .collect()
}

#[pymodule]
#[pyo3(name = "reciplab")]
fn reciplab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyReport>()?;
    m.add("DEFAULT_PRECISION", DEFAULT_PRECISION)?;
    m.add_function(wrap_pyfunction!(bernoulli, m)?)?;
    m.add_function(wrap_pyfunction!(alpha, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(phi_at_rational, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identity, m)?)?;
    m.add_function(wrap_pyfunction!(reciprocity, m)?)?;
    m.add_function(wrap_pyfunction!(laurent, m)?)?;
    m.add_function(wrap_pyfunction!(multiplicity_free, m)?)?;
    m.add_function(wrap_pyfunction!(m_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(zagier, m)?)?;
    m.add_function(wrap_pyfunction!(apostol_sum, m)?)?;
    m.add_function(wrap_pyfunction!(apostol_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(apostol, m)?)?;
    m.add_function(wrap_pyfunction!(fukuhara, m)?)?;
    m.add_function(wrap_pyfunction!(r2, m)?)?;
    m.add_function(wrap_pyfunction!(random_family, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_defaults() {
        let p = PyParams::new(vec![2, 3], None, None, None).unwrap();
        assert_eq!(p.m(), vec![1, 1]);
        assert_eq!(p.w(), vec!["0/1", "0/1"]);
        assert_eq!(p.j(), (2, 0));
        assert_eq!(p.case(), "I");
    }

    #[test]
    fn shifts_parse_from_strings() {
        let p = PyParams::new(
            vec![2, 3],
            Some(vec![1, 2]),
            Some(vec!["1/3".into(), "0".into()]),
            Some((1, 1)),
        )
        .unwrap();
        assert_eq!(p.w(), vec!["1/3", "0/1"]);
        assert_eq!(p.case(), "II");
    }

    #[test]
    fn apostol_closed_form_string() {
        assert_eq!(apostol_rhs(0, 2, 3), "-1/18");
        assert_eq!(bernoulli(2), "1/6");
    }
}
