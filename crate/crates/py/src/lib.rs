//! Python bindings: thin wrappers that return plain dicts/lists so the
//! module needs no Python-side classes. All reports are converted through
//! their JSON form.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde::Serialize;
use serde_json::Value;

use sidongap::construct::{self, MatchingOutcome, RHO};
use sidongap::domain::{self, SidonSet};
use sidongap::exact;
use sidongap::primes::Sieve;
use sidongap::sidon::{self, CertItem, PrivatePrimeCertificate, SidonVerdict};

fn json_to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any().unbind()
            } else if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.into_any().unbind()
            } else if let Some(f) = n.as_f64() {
                f.into_pyobject(py)?.into_any().unbind()
            } else {
                return Err(PyValueError::new_err(format!("unrepresentable number {n}")));
            }
        }
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any().unbind()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, val) in map {
                dict.set_item(k, json_to_py(py, val)?)?;
            }
            dict.into_any().unbind()
        }
    })
}

fn ser<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &v)
}

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

// --- domain ---------------------------------------------------------------

#[pyfunction]
fn gap_measure(py: Python<'_>, n: u64, elements: Vec<u64>) -> PyResult<Py<PyAny>> {
    let set = SidonSet::new(n, elements).map_err(err)?;
    ser(py, &domain::gap_measure(&set))
}

#[pyfunction]
#[pyo3(signature = (elements, budget = sidon::DEFAULT_PRODUCT_BUDGET))]
fn is_multiplicative_sidon(py: Python<'_>, elements: Vec<u64>, budget: u64) -> PyResult<Py<PyAny>> {
    let verdict = sidon::is_multiplicative_sidon(&elements, budget).map_err(err)?;
    let out = PyDict::new(py);
    match verdict {
        SidonVerdict::Sidon => {
            out.set_item("sidon", true)?;
            out.set_item("witness", py.None())?;
        }
        SidonVerdict::Conflict(w) => {
            out.set_item("sidon", false)?;
            out.set_item("witness", ser(py, &w)?)?;
        }
    }
    Ok(out.into_any().unbind())
}

/// items are (a, m, p) triples; returns the list of violation messages
/// (empty means the certificate is valid).
#[pyfunction]
fn check_certificate(j: u64, items: Vec<(u64, u64, u64)>) -> Vec<String> {
    let cert = PrivatePrimeCertificate {
        j,
        items: items.into_iter().map(|(a, m, p)| CertItem { a, m, p }).collect(),
    };
    sidon::check_certificate(&cert).iter().map(|v| v.to_string()).collect()
}

// --- constructions ---------------------------------------------------------

#[pyfunction]
fn elementary(py: Python<'_>, n: u64) -> PyResult<Py<PyAny>> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be positive"));
    }
    let set = construct::elementary(n);
    let gap = domain::gap_measure(&set);
    let out = PyDict::new(py);
    out.set_item("set", ser(py, &set)?)?;
    out.set_item("gap", ser(py, &gap)?)?;
    Ok(out.into_any().unbind())
}

#[pyfunction]
#[pyo3(signature = (q, budget = 10_000))]
fn verify_theorem1_algebra(q: u64, budget: u64) -> PyResult<Option<(u64, u64, u64, u64)>> {
    construct::verify_theorem1_algebra(q, budget).map_err(err)
}

#[pyfunction]
fn sup_eta(alpha: f64) -> PyResult<f64> {
    construct::sup_eta(alpha).map_err(err)
}

#[pyfunction]
fn delta_window(alpha: f64) -> (f64, f64) {
    construct::delta_window(alpha)
}

#[pyfunction]
fn choose_exponents(py: Python<'_>, epsilon: f64) -> PyResult<Py<PyAny>> {
    ser(py, &construct::choose_exponents(epsilon).map_err(err)?)
}

#[pyfunction]
fn derive_params(py: Python<'_>, n: u64, alpha: f64, beta: f64, delta: f64) -> PyResult<Py<PyAny>> {
    ser(py, &construct::derive_params(n, alpha, beta, delta).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (n, alpha, beta, delta = None))]
fn matching_construct(
    py: Python<'_>,
    n: u64,
    alpha: f64,
    beta: f64,
    delta: Option<f64>,
) -> PyResult<Py<PyAny>> {
    let delta = delta.unwrap_or_else(|| {
        let (lo, hi) = construct::delta_window(alpha);
        (lo + hi) / 2.0
    });
    let params = construct::derive_params(n, alpha, beta, delta).map_err(err)?;
    let sieve = Sieve::new(params.t_total * params.h + 16);
    let out = PyDict::new(py);
    out.set_item("params", ser(py, &params)?)?;
    match construct::matching_construct(&sieve, &params).map_err(err)? {
        MatchingOutcome::Success(s) => {
            out.set_item("outcome", "constructed")?;
            out.set_item("set", ser(py, &s.set)?)?;
            out.set_item("certificate", ser(py, &s.certificate.to_private_prime())?)?;
            out.set_item("gap", ser(py, &s.gap)?)?;
            out.set_item("checks", ser(py, &s.checks)?)?;
            out.set_item("stats", ser(py, &s.stats)?)?;
        }
        MatchingOutcome::PrimeFreeInterval { i, lo, hi } => {
            out.set_item("outcome", "prime-free-interval")?;
            out.set_item("interval", (i, lo, hi))?;
        }
        MatchingOutcome::Deficient { intervals, neighborhood_size, witness } => {
            out.set_item("outcome", "deficient")?;
            out.set_item("intervals", intervals)?;
            out.set_item("neighborhood_size", neighborhood_size)?;
            out.set_item("witness", ser(py, &witness)?)?;
        }
    }
    Ok(out.into_any().unbind())
}

// --- primes ----------------------------------------------------------------

#[pyfunction]
fn prime_count(x: u64) -> PyResult<u64> {
    Sieve::new(x + 2).prime_count_u64(x).map_err(err)
}

#[pyfunction]
fn primes_in(lo: f64, hi: f64) -> PyResult<Vec<u64>> {
    if !(hi.is_finite() && hi >= 0.0) {
        return Err(PyValueError::new_err("hi must be finite and nonnegative"));
    }
    Sieve::new(hi.ceil() as u64 + 2).primes_in(lo, hi).map_err(err)
}

#[pyfunction]
fn bhp_scan(py: Python<'_>, x_min: u64, x_max: u64) -> PyResult<Py<PyAny>> {
    let sieve = Sieve::new(x_max.saturating_add(1_000).max(1_000));
    ser(py, &sidongap::primes::bhp_scan(&sieve, x_min, x_max).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (x, alpha, beta, c0 = 0.0))]
fn lm_sum(py: Python<'_>, x: u64, alpha: f64, beta: f64, c0: f64) -> PyResult<Py<PyAny>> {
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(PyValueError::new_err("alpha must lie in (0, 1)"));
    }
    let sieve = Sieve::new(x.saturating_add((x as f64).powf(alpha).ceil() as u64 + 16));
    ser(py, &sidongap::primes::lm_sum(&sieve, x, alpha, beta, c0).map_err(err)?)
}

// --- exact -----------------------------------------------------------------

#[pyfunction]
#[pyo3(signature = (n, budget = exact::DEFAULT_NODE_BUDGET))]
fn exact_g(py: Python<'_>, n: u64, budget: u64) -> PyResult<Py<PyAny>> {
    ser(py, &exact::exact_g(n, budget).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (n, budget = exact::DEFAULT_NODE_BUDGET))]
fn max_sidon_size(py: Python<'_>, n: u64, budget: u64) -> PyResult<Py<PyAny>> {
    ser(py, &exact::max_sidon_size(n, budget).map_err(err)?)
}

#[pymodule]
fn sidongap_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("RHO", RHO)?;
    m.add_function(wrap_pyfunction!(gap_measure, m)?)?;
    m.add_function(wrap_pyfunction!(is_multiplicative_sidon, m)?)?;
    m.add_function(wrap_pyfunction!(check_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(elementary, m)?)?;
    m.add_function(wrap_pyfunction!(verify_theorem1_algebra, m)?)?;
    m.add_function(wrap_pyfunction!(sup_eta, m)?)?;
    m.add_function(wrap_pyfunction!(delta_window, m)?)?;
    m.add_function(wrap_pyfunction!(choose_exponents, m)?)?;
    m.add_function(wrap_pyfunction!(derive_params, m)?)?;
    m.add_function(wrap_pyfunction!(matching_construct, m)?)?;
    m.add_function(wrap_pyfunction!(prime_count, m)?)?;
    m.add_function(wrap_pyfunction!(primes_in, m)?)?;
    m.add_function(wrap_pyfunction!(bhp_scan, m)?)?;
    m.add_function(wrap_pyfunction!(lm_sum, m)?)?;
    m.add_function(wrap_pyfunction!(exact_g, m)?)?;
    m.add_function(wrap_pyfunction!(max_sidon_size, m)?)?;
    Ok(())
}
