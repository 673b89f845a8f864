//! Python bindings for the matrix NTRU variant: parameter handling, key
//! generation, byte-level encryption, and the closed-form security counts.
//!
//! Exceptions: malformed inputs and bad parameters raise `ValueError`;
//! runtime failures inside the scheme (retry exhaustion, non-invertible
//! elements) raise `RuntimeError`.

use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

use nnru::analysis::security;
use nnru::encoding::{decode_message, encode_message};
use nnru::params::{Params as CoreParams, Preset};
use nnru::rng::Streams;
use nnru::scheme;
use nnru::serial;
use nnru::NnruError;

fn to_py_err(err: NnruError) -> PyErr {
    match err {
        NnruError::InvalidParams(_)
        | NnruError::PlaintextRange { .. }
        | NnruError::UnsupportedEncoding { .. }
        | NnruError::DecodeError(_)
        | NnruError::FormatError(_)
        | NnruError::ParamsMismatch(_)
        | NnruError::SearchSpaceTooLarge { .. } => PyValueError::new_err(err.to_string()),
        NnruError::NotInvertible { .. }
        | NnruError::KeygenFailure { .. }
        | NnruError::AttackInapplicable(_) => PyRuntimeError::new_err(err.to_string()),
    }
}

/// Scheme parameters (ring degree n, matrix size k, moduli p and q, and the
/// four sampling weights).
#[pyclass(frozen, module = "nnru_py")]
struct Params {
    inner: CoreParams,
}

#[pymethods]
impl Params {
    /// Builds explicit parameters; omitted weights default to max(1, n/6).
    #[new]
    #[pyo3(signature = (n, k, p, q, d_f=None, d_w=None, d_c=None, d_phi=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        n: usize,
        k: usize,
        p: i64,
        q: i64,
        d_f: Option<usize>,
        d_w: Option<usize>,
        d_c: Option<usize>,
        d_phi: Option<usize>,
    ) -> PyResult<Self> {
        let mut inner = CoreParams::from_header(n, k, p, q);
        if let Some(d) = d_f {
            inner.d_f = d;
        }
        if let Some(d) = d_w {
            inner.d_w = d;
        }
        if let Some(d) = d_c {
            inner.d_c = d;
        }
        if let Some(d) = d_phi {
            inner.d_phi = d;
        }
        inner.validate().map_err(to_py_err)?;
        Ok(Params { inner })
    }

    /// Looks up a named preset: "toy-micro", "toy", "small", or "reference".
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        let preset = Preset::from_name(name).map_err(to_py_err)?;
        Ok(Params {
            inner: preset.params(),
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k
    }

    #[getter]
    fn p(&self) -> i64 {
        self.inner.p
    }

    #[getter]
    fn q(&self) -> i64 {
        self.inner.q
    }

    #[getter]
    fn d_f(&self) -> usize {
        self.inner.d_f
    }

    #[getter]
    fn d_w(&self) -> usize {
        self.inner.d_w
    }

    #[getter]
    fn d_c(&self) -> usize {
        self.inner.d_c
    }

    #[getter]
    fn d_phi(&self) -> usize {
        self.inner.d_phi
    }

    /// Total coefficient count n·k² of one matrix element.
    #[getter]
    fn coeff_count(&self) -> usize {
        self.inner.coeff_count()
    }

    /// Evaluates the decryption-noise model: a dict with the predicted
    /// exact-noise norm and per-coefficient sigma (corrected and naive
    /// variants), the window margin q/(2σ), and a failure-prone flag.
    fn noise_model<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let report = self.inner.validate().map_err(to_py_err)?;
        let dict = PyDict::new(py);
        dict.set_item("b_norm", report.b_norm)?;
        dict.set_item("sigma", report.sigma)?;
        dict.set_item("b_norm_naive", report.b_norm_naive)?;
        dict.set_item("sigma_naive", report.sigma_naive)?;
        dict.set_item("margin", report.margin)?;
        dict.set_item("failure_prone", report.failure_prone)?;
        Ok(dict)
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "Params(n={}, k={}, p={}, q={}, d_f={}, d_w={}, d_c={}, d_phi={})",
            p.n, p.k, p.p, p.q, p.d_f, p.d_w, p.d_c, p.d_phi
        )
    }
}

/// Public key (h, H); serializes to the binary key format.
#[pyclass(frozen, module = "nnru_py")]
struct PublicKey {
    inner: scheme::PublicKey,
}

#[pymethods]
impl PublicKey {
    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        Ok(PublicKey {
            inner: serial::parse_public_key(data).map_err(to_py_err)?,
        })
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &serial::serialize_public_key(&self.inner))
    }

    #[getter]
    fn params(&self) -> Params {
        Params {
            inner: self.inner.params,
        }
    }
}

/// Private key (f, g, inverses, and the public material needed to decrypt).
#[pyclass(frozen, module = "nnru_py")]
struct PrivateKey {
    inner: scheme::PrivateKey,
}

#[pymethods]
impl PrivateKey {
    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        Ok(PrivateKey {
            inner: serial::parse_private_key(data).map_err(to_py_err)?,
        })
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &serial::serialize_private_key(&self.inner))
    }

    #[getter]
    fn params(&self) -> Params {
        Params {
            inner: self.inner.params,
        }
    }
}

/// Generates a key pair. Deterministic for a fixed seed.
#[pyfunction]
fn keygen(params: &Params, seed: u64) -> PyResult<(PublicKey, PrivateKey)> {
    let streams = Streams::new(seed);
    let (public, private) =
        scheme::keygen(&params.inner, &mut streams.stream("keygen", 0)).map_err(to_py_err)?;
    Ok((PublicKey { inner: public }, PrivateKey { inner: private }))
}

/// Encrypts arbitrary bytes under the public key; returns the serialized
/// ciphertext blocks. Deterministic for a fixed seed.
#[pyfunction]
fn encrypt<'py>(
    py: Python<'py>,
    public: &PublicKey,
    data: &[u8],
    seed: u64,
) -> PyResult<Bound<'py, PyBytes>> {
    let params = public.inner.params;
    let blocks = encode_message(data, &params).map_err(to_py_err)?;
    let streams = Streams::new(seed);
    let ciphertexts = blocks
        .iter()
        .enumerate()
        .map(|(i, m)| scheme::encrypt(&public.inner, m, &mut streams.stream("encrypt-block", i as u64)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(to_py_err)?;
    let bytes = serial::serialize_ciphertexts(&params, &ciphertexts).map_err(to_py_err)?;
    Ok(PyBytes::new(py, &bytes))
}

/// Decrypts serialized ciphertext blocks back to the original bytes.
#[pyfunction]
fn decrypt<'py>(py: Python<'py>, private: &PrivateKey, data: &[u8]) -> PyResult<Bound<'py, PyBytes>> {
    let ciphertexts = serial::parse_ciphertexts(data).map_err(to_py_err)?;
    let blocks = ciphertexts
        .iter()
        .map(|ct| scheme::decrypt(&private.inner, ct))
        .collect::<Result<Vec<_>, _>>()
        .map_err(to_py_err)?;
    let message = decode_message(&blocks, &private.inner.params).map_err(to_py_err)?;
    Ok(PyBytes::new(py, &message))
}

/// Exact count of private-key candidates (f, g) under the sampling weights.
#[pyfunction]
fn key_security(params: &Params) -> PyResult<BigUint> {
    security::key_security(&params.inner).map_err(to_py_err)
}

/// Exact count of message/blinding candidates (m, phi).
#[pyfunction]
fn message_security(params: &Params) -> PyResult<BigUint> {
    security::message_security(&params.inner).map_err(to_py_err)
}

/// Square-root (meet-in-the-middle) cost for a search space of that size.
#[pyfunction]
fn mitm_cost(count: BigUint) -> BigUint {
    security::mitm_cost(&count)
}

/// Names of the built-in parameter presets.
#[pyfunction]
fn preset_names() -> Vec<&'static str> {
    Preset::ALL.iter().map(|p| p.name()).collect()
}

#[pymodule]
fn nnru_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Params>()?;
    m.add_class::<PublicKey>()?;
    m.add_class::<PrivateKey>()?;
    m.add_function(wrap_pyfunction!(keygen, m)?)?;
    m.add_function(wrap_pyfunction!(encrypt, m)?)?;
    m.add_function(wrap_pyfunction!(decrypt, m)?)?;
    m.add_function(wrap_pyfunction!(key_security, m)?)?;
    m.add_function(wrap_pyfunction!(message_security, m)?)?;
    m.add_function(wrap_pyfunction!(mitm_cost, m)?)?;
    m.add_function(wrap_pyfunction!(preset_names, m)?)?;
    Ok(())
}
