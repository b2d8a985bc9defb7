//! Python bindings: `import cwbc_py`.

use std::time::Duration;

use pyo3::exceptions::{PyMemoryError, PyOSError, PyValueError};
use pyo3::prelude::*;

use cwbc::oracle::exact_max_code;
use cwbc::{
    enumerate_weight_w, format_code, pairwise_histogram, parse_code, run_msrsdh, run_rsdh, run_srsdh, run_tabu,
    Budget, Codeword, CwcError, GreedyOutcome, RngStream, SliceConfig, TabuConfig, DEFAULT_MEMORY_LIMIT,
};

fn py_err(e: CwcError) -> PyErr {
    match e {
        CwcError::Io(e) => PyOSError::new_err(e.to_string()),
        e @ CwcError::CapacityExceeded { .. } => PyMemoryError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn words_of(raw: &[u64]) -> Vec<Codeword> {
    raw.iter().copied().map(Codeword).collect()
}

fn raw_of(words: &[Codeword]) -> Vec<u64> {
    words.iter().map(|c| c.0).collect()
}

fn budget(time_limit: Option<f64>, iterations: Option<u64>) -> PyResult<Budget> {
    let mut b = Budget::unlimited();
    if let Some(t) = time_limit {
        if !(t.is_finite() && t > 0.0) {
            return Err(PyValueError::new_err("time_limit must be positive"));
        }
        b = b.with_time_limit(Duration::from_secs_f64(t));
    }
    b.max_iterations = iterations;
    Ok(b)
}

/// Code parameters; `strict` also enforces w > 3 and 4 <= d <= 20.
#[pyclass(frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct Params {
    inner: cwbc::Params,
}

#[pymethods]
impl Params {
    #[new]
    #[pyo3(signature = (n, w, d, s, strict = false))]
    fn new(n: u32, w: u32, d: u32, s: usize, strict: bool) -> PyResult<Self> {
        let inner = if strict {
            cwbc::Params::strict(n, w, d, s)
        } else {
            cwbc::Params::new(n, w, d, s)
        };
        inner.map(|inner| Self { inner }).map_err(py_err)
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n
    }

    #[getter]
    fn w(&self) -> u32 {
        self.inner.w
    }

    #[getter]
    fn d(&self) -> u32 {
        self.inner.d
    }

    #[getter]
    fn s(&self) -> usize {
        self.inner.s
    }

    /// Number of weight-w words, C(n, w).
    fn word_count(&self) -> u128 {
        self.inner.word_count()
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!("Params(n={}, w={}, d={}, s={})", p.n, p.w, p.d, p.s)
    }
}

#[pyclass(frozen, get_all)]
struct VerifyReport {
    valid: bool,
    size: usize,
    min_distance: Option<u32>,
    weight_violations: Vec<(usize, u32)>,
    out_of_range: Vec<usize>,
    distance_violations: Vec<(usize, usize, u32)>,
    duplicate_pairs: Vec<(usize, usize)>,
}

#[pymethods]
impl VerifyReport {
    fn __bool__(&self) -> bool {
        self.valid
    }

    fn __repr__(&self) -> String {
        format!(
            "VerifyReport(valid={}, size={}, min_distance={:?})",
            self.valid, self.size, self.min_distance
        )
    }
}

/// Checks `words` (ints, bit i = coordinate i) against `params`; `s` is a minimum size.
#[pyfunction]
fn verify(words: Vec<u64>, params: &Params) -> VerifyReport {
    let r = cwbc::verify(&words_of(&words), &params.inner);
    VerifyReport {
        valid: r.valid,
        size: r.size,
        min_distance: r.min_distance,
        weight_violations: r.weight_violations,
        out_of_range: r.out_of_range,
        distance_violations: r.distance_violations,
        duplicate_pairs: r.duplicate_pairs,
    }
}

#[pyfunction]
fn hamming_distance(a: u64, b: u64) -> u32 {
    cwbc::hamming_distance(Codeword(a), Codeword(b))
}

/// All weight-w words of length n in ascending order.
#[pyfunction]
#[pyo3(signature = (n, w, memory_limit = DEFAULT_MEMORY_LIMIT))]
fn enumerate(n: u32, w: u32, memory_limit: u64) -> PyResult<Vec<u64>> {
    enumerate_weight_w(n, w, memory_limit).map(|v| raw_of(&v)).map_err(py_err)
}

/// `{distance: pair count}` over all pairs of `words`.
#[pyfunction]
fn histogram(words: Vec<u64>) -> Vec<(u32, u64)> {
    pairwise_histogram(&words_of(&words)).iter().collect()
}

#[pyfunction]
fn format_words(words: Vec<u64>, n: u32) -> String {
    format_code(&words_of(&words), n)
}

#[pyfunction]
fn parse_words(text: &str, n: u32) -> PyResult<Vec<u64>> {
    parse_code(text, n).map(|v| raw_of(&v)).map_err(py_err)
}

/// Bit-swap tabu search for exactly `params.s` words; `None` on timeout.
#[pyfunction]
#[pyo3(signature = (params, seed = 0, time_limit = None, max_steps = None, t_min = 5, t_max = 15, restart_steps = 1_000_000))]
#[allow(clippy::too_many_arguments)]
fn tabu(
    py: Python<'_>,
    params: &Params,
    seed: u64,
    time_limit: Option<f64>,
    max_steps: Option<u64>,
    t_min: u32,
    t_max: u32,
    restart_steps: u64,
) -> PyResult<Option<Vec<u64>>> {
    let b = budget(time_limit, max_steps)?;
    let cfg = TabuConfig {
        t_min,
        t_max,
        max_no_improve_restart: restart_steps,
        ..TabuConfig::default()
    };
    let p = params.inner;
    let out = py
        .detach(|| run_tabu(&p, &cfg, &mut RngStream::new(seed), b))
        .map_err(py_err)?;
    Ok(out.code().map(|c| raw_of(&c.words)))
}

#[pyclass(frozen, get_all)]
struct GreedyResult {
    /// Words in construction order.
    words: Vec<u64>,
    reached: bool,
    /// `(distance, score)` pairs of the scoring vector behind `words`.
    scoring_vector: Vec<(u32, i32)>,
    iterations: u64,
    slice_prefix: Option<usize>,
}

#[pymethods]
impl GreedyResult {
    fn __len__(&self) -> usize {
        self.words.len()
    }

    fn __repr__(&self) -> String {
        format!("GreedyResult(size={}, reached={})", self.words.len(), self.reached)
    }
}

impl From<GreedyOutcome> for GreedyResult {
    fn from(out: GreedyOutcome) -> Self {
        Self {
            words: raw_of(&out.code.words),
            reached: out.reached,
            scoring_vector: out.sv.entries().collect(),
            iterations: out.iterations,
            slice_prefix: out.slice_prefix,
        }
    }
}

/// RSDH until `params.s` words or the budget runs out.
#[pyfunction]
#[pyo3(signature = (params, seed = 0, time_limit = None, rounds = None))]
fn rsdh(py: Python<'_>, params: &Params, seed: u64, time_limit: Option<f64>, rounds: Option<u64>) -> PyResult<GreedyResult> {
    let b = budget(time_limit, rounds)?;
    let p = params.inner;
    py.detach(|| run_rsdh(&p, &mut RngStream::new(seed), b, DEFAULT_MEMORY_LIMIT))
        .map(Into::into)
        .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (params, b, t = 1000, seed = 0, time_limit = None, rounds = None))]
fn srsdh(
    py: Python<'_>,
    params: &Params,
    b: u32,
    t: u32,
    seed: u64,
    time_limit: Option<f64>,
    rounds: Option<u64>,
) -> PyResult<GreedyResult> {
    let bud = budget(time_limit, rounds)?;
    let p = params.inner;
    py.detach(|| run_srsdh(&p, &SliceConfig::new(b, t), &mut RngStream::new(seed), bud, DEFAULT_MEMORY_LIMIT))
        .map(Into::into)
        .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (params, b, t = 1000, seed = 0, time_limit = None, rounds = None))]
fn msrsdh(
    py: Python<'_>,
    params: &Params,
    b: u32,
    t: u32,
    seed: u64,
    time_limit: Option<f64>,
    rounds: Option<u64>,
) -> PyResult<GreedyResult> {
    let bud = budget(time_limit, rounds)?;
    let p = params.inner;
    py.detach(|| run_msrsdh(&p, &SliceConfig::new(b, t), &mut RngStream::new(seed), bud, DEFAULT_MEMORY_LIMIT))
        .map(Into::into)
        .map_err(py_err)
}

/// `(size, proven_optimal, words)` from the exact clique search.
#[pyfunction]
#[pyo3(signature = (n, w, d, node_limit = 10_000_000))]
fn exact_max(py: Python<'_>, n: u32, w: u32, d: u32, node_limit: u64) -> PyResult<(usize, bool, Vec<u64>)> {
    let p = cwbc::Params::new(n, w, d, 1).map_err(py_err)?;
    let r = py.detach(|| exact_max_code(&p, node_limit)).map_err(py_err)?;
    Ok((r.size, r.optimal, raw_of(&r.code)))
}

#[pymodule]
fn cwbc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Params>()?;
    m.add_class::<VerifyReport>()?;
    m.add_class::<GreedyResult>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(hamming_distance, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(histogram, m)?)?;
    m.add_function(wrap_pyfunction!(format_words, m)?)?;
    m.add_function(wrap_pyfunction!(parse_words, m)?)?;
    m.add_function(wrap_pyfunction!(tabu, m)?)?;
    m.add_function(wrap_pyfunction!(rsdh, m)?)?;
    m.add_function(wrap_pyfunction!(srsdh, m)?)?;
    m.add_function(wrap_pyfunction!(msrsdh, m)?)?;
    m.add_function(wrap_pyfunction!(exact_max, m)?)?;
    Ok(())
}
