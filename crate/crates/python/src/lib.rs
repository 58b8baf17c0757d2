//! Python bindings: objectives, offline baselines, the sliding-window
//! algorithms and the benchmark harness.

use std::sync::Arc;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use slidesub::bench::cli::{parse_cli, CliError};
use slidesub::bench::{self, MetricsRecord};
use slidesub::ingest::{self, DatasetStore};
use slidesub::objectives::{self, AnyObjective, KernelParams, ObjectiveKind, SetPayload};
use slidesub::sliding::{PrioritySample, SieveGreedy, SieveNaive, SwDp, Swrd};
use slidesub::streaming::{self, SieveStream};
use slidesub::{Bounds, CountingOracle, Error, Item, ItemId, Objective as _, StreamAlgorithm};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn set_store(sets: Vec<Vec<u64>>) -> DatasetStore {
    DatasetStore::sets(sets.into_iter().map(SetPayload::new).collect())
}

fn store_to_py(py: Python<'_>, store: &DatasetStore) -> PyResult<Py<PyAny>> {
    Ok(match store {
        DatasetStore::Dense(d) => d.rows.iter().cloned().collect::<Vec<Vec<f64>>>().into_pyobject(py)?.unbind(),
        DatasetStore::Sets(s) => {
            s.iter().map(|p| p.elements().to_vec()).collect::<Vec<Vec<u64>>>().into_pyobject(py)?.unbind()
        }
    })
}

/// A submodular objective over a fixed ground set of stream positions.
#[pyclass(name = "Objective", frozen)]
struct PyObjective {
    inner: AnyObjective,
}

#[pymethods]
impl PyObjective {
    /// Maximum coverage over integer sets.
    #[staticmethod]
    fn coverage(sets: Vec<Vec<u64>>) -> PyResult<Self> {
        let store = set_store(sets);
        let inner =
            AnyObjective::from_store(ObjectiveKind::Coverage, &store, KernelParams::default()).map_err(to_py)?;
        Ok(PyObjective { inner })
    }

    /// Log-det objective with a squared-exponential kernel.
    #[staticmethod]
    #[pyo3(signature = (points, h = 0.75, sigma = 1.0))]
    fn ivm(points: Vec<Vec<f64>>, h: f64, sigma: f64) -> PyResult<Self> {
        let params = KernelParams::new(h, sigma).map_err(to_py)?;
        let store = DatasetStore::dense(points).map_err(to_py)?;
        let inner = AnyObjective::from_store(ObjectiveKind::Ivm, &store, params).map_err(to_py)?;
        Ok(PyObjective { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.ground_len()
    }

    fn eval(&self, ids: Vec<ItemId>) -> PyResult<f64> {
        self.inner.check_ids(&ids).map_err(to_py)?;
        Ok(self.inner.eval(&ids))
    }

    fn marginal(&self, id: ItemId, ids: Vec<ItemId>) -> PyResult<f64> {
        self.inner.check_ids(&ids).map_err(to_py)?;
        self.inner.check_ids(&[id]).map_err(to_py)?;
        Ok(self.inner.marginal(id, &ids))
    }

    fn upper_bound(&self, k: usize) -> PyResult<f64> {
        objectives::estimate_upper_bound(&self.inner, k).map_err(to_py)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner.kind() {
            ObjectiveKind::Coverage => "coverage",
            ObjectiveKind::Ivm => "ivm",
        }
    }
}

/// A streaming algorithm fed one item per timestep.
///
/// Items are stream positions: the `t`-th pushed item must be id `t - 1`.
#[pyclass(name = "SlidingWindow", unsendable)]
struct PySlidingWindow {
    alg: Box<dyn StreamAlgorithm>,
    oracle: Arc<CountingOracle<AnyObjective>>,
    algorithm: String,
    t: u64,
}

#[pymethods]
impl PySlidingWindow {
    #[new]
    #[pyo3(signature = (objective, algorithm, k, window, epsilon = 0.2, upper_bound = None, sample_c = 20.0, seed = 0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        objective: &PyObjective,
        algorithm: &str,
        k: usize,
        window: u64,
        epsilon: f64,
        upper_bound: Option<f64>,
        sample_c: f64,
        seed: u64,
    ) -> PyResult<Self> {
        let m = match upper_bound {
            Some(m) => m,
            None => objectives::estimate_upper_bound(&objective.inner, k).map_err(to_py)?,
        };
        let bounds = Bounds::new(m, epsilon).map_err(to_py)?;
        let o = Arc::new(CountingOracle::new(objective.inner.clone()));
        let alg: Box<dyn StreamAlgorithm> = match algorithm {
            "sw-rd" => Box::new(Swrd::with_sieve(k, window, bounds, o.clone()).map_err(to_py)?),
            "sw-dp" => Box::new(SwDp::new(k, window, &bounds, o.clone()).map_err(to_py)?),
            "sieve-naive" => Box::new(SieveNaive::new(k, window, &bounds, o.clone()).map_err(to_py)?),
            "sieve-greedy" => Box::new(SieveGreedy::new(k, window, &bounds, sample_c, seed, o.clone()).map_err(to_py)?),
            "random" => Box::new(PrioritySample::new(k, window, seed, o.clone()).map_err(to_py)?),
            "sieve" => Box::new(SieveStream::new(k, &bounds, o.clone()).map_err(to_py)?),
            other => return Err(PyValueError::new_err(format!("unknown streaming algorithm '{other}'"))),
        };
        Ok(PySlidingWindow { alg, oracle: o, algorithm: algorithm.to_owned(), t: 0 })
    }

    /// Feeds the next stream item.
    fn step(&mut self) -> PyResult<()> {
        let id = self.t as usize;
        if id >= self.oracle.inner().ground_len() {
            return Err(PyValueError::new_err("stream exhausted"));
        }
        self.t += 1;
        self.alg.step(Item::new(self.t, id));
        Ok(())
    }

    /// Feeds `n` items, or the rest of the stream.
    #[pyo3(signature = (n = None))]
    fn extend(&mut self, n: Option<usize>) -> PyResult<()> {
        let left = self.oracle.inner().ground_len() - self.t as usize;
        for _ in 0..n.unwrap_or(left) {
            self.step()?;
        }
        Ok(())
    }

    /// `(ids, value)` of the current solution.
    fn query(&self) -> (Vec<ItemId>, f64) {
        let s = self.alg.query();
        (s.items, s.value)
    }

    #[getter]
    fn timestep(&self) -> u64 {
        self.t
    }

    #[getter]
    fn algorithm(&self) -> &str {
        &self.algorithm
    }

    #[getter]
    fn retained(&self) -> usize {
        self.alg.retained()
    }

    #[getter]
    fn peak_items(&self) -> usize {
        self.alg.peak_items()
    }

    #[getter]
    fn oracle_calls(&self) -> u64 {
        self.oracle.calls()
    }
}

fn items_of(objective: &PyObjective, ids: Option<Vec<ItemId>>) -> PyResult<Vec<Item>> {
    let ids = ids.unwrap_or_else(|| (0..objective.inner.ground_len()).collect());
    objective.inner.check_ids(&ids).map_err(to_py)?;
    Ok(ids.into_iter().map(|i| Item::new(i as u64 + 1, i)).collect())
}

/// Offline greedy over `ids` (all items by default).
#[pyfunction]
#[pyo3(signature = (objective, k, ids = None))]
fn greedy(objective: &PyObjective, k: usize, ids: Option<Vec<ItemId>>) -> PyResult<(Vec<ItemId>, f64)> {
    let items = items_of(objective, ids)?;
    let o = CountingOracle::new(objective.inner.clone());
    let s = streaming::greedy_select(&items, k, &o);
    Ok((s.items, s.value))
}

/// Exhaustive optimum over `ids` (all items by default).
#[pyfunction]
#[pyo3(signature = (objective, k, ids = None))]
fn brute_force(objective: &PyObjective, k: usize, ids: Option<Vec<ItemId>>) -> PyResult<(Vec<ItemId>, f64)> {
    let ids: Vec<ItemId> = items_of(objective, ids)?.iter().map(|i| i.id).collect();
    let s = streaming::brute_force_opt(&ids, k, &objective.inner).map_err(to_py)?;
    Ok((s.items, s.value))
}

#[pyfunction]
fn coverage_value(sets: Vec<Vec<u64>>) -> usize {
    let payloads: Vec<SetPayload> = sets.into_iter().map(SetPayload::new).collect();
    objectives::coverage_value(&payloads.iter().collect::<Vec<_>>())
}

#[pyfunction]
#[pyo3(signature = (x, y, h = 0.75, sigma = 1.0))]
fn se_kernel(x: Vec<f64>, y: Vec<f64>, h: f64, sigma: f64) -> PyResult<f64> {
    let params = KernelParams::new(h, sigma).map_err(to_py)?;
    objectives::se_kernel(&x, &y, &params).map_err(to_py)
}

#[pyfunction]
fn load_set_stream(py: Python<'_>, path: std::path::PathBuf) -> PyResult<Py<PyAny>> {
    store_to_py(py, &ingest::load_set_stream(path).map_err(to_py)?)
}

#[pyfunction]
#[pyo3(signature = (path, delimiter = ',', drop_columns = Vec::new()))]
fn load_dense_csv(
    py: Python<'_>,
    path: std::path::PathBuf,
    delimiter: char,
    drop_columns: Vec<usize>,
) -> PyResult<Py<PyAny>> {
    let delim = u8::try_from(delimiter).map_err(|_| PyValueError::new_err("delimiter must be ASCII"))?;
    store_to_py(py, &ingest::load_dense_csv(path, delim, &drop_columns).map_err(to_py)?)
}

fn record_dict<'py>(py: Python<'py>, r: &MetricsRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("window_end", r.window_end)?;
    d.set_item("algorithm", &r.algorithm)?;
    d.set_item("k", r.k)?;
    d.set_item("W", r.window)?;
    d.set_item("epsilon", r.epsilon)?;
    d.set_item("utility", r.utility)?;
    d.set_item("solution_size", r.solution_size)?;
    d.set_item("oracle_calls", r.oracle_calls)?;
    d.set_item("peak_items", r.peak_items)?;
    d.set_item("wall_ms", r.wall_ms)?;
    Ok(d)
}

/// Runs the benchmark for CLI-style flags and returns one dict per record.
#[pyfunction]
fn run_benchmark<'py>(py: Python<'py>, args: Vec<String>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let argv = std::iter::once("slidesub".to_owned()).chain(args);
    let (cfgs, _) = parse_cli(argv).map_err(|e| match e {
        CliError::Clap(c) => PyValueError::new_err(c.to_string()),
        CliError::Run(r) => to_py(r),
    })?;
    let mut out = Vec::new();
    for cfg in &cfgs {
        for r in bench::run_benchmark(cfg).map_err(to_py)? {
            out.push(record_dict(py, &r)?);
        }
    }
    Ok(out)
}

#[pymodule]
fn pyslidesub(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyObjective>()?;
    m.add_class::<PySlidingWindow>()?;
    m.add_function(wrap_pyfunction!(greedy, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(coverage_value, m)?)?;
    m.add_function(wrap_pyfunction!(se_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(load_set_stream, m)?)?;
    m.add_function(wrap_pyfunction!(load_dense_csv, m)?)?;
    m.add_function(wrap_pyfunction!(run_benchmark, m)?)?;
    Ok(())
}
