//! Streams a dataset through one algorithm and records metrics at the
//! queried windows.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use crate::algorithm::{Solution, StreamAlgorithm};
use crate::error::{Error, Result};
use crate::ingest::{self, DatasetStore, DriftSets, DriftVectors};
use crate::objectives::{estimate_upper_bound, AnyObjective};
use crate::oracle::{CountingOracle, Objective};
use crate::sliding::{PrioritySample, SieveGreedy, SieveNaive, SwDp, Swrd};
use crate::streaming::{greedy_select, SieveStream};
use crate::window::{Bounds, Item, Timestep};

use super::config::{Algorithm, InputFormat, RunConfig};
use super::metrics::MetricsRecord;

pub fn load_dataset(cfg: &RunConfig) -> Result<DatasetStore> {
    let s = &cfg.synth;
    let store = match cfg.format {
        InputFormat::Csv => {
            let path = cfg.input.as_ref().ok_or_else(|| Error::Usage("--input is required".into()))?;
            ingest::load_dense_csv(path, cfg.delimiter, &cfg.drop_columns)?
        }
        InputFormat::Sets => {
            let path = cfg.input.as_ref().ok_or_else(|| Error::Usage("--input is required".into()))?;
            ingest::load_set_stream(path)?
        }
        InputFormat::SynthVec => ingest::gen_drift_vectors(&DriftVectors {
            n: s.n,
            dim: s.dim,
            clusters: s.clusters,
            drift_period: s.drift_period,
            spread: s.spread,
            seed: cfg.seed,
        })?,
        InputFormat::SynthSets => ingest::gen_drift_sets(&DriftSets {
            n: s.n,
            universe: s.universe,
            mean_size: s.mean_size,
            drift_period: s.drift_period,
            seed: cfg.seed,
        })?,
    };
    if cfg.normalize {
        return ingest::normalize_columns_then_rows(&store);
    }
    Ok(store)
}

pub fn run_benchmark(cfg: &RunConfig) -> Result<Vec<MetricsRecord>> {
    cfg.validate()?;
    let store = load_dataset(cfg)?;
    run_on_store(cfg, &store)
}

/// Runs several configurations over one store on up to `jobs` threads.
/// Results come back in input order and do not depend on `jobs`.
pub fn run_cells(cfgs: &[RunConfig], store: &DatasetStore, jobs: usize) -> Result<Vec<Vec<MetricsRecord>>> {
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(|e| Error::Input(e.to_string()))?;
    pool.install(|| cfgs.par_iter().map(|cfg| run_on_store(cfg, store)).collect())
}

/// Resolves `M`: the configured value, or the dataset prescan estimate.
pub fn resolve_bounds(cfg: &RunConfig, objective: &AnyObjective) -> Result<Bounds> {
    let upper = match cfg.upper_bound {
        Some(m) => m,
        None => estimate_upper_bound(objective, cfg.k)?,
    };
    Bounds::new(upper, cfg.epsilon)
}

enum Runner {
    Streaming(Box<dyn StreamAlgorithm + Send>),
    /// Rerun from scratch on every queried window.
    PerWindow,
}

fn build(cfg: &RunConfig, bounds: &Bounds, oracle: &Arc<CountingOracle<AnyObjective>>) -> Result<Runner> {
    let (k, w) = (cfg.k, cfg.window);
    let o = oracle.clone();
    Ok(match cfg.algorithm {
        Algorithm::Greedy | Algorithm::Sieve => Runner::PerWindow,
        Algorithm::SwRd => Runner::Streaming(Box::new(Swrd::with_sieve(k, w, *bounds, o)?)),
        Algorithm::SwDp => Runner::Streaming(Box::new(SwDp::new(k, w, bounds, o)?)),
        Algorithm::SieveNaive => Runner::Streaming(Box::new(SieveNaive::new(k, w, bounds, o)?)),
        Algorithm::SieveGreedy => {
            let c = cfg.sample_c.ok_or_else(|| Error::Usage("sieve-greedy requires a sample parameter".into()))?;
            Runner::Streaming(Box::new(SieveGreedy::new(k, w, bounds, c, cfg.seed, o)?))
        }
        Algorithm::Random => Runner::Streaming(Box::new(PrioritySample::new(k, w, cfg.seed, o)?)),
    })
}

pub fn run_on_store(cfg: &RunConfig, store: &DatasetStore) -> Result<Vec<MetricsRecord>> {
    cfg.validate()?;
    let objective = AnyObjective::from_store(cfg.objective, store, cfg.kernel)?;
    let bounds = resolve_bounds(cfg, &objective)?;
    let oracle = Arc::new(CountingOracle::new(objective));
    let mut runner = build(cfg, &bounds, &oracle)?;
    let every = cfg.query_every();
    let n = store.len() as u64;
    let started = Instant::now();
    let mut history: Vec<Item> = Vec::with_capacity(store.len());
    let mut per_window_peak = 0usize;
    let mut records = Vec::new();
    for item in store.items() {
        let t = item.t.get();
        match &mut runner {
            Runner::Streaming(alg) => alg.step(item),
            Runner::PerWindow => history.push(item),
        }
        if t % every != 0 && t != n {
            continue;
        }
        let (solution, peak) = match &runner {
            Runner::Streaming(alg) => (alg.query(), alg.peak_items()),
            Runner::PerWindow => {
                let start = history.partition_point(|it| it.t.expired(Timestep(t), cfg.window));
                let members = &history[start..];
                let (sol, peak) = per_window(cfg, &bounds, &oracle, members)?;
                per_window_peak = per_window_peak.max(peak);
                (sol, per_window_peak)
            }
        };
        records.push(MetricsRecord {
            window_end: t,
            algorithm: cfg.algorithm.name().to_string(),
            k: cfg.k,
            window: cfg.window,
            epsilon: cfg.epsilon,
            // Recomputed from the store so every algorithm is scored by the same code.
            utility: oracle.inner().eval(&solution.items),
            solution_size: solution.len(),
            oracle_calls: oracle.calls(),
            peak_items: peak,
            wall_ms: started.elapsed().as_secs_f64() * 1e3,
        });
    }
    Ok(records)
}

fn per_window(
    cfg: &RunConfig,
    bounds: &Bounds,
    oracle: &Arc<CountingOracle<AnyObjective>>,
    members: &[Item],
) -> Result<(Solution, usize)> {
    match cfg.algorithm {
        Algorithm::Greedy => Ok((greedy_select(members, cfg.k, oracle), members.len())),
        Algorithm::Sieve => {
            let mut sieve = SieveStream::new(cfg.k, bounds, oracle.clone())?;
            for &it in members {
                sieve.step(it);
            }
            Ok((sieve.query(), sieve.peak_items()))
        }
        _ => unreachable!("streaming algorithms are not rerun per window"),
    }
}
