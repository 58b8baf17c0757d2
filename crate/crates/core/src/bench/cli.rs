//! Command line: `slidesub --objective coverage --algorithm sw-rd ...`.
//!
//! Exit status is 0 on success, 2 on usage errors and 1 on runtime errors.

use std::ffi::OsString;
use std::io;
use std::path::PathBuf;

use clap::{CommandFactory, Parser};

use crate::error::{Error, Result};
use crate::objectives::{estimate_upper_bound, AnyObjective, KernelParams, ObjectiveKind};

use super::config::{Algorithm, InputFormat, RunConfig, SynthParams};
use super::metrics::{write_metrics, write_metrics_csv};
use super::run::{load_dataset, run_cells};

#[derive(Debug, Parser)]
#[command(name = "slidesub", version, about = "Sliding-window submodular maximization benchmark")]
pub struct Args {
    /// coverage or ivm
    #[arg(long, default_value = "coverage")]
    objective: String,

    /// Comma-separated list of greedy, sieve, sw-rd, sw-dp, sieve-naive, sieve-greedy, random
    #[arg(long, value_delimiter = ',', required = true)]
    algorithm: Vec<String>,

    #[arg(long)]
    k: usize,

    #[arg(long)]
    window: u64,

    #[arg(long, default_value_t = 0.2)]
    epsilon: f64,

    /// Upper bound M on the optimum; estimated from the data when omitted
    #[arg(long)]
    upper_bound: Option<f64>,

    /// SieveGreedy sampling parameter c (sample rate c/W); 20 is a good start
    #[arg(long)]
    sample_c: Option<f64>,

    #[arg(long, default_value_t = 0.75)]
    kernel_h: f64,

    #[arg(long, default_value_t = 1.0)]
    sigma: f64,

    /// Query cadence in timesteps [default: max(1, ceil(W/10))]
    #[arg(long)]
    query_every: Option<u64>,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long)]
    input: Option<PathBuf>,

    /// csv, sets, synth-vec or synth-sets
    #[arg(long, default_value = "sets")]
    format: String,

    /// Field delimiter for csv input
    #[arg(long, default_value = ",")]
    delimiter: char,

    /// 0-based csv columns to ignore, e.g. a label column
    #[arg(long, value_delimiter = ',')]
    drop_columns: Vec<usize>,

    /// Min-max scale csv columns, then L2-normalize rows
    #[arg(long)]
    normalize: bool,

    /// Length of a synthetic stream
    #[arg(long, default_value_t = 1000)]
    synth_n: usize,

    /// Steps between distribution shifts of a synthetic stream
    #[arg(long, default_value_t = 250)]
    drift_period: usize,

    /// Dimension of synthetic vectors
    #[arg(long, default_value_t = 5)]
    dim: usize,

    /// Mixture components of synthetic vectors
    #[arg(long, default_value_t = 4)]
    clusters: usize,

    /// Universe size of synthetic sets
    #[arg(long, default_value_t = 1000)]
    universe: u64,

    /// Mean size of synthetic sets
    #[arg(long, default_value_t = 10.0)]
    mean_size: f64,

    /// Output CSV; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,

    /// Run up to this many algorithms concurrently
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl Args {
    fn configs(&self) -> Result<Vec<RunConfig>> {
        if !self.delimiter.is_ascii() {
            return Err(Error::Usage("--delimiter must be a single ASCII character".into()));
        }
        let base = RunConfig {
            objective: self.objective.parse::<ObjectiveKind>()?,
            algorithm: Algorithm::SwRd,
            k: self.k,
            window: self.window,
            epsilon: self.epsilon,
            upper_bound: self.upper_bound,
            sample_c: self.sample_c,
            kernel: KernelParams { h: self.kernel_h, sigma: self.sigma },
            query_every: self.query_every,
            seed: self.seed,
            input: self.input.clone(),
            format: self.format.parse::<InputFormat>()?,
            delimiter: self.delimiter as u8,
            drop_columns: self.drop_columns.clone(),
            normalize: self.normalize,
            synth: SynthParams {
                n: self.synth_n,
                dim: self.dim,
                clusters: self.clusters,
                universe: self.universe,
                mean_size: self.mean_size,
                drift_period: self.drift_period,
                ..SynthParams::default()
            },
            output: self.output.clone(),
        };
        self.algorithm
            .iter()
            .map(|name| {
                let cfg = RunConfig { algorithm: name.parse()?, ..base.clone() };
                cfg.validate()?;
                Ok(cfg)
            })
            .collect()
    }
}

/// Parses and validates `argv` (including the program name). One config is
/// returned per requested algorithm.
pub fn parse_cli<I, T>(argv: I) -> std::result::Result<(Vec<RunConfig>, usize), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(CliError::Clap)?;
    let configs = args.configs().map_err(CliError::Run)?;
    Ok((configs, args.jobs))
}

#[derive(Debug)]
pub enum CliError {
    Clap(clap::Error),
    Run(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) => e.exit_code(),
            CliError::Run(Error::Usage(_)) => 2,
            CliError::Run(_) => 1,
        }
    }
}

fn execute(configs: &[RunConfig], jobs: usize) -> Result<()> {
    let first = &configs[0];
    let store = load_dataset(first)?;
    if store.is_empty() {
        return Err(Error::Input("the input dataset is empty".into()));
    }
    // Every cell shares the prescan so all algorithms use the same M.
    let mut configs = configs.to_vec();
    if first.upper_bound.is_none() {
        let objective = AnyObjective::from_store(first.objective, &store, first.kernel)?;
        let m = estimate_upper_bound(&objective, first.k)?;
        configs.iter_mut().for_each(|c| c.upper_bound = Some(m));
    }
    let records: Vec<_> = run_cells(&configs, &store, jobs)?.into_iter().flatten().collect();
    match &first.output {
        Some(path) => write_metrics_csv(&records, path),
        None => write_metrics(&records, io::stdout().lock()),
    }
}

pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = parse_cli(argv).and_then(|(configs, jobs)| execute(&configs, jobs).map_err(CliError::Run));
    match result {
        Ok(()) => 0,
        Err(CliError::Clap(e)) => {
            let code = e.exit_code();
            let _ = e.print();
            code
        }
        Err(err @ CliError::Run(Error::Usage(_))) => {
            let CliError::Run(e) = &err else { unreachable!() };
            eprintln!("error: {e}\n\n{}", Args::command().render_usage());
            err.exit_code()
        }
        Err(CliError::Run(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn main() -> i32 {
    main_with_args(std::env::args_os())
}
