use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::objectives::{KernelParams, ObjectiveKind};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Offline greedy rerun on every queried window.
    Greedy,
    /// SieveStream restarted on every queried window.
    Sieve,
    SwRd,
    SwDp,
    SieveNaive,
    SieveGreedy,
    /// Uniform sample of `k` window items.
    Random,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Greedy,
        Algorithm::Sieve,
        Algorithm::SwRd,
        Algorithm::SwDp,
        Algorithm::SieveNaive,
        Algorithm::SieveGreedy,
        Algorithm::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Sieve => "sieve",
            Algorithm::SwRd => "sw-rd",
            Algorithm::SwDp => "sw-dp",
            Algorithm::SieveNaive => "sieve-naive",
            Algorithm::SieveGreedy => "sieve-greedy",
            Algorithm::Random => "random",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown algorithm '{s}'")))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum InputFormat {
    Csv,
    Sets,
    SynthVec,
    SynthSets,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(InputFormat::Csv),
            "sets" => Ok(InputFormat::Sets),
            "synth-vec" => Ok(InputFormat::SynthVec),
            "synth-sets" => Ok(InputFormat::SynthSets),
            _ => Err(Error::Usage(format!("unknown input format '{s}'"))),
        }
    }
}

/// Parameters of the synthetic drift generators.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SynthParams {
    pub n: usize,
    pub dim: usize,
    pub clusters: usize,
    pub spread: f64,
    pub universe: u64,
    pub mean_size: f64,
    pub drift_period: usize,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams { n: 1000, dim: 5, clusters: 4, spread: 0.1, universe: 1000, mean_size: 10.0, drift_period: 250 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub objective: ObjectiveKind,
    pub algorithm: Algorithm,
    pub k: usize,
    pub window: u64,
    pub epsilon: f64,
    /// `M`; estimated from the dataset when absent.
    pub upper_bound: Option<f64>,
    /// SieveGreedy sampling parameter `c` (rate `c/W`).
    pub sample_c: Option<f64>,
    pub kernel: KernelParams,
    /// Defaults to `max(1, ⌈W/10⌉)`.
    pub query_every: Option<u64>,
    pub seed: u64,
    pub input: Option<PathBuf>,
    pub format: InputFormat,
    pub delimiter: u8,
    pub drop_columns: Vec<usize>,
    pub normalize: bool,
    pub synth: SynthParams,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            objective: ObjectiveKind::Coverage,
            algorithm: Algorithm::SwRd,
            k: 5,
            window: 1000,
            epsilon: 0.2,
            upper_bound: None,
            sample_c: None,
            kernel: KernelParams::default(),
            query_every: None,
            seed: 0,
            input: None,
            format: InputFormat::SynthSets,
            delimiter: b',',
            drop_columns: Vec::new(),
            normalize: false,
            synth: SynthParams::default(),
            output: None,
        }
    }
}

impl RunConfig {
    pub fn query_every(&self) -> u64 {
        self.query_every.unwrap_or_else(|| self.window.div_ceil(10).max(1))
    }

    pub fn validate(&self) -> Result<()> {
        let usage = |msg: String| Err(Error::Usage(msg));
        if self.k == 0 {
            return usage("--k must be at least 1".into());
        }
        if self.window == 0 {
            return usage("--window must be at least 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return usage(format!("--epsilon must be positive, got {}", self.epsilon));
        }
        if let Some(m) = self.upper_bound {
            if !(m >= 1.0 && m.is_finite()) {
                return usage(format!("--upper-bound must be at least 1, got {m}"));
            }
        }
        if self.algorithm == Algorithm::SieveGreedy {
            match self.sample_c {
                None => return usage("--algorithm sieve-greedy requires --sample-c".into()),
                Some(c) if !(c > 0.0 && c.is_finite()) => {
                    return usage(format!("--sample-c must be positive, got {c}"))
                }
                _ => {}
            }
        }
        if self.query_every == Some(0) {
            return usage("--query-every must be at least 1".into());
        }
        if !(self.kernel.h > 0.0) || !(self.kernel.sigma > 0.0) {
            return usage("--kernel-h and --sigma must be positive".into());
        }
        match self.format {
            InputFormat::Csv | InputFormat::Sets if self.input.is_none() => {
                return usage("--input is required for the csv and sets formats".into())
            }
            InputFormat::Csv | InputFormat::SynthVec if self.objective == ObjectiveKind::Coverage => {
                return usage("the coverage objective needs a set stream (--format sets or synth-sets)".into())
            }
            InputFormat::Sets | InputFormat::SynthSets if self.objective == ObjectiveKind::Ivm => {
                return usage("the ivm objective needs dense vectors (--format csv or synth-vec)".into())
            }
            _ => {}
        }
        Ok(())
    }
}
