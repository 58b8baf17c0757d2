pub mod cli;
pub mod config;
pub mod metrics;
pub mod run;

pub use config::{Algorithm, InputFormat, RunConfig};
pub use metrics::{write_metrics_csv, MetricsRecord};
pub use run::{load_dataset, run_benchmark, run_on_store};
