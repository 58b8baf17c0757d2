use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::Result;

pub const HEADER: [&str; 10] = [
    "window_end",
    "algorithm",
    "k",
    "W",
    "epsilon",
    "utility",
    "solution_size",
    "oracle_calls",
    "peak_items",
    "wall_ms",
];

/// One observation of one algorithm at one queried window.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsRecord {
    pub window_end: u64,
    pub algorithm: String,
    pub k: usize,
    pub window: u64,
    pub epsilon: f64,
    pub utility: f64,
    pub solution_size: usize,
    /// Cumulative since the start of the run.
    pub oracle_calls: u64,
    pub peak_items: usize,
    pub wall_ms: f64,
}

/// `%g`-style formatting with six significant digits.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_metrics<W: Write>(records: &[MetricsRecord], writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
    w.write_record(HEADER)?;
    for r in records {
        w.write_record([
            r.window_end.to_string(),
            r.algorithm.clone(),
            r.k.to_string(),
            r.window.to_string(),
            format_sig6(r.epsilon),
            format_sig6(r.utility),
            r.solution_size.to_string(),
            r.oracle_calls.to_string(),
            r.peak_items.to_string(),
            format_sig6(r.wall_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the CSV to a sibling temporary file and renames it into place.
pub fn write_metrics_csv(records: &[MetricsRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    let mut buf = Vec::new();
    write_metrics(records, &mut buf)?;
    fs::write(&tmp, buf)?;
    fs::rename(&tmp, path)?;
    Ok(())
}
