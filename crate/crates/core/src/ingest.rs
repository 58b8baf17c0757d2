//! Dataset loading, normalization and synthetic stream generation.
//!
//! Position `i` (0-based) in a store is the payload of timestep `i + 1`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::objectives::SetPayload;
use crate::window::Item;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseData {
    pub dim: usize,
    pub rows: Arc<[Vec<f64>]>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DatasetStore {
    Dense(DenseData),
    Sets(Arc<[SetPayload]>),
}

impl DatasetStore {
    pub fn dense(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != dim) {
            return Err(Error::Input(format!("row {i} has {} columns, expected {dim}", rows[i].len())));
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Input("dense payloads must be finite".into()));
        }
        Ok(DatasetStore::Dense(DenseData { dim, rows: rows.into() }))
    }

    pub fn sets(sets: Vec<SetPayload>) -> Self {
        DatasetStore::Sets(sets.into())
    }

    pub fn len(&self) -> usize {
        match self {
            DatasetStore::Dense(d) => d.rows.len(),
            DatasetStore::Sets(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The stream of items in arrival order.
    pub fn items(&self) -> impl Iterator<Item = Item> {
        (0..self.len()).map(|i| Item::new(i as u64 + 1, i))
    }
}

fn parse_row(fields: &csv::StringRecord, drop: &[usize]) -> std::result::Result<Vec<f64>, String> {
    fields
        .iter()
        .enumerate()
        .filter(|(i, _)| !drop.contains(i))
        .map(|(i, s)| match s.trim().parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            Ok(_) => Err(format!("column {}: non-finite value '{s}'", i + 1)),
            Err(_) => Err(format!("column {}: not a number: '{s}'", i + 1)),
        })
        .collect()
}

/// Parses delimited numeric rows. A first row containing any non-numeric
/// field is treated as a header and skipped. `drop_columns` are 0-based.
pub fn parse_dense_csv<R: Read>(reader: R, delimiter: u8, drop_columns: &[usize]) -> Result<DatasetStore> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).delimiter(delimiter).from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (index, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(index as u64 + 1, |p| p.line());
        if record.len() == 1 && record.get(0).is_some_and(|s| s.trim().is_empty()) {
            continue;
        }
        let row = match parse_row(&record, drop_columns) {
            Ok(row) => row,
            Err(_) if index == 0 => continue,
            Err(msg) => return Err(Error::Parse { line, msg }),
        };
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(Error::Parse { line, msg: format!("expected {w} fields, found {}", record.len()) })
            }
            _ => {}
        }
        rows.push(row);
    }
    DatasetStore::dense(rows)
}

pub fn load_dense_csv(path: impl AsRef<Path>, delimiter: u8, drop_columns: &[usize]) -> Result<DatasetStore> {
    parse_dense_csv(BufReader::new(File::open(path)?), delimiter, drop_columns)
}

fn dense_rows(store: &DatasetStore) -> Result<&DenseData> {
    match store {
        DatasetStore::Dense(data) => Ok(data),
        DatasetStore::Sets(_) => Err(Error::Input("normalization applies to dense-vector datasets only".into())),
    }
}

/// Column min-max scaling to `[0,1]`; constant columns map to 0.
pub fn normalize_columns(store: &DatasetStore) -> Result<DatasetStore> {
    let data = dense_rows(store)?;
    let mut lo = vec![f64::INFINITY; data.dim];
    let mut hi = vec![f64::NEG_INFINITY; data.dim];
    for row in data.rows.iter() {
        for (j, &x) in row.iter().enumerate() {
            lo[j] = lo[j].min(x);
            hi[j] = hi[j].max(x);
        }
    }
    let rows = data
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, &x)| if hi[j] > lo[j] { (x - lo[j]) / (hi[j] - lo[j]) } else { 0.0 })
                .collect()
        })
        .collect();
    DatasetStore::dense(rows)
}

/// Scales every non-zero row to unit L2 norm.
pub fn normalize_rows(store: &DatasetStore) -> Result<DatasetStore> {
    let data = dense_rows(store)?;
    let rows = data
        .rows
        .iter()
        .map(|row| {
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                row.iter().map(|x| x / norm).collect()
            } else {
                row.clone()
            }
        })
        .collect();
    DatasetStore::dense(rows)
}

pub fn normalize_columns_then_rows(store: &DatasetStore) -> Result<DatasetStore> {
    normalize_rows(&normalize_columns(store)?)
}

/// One set per line, whitespace-separated non-negative integers; an empty
/// line is an empty set.
pub fn parse_set_stream<R: BufRead>(reader: R) -> Result<DatasetStore> {
    let mut sets = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let set = line
            .split_ascii_whitespace()
            .map(|tok| {
                tok.parse::<u64>().map_err(|_| Error::Parse {
                    line: i as u64 + 1,
                    msg: format!("'{tok}' is not a non-negative integer"),
                })
            })
            .collect::<Result<SetPayload>>()?;
        sets.push(set);
    }
    Ok(DatasetStore::sets(sets))
}

pub fn load_set_stream(path: impl AsRef<Path>) -> Result<DatasetStore> {
    parse_set_stream(BufReader::new(File::open(path)?))
}

pub fn write_set_stream<W: Write>(writer: W, sets: &[SetPayload]) -> Result<()> {
    let mut out = BufWriter::new(writer);
    for set in sets {
        let line: Vec<String> = set.elements().iter().map(u64::to_string).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    out.flush()?;
    Ok(())
}

/// Gaussian-mixture vectors whose active cluster centers rotate every
/// `drift_period` steps.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct DriftVectors {
    pub n: usize,
    pub dim: usize,
    pub clusters: usize,
    pub drift_period: usize,
    /// Per-coordinate standard deviation around a center.
    pub spread: f64,
    pub seed: u64,
}

impl Default for DriftVectors {
    fn default() -> Self {
        DriftVectors { n: 1000, dim: 5, clusters: 4, drift_period: 250, spread: 0.1, seed: 0 }
    }
}

pub fn gen_drift_vectors(cfg: &DriftVectors) -> Result<DatasetStore> {
    if cfg.dim == 0 || cfg.clusters == 0 || cfg.drift_period == 0 {
        return Err(Error::Input("dimension, cluster count and drift period must be positive".into()));
    }
    if !(cfg.spread >= 0.0 && cfg.spread.is_finite()) {
        return Err(Error::Input(format!("spread must be non-negative, got {}", cfg.spread)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let centers: Vec<Vec<f64>> =
        (0..cfg.clusters).map(|_| (0..cfg.dim).map(|_| rng.random::<f64>()).collect()).collect();
    let noise = Normal::new(0.0, cfg.spread).map_err(|e| Error::Input(e.to_string()))?;
    // Half of the centers (at least one) are active in each period.
    let active = cfg.clusters.div_ceil(2);
    let rows = (0..cfg.n)
        .map(|i| {
            let period = i / cfg.drift_period;
            let c = (period + rng.random_range(0..active)) % cfg.clusters;
            centers[c].iter().map(|&m| m + noise.sample(&mut rng)).collect()
        })
        .collect();
    DatasetStore::dense(rows)
}

/// Each element of `0..universe` is included independently with probability
/// `mean_size / universe`.
pub fn gen_set_stream(n: usize, universe: u64, mean_size: f64, seed: u64) -> Result<DatasetStore> {
    if universe == 0 || !(mean_size > 0.0) || mean_size > universe as f64 {
        return Err(Error::Input(format!("need 0 < mean_size <= universe, got {mean_size} and {universe}")));
    }
    let p = mean_size / universe as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets = (0..n).map(|_| (0..universe).filter(|_| rng.random_bool(p)).collect()).collect();
    Ok(DatasetStore::sets(sets))
}

/// Set stream with heavy-tailed set sizes whose elements come from a hot
/// region of the universe that moves every `drift_period` steps.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct DriftSets {
    pub n: usize,
    pub universe: u64,
    pub mean_size: f64,
    pub drift_period: usize,
    pub seed: u64,
}

impl Default for DriftSets {
    fn default() -> Self {
        DriftSets { n: 1000, universe: 1000, mean_size: 10.0, drift_period: 250, seed: 0 }
    }
}

pub fn gen_drift_sets(cfg: &DriftSets) -> Result<DatasetStore> {
    if cfg.universe < 4 || cfg.drift_period == 0 || !(cfg.mean_size >= 1.0) {
        return Err(Error::Input("need universe >= 4, drift_period > 0 and mean_size >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let region = (cfg.universe / 4).max(1);
    let sets = (0..cfg.n)
        .map(|i| {
            let period = (i / cfg.drift_period) as u64;
            let offset = (period * region) % cfg.universe;
            // Exponential sizes: most sets small, a few large.
            let u: f64 = rng.random();
            let size = (-(1.0 - u).ln() * cfg.mean_size).round().clamp(1.0, region as f64) as usize;
            (0..size).map(|_| (offset + rng.random_range(0..region)) % cfg.universe).collect()
        })
        .collect();
    Ok(DatasetStore::sets(sets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rows(store: &DatasetStore) -> Vec<Vec<f64>> {
        match store {
            DatasetStore::Dense(d) => d.rows.to_vec(),
            _ => panic!("expected dense"),
        }
    }

    #[test]
    fn dense_three_by_two() {
        let s = parse_dense_csv("1,2\n3,4\n5,6".as_bytes(), b',', &[]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(rows(&s)[2], vec![5.0, 6.0]);
    }

    #[test]
    fn dense_header_is_skipped() {
        let s = parse_dense_csv("a,b\n1.5,2".as_bytes(), b',', &[]).unwrap();
        assert_eq!(rows(&s), vec![vec![1.5, 2.0]]);
    }

    #[test]
    fn dense_ragged_row_reports_line() {
        let err = parse_dense_csv("1,2\n3,4\n5\n".as_bytes(), b',', &[]).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn dense_non_numeric_body_reports_line() {
        let err = parse_dense_csv("1,2\n3,x\n".as_bytes(), b',', &[]).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn dense_drop_columns_and_delimiter() {
        let s = parse_dense_csv("1;2;9\n3;4;9\n".as_bytes(), b';', &[2]).unwrap();
        assert_eq!(rows(&s), vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
    }

    #[test]
    fn normalization_example() {
        let s = DatasetStore::dense(vec![vec![0.0, 3.0], vec![4.0, 3.0], vec![2.0, 0.0]]).unwrap();
        let out = rows(&normalize_columns_then_rows(&s).unwrap());
        let h = 1.0 / 2f64.sqrt();
        let expected = [[0.0, 1.0], [h, h], [1.0, 0.0]];
        for (r, e) in out.iter().zip(expected) {
            assert_abs_diff_eq!(r[0], e[0], epsilon = 1e-15);
            assert_abs_diff_eq!(r[1], e[1], epsilon = 1e-15);
        }
    }

    #[test]
    fn normalization_single_row_is_zero() {
        let s = DatasetStore::dense(vec![vec![3.0, -1.0]]).unwrap();
        assert_eq!(rows(&normalize_columns_then_rows(&s).unwrap()), vec![vec![0.0, 0.0]]);
    }

    #[test]
    fn normalization_steps_are_idempotent() {
        let s = gen_drift_vectors(&DriftVectors { n: 200, dim: 4, ..Default::default() }).unwrap();
        let cols = normalize_columns(&s).unwrap();
        let out = normalize_rows(&cols).unwrap();
        for r in rows(&out) {
            let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(norm == 0.0 || (norm - 1.0).abs() <= 1e-12);
        }
        let pairs = [(cols.clone(), normalize_columns(&cols).unwrap()), (out.clone(), normalize_rows(&out).unwrap())];
        for (a, b) in pairs {
            for (x, y) in rows(&a).iter().flatten().zip(rows(&b).iter().flatten()) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn set_stream_dedup_and_empty_line() {
        let s = parse_set_stream("1 2 2 3\n\n7".as_bytes()).unwrap();
        let DatasetStore::Sets(sets) = s else { panic!() };
        assert_eq!(sets.len(), 3);
        assert_eq!(sets[0].elements(), &[1, 2, 3]);
        assert!(sets[1].is_empty());
        assert_eq!(sets[2].elements(), &[7]);
    }

    #[test]
    fn set_stream_rejects_negative() {
        let err = parse_set_stream("1 2\n3 -4\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(parse_set_stream("1.5".as_bytes()).is_err());
    }

    #[test]
    fn generators_are_deterministic() {
        let cfg = DriftVectors { n: 50, seed: 9, ..Default::default() };
        assert_eq!(gen_drift_vectors(&cfg).unwrap(), gen_drift_vectors(&cfg).unwrap());
        assert_eq!(gen_set_stream(30, 50, 5.0, 3).unwrap(), gen_set_stream(30, 50, 5.0, 3).unwrap());
        let ds = DriftSets { n: 40, seed: 4, ..Default::default() };
        assert_eq!(gen_drift_sets(&ds).unwrap(), gen_drift_sets(&ds).unwrap());
    }

    #[test]
    fn zero_variance_single_cluster_is_constant() {
        let cfg = DriftVectors { n: 30, dim: 1, clusters: 1, drift_period: 7, spread: 0.0, seed: 1 };
        let r = rows(&gen_drift_vectors(&cfg).unwrap());
        assert!(r.iter().all(|x| x == &r[0]));
    }

    #[test]
    fn full_universe_sets() {
        let DatasetStore::Sets(sets) = gen_set_stream(20, 16, 16.0, 0).unwrap() else { panic!() };
        assert!(sets.iter().all(|s| s.elements() == (0..16).collect::<Vec<_>>()));
    }

    #[test]
    fn mean_set_size_concentrates() {
        let DatasetStore::Sets(sets) = gen_set_stream(10_000, 200, 20.0, 5).unwrap() else { panic!() };
        let mean = sets.iter().map(SetPayload::len).sum::<usize>() as f64 / sets.len() as f64;
        assert!((mean - 20.0).abs() <= 1.0, "mean {mean}");
    }
}
