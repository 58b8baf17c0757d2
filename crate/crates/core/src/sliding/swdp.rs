//! Threshold dynamic program over sliding windows.
//!
//! For a fixed threshold `T`, level `j` remembers `ℓ_j`, the latest start
//! time from which `j` items each passing `f(e|S) ≥ T` were collected, and
//! the collected set `S_j`. Several thresholds run side by side and the best
//! level-maximal set among them answers a query.

use std::sync::Arc;

use crate::algorithm::{Peak, Solution, StreamAlgorithm};
use crate::error::{Error, Result};
use crate::oracle::{Buffer, CountingOracle, Objective};
use crate::window::{Bounds, Item, Timestep};

pub struct ThreshGreedy<O: Objective> {
    k: usize,
    window: u64,
    threshold: f64,
    /// `ℓ_0..=ℓ_k`; `None` is the inactive marker.
    levels: Vec<Option<Timestep>>,
    sets: Vec<Buffer<O>>,
}

impl<O: Objective> ThreshGreedy<O> {
    pub fn new(k: usize, window: u64, threshold: f64, oracle: &CountingOracle<O>) -> Self {
        ThreshGreedy {
            k,
            window,
            threshold,
            levels: vec![None; k + 1],
            sets: (0..=k).map(|_| Buffer::new(oracle)).collect(),
        }
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn levels(&self) -> &[Option<Timestep>] {
        &self.levels
    }

    pub fn sets(&self) -> &[Buffer<O>] {
        &self.sets
    }

    pub fn step(&mut self, oracle: &CountingOracle<O>, item: Item) {
        let now = item.t;
        self.levels[0] = Some(now);
        self.sets[0] = Buffer::new(oracle);
        for j in 0..=self.k {
            if self.levels[j].is_some_and(|l| l.expired(now, self.window)) {
                self.levels[j] = None;
                self.sets[j] = Buffer::new(oracle);
            }
        }
        // Descending, so level j+1 is written only after it has been read.
        for j in (0..self.k).rev() {
            let Some(start) = self.levels[j] else { continue };
            if self.levels[j + 1].is_some_and(|next| next >= start) {
                continue;
            }
            if self.sets[j].gain(oracle, item.id) >= self.threshold {
                self.levels[j + 1] = Some(start);
                self.sets[j + 1] = self.sets[j].with(oracle, item);
            }
        }
    }

    /// `S_{j_max}` for the largest active level.
    pub fn best(&self) -> Option<&Buffer<O>> {
        self.levels.iter().rposition(Option::is_some).map(|j| &self.sets[j])
    }

    pub fn retained(&self) -> usize {
        self.sets.iter().map(Buffer::len).sum()
    }
}

pub struct SwDp<O: Objective> {
    instances: Vec<ThreshGreedy<O>>,
    oracle: Arc<CountingOracle<O>>,
    peak: Peak,
}

impl<O: Objective> SwDp<O> {
    /// One ThreshGreedy per `T = (1+ε)^l / (2k)`, `l = 0..=1+⌈log_{1+ε} M⌉`.
    pub fn new(k: usize, window: u64, bounds: &Bounds, oracle: Arc<CountingOracle<O>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("cardinality k must be at least 1".into()));
        }
        if window == 0 {
            return Err(Error::Input("window size must be positive".into()));
        }
        let top = 1 + bounds.log_steps();
        let base = 1.0 + bounds.epsilon;
        let instances =
            (0..=top).map(|l| ThreshGreedy::new(k, window, base.powi(l as i32) / (2 * k) as f64, &oracle)).collect();
        Ok(SwDp { instances, oracle, peak: Peak::default() })
    }

    pub fn instances(&self) -> &[ThreshGreedy<O>] {
        &self.instances
    }

    pub fn thresholds(&self) -> Vec<f64> {
        self.instances.iter().map(ThreshGreedy::threshold).collect()
    }
}

impl<O: Objective> StreamAlgorithm for SwDp<O> {
    fn step(&mut self, item: Item) {
        for tg in &mut self.instances {
            tg.step(&self.oracle, item);
        }
        self.peak.observe(self.retained());
    }

    fn query(&self) -> Solution {
        let mut best = Solution::empty();
        for buf in self.instances.iter().filter_map(ThreshGreedy::best) {
            let value = buf.value(&self.oracle);
            if value > best.value {
                best = Solution { items: buf.ids(), value };
            }
        }
        best
    }

    fn retained(&self) -> usize {
        self.instances.iter().map(ThreshGreedy::retained).sum()
    }

    fn peak_items(&self) -> usize {
        self.peak.get()
    }
}
