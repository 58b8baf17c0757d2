//! SieveStream over a sliding window with greedy repair from a sample.
//!
//! Each arrival enters the sample `B` with probability `c/W`. When a buffer
//! loses an expired item it is rebuilt by greedy selection of `|S_T| − 1`
//! items from `B ∪ S_T` minus the expired item.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algorithm::{Peak, Solution, StreamAlgorithm};
use crate::error::{Error, Result};
use crate::oracle::{CountingOracle, Objective};
use crate::streaming::{greedy_buffer, SieveBank};
use crate::window::{Bounds, Item};

pub struct SieveGreedy<O: Objective> {
    bank: SieveBank<O>,
    samples: VecDeque<Item>,
    rate: f64,
    window: u64,
    rng: ChaCha8Rng,
    oracle: Arc<CountingOracle<O>>,
    sampled: u64,
    peak: Peak,
}

impl<O: Objective> SieveGreedy<O> {
    /// `sample_c` is the expected number of sampled items per window.
    pub fn new(
        k: usize,
        window: u64,
        bounds: &Bounds,
        sample_c: f64,
        seed: u64,
        oracle: Arc<CountingOracle<O>>,
    ) -> Result<Self> {
        if window == 0 {
            return Err(Error::Input("window size must be positive".into()));
        }
        if !(sample_c >= 0.0 && sample_c.is_finite()) {
            return Err(Error::Input(format!("sample parameter c must be non-negative, got {sample_c}")));
        }
        Ok(SieveGreedy {
            bank: SieveBank::new(k, bounds, &oracle)?,
            samples: VecDeque::new(),
            rate: (sample_c / window as f64).min(1.0),
            window,
            rng: ChaCha8Rng::seed_from_u64(seed),
            oracle,
            sampled: 0,
            peak: Peak::default(),
        })
    }

    pub fn bank(&self) -> &SieveBank<O> {
        &self.bank
    }

    pub fn samples(&self) -> impl Iterator<Item = &Item> {
        self.samples.iter()
    }

    /// Total number of arrivals ever admitted to the sample.
    pub fn sampled_total(&self) -> u64 {
        self.sampled
    }
}

impl<O: Objective> StreamAlgorithm for SieveGreedy<O> {
    fn step(&mut self, item: Item) {
        let now = item.t;
        if self.rate > 0.0 && self.rng.random_bool(self.rate) {
            self.samples.push_back(item);
            self.sampled += 1;
        }
        while self.samples.front().is_some_and(|s| s.t.expired(now, self.window)) {
            self.samples.pop_front();
        }
        for index in 0..self.bank.thresholds().len() {
            let buf = &self.bank.buffers()[index];
            if let Some(gone) = buf.expired_item(now, self.window) {
                let target = buf.len() - 1;
                let mut candidates: Vec<Item> = buf.items().iter().copied().filter(|it| it.id != gone.id).collect();
                for s in &self.samples {
                    if !candidates.iter().any(|c| c.id == s.id) {
                        candidates.push(*s);
                    }
                }
                self.bank.buffers_mut()[index] = greedy_buffer(&candidates, target, &self.oracle);
            }
            self.bank.admit(index, &self.oracle, item);
        }
        self.peak.observe(self.retained());
    }

    fn query(&self) -> Solution {
        self.bank.best(&self.oracle)
    }

    fn retained(&self) -> usize {
        self.bank.retained() + self.samples.len()
    }

    fn peak_items(&self) -> usize {
        self.peak.get()
    }
}
