//! Uniform sampling of `k` items from a sliding window by priorities.
//!
//! Every arrival draws a priority from `U(0,1)`; the sample is the `k`
//! smallest priorities inside the window. An item can be forgotten as soon
//! as `k` later items have smaller priorities, which keeps the expected
//! candidate list at `O(k·log(W/k))`.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algorithm::{Peak, Solution, StreamAlgorithm};
use crate::error::{Error, Result};
use crate::oracle::{CountingOracle, Objective};
use crate::window::{Item, ItemId};

#[derive(Clone, Debug)]
struct Candidate {
    item: Item,
    priority: f64,
    /// Later arrivals with a smaller priority.
    beaten_by: usize,
}

pub struct PrioritySample<O> {
    k: usize,
    window: u64,
    candidates: VecDeque<Candidate>,
    rng: ChaCha8Rng,
    oracle: Arc<CountingOracle<O>>,
    peak: Peak,
}

impl<O: Objective> PrioritySample<O> {
    pub fn new(k: usize, window: u64, seed: u64, oracle: Arc<CountingOracle<O>>) -> Result<Self> {
        if k == 0 || window == 0 {
            return Err(Error::Input("k and the window size must be positive".into()));
        }
        Ok(PrioritySample {
            k,
            window,
            candidates: VecDeque::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            oracle,
            peak: Peak::default(),
        })
    }

    /// The `k` smallest-priority items of the window, in arrival order.
    pub fn sample(&self) -> Vec<ItemId> {
        let mut by_priority: Vec<&Candidate> = self.candidates.iter().collect();
        by_priority.sort_by(|a, b| a.priority.total_cmp(&b.priority));
        by_priority.truncate(self.k);
        by_priority.sort_by_key(|c| c.item.t);
        by_priority.into_iter().map(|c| c.item.id).collect()
    }

    /// Retained candidates as `(item, priority)`, oldest first.
    pub fn candidates(&self) -> Vec<(Item, f64)> {
        self.candidates.iter().map(|c| (c.item, c.priority)).collect()
    }
}

impl<O: Objective> StreamAlgorithm for PrioritySample<O> {
    fn step(&mut self, item: Item) {
        while self.candidates.front().is_some_and(|c| c.item.t.expired(item.t, self.window)) {
            self.candidates.pop_front();
        }
        let priority: f64 = self.rng.random();
        for c in &mut self.candidates {
            if priority < c.priority {
                c.beaten_by += 1;
            }
        }
        let k = self.k;
        self.candidates.retain(|c| c.beaten_by < k);
        self.candidates.push_back(Candidate { item, priority, beaten_by: 0 });
        self.peak.observe(self.candidates.len());
    }

    fn query(&self) -> Solution {
        let items = self.sample();
        if items.is_empty() {
            return Solution::empty();
        }
        let value = self.oracle.eval_unchecked(&items);
        Solution { items, value }
    }

    fn retained(&self) -> usize {
        self.candidates.len()
    }

    fn peak_items(&self) -> usize {
        self.peak.get()
    }
}
