//! SieveStream that drops expired items from its buffers before sieving.

use std::sync::Arc;

use crate::algorithm::{Peak, Solution, StreamAlgorithm};
use crate::error::{Error, Result};
use crate::oracle::{CountingOracle, Objective};
use crate::streaming::SieveBank;
use crate::window::{Bounds, Item};

pub struct SieveNaive<O: Objective> {
    bank: SieveBank<O>,
    window: u64,
    oracle: Arc<CountingOracle<O>>,
    peak: Peak,
}

impl<O: Objective> SieveNaive<O> {
    pub fn new(k: usize, window: u64, bounds: &Bounds, oracle: Arc<CountingOracle<O>>) -> Result<Self> {
        if window == 0 {
            return Err(Error::Input("window size must be positive".into()));
        }
        Ok(SieveNaive { bank: SieveBank::new(k, bounds, &oracle)?, window, oracle, peak: Peak::default() })
    }

    pub fn bank(&self) -> &SieveBank<O> {
        &self.bank
    }
}

impl<O: Objective> StreamAlgorithm for SieveNaive<O> {
    fn step(&mut self, item: Item) {
        for index in 0..self.bank.thresholds().len() {
            self.bank.buffers_mut()[index].drop_expired(&self.oracle, item.t, self.window);
            self.bank.admit(index, &self.oracle, item);
        }
        self.peak.observe(self.bank.retained());
    }

    fn query(&self) -> Solution {
        self.bank.best(&self.oracle)
    }

    fn retained(&self) -> usize {
        self.bank.retained()
    }

    fn peak_items(&self) -> usize {
        self.peak.get()
    }
}
