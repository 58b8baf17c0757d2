//! SieveStream: one buffer per guessed threshold `T = (1+ε)^l`, an item
//! joins a buffer when `f(e|S) > (T/2 − f(S)) / (k − |S|)`.

use std::sync::Arc;

use crate::algorithm::{Peak, Solution, StreamAlgorithm};
use crate::error::{Error, Result};
use crate::oracle::{Buffer, CountingOracle, Objective};
use crate::window::{Bounds, Item};

/// Threshold grid with one buffer per threshold. Shared by SieveStream and
/// the sliding-window sieve heuristics.
pub struct SieveBank<O: Objective> {
    k: usize,
    thresholds: Vec<f64>,
    buffers: Vec<Buffer<O>>,
}

impl<O: Objective> SieveBank<O> {
    pub fn new(k: usize, bounds: &Bounds, oracle: &CountingOracle<O>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("cardinality k must be at least 1".into()));
        }
        if !(bounds.epsilon > 0.0) {
            return Err(Error::Input(format!("epsilon must be positive, got {}", bounds.epsilon)));
        }
        let thresholds = bounds.geometric_grid();
        let buffers = thresholds.iter().map(|_| Buffer::new(oracle)).collect();
        Ok(SieveBank { k, thresholds, buffers })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn buffers(&self) -> &[Buffer<O>] {
        &self.buffers
    }

    pub(crate) fn buffers_mut(&mut self) -> &mut [Buffer<O>] {
        &mut self.buffers
    }

    /// Applies the sieve rule for buffer `index`; returns whether `item` joined.
    pub fn admit(&mut self, index: usize, oracle: &CountingOracle<O>, item: Item) -> bool {
        let (k, t) = (self.k, self.thresholds[index]);
        let buf = &mut self.buffers[index];
        if buf.len() >= k || buf.contains(item.id) {
            return false;
        }
        let gain = buf.gain(oracle, item.id);
        let bar = (t / 2.0 - buf.value(oracle)) / (k - buf.len()) as f64;
        if gain > bar {
            buf.push(oracle, item);
            true
        } else {
            false
        }
    }

    pub fn offer(&mut self, oracle: &CountingOracle<O>, item: Item) {
        for index in 0..self.thresholds.len() {
            self.admit(index, oracle, item);
        }
    }

    /// Best buffer; ties go to the smaller threshold.
    pub fn best(&self, oracle: &CountingOracle<O>) -> Solution {
        let mut best: Option<(&Buffer<O>, f64)> = None;
        for buf in &self.buffers {
            let v = buf.value(oracle);
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((buf, v));
            }
        }
        match best {
            Some((buf, value)) if !buf.is_empty() => Solution { items: buf.ids(), value },
            _ => Solution::empty(),
        }
    }

    pub fn retained(&self) -> usize {
        self.buffers.iter().map(Buffer::len).sum()
    }
}

pub struct SieveStream<O: Objective> {
    bank: SieveBank<O>,
    oracle: Arc<CountingOracle<O>>,
    peak: Peak,
}

impl<O: Objective> SieveStream<O> {
    pub fn new(k: usize, bounds: &Bounds, oracle: Arc<CountingOracle<O>>) -> Result<Self> {
        Ok(SieveStream { bank: SieveBank::new(k, bounds, &oracle)?, oracle, peak: Peak::default() })
    }

    pub fn bank(&self) -> &SieveBank<O> {
        &self.bank
    }

    pub fn thresholds(&self) -> &[f64] {
        self.bank.thresholds()
    }
}

impl<O: Objective> StreamAlgorithm for SieveStream<O> {
    fn step(&mut self, item: Item) {
        self.bank.offer(&self.oracle, item);
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{Coverage, SetPayload};

    fn oracle(sets: Vec<Vec<u64>>) -> Arc<CountingOracle<Coverage>> {
        let sets: Vec<SetPayload> = sets.into_iter().map(SetPayload::new).collect();
        Arc::new(CountingOracle::new(Coverage::new(sets)))
    }

    #[test]
    fn threshold_grids() {
        let o = oracle(vec![vec![1]]);
        let s = SieveStream::new(2, &Bounds::new(4.0, 1.0).unwrap(), o.clone()).unwrap();
        assert_eq!(s.thresholds(), &[1.0, 2.0, 4.0]);
        let s = SieveStream::new(2, &Bounds::new(1.0, 0.5).unwrap(), o.clone()).unwrap();
        assert_eq!(s.thresholds(), &[1.0]);
        let s = SieveStream::new(2, &Bounds::new(100.0, 0.2).unwrap(), o).unwrap();
        let expected = (100f64.ln() / 1.2f64.ln()).ceil() as usize;
        assert_eq!(expected, 26);
        assert_eq!(s.thresholds().len(), expected + 1);
        assert!(*s.thresholds().last().unwrap() >= 100.0);
    }

    #[test]
    fn rejects_zero_k() {
        let o = oracle(vec![vec![1]]);
        assert!(SieveStream::new(0, &Bounds::new(4.0, 1.0).unwrap(), o).is_err());
    }

    #[test]
    fn two_item_trace() {
        // a=0, b=1, c=2
        let o = oracle(vec![vec![0, 1], vec![1, 2]]);
        let mut s = SieveStream::new(2, &Bounds::new(4.0, 1.0).unwrap(), o.clone()).unwrap();
        assert_eq!(s.query(), Solution::empty());
        s.step(Item::new(1, 0));
        s.step(Item::new(2, 1));
        for buf in s.bank().buffers() {
            assert_eq!(buf.ids(), vec![0, 1]);
        }
        let best = s.query();
        assert_eq!(best.value, 3.0);
        assert_eq!(best.items, vec![0, 1]);
        // One marginal per threshold per item.
        assert_eq!(o.calls(), 6);
    }

    #[test]
    fn empty_buffer_rule_is_gain_above_t_over_2k() {
        // f(e) = 2; k = 1: accepted by T with T/2 < 2, i.e. T in {1, 2}, not 4.
        let o = oracle(vec![vec![0, 1]]);
        let mut s = SieveStream::new(1, &Bounds::new(4.0, 1.0).unwrap(), o).unwrap();
        s.step(Item::new(1, 0));
        let sizes: Vec<usize> = s.bank().buffers().iter().map(Buffer::len).collect();
        assert_eq!(sizes, vec![1, 1, 0]);
    }

    #[test]
    fn full_buffer_takes_nothing() {
        let o = oracle(vec![vec![0], vec![1], vec![2, 3, 4, 5]]);
        let mut s = SieveStream::new(2, &Bounds::new(1.0, 1.0).unwrap(), o.clone()).unwrap();
        for t in 1..=3 {
            s.step(Item::new(t, (t - 1) as usize));
        }
        assert_eq!(s.bank().buffers()[0].ids(), vec![0, 1]);
        // Third item was never scored against the full buffer.
        assert_eq!(o.calls(), 2);
    }
}
