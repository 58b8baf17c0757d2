//! Submodular oracle contract and the call-counting layer.
//!
//! An [`Objective`] evaluates a set function over item ids. Besides plain
//! evaluation it exposes an incremental state so that growing solutions
//! (sieve buffers, greedy picks) can be scored without re-evaluating from
//! scratch. Every evaluation or marginal query that goes through a
//! [`CountingOracle`] increments its counter by exactly one.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::window::{Item, ItemId, Timestep};

pub trait Objective: Send + Sync {
    /// Incremental evaluation state of one growing set.
    type State: Clone + fmt::Debug + Send + Sync;

    /// Number of payloads; valid ids are `0..ground_len()`.
    fn ground_len(&self) -> usize;

    fn empty_state(&self) -> Self::State;

    /// `f(S)` for the set represented by `state`.
    fn state_value(&self, state: &Self::State) -> f64;

    /// `f(id | S)` for the set represented by `state`.
    fn gain(&self, state: &Self::State, id: ItemId) -> f64;

    fn insert(&self, state: &mut Self::State, id: ItemId);

    fn build(&self, ids: &[ItemId]) -> Self::State {
        let mut state = self.empty_state();
        for &id in ids {
            self.insert(&mut state, id);
        }
        state
    }

    fn eval(&self, ids: &[ItemId]) -> f64 {
        self.state_value(&self.build(ids))
    }

    fn marginal(&self, id: ItemId, ids: &[ItemId]) -> f64 {
        self.gain(&self.build(ids), id)
    }

    fn check_ids(&self, ids: &[ItemId]) -> Result<()> {
        let len = self.ground_len();
        match ids.iter().find(|&&id| id >= len) {
            Some(&id) => Err(Error::InvalidItem { id, len }),
            None => Ok(()),
        }
    }
}

/// Wraps an objective and counts oracle invocations.
pub struct CountingOracle<O> {
    inner: O,
    calls: AtomicU64,
}

impl<O: Objective> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        CountingOracle { inner, calls: AtomicU64::new(0) }
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.calls.store(0, Ordering::Relaxed);
    }

    fn tick(&self) {
        self.calls.fetch_add(1, Ordering::Relaxed);
    }

    /// Counted `f(S)`.
    pub fn eval(&self, ids: &[ItemId]) -> Result<f64> {
        self.inner.check_ids(ids)?;
        self.tick();
        Ok(self.inner.eval(ids))
    }

    /// Counted `f(id | S)`; one call, not two.
    pub fn marginal(&self, id: ItemId, ids: &[ItemId]) -> Result<f64> {
        self.inner.check_ids(&[id])?;
        self.inner.check_ids(ids)?;
        self.tick();
        Ok(self.inner.marginal(id, ids))
    }

    pub(crate) fn eval_unchecked(&self, ids: &[ItemId]) -> f64 {
        self.tick();
        self.inner.eval(ids)
    }
}

impl<O> fmt::Debug for CountingOracle<O> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CountingOracle").field("calls", &self.calls.load(Ordering::Relaxed)).finish()
    }
}

/// A solution under construction: items in insertion order plus the
/// objective's incremental state for them.
pub struct Buffer<O: Objective> {
    items: Vec<Item>,
    state: O::State,
}

impl<O: Objective> Clone for Buffer<O> {
    fn clone(&self) -> Self {
        Buffer { items: self.items.clone(), state: self.state.clone() }
    }
}

impl<O: Objective> fmt::Debug for Buffer<O> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Buffer").field("items", &self.items).finish()
    }
}

impl<O: Objective> Buffer<O> {
    pub fn new(oracle: &CountingOracle<O>) -> Self {
        Buffer { items: Vec::new(), state: oracle.inner.empty_state() }
    }

    /// Rebuilds the state from scratch; counted as one evaluation.
    pub fn from_items(oracle: &CountingOracle<O>, items: Vec<Item>) -> Self {
        oracle.tick();
        let ids: Vec<ItemId> = items.iter().map(|it| it.id).collect();
        Buffer { state: oracle.inner.build(&ids), items }
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn ids(&self) -> Vec<ItemId> {
        self.items.iter().map(|it| it.id).collect()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, id: ItemId) -> bool {
        self.items.iter().any(|it| it.id == id)
    }

    /// Tracked `f(S)`; reading it is not an oracle call.
    pub fn value(&self, oracle: &CountingOracle<O>) -> f64 {
        oracle.inner.state_value(&self.state)
    }

    /// Counted marginal gain of `id` with respect to this buffer.
    pub fn gain(&self, oracle: &CountingOracle<O>, id: ItemId) -> f64 {
        oracle.tick();
        oracle.inner.gain(&self.state, id)
    }

    pub fn push(&mut self, oracle: &CountingOracle<O>, item: Item) {
        oracle.inner.insert(&mut self.state, item.id);
        self.items.push(item);
    }

    /// Returns the buffer extended by `item`, leaving `self` untouched.
    pub fn with(&self, oracle: &CountingOracle<O>, item: Item) -> Self {
        let mut next = self.clone();
        next.push(oracle, item);
        next
    }

    /// The first item that has left a window of `size` ending at `now`.
    pub fn expired_item(&self, now: Timestep, size: u64) -> Option<Item> {
        let mut expired = self.items.iter().filter(|it| it.t.expired(now, size));
        let first = expired.next().copied();
        // One arrival per timestep: at most one item can expire per step.
        debug_assert!(expired.next().is_none(), "more than one item expired in a single step");
        first
    }

    /// Drops every expired item, rebuilding the state if anything was removed.
    /// Returns the number of dropped items.
    pub fn drop_expired(&mut self, oracle: &CountingOracle<O>, now: Timestep, size: u64) -> usize {
        let before = self.items.len();
        if !self.items.iter().any(|it| it.t.expired(now, size)) {
            return 0;
        }
        let kept: Vec<Item> = self.items.iter().copied().filter(|it| !it.t.expired(now, size)).collect();
        *self = Buffer::from_items(oracle, kept);
        before - self.items.len()
    }
}
