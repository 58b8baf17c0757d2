use crate::window::{Item, ItemId};

/// Output of a query: chosen item ids and their utility.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Solution {
    pub items: Vec<ItemId>,
    pub value: f64,
}

impl Solution {
    pub fn empty() -> Self {
        Solution::default()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// A one-pass algorithm over a stream of items.
pub trait StreamAlgorithm {
    /// Processes the next item; items arrive with strictly increasing timesteps.
    fn step(&mut self, item: Item);

    /// Current solution; `|items| <= k`.
    fn query(&self) -> Solution;

    /// Item ids currently held across all internal buffers.
    fn retained(&self) -> usize;

    /// Historical maximum of [`StreamAlgorithm::retained`].
    fn peak_items(&self) -> usize;
}

impl<A: StreamAlgorithm + ?Sized> StreamAlgorithm for Box<A> {
    fn step(&mut self, item: Item) {
        (**self).step(item)
    }
    fn query(&self) -> Solution {
        (**self).query()
    }
    fn retained(&self) -> usize {
        (**self).retained()
    }
    fn peak_items(&self) -> usize {
        (**self).peak_items()
    }
}

/// Running maximum of a retained-item count.
#[derive(Copy, Clone, Debug, Default)]
pub struct Peak(usize);

impl Peak {
    pub fn observe(&mut self, current: usize) {
        self.0 = self.0.max(current);
    }

    pub fn get(&self) -> usize {
        self.0
    }
}

/// Makes any stream algorithm prefix-monotone by remembering the best
/// solution reported after any step.
///
/// Only meant for inner algorithms of the reduction; sliding-window
/// algorithms must not be wrapped because their value legitimately drops
/// when items expire.
#[derive(Debug)]
pub struct MonotoneWrap<A> {
    inner: A,
    best: Solution,
    peak: Peak,
}

impl<A: StreamAlgorithm> MonotoneWrap<A> {
    pub fn new(inner: A) -> Self {
        MonotoneWrap { inner, best: Solution::empty(), peak: Peak::default() }
    }

    pub fn inner(&self) -> &A {
        &self.inner
    }
}

impl<A: StreamAlgorithm> StreamAlgorithm for MonotoneWrap<A> {
    fn step(&mut self, item: Item) {
        self.inner.step(item);
        let current = self.inner.query();
        if current.value > self.best.value {
            self.best = current;
        }
        self.peak.observe(self.retained());
    }

    fn query(&self) -> Solution {
        self.best.clone()
    }

    fn retained(&self) -> usize {
        self.inner.retained() + self.best.len()
    }

    fn peak_items(&self) -> usize {
        self.peak.get()
    }
}
