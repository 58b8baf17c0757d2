//! Reduction from sliding windows to any prefix-monotone streaming algorithm.
//!
//! A new inner instance starts at every timestep. After each update the
//! instance list is thinned so that the values of every other instance
//! decay geometrically: `value(t_j) > (1+ε)·value(t_{j+2})`. A query is
//! answered by the oldest instance still inside the window.

use std::sync::Arc;

use crate::algorithm::{MonotoneWrap, Peak, Solution, StreamAlgorithm};
use crate::error::Result;
use crate::oracle::{CountingOracle, Objective};
use crate::streaming::SieveStream;
use crate::window::{Bounds, Item, Timestep};

pub struct Instance<A> {
    pub start: Timestep,
    pub alg: A,
}

type Factory<A> = Box<dyn Fn() -> A + Send + Sync>;

pub struct Swrd<A> {
    window: u64,
    bounds: Bounds,
    instances: Vec<Instance<A>>,
    factory: Factory<A>,
    peak: Peak,
}

impl<A: StreamAlgorithm> Swrd<A> {
    pub fn new(window: u64, bounds: Bounds, factory: impl Fn() -> A + Send + Sync + 'static) -> Self {
        assert!(window >= 1, "window size must be positive");
        Swrd { window, bounds, instances: Vec::new(), factory: Box::new(factory), peak: Peak::default() }
    }

    pub fn instances(&self) -> &[Instance<A>] {
        &self.instances
    }

    /// `(start, value)` of every maintained instance, oldest first.
    pub fn instance_values(&self) -> Vec<(Timestep, f64)> {
        self.instances.iter().map(|ins| (ins.start, ins.alg.query().value)).collect()
    }

    /// Upper bound on the number of kept instances, `2(⌈log_{1+ε} M⌉ + 2)`.
    pub fn max_instances(&self) -> usize {
        2 * (self.bounds.log_steps() + 2)
    }

    /// Removes every instance strictly between `j` and the largest `x` with
    /// `(1+ε)·value(t_x) ≥ value(t_j)`, then continues from `x`.
    fn prune(&mut self) {
        let values: Vec<f64> = self.instances.iter().map(|ins| ins.alg.query().value).collect();
        let u = values.len();
        let scale = 1.0 + self.bounds.epsilon;
        let mut keep = vec![true; u];
        let mut j = 0;
        while j + 1 < u {
            let mut x = u - 1;
            while x > j && scale * values[x] < values[j] {
                x -= 1;
            }
            for flag in &mut keep[j + 1..x.max(j + 1)] {
                *flag = false;
            }
            if x <= j {
                x = j + 1;
            }
            j = x;
        }
        let mut flags = keep.into_iter();
        self.instances.retain(|_| flags.next().unwrap_or(true));
    }
}

impl<A: StreamAlgorithm> StreamAlgorithm for Swrd<A> {
    fn step(&mut self, item: Item) {
        let now = item.t;
        self.instances.push(Instance { start: now, alg: (self.factory)() });
        let window = self.window;
        self.instances.retain(|ins| !ins.start.expired(now, window));
        for ins in &mut self.instances {
            ins.alg.step(item);
        }
        self.prune();
        self.peak.observe(self.retained());
    }

    fn query(&self) -> Solution {
        // Expired instances are dropped on every step, so the oldest
        // maintained instance is the minimum start inside the window.
        self.instances.first().map_or_else(Solution::empty, |ins| ins.alg.query())
    }

    fn retained(&self) -> usize {
        self.instances.iter().map(|ins| ins.alg.retained()).sum()
    }

    fn peak_items(&self) -> usize {
        self.peak.get()
    }
}

impl<O: Objective + 'static> Swrd<SieveStream<O>> {
    /// SW-RD over SieveStream instances sharing one counting oracle.
    pub fn with_sieve(k: usize, window: u64, bounds: Bounds, oracle: Arc<CountingOracle<O>>) -> Result<Self> {
        SieveStream::new(k, &bounds, oracle.clone())?;
        Ok(Swrd::new(window, bounds, move || {
            SieveStream::new(k, &bounds, oracle.clone()).expect("parameters validated")
        }))
    }
}

impl<O: Objective + 'static> Swrd<MonotoneWrap<SieveStream<O>>> {
    /// Same as [`Swrd::with_sieve`] with every instance made prefix-monotone
    /// by tracking its best-so-far solution.
    pub fn with_monotone_sieve(k: usize, window: u64, bounds: Bounds, oracle: Arc<CountingOracle<O>>) -> Result<Self> {
        SieveStream::new(k, &bounds, oracle.clone())?;
        Ok(Swrd::new(window, bounds, move || {
            MonotoneWrap::new(SieveStream::new(k, &bounds, oracle.clone()).expect("parameters validated"))
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{Coverage, SetPayload};

    /// Reports a value fixed at construction; lets prune be driven directly.
    struct Fixed(f64);

    impl StreamAlgorithm for Fixed {
        fn step(&mut self, _item: Item) {}
        fn query(&self) -> Solution {
            Solution { items: vec![], value: self.0 }
        }
        fn retained(&self) -> usize {
            0
        }
        fn peak_items(&self) -> usize {
            0
        }
    }

    fn with_values(values: &[f64], epsilon: f64) -> Swrd<Fixed> {
        let mut s = Swrd::new(100, Bounds::new(16.0, epsilon).unwrap(), || Fixed(0.0));
        s.instances = values
            .iter()
            .enumerate()
            .map(|(i, &v)| Instance { start: Timestep(i as u64 + 1), alg: Fixed(v) })
            .collect();
        s
    }

    fn kept(s: &Swrd<Fixed>) -> Vec<f64> {
        s.instances.iter().map(|i| i.alg.0).collect()
    }

    #[test]
    fn prune_hand_trace() {
        let mut s = with_values(&[10.0, 9.0, 5.0, 4.0, 1.0], 1.0);
        s.prune();
        assert_eq!(kept(&s), vec![10.0, 5.0, 4.0, 1.0]);
    }

    #[test]
    fn two_instances_never_pruned() {
        let mut s = with_values(&[100.0, 1.0], 0.2);
        s.prune();
        assert_eq!(kept(&s), vec![100.0, 1.0]);
    }

    #[test]
    fn zeros_collapse_to_the_tail() {
        let mut s = with_values(&[3.0, 0.0, 0.0, 0.0, 0.0], 0.2);
        s.prune();
        assert_eq!(kept(&s), vec![3.0, 0.0, 0.0]);
    }

    proptest::proptest! {
        #[test]
        fn prune_leaves_geometric_decay(
            values in proptest::collection::vec(0.0f64..50.0, 1..40),
            epsilon in 0.05f64..1.0,
        ) {
            let mut s = with_values(&values, epsilon);
            s.prune();
            let v = kept(&s);
            proptest::prop_assert_eq!(v.first(), values.first());
            proptest::prop_assert_eq!(v.last(), values.last());
            for j in 0..v.len().saturating_sub(2) {
                proptest::prop_assert!(v[j] > (1.0 + epsilon) * v[j + 2]);
            }
        }
    }

    fn coverage(sets: Vec<Vec<u64>>) -> Arc<CountingOracle<Coverage>> {
        Arc::new(CountingOracle::new(Coverage::new(sets.into_iter().map(SetPayload::new).collect::<Vec<_>>())))
    }

    #[test]
    fn first_item_starts_one_instance() {
        let o = coverage(vec![vec![1]]);
        let mut s = Swrd::with_sieve(2, 3, Bounds::new(2.0, 0.2).unwrap(), o).unwrap();
        s.step(Item::new(1, 0));
        assert_eq!(s.instances().len(), 1);
        assert_eq!(s.query().items, vec![0]);
    }

    #[test]
    fn expired_instance_is_dropped() {
        // Disjoint sets of growing size keep every instance alive under pruning.
        let o = coverage(vec![vec![1], vec![2, 3], vec![4, 5, 6], vec![7, 8, 9, 10]]);
        let mut s = Swrd::with_sieve(4, 3, Bounds::new(16.0, 0.2).unwrap(), o).unwrap();
        for t in 1..=3 {
            s.step(Item::new(t, (t - 1) as usize));
        }
        assert_eq!(s.instances()[0].start, Timestep(1));
        s.step(Item::new(4, 3));
        assert!(s.instances().iter().all(|i| i.start > Timestep(1)));
        assert!(s.query().items.iter().all(|&id| id >= 1));
    }

    #[test]
    fn query_before_any_item() {
        let o = coverage(vec![vec![1]]);
        let s = Swrd::with_sieve(1, 3, Bounds::new(2.0, 0.2).unwrap(), o).unwrap();
        assert_eq!(s.query(), Solution::empty());
    }
}
