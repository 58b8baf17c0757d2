//! Maximum coverage: `f(S) = |union of the sets in S|`.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::oracle::Objective;
use crate::window::ItemId;

/// A subset of the universe, kept sorted and deduplicated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SetPayload(Vec<u64>);

impl SetPayload {
    pub fn new<I: IntoIterator<Item = u64>>(elements: I) -> Self {
        let mut v: Vec<u64> = elements.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SetPayload(v)
    }

    pub fn elements(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<u64> for SetPayload {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        SetPayload::new(iter)
    }
}

/// Number of elements of `set` missing from the sorted slice `union`.
fn count_new(union: &[u64], set: &[u64]) -> usize {
    let (mut i, mut fresh) = (0, 0);
    for &x in set {
        while i < union.len() && union[i] < x {
            i += 1;
        }
        if i == union.len() || union[i] != x {
            fresh += 1;
        }
    }
    fresh
}

fn merge_into(union: &mut Vec<u64>, set: &[u64]) {
    let mut merged = Vec::with_capacity(union.len() + set.len());
    let (mut a, mut b) = (union.iter().peekable(), set.iter().peekable());
    loop {
        match (a.peek(), b.peek()) {
            (Some(&&x), Some(&&y)) => match x.cmp(&y) {
                Ordering::Less => {
                    merged.push(x);
                    a.next();
                }
                Ordering::Greater => {
                    merged.push(y);
                    b.next();
                }
                Ordering::Equal => {
                    merged.push(x);
                    a.next();
                    b.next();
                }
            },
            (Some(&&x), None) => {
                merged.push(x);
                a.next();
            }
            (None, Some(&&y)) => {
                merged.push(y);
                b.next();
            }
            (None, None) => break,
        }
    }
    *union = merged;
}

/// `|∪ S|` over the given payloads.
pub fn coverage_value(payloads: &[&SetPayload]) -> usize {
    let mut union = Vec::new();
    for p in payloads {
        merge_into(&mut union, p.elements());
    }
    union.len()
}

#[derive(Clone, Debug)]
pub struct Coverage {
    sets: Arc<[SetPayload]>,
}

/// Sorted union of the selected sets.
#[derive(Clone, Debug, Default)]
pub struct CoverageState {
    union: Vec<u64>,
}

impl Coverage {
    pub fn new(sets: impl Into<Arc<[SetPayload]>>) -> Self {
        Coverage { sets: sets.into() }
    }

    pub fn sets(&self) -> &[SetPayload] {
        &self.sets
    }

    pub fn max_set_size(&self) -> usize {
        self.sets.iter().map(SetPayload::len).max().unwrap_or(0)
    }
}

impl Objective for Coverage {
    type State = CoverageState;

    fn ground_len(&self) -> usize {
        self.sets.len()
    }

    fn empty_state(&self) -> CoverageState {
        CoverageState::default()
    }

    fn state_value(&self, state: &CoverageState) -> f64 {
        state.union.len() as f64
    }

    fn gain(&self, state: &CoverageState, id: ItemId) -> f64 {
        count_new(&state.union, self.sets[id].elements()) as f64
    }

    fn insert(&self, state: &mut CoverageState, id: ItemId) {
        merge_into(&mut state.union, self.sets[id].elements());
    }
}
