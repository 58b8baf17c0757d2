//! The two objectives: maximum coverage and the IVM log-det objective.

pub mod coverage;
pub mod ivm;

pub use coverage::{coverage_value, Coverage, CoverageState, SetPayload};
pub use ivm::{se_kernel, CholState, Extension, Ivm, IvmMarginal, KernelParams};

use crate::error::{Error, Result};
use crate::ingest::DatasetStore;
use crate::oracle::Objective;
use crate::window::ItemId;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ObjectiveKind {
    Coverage,
    Ivm,
}

impl std::str::FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coverage" => Ok(ObjectiveKind::Coverage),
            "ivm" => Ok(ObjectiveKind::Ivm),
            _ => Err(Error::Usage(format!("unknown objective '{s}' (expected coverage or ivm)"))),
        }
    }
}

/// Either objective behind one type, for runtime selection.
#[derive(Clone, Debug)]
pub enum AnyObjective {
    Coverage(Coverage),
    Ivm(Ivm),
}

#[derive(Clone, Debug)]
pub enum AnyState {
    Coverage(CoverageState),
    Ivm(CholState),
}

impl AnyObjective {
    pub fn from_store(kind: ObjectiveKind, store: &DatasetStore, params: KernelParams) -> Result<Self> {
        match (kind, store) {
            (ObjectiveKind::Coverage, DatasetStore::Sets(sets)) => {
                Ok(AnyObjective::Coverage(Coverage::new(sets.clone())))
            }
            (ObjectiveKind::Ivm, DatasetStore::Dense(dense)) => {
                Ok(AnyObjective::Ivm(Ivm::new(dense.rows.clone(), params)?))
            }
            (ObjectiveKind::Coverage, _) => {
                Err(Error::Input("the coverage objective needs a set-stream dataset".into()))
            }
            (ObjectiveKind::Ivm, _) => Err(Error::Input("the ivm objective needs a dense-vector dataset".into())),
        }
    }

    pub fn kind(&self) -> ObjectiveKind {
        match self {
            AnyObjective::Coverage(_) => ObjectiveKind::Coverage,
            AnyObjective::Ivm(_) => ObjectiveKind::Ivm,
        }
    }
}

/// Upper bound `M` on `f(OPT)` for any window and cardinality `k`.
///
/// Coverage: `max(1, k·max|S_i|)`. IVM: `max(1, (k/2)·log(1+σ⁻²))`.
pub fn estimate_upper_bound(objective: &AnyObjective, k: usize) -> Result<f64> {
    if objective.ground_len() == 0 {
        return Err(Error::Input("cannot bound the optimum of an empty dataset".into()));
    }
    Ok(match objective {
        AnyObjective::Coverage(c) => ((k * c.max_set_size()) as f64).max(1.0),
        AnyObjective::Ivm(f) => f.upper_bound(k),
    })
}

impl Objective for AnyObjective {
    type State = AnyState;

    fn ground_len(&self) -> usize {
        match self {
            AnyObjective::Coverage(c) => c.ground_len(),
            AnyObjective::Ivm(f) => f.ground_len(),
        }
    }

    fn empty_state(&self) -> AnyState {
        match self {
            AnyObjective::Coverage(c) => AnyState::Coverage(c.empty_state()),
            AnyObjective::Ivm(f) => AnyState::Ivm(f.empty_state()),
        }
    }

    fn state_value(&self, state: &AnyState) -> f64 {
        match (self, state) {
            (AnyObjective::Coverage(c), AnyState::Coverage(s)) => c.state_value(s),
            (AnyObjective::Ivm(f), AnyState::Ivm(s)) => f.state_value(s),
            _ => unreachable!("state belongs to a different objective"),
        }
    }

    fn gain(&self, state: &AnyState, id: ItemId) -> f64 {
        match (self, state) {
            (AnyObjective::Coverage(c), AnyState::Coverage(s)) => c.gain(s, id),
            (AnyObjective::Ivm(f), AnyState::Ivm(s)) => f.gain(s, id),
            _ => unreachable!("state belongs to a different objective"),
        }
    }

    fn insert(&self, state: &mut AnyState, id: ItemId) {
        match (self, state) {
            (AnyObjective::Coverage(c), AnyState::Coverage(s)) => c.insert(s, id),
            (AnyObjective::Ivm(f), AnyState::Ivm(s)) => f.insert(s, id),
            _ => unreachable!("state belongs to a different objective"),
        }
    }

    fn eval(&self, ids: &[ItemId]) -> f64 {
        match self {
            AnyObjective::Coverage(c) => c.eval(ids),
            AnyObjective::Ivm(f) => f.eval(ids),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coverage_bound_is_k_times_largest_set() {
        let sets: Vec<SetPayload> = vec![SetPayload::new(0..7), SetPayload::new([1, 2])];
        let obj = AnyObjective::Coverage(Coverage::new(sets));
        assert_eq!(estimate_upper_bound(&obj, 3).unwrap(), 21.0);
    }

    #[test]
    fn single_item_bound_is_tight() {
        let obj = AnyObjective::Coverage(Coverage::new(vec![SetPayload::new([4, 9])]));
        assert_eq!(estimate_upper_bound(&obj, 1).unwrap(), 2.0);
    }

    #[test]
    fn empty_dataset_has_no_bound() {
        let obj = AnyObjective::Coverage(Coverage::new(Vec::new()));
        assert!(estimate_upper_bound(&obj, 2).is_err());
    }
}
