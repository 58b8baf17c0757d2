//! Sliding-window algorithms.

pub mod psample;
pub mod sieve_greedy;
pub mod sieve_naive;
pub mod swdp;
pub mod swrd;

pub use psample::PrioritySample;
pub use sieve_greedy::SieveGreedy;
pub use sieve_naive::SieveNaive;
pub use swdp::{SwDp, ThreshGreedy};
pub use swrd::{Instance, Swrd};
