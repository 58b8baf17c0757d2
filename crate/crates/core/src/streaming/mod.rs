//! Infinite-window building blocks.

pub mod brute;
pub mod greedy;
pub mod sieve;

pub use brute::{brute_force_opt, BRUTE_FORCE_LIMIT};
pub use greedy::{greedy_buffer, greedy_select};
pub use sieve::{SieveBank, SieveStream};
