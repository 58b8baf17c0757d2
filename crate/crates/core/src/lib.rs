//! Monotone submodular maximization over sliding windows of a data stream.
//!
//! The crate is organised bottom-up:
//!
//! * [`window`], [`oracle`] and [`algorithm`] define stream/window semantics,
//!   the call-counting oracle layer and the streaming-algorithm contract.
//! * [`objectives`] holds the maximum-coverage and log-det (IVM) objectives.
//! * [`streaming`] holds infinite-window building blocks: SieveStream, offline
//!   greedy and an exhaustive optimum used by tests.
//! * [`sliding`] holds the sliding-window algorithms: the smooth-histogram
//!   style reduction (SW-RD), the threshold dynamic program (SW-DP), the two
//!   sieve heuristics and the priority-sampling baseline.
//! * [`ingest`] loads and synthesises datasets, [`bench`] drives benchmark runs
//!   and implements the command line.

// `!(x > 0.0)` style checks deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithm;
pub mod bench;
pub mod error;
pub mod ingest;
pub mod objectives;
pub mod oracle;
pub mod sliding;
pub mod streaming;
pub mod window;

pub use algorithm::{MonotoneWrap, Solution, StreamAlgorithm};
pub use error::{Error, Result};
pub use oracle::{Buffer, CountingOracle, Objective};
pub use window::{window_members, Bounds, Item, ItemId, Timestep, Window};
