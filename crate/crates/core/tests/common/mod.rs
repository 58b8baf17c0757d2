#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slidesub::objectives::{Coverage, Ivm, KernelParams, SetPayload};
use slidesub::{CountingOracle, Item};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Non-empty random sets of size `1..=max_size` over `0..universe`.
pub fn random_sets(rng: &mut ChaCha8Rng, n: usize, universe: u64, max_size: usize) -> Vec<SetPayload> {
    (0..n)
        .map(|_| {
            let size = rng.random_range(1..=max_size);
            (0..size).map(|_| rng.random_range(0..universe)).collect()
        })
        .collect()
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| rng.random::<f64>()).collect()).collect()
}

pub fn coverage_oracle(sets: Vec<SetPayload>) -> Arc<CountingOracle<Coverage>> {
    Arc::new(CountingOracle::new(Coverage::new(sets)))
}

pub fn ivm(points: Vec<Vec<f64>>) -> Ivm {
    Ivm::new(points, KernelParams::new(0.75, 1.0).unwrap()).unwrap()
}

pub fn stream(n: usize) -> Vec<Item> {
    (0..n).map(|i| Item::new(i as u64 + 1, i)).collect()
}
