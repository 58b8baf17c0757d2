//! Exhaustive optimum over all subsets of size at most `k`.

use crate::algorithm::Solution;
use crate::error::{Error, Result};
use crate::oracle::Objective;
use crate::window::ItemId;

pub const BRUTE_FORCE_LIMIT: u128 = 1_000_000;

/// `Σ_{j ≤ k} C(n, j)`, saturating.
fn subset_count(n: usize, k: usize) -> u128 {
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for j in 0..=k.min(n) {
        total = total.saturating_add(term);
        term = term.saturating_mul((n - j) as u128) / (j as u128 + 1);
    }
    total
}

pub fn brute_force_opt<O: Objective>(items: &[ItemId], k: usize, objective: &O) -> Result<Solution> {
    let count = subset_count(items.len(), k);
    if count > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { count, limit: BRUTE_FORCE_LIMIT });
    }
    objective.check_ids(items)?;
    let mut best = Solution::empty();
    let mut chosen = Vec::with_capacity(k);
    search(items, k, objective, 0, &mut chosen, &mut best);
    Ok(best)
}

fn search<O: Objective>(
    items: &[ItemId],
    k: usize,
    objective: &O,
    from: usize,
    chosen: &mut Vec<ItemId>,
    best: &mut Solution,
) {
    let value = objective.eval(chosen);
    if value > best.value {
        *best = Solution { items: chosen.clone(), value };
    }
    if chosen.len() == k {
        return;
    }
    for i in from..items.len() {
        chosen.push(items[i]);
        search(items, k, objective, i + 1, chosen, best);
        chosen.pop();
    }
}
