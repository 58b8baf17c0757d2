//! Offline greedy: `k` rounds, each adding the item of largest marginal gain.

use crate::algorithm::Solution;
use crate::oracle::{Buffer, CountingOracle, Objective};
use crate::window::Item;

/// Greedy selection from `candidates`. Ties go to the smallest item id and
/// the loop stops early once the best gain is not positive.
pub fn greedy_buffer<O: Objective>(candidates: &[Item], k: usize, oracle: &CountingOracle<O>) -> Buffer<O> {
    let mut chosen = Buffer::new(oracle);
    let mut remaining: Vec<Item> = candidates.to_vec();
    while chosen.len() < k && !remaining.is_empty() {
        let mut best: Option<(usize, f64)> = None;
        for (pos, item) in remaining.iter().enumerate() {
            let gain = chosen.gain(oracle, item.id);
            let better = match best {
                None => true,
                Some((bp, bg)) => gain > bg || (gain == bg && item.id < remaining[bp].id),
            };
            if better {
                best = Some((pos, gain));
            }
        }
        match best {
            Some((pos, gain)) if gain > 0.0 => {
                let item = remaining.swap_remove(pos);
                chosen.push(oracle, item);
            }
            _ => break,
        }
    }
    chosen
}

pub fn greedy_select<O: Objective>(candidates: &[Item], k: usize, oracle: &CountingOracle<O>) -> Solution {
    let buf = greedy_buffer(candidates, k, oracle);
    Solution { items: buf.ids(), value: buf.value(oracle) }
}
