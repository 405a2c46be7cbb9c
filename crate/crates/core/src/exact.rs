//! Exact solvers: exhaustive enumeration and the `n·c` dynamic program.

use crate::error::{Error, Result};
use crate::knapsack::{Bitstring, KnapsackInstance};

/// Largest `n` accepted by [`brute_force_opt`].
pub const MAX_BRUTE_FORCE_ITEMS: usize = 30;

/// Default cap on DP table cells, `(n + 1)·(c + 1)`.
pub const DEFAULT_DP_CELL_LIMIT: u128 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub x: Bitstring,
    pub value: u64,
}

/// Enumerates all `2^n` subsets. Among optimal subsets the lexicographically
/// smallest bitstring (comparing `x_1` first) is returned.
pub fn brute_force_opt(inst: &KnapsackInstance) -> Result<Optimum> {
    let n = inst.n();
    if n > MAX_BRUTE_FORCE_ITEMS {
        return Err(Error::CapacityExceeded {
            what: "brute-force items",
            requested: n as u128,
            limit: MAX_BRUTE_FORCE_ITEMS as u128,
        });
    }
    // lexicographic rank of a little-endian mask: x_1 becomes the top bit
    let lex_key = |mask: u64| mask.reverse_bits() >> (64 - n);
    let (mut best_mask, mut best_value) = (0u64, 0u64);
    for mask in 1..(1u64 << n) {
        let value = inst.objective_of_mask(mask);
        if value > best_value || (value == best_value && lex_key(mask) < lex_key(best_mask)) {
            best_mask = mask;
            best_value = value;
        }
    }
    Ok(Optimum {
        x: Bitstring::from_index(best_mask, n),
        value: best_value,
    })
}

pub fn dp_opt(inst: &KnapsackInstance) -> Result<Optimum> {
    dp_opt_with_limit(inst, DEFAULT_DP_CELL_LIMIT)
}

/// Table `best[i][cap]` = best value using the first `i` items within `cap`.
pub fn dp_opt_with_limit(inst: &KnapsackInstance, cell_limit: u128) -> Result<Optimum> {
    let n = inst.n();
    let cap = inst.capacity();
    let cells = (n as u128 + 1) * (u128::from(cap) + 1);
    if cells > cell_limit {
        return Err(Error::CapacityExceeded {
            what: "dynamic-programming table cells",
            requested: cells,
            limit: cell_limit,
        });
    }
    let cap = cap as usize;
    let width = cap + 1;
    let mut table = vec![0u64; (n + 1) * width];
    for i in 1..=n {
        let (w, v) = (inst.weights()[i - 1] as usize, inst.values()[i - 1]);
        let (prev, row) = table.split_at_mut(i * width);
        let prev = &prev[(i - 1) * width..];
        let row = &mut row[..width];
        for c in 0..width {
            row[c] = prev[c];
            if w <= c {
                row[c] = row[c].max(prev[c - w] + v);
            }
        }
    }

    let mut x = Bitstring::zeros(n);
    let mut c = cap;
    for i in (1..=n).rev() {
        if table[i * width + c] != table[(i - 1) * width + c] {
            x.set(i - 1, true);
            c -= inst.weights()[i - 1] as usize;
        }
    }
    Ok(Optimum {
        x,
        value: table[n * width + cap],
    })
}
