//! Fixtures shared by the criterion benches.

use sumprod_core::generators::random_tree;
use sumprod_core::{GridScale, GridSet};

/// A seeded random `(δ, σ)`-set at scale `n` (a power of two).
pub fn tree(n: u64, sigma: f64, seed: u64) -> GridSet {
    random_tree(GridScale::new(n).expect("valid scale"), sigma, seed).expect("generator succeeds")
}

pub fn interval(n: u64) -> GridSet {
    GridSet::from_intervals(GridScale::new(n).expect("valid scale"), &[(1.0, 2.0)]).expect("nonempty")
}
