//! Shared inputs for the benchmarks.

use std::sync::Arc;

use hovey_core::{fixtures, Universe};

pub fn dual_numbers_universe() -> Universe {
    Universe::enumerate(Arc::new(fixtures::dual_numbers(2)), 2).expect("fixture enumerates")
}

pub fn a2_universe() -> Universe {
    Universe::enumerate(Arc::new(fixtures::a2(2)), 2).expect("fixture enumerates")
}
