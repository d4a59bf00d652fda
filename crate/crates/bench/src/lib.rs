//! Shared inputs for the criterion benches.

use spinwig::random::{haar_state, substream};
use spinwig::{Spin, SpinState};

/// Fixed Haar-random states so runs compare like with like.
pub fn states(twice_j: u32, n: usize) -> Vec<SpinState> {
    (0..n as u64)
        .map(|i| haar_state(Spin::from_twice(twice_j), &mut substream(0xbe4c, i)))
        .collect()
}
