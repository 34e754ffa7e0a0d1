//! Fixtures shared by the benchmarks.

use qift_core::PeriodicState;

/// The n = 25 case study: x0 = 85, r = 713, and its two peak outcomes.
pub fn case_n25() -> (PeriodicState, [u64; 2]) {
    (PeriodicState::new(25, 85, 713).unwrap(), [23906944, 23906945])
}

/// A typical odd-period state at width `n`, with r in the upper octave.
pub fn odd_state(n: u32) -> PeriodicState {
    let r_max = ((1u64 << n) - 1).isqrt();
    let r = (r_max * 3 / 4) | 1;
    PeriodicState::new(n, r / 3, r).unwrap()
}
