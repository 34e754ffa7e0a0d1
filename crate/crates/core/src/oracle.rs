//! Slow reference evaluations used only by tests. Nothing here touches
//! the reversal/popcount kernel or the butterfly.

use std::f64::consts::PI;

use crate::spec::TransformSpec;

/// Phase from the per-qubit exponent form: output bit `y_k` picks up
/// `π (x_l + x_{l-1}/2 + ...)` with `l = n-1-k`, truncated per spec.
/// Evaluated bit by bit in units of `2π / 2^m`.
pub fn oracle_phase(x: u64, y: u64, n: u32, spec: TransformSpec) -> u64 {
    let m = spec.order(n);
    let bit = |v: u64, i: i64| -> u64 {
        if i < 0 || i >= n as i64 {
            0
        } else {
            (v >> i) & 1
        }
    };
    let mut q: u128 = 0;
    for k in 0..n as i64 {
        if bit(y, k) == 0 {
            continue;
        }
        let l = n as i64 - 1 - k;
        for t in 0..m as i64 {
            q += (bit(x, l - t) as u128) << (m as i64 - 1 - t);
        }
        if spec.is_modified() {
            q += bit(x, l - m as i64) as u128;
        }
    }
    (q % (1u128 << m)) as u64
}

/// `|(1/A) Σ_j exp(2πi q_j / 2^m)|^2` summed term by term.
pub fn oracle_rp(n: u32, x0: u64, r: u64, y: u64, spec: TransformSpec) -> f64 {
    let m = spec.order(n);
    let big_n = 1u64 << n;
    let (mut re, mut im, mut a) = (0.0f64, 0.0f64, 0u64);
    let mut x = x0;
    while x < big_n {
        let q = oracle_phase(x, y, n, spec);
        let (s, c) = (2.0 * PI * q as f64 / (1u64 << m) as f64).sin_cos();
        re += c;
        im += s;
        a += 1;
        x += r;
    }
    (re * re + im * im) / (a as f64 * a as f64)
}
