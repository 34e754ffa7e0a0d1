//! Classical simulation of Shor period finding under the exact QFT,
//! approximate QFTs, a modified AQFT, and the integral
//! `{1, i, -1, -i}` transform.
//!
//! Amplitude information is carried as exact integer phase-class counts
//! (or exact Gaussian-integer sums), so relative probabilities of the
//! integral transform are exact rationals.

pub mod bits;
pub mod error;
pub mod experiment;
pub mod gaussian;
pub mod number_theory;
#[cfg(test)]
mod oracle;
pub mod reference;
pub mod shor;
pub mod spec;
pub mod transform;

pub use bits::{bit_reverse, h_sum, phase_index, BitWord, PhaseIndex, PhaseKernel};
pub use error::{Error, Result};
pub use experiment::{
    full_scan, peak_scan, random_runs, table_reproduce, PeriodClass, RunConfig, ScanMode,
    ScanReport,
};
pub use gaussian::GaussianInt;
pub use number_theory::{best_approx, success_window, ApproxMode, Convergent};
pub use shor::{choose_n, run_factor, FactorJob, FactorOutcome};
pub use spec::TransformSpec;
pub use transform::{
    barenco_bound, full_distribution, prob, rp, rp_closed_form, unitary_check, PeriodicState,
    PhaseHistogram, RelProb,
};

/// Formats `v` with `digits` significant digits, the way the reference
/// tables print probabilities (`0.118273`, `0.0898572`).
pub fn format_sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    // rounding can carry into a new leading digit (0.9999996 -> 1.000000)
    let rounded: f64 = s.parse().unwrap_or(v);
    if rounded != 0.0 && rounded.abs().log10().floor() as i32 > magnitude {
        let decimals = decimals.saturating_sub(1);
        return format!("{v:.decimals$}");
    }
    s
}
