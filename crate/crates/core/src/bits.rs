//! Bit-level evaluation of phase indices.
//!
//! A basis label `x` is an `n`-bit word with bit 0 least significant. For a
//! fixed output `y` the phase index of the term `x` is a weighted sum of
//! the anti-diagonal bit overlaps
//!
//! ```text
//! h(t) = x_0 y_{t-1} + x_1 y_{t-2} + ... + x_{t-1} y_0,   h(t) = 0 for t <= 0
//! ```
//!
//! and each `h(n - s)` is a single `popcount(x & (z >> s))` once `z`, the bit
//! reversal of `y`, is known. [`PhaseKernel`] computes the reversal and the
//! shifted masks once per `y` so that scans over many `x` only pay for the
//! masked popcounts.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::spec::TransformSpec;

/// Widest supported register.
pub const MAX_WIDTH: u32 = 62;

/// Largest order for which phase counts are kept in a dense histogram.
pub const HISTOGRAM_MAX_ORDER: u32 = 16;

/// An `n`-bit basis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitWord {
    value: u64,
    width: u32,
}

impl BitWord {
    pub fn new(value: u64, width: u32) -> Result<Self> {
        if width == 0 || width > MAX_WIDTH {
            return Err(invalid(format!(
                "word width {width} outside 1..={MAX_WIDTH}"
            )));
        }
        if value >> width != 0 {
            return Err(invalid(format!("value {value} does not fit in {width} bits")));
        }
        Ok(BitWord { value, width })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn width(self) -> u32 {
        self.width
    }

    pub fn bit(self, i: u32) -> u64 {
        if i >= self.width {
            0
        } else {
            (self.value >> i) & 1
        }
    }
}

/// A phase `2π q / 2^order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhaseIndex {
    q: u64,
    order: u32,
}

impl PhaseIndex {
    pub fn q(self) -> u64 {
        self.q
    }

    pub fn order(self) -> u32 {
        self.order
    }

    pub fn modulus(self) -> u64 {
        1u64 << self.order
    }
}

/// Reverses the `n` bits of `y`.
pub fn bit_reverse(y: BitWord) -> BitWord {
    BitWord {
        value: y.value.reverse_bits() >> (64 - y.width),
        width: y.width,
    }
}

/// `popcount(x & (z >> shift))`, i.e. `h(n - shift)` when `z` is the
/// reversal of `y`. Zero once `shift >= n`.
pub fn h_sum(x: BitWord, z: BitWord, shift: u32) -> Result<u32> {
    if x.width != z.width {
        return Err(invalid(format!(
            "width mismatch: x has {} bits, z has {}",
            x.width, z.width
        )));
    }
    if shift >= x.width {
        return Ok(0);
    }
    Ok((x.value & (z.value >> shift)).count_ones())
}

/// Phase index of the amplitude term `x -> y` under `spec`.
pub fn phase_index(x: BitWord, y: BitWord, spec: TransformSpec) -> Result<PhaseIndex> {
    if x.width != y.width {
        return Err(invalid(format!(
            "width mismatch: x has {} bits, y has {}",
            x.width, y.width
        )));
    }
    let kernel = PhaseKernel::new(y, spec)?;
    Ok(PhaseIndex {
        q: kernel.eval(x.value),
        order: kernel.order,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct PhaseTerm {
    mask: u64,
    weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum KernelForm {
    /// Exact QFT: `x * y mod 2^n`.
    Product { y: u64 },
    /// Weighted masked popcounts.
    Masked { terms: Vec<PhaseTerm> },
}

/// Phase evaluator for a fixed output `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseKernel {
    width: u32,
    order: u32,
    modulus_mask: u64,
    form: KernelForm,
}

impl PhaseKernel {
    pub fn new(y: BitWord, spec: TransformSpec) -> Result<Self> {
        let n = y.width;
        let m = spec.order_for(n)?;
        let modulus_mask = (1u64 << m) - 1;
        let form = match spec {
            TransformSpec::ExactQft => KernelForm::Product { y: y.value },
            _ => {
                let z = bit_reverse(y).value;
                let mut terms: Vec<PhaseTerm> = (0..m.min(n))
                    .map(|s| PhaseTerm {
                        mask: z >> s,
                        weight: 1u64 << (m - 1 - s),
                    })
                    .collect();
                if spec.is_modified() && m < n {
                    terms.push(PhaseTerm {
                        mask: z >> m,
                        weight: 1,
                    });
                }
                KernelForm::Masked { terms }
            }
        };
        Ok(PhaseKernel {
            width: n,
            order: m,
            modulus_mask,
            form,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn eval(&self, x: u64) -> u64 {
        match &self.form {
            KernelForm::Product { y } => x.wrapping_mul(*y) & self.modulus_mask,
            KernelForm::Masked { terms } => {
                let mut q = 0u64;
                for t in terms {
                    q = q.wrapping_add(t.weight.wrapping_mul(u64::from((x & t.mask).count_ones())));
                }
                q & self.modulus_mask
            }
        }
    }

    /// Counts phase classes over `x = start + j * step`, `j < count`.
    ///
    /// Returns `2^order` bins. Requires `order <= HISTOGRAM_MAX_ORDER`.
    pub fn histogram(&self, start: u64, step: u64, count: u64) -> Result<Vec<u64>> {
        if self.order > HISTOGRAM_MAX_ORDER {
            return Err(invalid(format!(
                "order {} too large for a dense histogram",
                self.order
            )));
        }
        let mut counts = vec![0u64; 1usize << self.order];
        match &self.form {
            KernelForm::Masked { terms }
                if self.order == 2
                    && terms.len() == 3
                    && terms.iter().map(|t| t.weight).eq([2, 1, 1]) =>
            {
                let c = integral_counts(
                    [terms[0].mask, terms[1].mask, terms[2].mask],
                    start,
                    step,
                    count,
                );
                counts.copy_from_slice(&c);
            }
            KernelForm::Masked { terms } => {
                masked_counts(terms, self.modulus_mask, start, step, count, &mut counts)
            }
            KernelForm::Product { y } => {
                let mut x = start;
                for _ in 0..count {
                    counts[(x.wrapping_mul(*y) & self.modulus_mask) as usize] += 1;
                    x = x.wrapping_add(step);
                }
            }
        }
        Ok(counts)
    }
}

// Hot loops. Each body is written once and instantiated twice: a portable
// build and one compiled with the hardware popcount enabled, picked at
// runtime.

#[inline(always)]
fn integral_counts_body(masks: [u64; 3], start: u64, step: u64, count: u64) -> [u64; 4] {
    let [z0, z1, z2] = masks;
    // Two interleaved histograms break the store-to-load chain on the bins.
    let mut even = [0u64; 4];
    let mut odd = [0u64; 4];
    let mut x = start;
    let pairs = count / 2;
    for _ in 0..pairs {
        let qa = (2 * (x & z0).count_ones() + (x & z1).count_ones() + (x & z2).count_ones()) & 3;
        let xb = x.wrapping_add(step);
        let qb =
            (2 * (xb & z0).count_ones() + (xb & z1).count_ones() + (xb & z2).count_ones()) & 3;
        even[qa as usize] += 1;
        odd[qb as usize] += 1;
        x = xb.wrapping_add(step);
    }
    if count % 2 == 1 {
        let q = (2 * (x & z0).count_ones() + (x & z1).count_ones() + (x & z2).count_ones()) & 3;
        even[q as usize] += 1;
    }
    [
        even[0] + odd[0],
        even[1] + odd[1],
        even[2] + odd[2],
        even[3] + odd[3],
    ]
}

#[inline(always)]
fn masked_counts_body(
    terms: &[PhaseTerm],
    modulus_mask: u64,
    start: u64,
    step: u64,
    count: u64,
    counts: &mut [u64],
) {
    let mut x = start;
    for _ in 0..count {
        let mut q = 0u64;
        for t in terms {
            q = q.wrapping_add(t.weight.wrapping_mul(u64::from((x & t.mask).count_ones())));
        }
        counts[(q & modulus_mask) as usize] += 1;
        x = x.wrapping_add(step);
    }
}

#[cfg(target_arch = "x86_64")]
mod hw {
    use super::*;

    #[target_feature(enable = "popcnt")]
    pub(super) unsafe fn integral_counts(
        masks: [u64; 3],
        start: u64,
        step: u64,
        count: u64,
    ) -> [u64; 4] {
        integral_counts_body(masks, start, step, count)
    }

    #[target_feature(enable = "popcnt")]
    pub(super) unsafe fn masked_counts(
        terms: &[PhaseTerm],
        modulus_mask: u64,
        start: u64,
        step: u64,
        count: u64,
        counts: &mut [u64],
    ) {
        masked_counts_body(terms, modulus_mask, start, step, count, counts)
    }
}

fn integral_counts(masks: [u64; 3], start: u64, step: u64, count: u64) -> [u64; 4] {
    #[cfg(target_arch = "x86_64")]
    if std::arch::is_x86_feature_detected!("popcnt") {
        // SAFETY: the required CPU feature was detected above.
        return unsafe { hw::integral_counts(masks, start, step, count) };
    }
    integral_counts_body(masks, start, step, count)
}

fn masked_counts(
    terms: &[PhaseTerm],
    modulus_mask: u64,
    start: u64,
    step: u64,
    count: u64,
    counts: &mut [u64],
) {
    #[cfg(target_arch = "x86_64")]
    if std::arch::is_x86_feature_detected!("popcnt") {
        // SAFETY: the required CPU feature was detected above.
        return unsafe { hw::masked_counts(terms, modulus_mask, start, step, count, counts) };
    }
    masked_counts_body(terms, modulus_mask, start, step, count, counts)
}
