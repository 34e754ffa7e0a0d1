//! Relative probabilities and outcome distributions for periodic states.
//!
//! Two independent routes are provided. [`rp`] evaluates one outcome by
//! accumulating exact phase-class counts over the `A` terms of the state;
//! [`spectrum`] evaluates every outcome at once with an in-place butterfly
//! over the product form of the transform, in `O(N n)` instead of `O(N A)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{BitWord, PhaseKernel, HISTOGRAM_MAX_ORDER, MAX_WIDTH};
use crate::error::{invalid, Error, Result};
use crate::gaussian::GaussianInt;
use crate::spec::TransformSpec;

/// Default ceiling on `n` for whole-distribution evaluation.
pub const DISTRIBUTION_CEILING: u32 = 30;

/// Largest `n` accepted by [`unitary_check`].
pub const UNITARY_CHECK_MAX_N: u32 = 12;

/// Hard cap on materialized spectra (`2^34` entries).
pub const MATERIALIZE_MAX_N: u32 = 34;

/// Histograms with at most this many occupied bins are combined pairwise,
/// which keeps single-class sums exact.
const PAIRWISE_MAX_BINS: usize = 256;

/// The equal superposition over `x(j) = x0 + j r`, `j = 0 .. A-1`.
///
/// `A` is derived: it is the number of terms below `2^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "StateRepr", try_from = "StateRepr")]
pub struct PeriodicState {
    n: u32,
    x0: u64,
    r: u64,
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    n: u32,
    x0: u64,
    r: u64,
    terms: u64,
}

impl From<PeriodicState> for StateRepr {
    fn from(s: PeriodicState) -> Self {
        StateRepr {
            n: s.n,
            x0: s.x0,
            r: s.r,
            terms: s.term_count(),
        }
    }
}

impl TryFrom<StateRepr> for PeriodicState {
    type Error = Error;
    fn try_from(repr: StateRepr) -> Result<Self> {
        let s = PeriodicState::new(repr.n, repr.x0, repr.r)?;
        if s.term_count() != repr.terms {
            return Err(invalid(format!(
                "term count {} inconsistent with (n, x0, r)",
                repr.terms
            )));
        }
        Ok(s)
    }
}

impl PeriodicState {
    pub fn new(n: u32, x0: u64, r: u64) -> Result<Self> {
        if n == 0 || n > MAX_WIDTH {
            return Err(invalid(format!("n = {n} outside 1..={MAX_WIDTH}")));
        }
        if r == 0 || r > 1u64 << (n - 1) {
            return Err(invalid(format!("period r = {r} must satisfy 1 <= r <= 2^(n-1)")));
        }
        if x0 >= r {
            return Err(invalid(format!("offset x0 = {x0} must be below r = {r}")));
        }
        Ok(PeriodicState { n, x0, r })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn x0(&self) -> u64 {
        self.x0
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    /// `N = 2^n`.
    pub fn size(&self) -> u64 {
        1u64 << self.n
    }

    /// `A = ceil((N - x0) / r)`.
    pub fn term_count(&self) -> u64 {
        (self.size() - self.x0).div_ceil(self.r)
    }

    pub fn word(&self, v: u64) -> Result<BitWord> {
        BitWord::new(v, self.n)
    }

    pub fn terms(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.term_count()).map(move |j| self.x0 + j * self.r)
    }
}

/// An exact non-negative rational in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExactRatio {
    pub num: u128,
    pub den: u128,
}

impl ExactRatio {
    pub fn new(num: u128, den: u128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd_u128(num, den);
        ExactRatio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_one(self) -> bool {
        self.num == self.den
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// `RP(y) = |(1/A) Σ_j ω^{q_j}|^2`, with the exact rational when the
/// phases are `{1, i, -1, -i}` multiples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelProb {
    pub value: f64,
    pub exact: Option<ExactRatio>,
}

impl RelProb {
    fn from_exact(norm: u128, terms: u64) -> Self {
        let exact = ExactRatio::new(norm, terms as u128 * terms as u128);
        RelProb {
            value: exact.to_f64(),
            exact: Some(exact),
        }
    }

    /// `Prob(y) = (A / N) RP(y)`.
    pub fn prob(&self, state: &PeriodicState) -> f64 {
        match self.exact {
            Some(e) => {
                let a = state.term_count() as u128;
                let n = state.size() as u128;
                // num/den * A/N, reduced before converting
                ExactRatio::new(e.num * a, e.den * n).to_f64()
            }
            None => self.value * state.term_count() as f64 / state.size() as f64,
        }
    }
}

/// Exact counts of phase classes `q` accumulated over the terms of a state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseHistogram {
    order: u32,
    counts: Vec<u64>,
}

impl PhaseHistogram {
    pub fn empty(order: u32) -> Result<Self> {
        if order == 0 || order > HISTOGRAM_MAX_ORDER {
            return Err(invalid(format!("histogram order {order} out of range")));
        }
        Ok(PhaseHistogram {
            order,
            counts: vec![0; 1 << order],
        })
    }

    /// Counts over every term of `state`.
    pub fn accumulate(state: &PeriodicState, kernel: &PhaseKernel) -> Result<Self> {
        Self::accumulate_range(state, kernel, 0..state.term_count())
    }

    /// Counts over terms `j` in `range` only.
    pub fn accumulate_range(
        state: &PeriodicState,
        kernel: &PhaseKernel,
        range: std::ops::Range<u64>,
    ) -> Result<Self> {
        if kernel.width() != state.n {
            return Err(invalid("kernel and state widths differ"));
        }
        let range = range.start.min(state.term_count())..range.end.min(state.term_count());
        let counts = kernel.histogram(
            state.x0 + range.start * state.r,
            state.r,
            range.end - range.start,
        )?;
        Ok(PhaseHistogram {
            order: kernel.order(),
            counts,
        })
    }

    /// Adds another histogram of the same order. Accumulation is
    /// order-free, so split ranges merge to the same counts.
    pub fn merge(&mut self, other: &PhaseHistogram) -> Result<()> {
        if self.order != other.order {
            return Err(invalid("cannot merge histograms of different order"));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `Σ counts[q] ω^q` as an exact Gaussian integer, for order <= 2.
    pub fn gaussian_sum(&self) -> Option<GaussianInt> {
        match self.order {
            1 => Some(GaussianInt::new(
                self.counts[0] as i64 - self.counts[1] as i64,
                0,
            )),
            2 => Some(GaussianInt::from_quarter_counts(&self.counts)),
            _ => None,
        }
    }

    /// `|Σ counts[q] ω^q|^2`.
    ///
    /// With few occupied bins this is `Σ c_q^2 + 2 Σ_{q<q'} c_q c_q' cos(2π(q'-q)/M)`,
    /// so a sum concentrated in one class is exactly `c^2`; otherwise it is
    /// the modulus of the dot product with the fixed grid of unit phases.
    pub fn norm_sqr(&self) -> f64 {
        if let Some(g) = self.gaussian_sum() {
            return g.norm_sqr() as f64;
        }
        let occupied: Vec<(u64, u64)> = self
            .counts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(q, &c)| (q as u64, c))
            .collect();
        occupied_norm_sqr(&occupied, self.order)
    }

    pub fn rel_prob(&self) -> RelProb {
        let a = self.total();
        if a == 0 {
            return RelProb {
                value: 0.0,
                exact: None,
            };
        }
        if let Some(g) = self.gaussian_sum() {
            return RelProb::from_exact(g.norm_sqr(), a);
        }
        let denom = (a as u128 * a as u128) as f64;
        RelProb {
            value: self.norm_sqr() / denom,
            exact: None,
        }
    }
}

/// `|Σ c ω^q|^2` over `(q, c)` pairs in ascending `q`.
fn occupied_norm_sqr(occupied: &[(u64, u64)], order: u32) -> f64 {
    let modulus = (1u64 << order) as f64;
    if occupied.len() <= PAIRWISE_MAX_BINS {
        let diagonal: u128 = occupied.iter().map(|&(_, c)| c as u128 * c as u128).sum();
        let mut cross = 0.0f64;
        for (i, &(qa, ca)) in occupied.iter().enumerate() {
            for &(qb, cb) in &occupied[i + 1..] {
                let angle = 2.0 * PI * (qb - qa) as f64 / modulus;
                cross += (ca as f64) * (cb as f64) * angle.cos();
            }
        }
        (diagonal as f64 + 2.0 * cross).max(0.0)
    } else {
        let mut re = 0.0;
        let mut im = 0.0;
        for &(q, c) in occupied {
            let (s, co) = (2.0 * PI * q as f64 / modulus).sin_cos();
            re += c as f64 * co;
            im += c as f64 * s;
        }
        re * re + im * im
    }
}

/// The histogram route for states with far fewer terms than phase classes:
/// sort the phases instead of clearing `2^m` bins. Same result bit for bit.
fn sparse_rel_prob(state: &PeriodicState, kernel: &PhaseKernel) -> RelProb {
    let mut phases: Vec<u64> = state.terms().map(|x| kernel.eval(x)).collect();
    phases.sort_unstable();
    let mut occupied: Vec<(u64, u64)> = Vec::new();
    for q in phases {
        match occupied.last_mut() {
            Some((last, c)) if *last == q => *c += 1,
            _ => occupied.push((q, 1)),
        }
    }
    let a = state.term_count();
    RelProb {
        value: occupied_norm_sqr(&occupied, kernel.order()) / (a as u128 * a as u128) as f64,
        exact: None,
    }
}

fn check_outcome(state: &PeriodicState, y: BitWord) -> Result<()> {
    if y.width() != state.n {
        return Err(invalid(format!(
            "outcome has {} bits but the state has {}",
            y.width(),
            state.n
        )));
    }
    Ok(())
}

/// Relative probability `RP(y)` of outcome `y`.
pub fn rp(state: &PeriodicState, y: BitWord, spec: TransformSpec) -> Result<RelProb> {
    check_outcome(state, y)?;
    let kernel = PhaseKernel::new(y, spec)?;
    let order = kernel.order();
    if order > 2 && order <= HISTOGRAM_MAX_ORDER && state.term_count() < 1 << (order - 3) {
        return Ok(sparse_rel_prob(state, &kernel));
    }
    if order <= HISTOGRAM_MAX_ORDER {
        return Ok(PhaseHistogram::accumulate(state, &kernel)?.rel_prob());
    }
    // Too many classes for a dense histogram: each phase is still an exact
    // integer, only its unit vector is rounded. Phases are taken relative to
    // the first term, which leaves |S| unchanged and keeps equal phases exact.
    let mask = (1u64 << kernel.order()) - 1;
    let modulus = (1u64 << kernel.order()) as f64;
    let q0 = kernel.eval(state.x0);
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for x in state.terms() {
        let q = kernel.eval(x).wrapping_sub(q0) & mask;
        let (s, c) = (2.0 * PI * q as f64 / modulus).sin_cos();
        re += c;
        im += s;
    }
    let a = state.term_count() as f64;
    Ok(RelProb {
        value: (re * re + im * im) / (a * a),
        exact: None,
    })
}

/// `Prob(y) = (A / N) RP(y)`.
pub fn prob(state: &PeriodicState, y: BitWord, spec: TransformSpec) -> Result<f64> {
    Ok(rp(state, y, spec)?.prob(state))
}

/// Exact-QFT `RP(y)` from the geometric series:
/// `|sin(π A θ) / (A sin(π θ))|^2` with `θ = frac(r y / N)`, and 1 at `θ = 0`.
pub fn rp_closed_form(state: &PeriodicState, y: BitWord) -> Result<f64> {
    check_outcome(state, y)?;
    let big_n = state.size() as u128;
    let a = state.term_count() as u128;
    let t = state.r as u128 * y.value() as u128 % big_n;
    if t == 0 {
        return Ok(1.0);
    }
    // π A θ reduced mod 2π in exact integers before rounding.
    let wrapped = a * t % (2 * big_n);
    let numer = (PI * wrapped as f64 / big_n as f64).sin();
    let denom = a as f64 * (PI * t as f64 / big_n as f64).sin();
    let v = numer / denom;
    Ok(v * v)
}

/// Unnormalized amplitude sums `S_y = Σ_j ω^{q(x_j, y)}` for every `y`.
#[derive(Debug, Clone, PartialEq)]
pub enum Spectrum {
    /// Exact sums for transforms of order <= 2.
    Gaussian(Vec<[i32; 2]>),
    Complex(Vec<Complex64>),
}

impl Spectrum {
    pub fn len(&self) -> usize {
        match self {
            Spectrum::Gaussian(v) => v.len(),
            Spectrum::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Spectrum::Gaussian(_))
    }

    pub fn gaussian(&self, y: u64) -> Option<GaussianInt> {
        match self {
            Spectrum::Gaussian(v) => {
                let [re, im] = v[y as usize];
                Some(GaussianInt::new(re.into(), im.into()))
            }
            Spectrum::Complex(_) => None,
        }
    }

    /// `|S_y|^2` exactly, when available.
    pub fn exact_norm_sqr(&self, y: u64) -> Option<u128> {
        self.gaussian(y).map(GaussianInt::norm_sqr)
    }

    pub fn norm_sqr(&self, y: u64) -> f64 {
        match self {
            Spectrum::Gaussian(_) => self.exact_norm_sqr(y).unwrap() as f64,
            Spectrum::Complex(v) => v[y as usize].norm_sqr(),
        }
    }

    /// `RP(y)` for a state with `terms` terms.
    pub fn rel_prob(&self, y: u64, terms: u64) -> RelProb {
        match self.exact_norm_sqr(y) {
            Some(norm) => RelProb::from_exact(norm, terms),
            None => RelProb {
                value: self.norm_sqr(y) / (terms as f64 * terms as f64),
                exact: None,
            },
        }
    }
}

/// Phase exponent weights `w_s` for the y-bits `s` positions above the
/// input bit being folded (`s >= 1`), in units of `2π / 2^m`.
fn upper_weights(n: u32, m: u32, modified: bool) -> Vec<u64> {
    let mut w: Vec<u64> = (1..m.min(n)).map(|s| 1u64 << (m - 1 - s)).collect();
    if modified && m < n {
        w.push(1);
    }
    w
}

/// Every amplitude sum of `state` under `spec`, by folding one input bit
/// at a time into the matching output bit.
///
/// After folding input bit `i`, position `i` of the working index holds
/// output bit `y_{n-1-i}`; the pair `(x_i, y)` picks up the phase from the
/// output bits already stored at positions `i+1 ..`, then a Hadamard-type
/// sum/difference. The final index is the bit reversal of `y`.
pub fn spectrum(state: &PeriodicState, spec: TransformSpec, ceiling: u32) -> Result<Spectrum> {
    let n = state.n;
    if n > ceiling {
        return Err(Error::ResourceLimit { n, ceiling });
    }
    if n > MATERIALIZE_MAX_N {
        return Err(invalid(format!("n = {n} is too large to materialize")));
    }
    let m = spec.order_for(n)?;
    let weights = upper_weights(n, m, spec.is_modified());
    let size = 1usize << n;

    let exponent = |u: usize| -> u64 {
        let mut e = 0u64;
        for (s, w) in weights.iter().enumerate() {
            if (u >> s) & 1 == 1 {
                e += w;
            }
        }
        e & ((1u64 << m) - 1)
    };

    if m <= 2 {
        let mut v = vec![[0i32; 2]; size];
        for x in state.terms() {
            v[x as usize][0] = 1;
        }
        // order-1 phases are (-1)^e = i^{2e}
        let scale = 4 >> m;
        for i in (0..n).rev() {
            let half = 1usize << i;
            v.par_chunks_mut(2 * half)
                .with_min_len(min_chunks(i))
                .enumerate()
                .for_each(|(u, block)| {
                    let k = exponent(u) * scale;
                    let (lo, hi) = block.split_at_mut(half);
                    for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                        let t = rotate_i32(*a1, k);
                        *a1 = [a0[0] - t[0], a0[1] - t[1]];
                        *a0 = [a0[0] + t[0], a0[1] + t[1]];
                    }
                });
        }
        bit_reverse_permute(&mut v, n);
        Ok(Spectrum::Gaussian(v))
    } else {
        let modulus = (1u64 << m) as f64;
        let mut v = vec![Complex64::new(0.0, 0.0); size];
        for x in state.terms() {
            v[x as usize] = Complex64::new(1.0, 0.0);
        }
        for i in (0..n).rev() {
            let half = 1usize << i;
            v.par_chunks_mut(2 * half)
                .with_min_len(min_chunks(i))
                .enumerate()
                .for_each(|(u, block)| {
                    let e = exponent(u);
                    let phase = if e == 0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        let (s, c) = (2.0 * PI * e as f64 / modulus).sin_cos();
                        Complex64::new(c, s)
                    };
                    let (lo, hi) = block.split_at_mut(half);
                    for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                        let t = *a1 * phase;
                        *a1 = *a0 - t;
                        *a0 += t;
                    }
                });
        }
        bit_reverse_permute(&mut v, n);
        Ok(Spectrum::Complex(v))
    }
}

/// Keeps parallel tasks at a few thousand elements.
fn min_chunks(i: u32) -> usize {
    (4096usize >> (i + 1).min(12)).max(1)
}

#[inline]
fn rotate_i32(z: [i32; 2], k: u64) -> [i32; 2] {
    match k & 3 {
        0 => z,
        1 => [-z[1], z[0]],
        2 => [-z[0], -z[1]],
        _ => [z[1], -z[0]],
    }
}

fn bit_reverse_permute<T>(v: &mut [T], n: u32) {
    for i in 0..v.len() {
        let j = (i as u64).reverse_bits() >> (64 - n);
        let j = j as usize;
        if i < j {
            v.swap(i, j);
        }
    }
}

/// All outcome probabilities of a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub state: PeriodicState,
    pub spec: TransformSpec,
    pub probs: Vec<f64>,
    /// `Σ_y Prob(y)` in floating point.
    pub total: f64,
    /// `Σ_y Prob(y)` as an exact rational, for order <= 2 transforms.
    pub exact_total: Option<ExactRatio>,
}

/// `Prob(y)` for every `y`. Refuses `n > ceiling`.
pub fn full_distribution(
    state: &PeriodicState,
    spec: TransformSpec,
    ceiling: u32,
) -> Result<Distribution> {
    let spectrum = spectrum(state, spec, ceiling)?;
    Ok(distribution_from_spectrum(state, spec, &spectrum))
}

pub fn distribution_from_spectrum(
    state: &PeriodicState,
    spec: TransformSpec,
    spectrum: &Spectrum,
) -> Distribution {
    let a = state.term_count();
    let weight = a as u128 * state.size() as u128;
    let probs: Vec<f64> = (0..spectrum.len() as u64)
        .map(|y| match spectrum.exact_norm_sqr(y) {
            Some(norm) => ExactRatio::new(norm, weight).to_f64(),
            None => spectrum.norm_sqr(y) / weight as f64,
        })
        .collect();
    let exact_total = spectrum.is_exact().then(|| {
        let sum: u128 = (0..spectrum.len() as u64)
            .map(|y| spectrum.exact_norm_sqr(y).unwrap())
            .sum();
        ExactRatio::new(sum, weight)
    });
    let total = probs.iter().sum();
    Distribution {
        state: *state,
        spec,
        probs,
        total,
        exact_total,
    }
}

/// Result of checking `Σ_y ω^{q(x,y)} conj(ω^{q(x',y)}) = N δ_{x x'}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryReport {
    pub n: u32,
    pub spec: TransformSpec,
    /// Every inner product vanishes exactly in the cyclotomic integers.
    pub unitary: bool,
    /// Largest `|<F x, F x'> - δ|` with `1/sqrt(N)` normalization.
    pub max_deviation: f64,
}

/// Checks orthogonality of all pairs of transformed basis states.
///
/// An off-diagonal inner product is `Σ_d c_d ζ^d` over difference classes
/// `d`, with `ζ` a primitive `2^m`-th root of unity. Since `1, ζ, ..,
/// ζ^{M/2-1}` are linearly independent, it vanishes iff `c_d = c_{d+M/2}`
/// for every `d`, which is an exact integer test for every order.
pub fn unitary_check(n: u32, spec: TransformSpec) -> Result<UnitaryReport> {
    if n == 0 || n > UNITARY_CHECK_MAX_N {
        return Err(invalid(format!(
            "unitary check supports 1 <= n <= {UNITARY_CHECK_MAX_N}"
        )));
    }
    let m = spec.order_for(n)?;
    let size = 1usize << n;
    let classes = 1usize << m;
    let mask = (classes - 1) as u32;
    let mut table = vec![0u32; size * size];
    for y in 0..size {
        let kernel = PhaseKernel::new(BitWord::new(y as u64, n)?, spec)?;
        for x in 0..size {
            table[x * size + y] = kernel.eval(x as u64) as u32;
        }
    }
    let units: Vec<(f64, f64)> = (0..classes)
        .map(|d| (2.0 * PI * d as f64 / classes as f64).sin_cos())
        .collect();
    let half = classes / 2;
    let (unitary, max_dev) = (0..size)
        .into_par_iter()
        .map(|x| {
            let row = &table[x * size..(x + 1) * size];
            let mut counts = vec![0i64; classes];
            let mut ok = true;
            let mut dev = 0.0f64;
            for xp in x + 1..size {
                counts.iter_mut().for_each(|c| *c = 0);
                let other = &table[xp * size..(xp + 1) * size];
                for (a, b) in row.iter().zip(other) {
                    counts[(a.wrapping_sub(*b) & mask) as usize] += 1;
                }
                let vanishes = (0..half).all(|d| counts[d] == counts[d + half]);
                ok &= vanishes;
                let magnitude = if m <= 2 {
                    let g = if m == 1 {
                        GaussianInt::new(counts[0] - counts[1], 0)
                    } else {
                        GaussianInt::new(counts[0] - counts[2], counts[1] - counts[3])
                    };
                    (g.norm_sqr() as f64).sqrt()
                } else if vanishes {
                    0.0
                } else {
                    let (mut re, mut im) = (0.0, 0.0);
                    for (c, (s, co)) in counts.iter().zip(&units) {
                        re += *c as f64 * co;
                        im += *c as f64 * s;
                    }
                    (re * re + im * im).sqrt()
                };
                dev = dev.max(magnitude / size as f64);
            }
            (ok, dev)
        })
        .reduce(|| (true, 0.0), |a, b| (a.0 && b.0, a.1.max(b.1)));
    Ok(UnitaryReport {
        n,
        spec,
        unitary,
        max_deviation: max_dev,
    })
}

/// Worst-case success bound `(8/π²) sin²(π m / 4n)` for an AQFT of order `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarencoBound {
    pub value: f64,
    /// `m > log2(n) + 2`, the regime where the bound is guaranteed.
    pub guaranteed: bool,
}

pub fn barenco_bound(n: u32, m: f64) -> Result<BarencoBound> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    if !(m.is_finite() && m >= 0.0) {
        return Err(invalid("m must be a non-negative number"));
    }
    let s = (PI * m / (4.0 * n as f64)).sin();
    Ok(BarencoBound {
        value: 8.0 / (PI * PI) * s * s,
        guaranteed: m > (n as f64).log2() + 2.0,
    })
}

/// Wraps [`rp`] for a raw outcome value.
pub fn rp_at(state: &PeriodicState, y: u64, spec: TransformSpec) -> Result<RelProb> {
    rp(state, state.word(y)?, spec)
}
