//! Scan strategies and the Pr / MinPr / Pr_min aggregation.
//!
//! * [`peak_scan`] tests the four outcomes `floor(Nk/r) - 1 ..= floor(Nk/r) + 2`
//!   around every nontrivial peak `k = 1 .. r-1`.
//! * [`full_scan`] evaluates every outcome and reports those whose relative
//!   probability exceeds a threshold.
//!
//! Outcome evaluations may fan out over the rayon pool; results are
//! collected in ascending `y` and reduced sequentially, so reports do not
//! depend on the thread count.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::MAX_WIDTH;
use crate::error::{invalid, Error, Result};
use crate::number_theory::{best_approx, nearest_peak, success_window, ApproxMode, Convergent};
use crate::spec::TransformSpec;
use crate::transform::{rp_at, spectrum, ExactRatio, PeriodicState, RelProb, DISTRIBUTION_CEILING};

pub const DEFAULT_THRESHOLD: f64 = 0.05;

/// Default ceiling on `n` for [`full_scan`].
pub const FULL_SCAN_CEILING: u32 = 27;

/// Default seed when none is supplied.
pub const DEFAULT_SEED: u64 = 0x5107_2002;

/// Default number of runs per `n` for table reproduction.
pub const DEFAULT_RUNS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMode {
    FullScan,
    PeakScan,
}

/// Which periods the run generator draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PeriodClass {
    Odd,
    Even,
    Any,
    PowerOfTwo,
}

impl std::str::FromStr for PeriodClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "odd" => Ok(PeriodClass::Odd),
            "even" => Ok(PeriodClass::Even),
            "any" => Ok(PeriodClass::Any),
            "pow2" | "power-of-two" => Ok(PeriodClass::PowerOfTwo),
            _ => Err(invalid(format!("unknown period class {s:?}"))),
        }
    }
}

/// Knobs shared by both scan modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Denominator bound for continued-fraction recovery; defaults to
    /// `2^ceil(n/2)`.
    pub bound: Option<u64>,
    pub approx: ApproxMode,
    /// Largest `n` the scan will run.
    pub ceiling: u32,
    /// Also test the trivial `k = 0` peak (`y` in `0..=2`).
    #[serde(default)]
    pub include_k_zero: bool,
}

impl ScanOptions {
    pub fn peak() -> Self {
        ScanOptions {
            bound: None,
            approx: ApproxMode::Best,
            ceiling: DISTRIBUTION_CEILING,
            include_k_zero: false,
        }
    }

    pub fn full() -> Self {
        ScanOptions {
            ceiling: FULL_SCAN_CEILING,
            ..Self::peak()
        }
    }

    /// Lifts the ceiling to the widest supported register.
    pub fn forced(self) -> Self {
        ScanOptions {
            ceiling: MAX_WIDTH,
            ..self
        }
    }

    pub fn with_k_zero(self) -> Self {
        ScanOptions {
            include_k_zero: true,
            ..self
        }
    }
}

pub fn default_bound(n: u32) -> u64 {
    1u64 << n.div_ceil(2)
}

/// One tested outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestedOutcome {
    pub y: u64,
    pub rp: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rp_exact: Option<ExactRatio>,
    pub prob: f64,
    pub recovered: Convergent,
    /// The recovered fraction equals `k / r` for this row's `k`.
    pub recovers_peak: bool,
    /// `|y/N - k/r| <= 1/(2N)`.
    pub in_window: bool,
}

/// The outcomes tested around peak `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakRow {
    pub k: u64,
    pub outcomes: Vec<TestedOutcome>,
    /// `Pr(y)`: the sum of the relative probabilities in this window.
    pub pr_y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub mode: ScanMode,
    pub state: PeriodicState,
    pub spec: TransformSpec,
    /// The same transform under its canonical name, when `spec` is an alias.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub spec_alias: Option<TransformSpec>,
    pub bound: u64,
    pub approx: ApproxMode,
    pub rows: Vec<PeakRow>,
    /// Peak mode: `Σ Prob(y)` over every tested outcome. Full mode: `Σ Prob(y)`
    /// over threshold-passing outcomes that recover their `k / r`.
    pub pr_total: f64,
    /// `MinPr(y)`: the smallest `Pr(y)` over the peak rows.
    pub min_pr_y: f64,
    pub min_pr_y_k: u64,
    /// The trivial `k = 0` peak (`y` near 0) was left out.
    pub excludes_k_zero: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub threshold_hits: Vec<ThresholdHit>,
    /// Full mode only: `Σ_y Prob(y)` over all outcomes.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub total_probability: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdHit {
    pub y: u64,
    pub nearest_k: u64,
    pub rp: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rp_exact: Option<ExactRatio>,
    pub prob: f64,
    pub recovered: Convergent,
    pub recovers_peak: bool,
    pub in_window: bool,
}

/// The deduplicated `(k, y)` list of peak windows, ascending in `y`.
pub fn peak_windows(state: &PeriodicState, include_k_zero: bool) -> Vec<(u64, u64)> {
    let big_n = state.size();
    let r = state.r();
    let mut out = Vec::with_capacity(4 * r as usize);
    let mut last: Option<u64> = None;
    for k in u64::from(!include_k_zero)..r {
        let base = (big_n as u128 * k as u128 / r as u128) as i128;
        for d in -1..=2i128 {
            let y = base + d;
            if y < 0 || y >= big_n as i128 {
                continue;
            }
            let y = y as u64;
            if last.is_some_and(|l| y <= l) {
                continue;
            }
            out.push((k, y));
            last = Some(y);
        }
    }
    out
}

fn check_scan(state: &PeriodicState, spec: TransformSpec, opts: &ScanOptions) -> Result<u64> {
    if state.r() < 2 {
        return Err(invalid("scans need a period r >= 2"));
    }
    if state.n() > opts.ceiling {
        return Err(Error::ResourceLimit {
            n: state.n(),
            ceiling: opts.ceiling,
        });
    }
    spec.order_for(state.n())?;
    let bound = opts.bound.unwrap_or_else(|| default_bound(state.n()));
    Ok(bound)
}

fn alias_of(spec: TransformSpec) -> Option<TransformSpec> {
    (spec.canonical() != spec).then(|| spec.canonical())
}

fn tested_outcome(
    state: &PeriodicState,
    k: u64,
    y: u64,
    rel: RelProb,
    bound: u64,
    approx: ApproxMode,
) -> Result<TestedOutcome> {
    let big_n = state.size();
    let recovered = best_approx(y, big_n, bound, approx)?;
    Ok(TestedOutcome {
        y,
        rp: rel.value,
        rp_exact: rel.exact,
        prob: rel.prob(state),
        recovered,
        recovers_peak: recovered.k as u128 * state.r() as u128 == k as u128 * recovered.r as u128,
        in_window: success_window(y, big_n, k, state.r()),
    })
}

/// Groups evaluated window outcomes into rows and aggregates them.
fn build_rows(
    state: &PeriodicState,
    windows: &[(u64, u64)],
    rels: &[RelProb],
    bound: u64,
    approx: ApproxMode,
) -> Result<(Vec<PeakRow>, f64, f64, u64)> {
    let mut rows: Vec<PeakRow> = Vec::new();
    let mut pr_total = 0.0;
    for (&(k, y), &rel) in windows.iter().zip(rels) {
        let outcome = tested_outcome(state, k, y, rel, bound, approx)?;
        pr_total += outcome.prob;
        match rows.last_mut() {
            Some(row) if row.k == k => {
                row.pr_y += outcome.rp;
                row.outcomes.push(outcome);
            }
            _ => rows.push(PeakRow {
                k,
                pr_y: outcome.rp,
                outcomes: vec![outcome],
            }),
        }
    }
    let (min_k, min_pr) = rows
        .iter()
        .fold((0, f64::INFINITY), |(bk, bv), row| {
            if row.pr_y < bv {
                (row.k, row.pr_y)
            } else {
                (bk, bv)
            }
        });
    let min_pr = if rows.is_empty() { 0.0 } else { min_pr };
    Ok((rows, pr_total, min_pr, min_k))
}

/// Tests the four outcomes around every peak `k = 1 .. r-1`.
pub fn peak_scan(
    state: &PeriodicState,
    spec: TransformSpec,
    opts: &ScanOptions,
) -> Result<ScanReport> {
    let bound = check_scan(state, spec, opts)?;
    let windows = peak_windows(state, opts.include_k_zero);
    let rels = windows
        .par_iter()
        .with_min_len(4)
        .map(|&(_, y)| rp_at(state, y, spec))
        .collect::<Result<Vec<_>>>()?;
    let (rows, pr_total, min_pr_y, min_pr_y_k) =
        build_rows(state, &windows, &rels, bound, opts.approx)?;
    Ok(ScanReport {
        mode: ScanMode::PeakScan,
        state: *state,
        spec,
        spec_alias: alias_of(spec),
        bound,
        approx: opts.approx,
        rows,
        pr_total,
        min_pr_y,
        min_pr_y_k,
        excludes_k_zero: !opts.include_k_zero,
        threshold: None,
        threshold_hits: Vec::new(),
        total_probability: None,
    })
}

/// Evaluates every outcome and reports those with `RP(y) > threshold`.
pub fn full_scan(
    state: &PeriodicState,
    spec: TransformSpec,
    threshold: f64,
    opts: &ScanOptions,
) -> Result<ScanReport> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(invalid(format!("threshold {threshold} must lie in (0, 1)")));
    }
    let bound = check_scan(state, spec, opts)?;
    let spectrum = spectrum(state, spec, opts.ceiling)?;
    let big_n = state.size();
    let r = state.r();
    let terms = state.term_count();
    let a2 = terms as f64 * terms as f64;
    let weight = terms as u128 * big_n as u128;

    let (total_probability, hits) = {
        let mut hits = Vec::new();
        let mut exact_sum: u128 = 0;
        let mut float_sum = 0.0f64;
        for y in 0..big_n {
            let norm = spectrum.norm_sqr(y);
            match spectrum.exact_norm_sqr(y) {
                Some(e) => exact_sum += e,
                None => float_sum += norm / weight as f64,
            }
            if norm / a2 > threshold {
                let k = nearest_peak(y, big_n, r);
                if k % r == 0 && !opts.include_k_zero {
                    continue;
                }
                let rel = spectrum.rel_prob(y, terms);
                if rel.value <= threshold {
                    continue;
                }
                let t = tested_outcome(state, k, y, rel, bound, opts.approx)?;
                hits.push(ThresholdHit {
                    y,
                    nearest_k: k,
                    rp: t.rp,
                    rp_exact: t.rp_exact,
                    prob: t.prob,
                    recovered: t.recovered,
                    recovers_peak: t.recovers_peak,
                    in_window: t.in_window,
                });
            }
        }
        let total = if spectrum.is_exact() {
            ExactRatio::new(exact_sum, weight).to_f64()
        } else {
            float_sum
        };
        (total, hits)
    };

    let windows = peak_windows(state, opts.include_k_zero);
    let rels: Vec<RelProb> = windows
        .iter()
        .map(|&(_, y)| spectrum.rel_prob(y, terms))
        .collect();
    let (rows, _, min_pr_y, min_pr_y_k) = build_rows(state, &windows, &rels, bound, opts.approx)?;
    let pr_total = hits
        .iter()
        .filter(|h| h.recovers_peak)
        .map(|h| h.prob)
        .sum();
    Ok(ScanReport {
        mode: ScanMode::FullScan,
        state: *state,
        spec,
        spec_alias: alias_of(spec),
        bound,
        approx: opts.approx,
        rows,
        pr_total,
        min_pr_y,
        min_pr_y_k,
        excludes_k_zero: !opts.include_k_zero,
        threshold: Some(threshold),
        threshold_hits: hits,
        total_probability: Some(total_probability),
    })
}

/// Parameters for a batch of seeded random runs at one `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub n: u32,
    pub spec: TransformSpec,
    pub mode: ScanMode,
    pub threshold: f64,
    pub seed: u64,
    pub period_class: PeriodClass,
    pub run_count: usize,
    /// Smallest period drawn; defaults to the upper octave below `2^(n/2)`.
    pub r_min: Option<u64>,
    pub scan: ScanOptions,
}

impl RunConfig {
    pub fn new(n: u32, spec: TransformSpec) -> Self {
        RunConfig {
            n,
            spec,
            mode: ScanMode::PeakScan,
            threshold: DEFAULT_THRESHOLD,
            seed: DEFAULT_SEED,
            period_class: PeriodClass::Odd,
            run_count: DEFAULT_RUNS,
            r_min: None,
            scan: ScanOptions::peak(),
        }
    }

    /// Largest admissible period: `r < 2^(n/2)`, i.e. `r^2 < N`.
    pub fn r_max(&self) -> u64 {
        ((1u64 << self.n) - 1).isqrt().min(1u64 << (self.n - 1))
    }

    pub fn r_lower(&self) -> u64 {
        self.r_min.unwrap_or(self.r_max() / 2 + 1).max(2)
    }

    fn validate(&self) -> Result<()> {
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(invalid("threshold must lie in (0, 1)"));
        }
        if self.run_count == 0 {
            return Err(invalid("run_count must be positive"));
        }
        if self.n < 4 || self.n > MAX_WIDTH {
            return Err(invalid(format!("n = {} outside 4..={MAX_WIDTH}", self.n)));
        }
        if self.r_lower() > self.r_max() {
            return Err(invalid(format!(
                "empty period range {}..={}",
                self.r_lower(),
                self.r_max()
            )));
        }
        Ok(())
    }

    /// The generator for this configuration: ChaCha8 seeded from `seed`,
    /// on stream `n`, so every `n` of a table draws independently.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.n as u64);
        rng
    }

    /// The `(x0, r)` pairs the runs will use.
    pub fn draw_states(&self) -> Result<Vec<PeriodicState>> {
        self.validate()?;
        let mut rng = self.rng();
        let (lo, hi) = (self.r_lower(), self.r_max());
        let mut states = Vec::with_capacity(self.run_count);
        for _ in 0..self.run_count {
            let r = match self.period_class {
                PeriodClass::PowerOfTwo => {
                    let l_lo = lo.next_power_of_two().trailing_zeros();
                    let l_hi = hi.ilog2();
                    if l_lo > l_hi {
                        return Err(invalid(format!("no power of two in {lo}..={hi}")));
                    }
                    1u64 << rng.random_range(l_lo..=l_hi)
                }
                class => loop {
                    let r = rng.random_range(lo..=hi);
                    let ok = match class {
                        PeriodClass::Odd => r % 2 == 1,
                        PeriodClass::Even => r % 2 == 0,
                        _ => true,
                    };
                    if ok {
                        break r;
                    }
                },
            };
            let x0 = rng.random_range(0..r);
            states.push(PeriodicState::new(self.n, x0, r)?);
        }
        Ok(states)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub x0: u64,
    pub r: u64,
    pub pr_total: f64,
    pub min_pr_y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunsOutcome {
    pub config: RunConfig,
    pub runs: Vec<RunSummary>,
    pub reports: Vec<ScanReport>,
    /// Smallest `pr_total` over the runs.
    pub pr_min: f64,
    /// Smallest `min_pr_y` over the runs.
    pub min_of_min_pr_y: f64,
    /// `max(pr_total) - min(pr_total)`.
    pub spread: f64,
}

pub fn random_runs(config: &RunConfig) -> Result<RunsOutcome> {
    let states = config.draw_states()?;
    let mut reports = Vec::with_capacity(states.len());
    for state in &states {
        let report = match config.mode {
            ScanMode::PeakScan => peak_scan(state, config.spec, &config.scan)?,
            ScanMode::FullScan => full_scan(state, config.spec, config.threshold, &config.scan)?,
        };
        reports.push(report);
    }
    let runs: Vec<RunSummary> = reports
        .iter()
        .map(|r| RunSummary {
            x0: r.state.x0(),
            r: r.state.r(),
            pr_total: r.pr_total,
            min_pr_y: r.min_pr_y,
        })
        .collect();
    let pr_min = runs.iter().map(|r| r.pr_total).fold(f64::INFINITY, f64::min);
    let pr_max = runs.iter().map(|r| r.pr_total).fold(f64::NEG_INFINITY, f64::max);
    let min_of_min_pr_y = runs.iter().map(|r| r.min_pr_y).fold(f64::INFINITY, f64::min);
    Ok(RunsOutcome {
        config: config.clone(),
        runs,
        reports,
        pr_min,
        min_of_min_pr_y,
        spread: pr_max - pr_min,
    })
}

/// `Pr_min(n) ≈ constant / n^exponent`, fitted by least squares on logs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub constant: f64,
    pub exponent: f64,
}

pub fn fit_power_law(points: &[(u32, f64)]) -> Result<PowerLawFit> {
    if points.len() < 2 {
        return Err(invalid("a power-law fit needs at least two points"));
    }
    if points.iter().any(|&(n, v)| n == 0 || v <= 0.0) {
        return Err(invalid("power-law fit needs positive n and values"));
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, v)| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(invalid("power-law fit needs at least two distinct n"));
    }
    let slope = sxy / sxx;
    Ok(PowerLawFit {
        constant: (my - slope * mx).exp(),
        exponent: -slope,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: u32,
    pub spec: TransformSpec,
    pub runs: usize,
    pub pr_min: f64,
    pub min_min_pr_y: f64,
    pub seed: u64,
    pub spread: f64,
    pub samples: Vec<RunSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrMinTable {
    pub spec: TransformSpec,
    pub seed: u64,
    pub period_class: PeriodClass,
    pub rows: Vec<TableRow>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fit: Option<PowerLawFit>,
}

/// Runs [`random_runs`] for each `n` and collects Pr_min per `n`.
pub fn table_reproduce(
    ns: RangeInclusive<u32>,
    template: &RunConfig,
) -> Result<PrMinTable> {
    let mut rows = Vec::new();
    for n in ns {
        let config = RunConfig {
            n,
            ..template.clone()
        };
        let outcome = random_runs(&config)?;
        rows.push(TableRow {
            n,
            spec: config.spec,
            runs: config.run_count,
            pr_min: outcome.pr_min,
            min_min_pr_y: outcome.min_of_min_pr_y,
            seed: config.seed,
            spread: outcome.spread,
            samples: outcome.runs,
        });
    }
    let points: Vec<(u32, f64)> = rows.iter().map(|r| (r.n, r.pr_min)).collect();
    let fit = fit_power_law(&points).ok();
    Ok(PrMinTable {
        spec: template.spec,
        seed: template.seed,
        period_class: template.period_class,
        rows,
        fit,
    })
}
