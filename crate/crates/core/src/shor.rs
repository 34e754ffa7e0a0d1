//! Toy end-to-end factoring: simulate one measurement of the period-finding
//! register, recover `r` by continued fractions and try `gcd(a^(r/2) ± 1, N)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::experiment::DEFAULT_SEED;
use crate::number_theory::{
    best_approx, convergent_ladder, gcd, mod_pow, multiplicative_order, nearest_peak,
    success_window, ApproxMode, Convergent, ConvergentLadder,
};
use crate::spec::TransformSpec;
use crate::transform::{spectrum, PeriodicState, Spectrum, DISTRIBUTION_CEILING};

pub const MAX_TARGET: u64 = 1024;

/// Candidate periods tried per recovered denominator: `r1, 2 r1, ..`.
pub const PERIOD_MULTIPLE_CAP: u64 = 8;

pub const DEFAULT_C_MIN: u64 = 2;
pub const DEFAULT_MAX_ATTEMPTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJob {
    pub target: u64,
    /// Fixed base; drawn from the seeded generator when absent.
    pub base: Option<u64>,
    pub c_min: u64,
    pub max_attempts: usize,
    pub seed: u64,
}

impl FactorJob {
    pub fn new(target: u64) -> Self {
        FactorJob {
            target,
            base: None,
            c_min: DEFAULT_C_MIN,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            seed: DEFAULT_SEED,
        }
    }

    fn validate(&self) -> Result<()> {
        let t = self.target;
        if !(9..=MAX_TARGET).contains(&t) || t % 2 == 0 || is_prime(t) {
            return Err(invalid(format!(
                "target {t} must be an odd composite no larger than {MAX_TARGET}"
            )));
        }
        if self.c_min < 2 {
            return Err(invalid("c_min must be at least 2"));
        }
        if let Some(a) = self.base {
            if !(2..t).contains(&a) {
                return Err(invalid(format!("base {a} outside 2..={}", t - 1)));
            }
        }
        if self.max_attempts == 0 {
            return Err(invalid("max_attempts must be positive"));
        }
        Ok(())
    }
}

fn is_prime(v: u64) -> bool {
    v >= 2 && (2..).take_while(|d| d * d <= v).all(|d| v % d != 0)
}

/// Register width for a target: smallest `n` with `2^n >= c_min · target²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegisterChoice {
    pub n: u32,
    /// `2^n / target²`, which lies in `[c_min, 2 c_min)`.
    pub effective_c: f64,
}

pub fn choose_n(target: u64, c_min: u64) -> Result<RegisterChoice> {
    if target < 3 {
        return Err(invalid("target must be at least 3"));
    }
    if c_min == 0 {
        return Err(invalid("c_min must be positive"));
    }
    let need = c_min as u128 * target as u128 * target as u128;
    let n = (need.next_power_of_two()).trailing_zeros();
    if n > DISTRIBUTION_CEILING {
        return Err(invalid(format!(
            "target needs n = {n}, above the cap of {DISTRIBUTION_CEILING}"
        )));
    }
    Ok(RegisterChoice {
        n,
        effective_c: (1u64 << n) as f64 / (target as f64 * target as f64),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateCheck {
    pub period: u64,
    /// `a^period = 1 (mod target)`.
    pub ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum AttemptOutcome {
    Factored { p: u64, q: u64 },
    /// No multiple of the recovered denominator up to the cap is a period.
    NoPeriod,
    /// The period found is odd; a new base is drawn.
    OddPeriod,
    /// `a^(r/2) = -1`; a new base is drawn.
    BadBase,
    /// Both gcds were trivial.
    TrivialGcd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    pub index: usize,
    pub base: u64,
    /// The true order of `base`, used to prepare the state.
    pub order: u64,
    pub x0: u64,
    pub y: u64,
    pub ladder: ConvergentLadder,
    pub recovered: Convergent,
    /// `round(y r / N)`, the peak nearest the measured outcome.
    pub nearest_k: u64,
    /// `y` lies in the success window of `nearest_k / r`.
    pub in_window: bool,
    pub candidates: Vec<CandidateCheck>,
    pub period: Option<u64>,
    pub outcome: AttemptOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorOutcome {
    pub target: u64,
    pub spec: TransformSpec,
    pub seed: u64,
    pub n: u32,
    pub effective_c: f64,
    pub success: bool,
    pub factors: Option<(u64, u64)>,
    /// The factor came from a base sharing a divisor with the target.
    pub found_by_gcd: bool,
    pub attempts: usize,
    pub bases: Vec<u64>,
    pub transcript: Vec<Attempt>,
}

/// Draws one outcome `y` from the measurement distribution by inverse CDF.
/// Exact spectra are sampled with integer weights.
pub fn sample_outcome(state: &PeriodicState, spectrum: &Spectrum, rng: &mut impl Rng) -> u64 {
    let len = spectrum.len() as u64;
    if spectrum.is_exact() {
        // Σ |S_y|^2 = A N exactly.
        let total = state.term_count() as u128 * state.size() as u128;
        let mut target = rng.random_range(0..total);
        for y in 0..len {
            let w = spectrum.exact_norm_sqr(y).unwrap();
            if target < w {
                return y;
            }
            target -= w;
        }
        unreachable!("exact weights sum to A N");
    }
    let total: f64 = (0..len).map(|y| spectrum.norm_sqr(y)).sum();
    let mut target = rng.random::<f64>() * total;
    let mut last_nonzero = 0;
    for y in 0..len {
        let w = spectrum.norm_sqr(y);
        if w > 0.0 {
            last_nonzero = y;
        }
        if target < w {
            return y;
        }
        target -= w;
    }
    last_nonzero
}

fn draw_base(target: u64, rng: &mut ChaCha8Rng) -> u64 {
    rng.random_range(2..target - 1)
}

pub fn run_factor(job: &FactorJob, spec: TransformSpec) -> Result<FactorOutcome> {
    job.validate()?;
    let target = job.target;
    let choice = choose_n(target, job.c_min)?;
    let n = choice.n;
    let big_n = 1u64 << n;
    spec.order_for(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(job.seed);
    let mut base = job.base.unwrap_or_else(|| draw_base(target, &mut rng));
    let mut outcome = FactorOutcome {
        target,
        spec,
        seed: job.seed,
        n,
        effective_c: choice.effective_c,
        success: false,
        factors: None,
        found_by_gcd: false,
        attempts: 0,
        bases: vec![base],
        transcript: Vec::new(),
    };

    for index in 1..=job.max_attempts {
        let g = gcd(base, target);
        if g > 1 {
            outcome.success = true;
            outcome.found_by_gcd = true;
            outcome.factors = Some(ordered(g, target / g));
            return Ok(outcome);
        }
        outcome.attempts = index;
        let order = multiplicative_order(base, target)?;
        let x0 = rng.random_range(0..order);
        let state = PeriodicState::new(n, x0, order)?;
        let spectrum = spectrum(&state, spec, DISTRIBUTION_CEILING)?;
        let y = sample_outcome(&state, &spectrum, &mut rng);

        let ladder = convergent_ladder(y, big_n, target)?;
        let recovered = best_approx(y, big_n, target, ApproxMode::Best)?;
        let nearest_k = nearest_peak(y, big_n, order);
        let in_window = success_window(y, big_n, nearest_k, order);

        let mut candidates = Vec::new();
        let mut period = None;
        for t in 1..=PERIOD_MULTIPLE_CAP {
            let p = recovered.r * t;
            let ok = mod_pow(base, p, target) == 1;
            candidates.push(CandidateCheck { period: p, ok });
            if ok {
                period = Some(p);
                break;
            }
        }

        let result = match period {
            None => AttemptOutcome::NoPeriod,
            Some(p) if p % 2 == 1 => AttemptOutcome::OddPeriod,
            Some(p) => {
                let h = mod_pow(base, p / 2, target);
                if h == target - 1 {
                    AttemptOutcome::BadBase
                } else {
                    [gcd((h + target - 1) % target, target), gcd(h + 1, target)]
                        .into_iter()
                        .find(|&f| f > 1 && f < target)
                        .map_or(AttemptOutcome::TrivialGcd, |f| AttemptOutcome::Factored {
                            p: f.min(target / f),
                            q: f.max(target / f),
                        })
                }
            }
        };
        outcome.transcript.push(Attempt {
            index,
            base,
            order,
            x0,
            y,
            ladder,
            recovered,
            nearest_k,
            in_window,
            candidates,
            period,
            outcome: result,
        });
        match result {
            AttemptOutcome::Factored { p, q } => {
                outcome.success = true;
                outcome.factors = Some((p, q));
                return Ok(outcome);
            }
            AttemptOutcome::OddPeriod | AttemptOutcome::BadBase => {
                base = draw_base(target, &mut rng);
                outcome.bases.push(base);
            }
            AttemptOutcome::NoPeriod | AttemptOutcome::TrivialGcd => {}
        }
    }
    Ok(outcome)
}

fn ordered(a: u64, b: u64) -> (u64, u64) {
    (a.min(b), a.max(b))
}

/// How often a simulated measurement lands in a success window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowStats {
    pub attempts: usize,
    pub hits: usize,
    pub rate: f64,
}

/// Repeats the measurement step for a fixed base and counts outcomes that
/// satisfy the success window for some `k`.
pub fn window_statistics(
    target: u64,
    base: u64,
    c_min: u64,
    spec: TransformSpec,
    attempts: usize,
    seed: u64,
) -> Result<WindowStats> {
    let n = choose_n(target, c_min)?.n;
    let big_n = 1u64 << n;
    let order = multiplicative_order(base, target)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0;
    for _ in 0..attempts {
        let x0 = rng.random_range(0..order);
        let state = PeriodicState::new(n, x0, order)?;
        let spectrum = spectrum(&state, spec, DISTRIBUTION_CEILING)?;
        let y = sample_outcome(&state, &spectrum, &mut rng);
        if success_window(y, big_n, nearest_peak(y, big_n, order), order) {
            hits += 1;
        }
    }
    Ok(WindowStats {
        attempts,
        hits,
        rate: if attempts == 0 { 0.0 } else { hits as f64 / attempts as f64 },
    })
}
