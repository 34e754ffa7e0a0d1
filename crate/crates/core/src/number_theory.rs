//! Continued-fraction recovery of `k / r` from a measured `y`, and the
//! modular arithmetic the factoring pipeline needs.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest modulus accepted by [`multiplicative_order`].
pub const MAX_ORDER_MODULUS: u64 = 1 << 31;

/// Largest denominator bound accepted by [`best_approx`]; keeps every
/// cross-multiplied distance comparison inside `u128`.
pub const MAX_BOUND: u64 = 1 << 32;

/// A reduced fraction `k / r` approximating `y / N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Convergent {
    pub k: u64,
    pub r: u64,
    /// No fraction with denominator below the bound is strictly closer.
    pub is_best_under_bound: bool,
}

/// Which candidate set [`best_approx`] searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApproxMode {
    /// Convergents and intermediate fractions; always the true best.
    #[default]
    Best,
    /// Plain convergents only.
    ConvergentsOnly,
}

/// The continued-fraction expansion of `y / N` up to a denominator bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergentLadder {
    /// Partial quotients `a_0, a_1, ...` consumed so far.
    pub terms: Vec<u64>,
    /// Convergents `(p_i, q_i)` with `q_i < bound`, in order.
    pub convergents: Vec<(u64, u64)>,
    /// The first convergent whose denominator reached the bound, if any.
    pub stopped_at: Option<(u64, u64)>,
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut acc: u128 = 1;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Least `r > 0` with `a^r = 1 (mod modulus)`, by direct iteration.
pub fn multiplicative_order(a: u64, modulus: u64) -> Result<u64> {
    if modulus < 2 {
        return Err(invalid("modulus must be at least 2"));
    }
    if modulus > MAX_ORDER_MODULUS {
        return Err(invalid(format!(
            "modulus {modulus} above {MAX_ORDER_MODULUS}"
        )));
    }
    let a = a % modulus;
    if gcd(a, modulus) != 1 {
        return Err(Error::Domain(format!(
            "{a} is not coprime to {modulus}; it has no multiplicative order"
        )));
    }
    let mut value = a;
    let mut r = 1u64;
    while value != 1 {
        value = value * a % modulus;
        r += 1;
    }
    Ok(r)
}

/// Whether `|y/N - k/r| <= 1/(2N)`, evaluated as `|2(yr - kN)| <= r`.
pub fn success_window(y: u64, big_n: u64, k: u64, r: u64) -> bool {
    if r == 0 {
        return false;
    }
    let lhs = 2 * ((y as i128) * (r as i128) - (k as i128) * (big_n as i128)).unsigned_abs();
    lhs <= r as u128
}

/// The `k` of the peak nearest `y`, i.e. `round(y r / N)`.
pub fn nearest_peak(y: u64, big_n: u64, r: u64) -> u64 {
    ((2 * y as u128 * r as u128 + big_n as u128) / (2 * big_n as u128)) as u64
}

/// Expands `y / N` until the next convergent's denominator reaches `bound`.
pub fn convergent_ladder(y: u64, big_n: u64, bound: u64) -> Result<ConvergentLadder> {
    check_approx_args(y, big_n, bound)?;
    let mut ladder = ConvergentLadder {
        terms: Vec::new(),
        convergents: Vec::new(),
        stopped_at: None,
    };
    let (mut num, mut den) = (y as u128, big_n as u128);
    // (p_{i-2}, q_{i-2}), (p_{i-1}, q_{i-1})
    let (mut p2, mut q2, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    while den != 0 {
        let a = num / den;
        (num, den) = (den, num % den);
        let (p, q) = (a * p1 + p2, a * q1 + q2);
        ladder.terms.push(a as u64);
        if q >= bound as u128 {
            ladder.stopped_at = Some((p.min(u64::MAX as u128) as u64, q.min(u64::MAX as u128) as u64));
            break;
        }
        ladder.convergents.push((p as u64, q as u64));
        (p2, q2, p1, q1) = (p1, q1, p, q);
    }
    Ok(ladder)
}

/// Best approximation of `y / N` among fractions with denominator `< bound`.
///
/// With [`ApproxMode::Best`] the last admissible convergent is compared
/// against the largest admissible intermediate fraction
/// `(p_{i-2} + t p_{i-1}) / (q_{i-2} + t q_{i-1})`; ties go to the smaller
/// denominator. With [`ApproxMode::ConvergentsOnly`] the last convergent is
/// returned and `is_best_under_bound` reports whether it is also the best.
pub fn best_approx(y: u64, big_n: u64, bound: u64, mode: ApproxMode) -> Result<Convergent> {
    let ladder = convergent_ladder(y, big_n, bound)?;
    let &(p1, q1) = ladder
        .convergents
        .last()
        .expect("a_0 = 0 always yields the convergent 0/1");
    let Some(_) = ladder.stopped_at else {
        // y/N itself has a denominator below the bound.
        return Ok(Convergent {
            k: p1,
            r: q1,
            is_best_under_bound: true,
        });
    };
    let (p2, q2) = if ladder.convergents.len() >= 2 {
        ladder.convergents[ladder.convergents.len() - 2]
    } else {
        (1, 0)
    };
    // Largest t with q2 + t q1 < bound.
    let t = (bound - 1 - q2) / q1;
    let semi = (t >= 1).then(|| (p2 + t * p1, q2 + t * q1));
    let convergent_wins = match semi {
        None => true,
        Some((ps, qs)) => {
            compare_distance(y, big_n, (p1, q1), (ps, qs)) != Ordering::Greater
        }
    };
    let (k, r, best) = match (mode, convergent_wins) {
        (_, true) => (p1, q1, true),
        (ApproxMode::Best, false) => {
            let (ps, qs) = semi.unwrap();
            (ps, qs, true)
        }
        (ApproxMode::ConvergentsOnly, false) => (p1, q1, false),
    };
    debug_assert_eq!(gcd(k, r), 1);
    Ok(Convergent {
        k,
        r,
        is_best_under_bound: best,
    })
}

/// Compares `|y/N - a|` with `|y/N - b|` exactly.
fn compare_distance(y: u64, big_n: u64, a: (u64, u64), b: (u64, u64)) -> Ordering {
    let err = |(p, q): (u64, u64)| -> u128 {
        (y as i128 * q as i128 - p as i128 * big_n as i128).unsigned_abs()
    };
    // |y q_a - p_a N| / q_a  vs  |y q_b - p_b N| / q_b
    (err(a) * b.1 as u128).cmp(&(err(b) * a.1 as u128))
}

fn check_approx_args(y: u64, big_n: u64, bound: u64) -> Result<()> {
    if big_n == 0 || big_n > 1 << 62 {
        return Err(invalid(format!("N = {big_n} outside 1..=2^62")));
    }
    if y >= big_n {
        return Err(invalid(format!("y = {y} must be below N = {big_n}")));
    }
    if !(2..=MAX_BOUND).contains(&bound) {
        return Err(invalid(format!("bound {bound} outside 2..=2^32")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive best approximation: minimum distance, then smaller
    /// denominator.
    fn brute_best(y: u64, big_n: u64, bound: u64) -> (u64, u64) {
        let mut best = (0u64, 1u64);
        for r in 1..bound {
            // only the two k nearest y r / N can be optimal for this r
            let k0 = y * r / big_n;
            for k in [k0, k0 + 1] {
                if gcd(k, r) != 1 {
                    continue;
                }
                if compare_distance(y, big_n, (k, r), best) == Ordering::Less {
                    best = (k, r);
                }
            }
        }
        best
    }

    #[test]
    fn examples() {
        let c = best_approx(23906945, 1 << 25, 1 << 13, ApproxMode::Best).unwrap();
        assert_eq!((c.k, c.r), (508, 713));
        let c = best_approx(3186178, 1 << 27, 1 << 14, ApproxMode::Best).unwrap();
        assert_eq!((c.k, c.r), (8, 337));
        for big_n in [2, 16, 1 << 20] {
            let c = best_approx(0, big_n, 7, ApproxMode::Best).unwrap();
            assert_eq!((c.k, c.r), (0, 1));
        }
        let c = best_approx(5, 16, 4, ApproxMode::Best).unwrap();
        assert_eq!((c.k, c.r), brute_best(5, 16, 4));
        assert_eq!((c.k, c.r), (1, 3));
    }

    #[test]
    fn argument_checks() {
        assert!(best_approx(16, 16, 4, ApproxMode::Best).is_err());
        assert!(best_approx(1, 16, 1, ApproxMode::Best).is_err());
        assert!(best_approx(1, 16, MAX_BOUND + 1, ApproxMode::Best).is_err());
    }

    #[test]
    fn matches_exhaustive_search() {
        for big_n in [16u64, 64, 256, 1000, 4096] {
            for bound in 2..=64u64 {
                for y in 0..big_n {
                    let c = best_approx(y, big_n, bound, ApproxMode::Best).unwrap();
                    assert_eq!((c.k, c.r), brute_best(y, big_n, bound), "y={y} N={big_n} B={bound}");
                    assert!(c.is_best_under_bound);
                    assert!(c.r < bound);
                }
            }
        }
    }

    #[test]
    fn convergents_only_flags_non_best() {
        // Find some case where the semiconvergent wins and check the flag.
        let mut seen = 0;
        for y in 0..4096u64 {
            let best = best_approx(y, 4096, 40, ApproxMode::Best).unwrap();
            let conv = best_approx(y, 4096, 40, ApproxMode::ConvergentsOnly).unwrap();
            if (best.k, best.r) != (conv.k, conv.r) {
                assert!(!conv.is_best_under_bound);
                seen += 1;
            } else {
                assert!(conv.is_best_under_bound);
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn ladder_stops_at_bound() {
        let l = convergent_ladder(23906945, 1 << 25, 1 << 13).unwrap();
        assert!(l.convergents.iter().all(|&(_, q)| q < 1 << 13));
        assert_eq!(l.convergents.last(), Some(&(508, 713)));
        assert!(l.stopped_at.unwrap().1 >= 1 << 13);
        let exact = convergent_ladder(3, 8, 100).unwrap();
        assert_eq!(exact.stopped_at, None);
        assert_eq!(exact.convergents.last(), Some(&(3, 8)));
    }

    #[test]
    fn window_examples() {
        assert!(success_window(23906945, 1 << 25, 508, 713));
        assert!(!success_window(23906944, 1 << 25, 508, 713));
        assert!(success_window(64, 256, 1, 4));
        assert!(success_window(0, 256, 0, 5));
        // 8/337 and 16/674 describe the same window.
        for y in [3186177u64, 3186178] {
            assert_eq!(
                success_window(y, 1 << 27, 8, 337),
                success_window(y, 1 << 27, 16, 674)
            );
        }
    }

    #[test]
    fn window_matches_rational_definition() {
        for big_n in [8u64, 32, 100] {
            for r in 1..12u64 {
                for k in 0..r {
                    for y in 0..big_n {
                        // |y/N - k/r| <= 1/(2N) scaled by 2Nr
                        let lhs = (2 * y as i64 * r as i64 - 2 * k as i64 * big_n as i64).abs();
                        assert_eq!(success_window(y, big_n, k, r), lhs <= r as i64);
                    }
                }
            }
        }
    }

    #[test]
    fn modular_arithmetic() {
        assert_eq!(mod_pow(2, 10, 1000), 24);
        assert_eq!(mod_pow(7, 0, 15), 1);
        assert_eq!(mod_pow(5, 3, 1), 0);
        assert_eq!(gcd(0, 5), 5);
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(multiplicative_order(7, 15).unwrap(), 4);
        assert_eq!(multiplicative_order(2, 21).unwrap(), 6);
        assert_eq!(multiplicative_order(14, 15).unwrap(), 2);
        assert!(matches!(multiplicative_order(6, 15), Err(Error::Domain(_))));
        assert!(multiplicative_order(2, MAX_ORDER_MODULUS + 1).is_err());
    }

    #[test]
    fn order_brute_force_agrees() {
        for m in 2..200u64 {
            for a in 1..m {
                if gcd(a, m) != 1 {
                    continue;
                }
                let r = multiplicative_order(a, m).unwrap();
                assert_eq!(mod_pow(a, r, m), 1);
                assert!((1..r).all(|e| mod_pow(a, e, m) != 1));
            }
        }
    }

    #[test]
    fn nearest_peak_rounds() {
        assert_eq!(nearest_peak(23906945, 1 << 25, 713), 508);
        assert_eq!(nearest_peak(0, 256, 4), 0);
        assert_eq!(nearest_peak(255, 256, 4), 4);
    }
}
