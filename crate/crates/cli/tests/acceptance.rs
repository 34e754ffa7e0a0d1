//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any FAIL.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use qift_core::experiment::{fit_power_law, PeriodClass};
use qift_core::number_theory::{best_approx, success_window, ApproxMode};
use qift_core::reference::{lookup, INTEGRAL_PR_MIN, MAQFT3_PR_MIN};
use qift_core::shor::window_statistics;
use qift_core::transform::{rp_at, UNITARY_CHECK_MAX_N};
use qift_core::{
    full_distribution, phase_index, random_runs, rp_closed_form, run_factor, unitary_check,
    BitWord, FactorJob, PeriodicState, RunConfig, TransformSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn specs_for(n: u32) -> Vec<TransformSpec> {
    let mut v = vec![TransformSpec::ExactQft];
    if n >= 2 {
        v.push(TransformSpec::Integral);
    }
    for m in 1..=n {
        v.push(TransformSpec::Aqft { m });
        v.push(TransformSpec::ModifiedAqft { m });
    }
    v
}

/// Per-output-qubit exponent form, summed bit by bit.
fn oracle_phase(x: u64, y: u64, n: u32, spec: TransformSpec) -> u64 {
    let m = spec.order(n) as i64;
    let n = n as i64;
    let bit = |v: u64, i: i64| if (0..n).contains(&i) { (v >> i) & 1 } else { 0 };
    let modified = matches!(spec, TransformSpec::ModifiedAqft { .. } | TransformSpec::Integral);
    let mut q: u128 = 0;
    for k in 0..n {
        if bit(y, k) == 1 {
            let l = n - 1 - k;
            for t in 0..m {
                q += (bit(x, l - t) as u128) << (m - 1 - t);
            }
            if modified {
                q += bit(x, l - m) as u128;
            }
        }
    }
    (q % (1u128 << m)) as u64
}

fn ac1() -> Check {
    let cases = [
        (25u32, 85u64, 713u64, 23906944u64, 0.120148f64),
        (25, 85, 713, 23906945, 0.118273),
        (26, 211, 975, 1996058, 0.106606),
        (26, 211, 975, 1996059, 0.0898572),
        (27, 163, 674, 3186177, 0.146263),
        (27, 163, 674, 3186178, 0.143943),
    ];
    let mut worst = 0.0f64;
    for (n, x0, r, y, printed) in cases {
        let t = Instant::now();
        let s = PeriodicState::new(n, x0, r).map_err(|e| e.to_string())?;
        let rel = rp_at(&s, y, TransformSpec::Integral).map_err(|e| e.to_string())?;
        let secs = t.elapsed().as_secs_f64();
        let unit = 10f64.powi(printed.log10().floor() as i32 - 5);
        ensure((rel.value - printed).abs() <= unit, format!("RP({y}) = {} vs {printed}", rel.value))?;
        ensure(rel.exact.is_some(), format!("RP({y}) not exact"))?;
        ensure(secs < 1.0, format!("RP({y}) took {secs:.2}s"))?;
        worst = worst.max(secs);
    }
    Ok(format!("6 values within print precision, exact rationals, slowest {worst:.3}s"))
}

fn ac2() -> Check {
    let cases = [
        (25u32, 713u64, [23906944u64, 23906945], (508u64, 713u64)),
        (26, 975, [1996058, 1996059], (29, 975)),
        (27, 674, [3186177, 3186178], (8, 337)),
    ];
    for (n, r, ys, (k, rr)) in cases {
        let big_n = 1u64 << n;
        let bound = 1u64 << n.div_ceil(2);
        for y in ys {
            let c = best_approx(y, big_n, bound, ApproxMode::Best).map_err(|e| e.to_string())?;
            ensure((c.k, c.r) == (k, rr), format!("y={y} gave {}/{}", c.k, c.r))?;
        }
        let kk = k * (r / rr);
        let inside: Vec<bool> = ys.iter().map(|&y| success_window(y, big_n, kk, r)).collect();
        ensure(inside == [false, true], format!("n={n}: window flags {inside:?}"))?;
    }
    Ok("508/713, 29/975, 8/337 recovered; only the second outcome of each pair is in the window".into())
}

fn table_check(spec: TransformSpec, ns: std::ops::RangeInclusive<u32>, table: &[(u32, f64)]) -> Check {
    let t = Instant::now();
    let mut worst_err = 0.0f64;
    let mut worst_spread = 0.0f64;
    for n in ns.clone() {
        let cfg = RunConfig {
            period_class: PeriodClass::Odd,
            run_count: 3,
            ..RunConfig::new(n, spec)
        };
        let out = random_runs(&cfg).map_err(|e| e.to_string())?;
        let want = lookup(table, n).unwrap();
        for run in &out.runs {
            let err = (run.pr_total - want).abs();
            worst_err = worst_err.max(err);
            ensure(err <= 0.01, format!("n={n} r={} pr_total {} vs {want}", run.r, run.pr_total))?;
        }
        worst_spread = worst_spread.max(out.spread);
        ensure(out.spread < 0.01, format!("n={n} spread {}", out.spread))?;
    }
    Ok(format!(
        "n={}..{}: max |pr_total - table| = {worst_err:.4}, max spread {worst_spread:.4}, {:.1}s",
        ns.start(),
        ns.end(),
        t.elapsed().as_secs_f64()
    ))
}

fn ac5() -> Check {
    let data = |name: &str| -> Result<Vec<(u32, f64)>, String> {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/").to_string() + name;
        let mut reader = csv::Reader::from_path(&path).map_err(|e| format!("{path}: {e}"))?;
        reader
            .records()
            .map(|r| {
                let r = r.map_err(|e| e.to_string())?;
                Ok((r[0].parse().map_err(|_| "bad n")?, r[3].parse().map_err(|_| "bad pr_min")?))
            })
            .collect()
    };
    let t1 = data("pr_min_integral.csv")?;
    let t2 = data("pr_min_maqft3.csv")?;
    ensure(t1 == INTEGRAL_PR_MIN && t2 == MAQFT3_PR_MIN, "data files disagree with built-in tables")?;
    let c1 = fit_power_law(&t1).map_err(|e| e.to_string())?.exponent;
    let c2 = fit_power_law(&t2).map_err(|e| e.to_string())?.exponent;
    ensure((1.35..=1.7).contains(&c1), format!("integral exponent {c1}"))?;
    ensure((0.25..=0.38).contains(&c2), format!("maqft:3 exponent {c2}"))?;
    Ok(format!("integral c = {c1:.4} in [1.35, 1.7], maqft:3 c = {c2:.4} in [0.25, 0.38]"))
}

fn ac6() -> Check {
    let mut worst = 0.0f64;
    let mut checked = 0;
    for n in 1..=10u32.min(UNITARY_CHECK_MAX_N) {
        for spec in specs_for(n) {
            let rep = unitary_check(n, spec).map_err(|e| e.to_string())?;
            ensure(rep.unitary, format!("{spec} n={n} not unitary"))?;
            if spec.canonical() == TransformSpec::Integral {
                ensure(rep.max_deviation == 0.0, format!("integral n={n} deviation {}", rep.max_deviation))?;
            } else {
                ensure(rep.max_deviation <= 1e-9, format!("{spec} n={n} deviation {}", rep.max_deviation))?;
            }
            worst = worst.max(rep.max_deviation);
            checked += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_sum = 0.0f64;
    for _ in 0..50 {
        let n = rng.random_range(4..=14u32);
        let r = rng.random_range(1..=1u64 << (n - 1));
        let x0 = rng.random_range(0..r);
        let specs = specs_for(n);
        let spec = specs[rng.random_range(0..specs.len())];
        let s = PeriodicState::new(n, x0, r).map_err(|e| e.to_string())?;
        let d = full_distribution(&s, spec, 14).map_err(|e| e.to_string())?;
        let direct: f64 = d.probs.iter().sum();
        worst_sum = worst_sum.max((direct - 1.0).abs());
        ensure((direct - 1.0).abs() <= 1e-10, format!("{spec} {s:?} sums to {direct}"))?;
        if let Some(e) = d.exact_total {
            ensure(e.is_one(), format!("{spec} {s:?} exact total {e:?}"))?;
        }
    }
    Ok(format!(
        "{checked} (n, spec) pairs unitary (max deviation {worst:.1e}); 50 distributions sum to 1 within {worst_sum:.1e}"
    ))
}

fn ac7() -> Check {
    let mut pairs = 0u64;
    for n in 1..=10u32 {
        let size = 1u64 << n;
        for spec in specs_for(n) {
            for x in 0..size {
                let xw = BitWord::new(x, n).unwrap();
                for y in 0..size {
                    let q = phase_index(xw, BitWord::new(y, n).unwrap(), spec).map_err(|e| e.to_string())?;
                    if q.q() != oracle_phase(x, y, n, spec) {
                        return Err(format!("{spec} n={n} x={x} y={y}"));
                    }
                    if spec == (TransformSpec::Aqft { m: n }) && q.q() != (x * y) % size {
                        return Err(format!("m=n product n={n} x={x} y={y}"));
                    }
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} (spec, x, y) triples match the bit-loop oracle; m=n equals x*y mod 2^n"))
}

fn ac8() -> Check {
    let mut count = 0u64;
    for n in 1..=16u32 {
        for l in 0..=n / 2 {
            let r = 1u64 << l;
            if r > 1 << (n - 1) {
                continue;
            }
            for spec in specs_for(n) {
                for x0 in 0..r {
                    let s = PeriodicState::new(n, x0, r).map_err(|e| e.to_string())?;
                    for k in 0..r {
                        let y = k << (n - l);
                        let v = rp_at(&s, y, spec).map_err(|e| e.to_string())?.value;
                        if v != 1.0 {
                            return Err(format!("{spec} n={n} r={r} x0={x0} y={y}: {v}"));
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(format!("rp = 1 exactly in all {count} cases"))
}

fn ac9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = rng.random_range(6..=14u32);
        let r = rng.random_range(2..=1u64 << (n / 2 + 1));
        let x0 = rng.random_range(0..r);
        let s = PeriodicState::new(n, x0, r).map_err(|e| e.to_string())?;
        for y in 0..s.size() {
            let a = rp_closed_form(&s, s.word(y).unwrap()).map_err(|e| e.to_string())?;
            let b = rp_at(&s, y, TransformSpec::ExactQft).map_err(|e| e.to_string())?.value;
            worst = worst.max((a - b).abs());
            ensure((a - b).abs() <= 1e-10, format!("{s:?} y={y}: {a} vs {b}"))?;
        }
    }
    Ok(format!("20 states, all y, max difference {worst:.1e}"))
}

fn ac10() -> Check {
    let mut worst = 0;
    for target in [15u64, 21, 33, 35, 91] {
        for spec in [TransformSpec::Integral, TransformSpec::ExactQft] {
            let out = run_factor(&FactorJob::new(target), spec).map_err(|e| e.to_string())?;
            ensure(out.success, format!("{target} under {spec} failed after {} attempts", out.attempts))?;
            let (p, q) = out.factors.unwrap();
            ensure(p * q == target && p > 1 && q > 1, format!("{target}: bad factors {p} x {q}"))?;
            worst = worst.max(out.attempts);
        }
    }
    let (mut hits, mut total) = (0, 0);
    for (target, base, seed) in [(91u64, 2u64, 1u64), (85, 3, 2), (77, 5, 3), (65, 7, 4), (33, 5, 5)] {
        let s = window_statistics(target, base, 2, TransformSpec::ExactQft, 50, seed).map_err(|e| e.to_string())?;
        hits += s.hits;
        total += s.attempts;
    }
    let rate = hits as f64 / total as f64;
    ensure(total >= 200 && rate > 0.4, format!("window rate {rate} over {total}"))?;
    let bound = 4.0 / (PI * PI);
    Ok(format!(
        "all 10 jobs factored (at most {worst} attempts); exact-QFT window rate {rate:.3} over {total} (4/π² = {bound:.3})"
    ))
}

fn ac11() -> Check {
    let runs: [&[&str]; 3] = [
        &["table", "--spec", "integral", "--n-from", "16", "--n-to", "20", "--runs", "3", "--seed", "11"],
        &["scan-peaks", "--n", "20", "--x0", "77", "--r", "901", "--spec", "maqft:3"],
        &["scan-full", "--n", "18", "--x0", "5", "--r", "333", "--spec", "qft"],
    ];
    for args in runs {
        let mut payloads = Vec::new();
        for threads in ["1", "1", "4", "4"] {
            let out = Command::new(env!("CARGO_BIN_EXE_qift"))
                .args(args)
                .args(["--json", "--threads", threads])
                .env_remove("QIFT_THREADS")
                .output()
                .map_err(|e| e.to_string())?;
            ensure(out.status.success(), format!("{args:?} failed"))?;
            let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
            let v: serde_json::Map<String, serde_json::Value> = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            let raw: Box<serde_json::value::RawValue> =
                serde_json::from_str::<RawPayload>(&text).map_err(|e| e.to_string())?.payload;
            ensure(v.contains_key("wall_time_s"), "missing wall time")?;
            payloads.push(raw.get().to_string());
        }
        ensure(payloads.windows(2).all(|w| w[0] == w[1]), format!("{args:?}: payloads differ"))?;
    }
    Ok("table, scan-peaks and scan-full payloads byte-identical at 1 and 4 threads".into())
}

#[derive(serde::Deserialize)]
struct RawPayload {
    payload: Box<serde_json::value::RawValue>,
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("AC1", "case-study RP reproduction", ac1),
        ("AC2", "continued-fraction recovery", ac2),
        ("AC3", "Pr_min table, integral, n=20..27", || {
            table_check(TransformSpec::Integral, 20..=27, &INTEGRAL_PR_MIN)
        }),
        ("AC4", "Pr_min table, maqft:3, n=20..25", || {
            table_check(TransformSpec::ModifiedAqft { m: 3 }, 20..=25, &MAQFT3_PR_MIN)
        }),
        ("AC5", "power-law fit of the transcribed tables", ac5),
        ("AC6", "unitarity and distribution sums", ac6),
        ("AC7", "phase index vs bit-loop oracle", ac7),
        ("AC8", "exact-divisor law", ac8),
        ("AC9", "QFT closed form vs histogram", ac9),
        ("AC10", "end-to-end factoring", ac10),
        ("AC11", "thread-count determinism", ac11),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let t = Instant::now();
        let result = check();
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {id} {name}: {detail} [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id} {name}: {why} [{secs:.1}s]");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
