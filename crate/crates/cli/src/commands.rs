//! One function per subcommand: compute the payload, then print or write it.

use std::io::{self, Write};
use std::time::Instant;

use anyhow::Result;
use serde::{Deserialize, Serialize};

use qift_core::bits::MAX_WIDTH;
use qift_core::experiment::{ScanOptions, FULL_SCAN_CEILING};
use qift_core::number_theory::{convergent_ladder, ConvergentLadder};
use qift_core::transform::{
    rp_at, BarencoBound, Distribution, ExactRatio, UnitaryReport, DISTRIBUTION_CEILING,
};
use qift_core::{
    barenco_bound, best_approx, full_distribution, full_scan, peak_scan, rp_closed_form,
    run_factor, table_reproduce, unitary_check, ApproxMode, Convergent, FactorJob,
    FactorOutcome, PeriodicState, RunConfig, ScanReport, TransformSpec,
};

use crate::output::{self, num, opt, sig, Envelope, OutFormat, Table};
use crate::{Cli, Command, RecoveryArgs, StateArgs};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RpPayload {
    pub state: PeriodicState,
    pub spec: TransformSpec,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub spec_alias: Option<TransformSpec>,
    pub y: u64,
    pub rp: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rp_exact: Option<ExactRatio>,
    pub prob: f64,
    /// The exact-QFT value from the geometric-series closed form.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub closed_form: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfPayload {
    pub y: u64,
    pub n: u32,
    pub bound: u64,
    pub mode: ApproxMode,
    pub recovered: Convergent,
    pub ladder: ConvergentLadder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundPayload {
    pub n: u32,
    pub m: f64,
    pub bound: BarencoBound,
}

/// What a subcommand produced, ready for any output form.
trait Report: Serialize {
    fn human(&self) -> String;
    fn table(&self) -> Table;
}

pub fn run(cli: &Cli) -> Result<()> {
    let started = Instant::now();
    match &cli.command {
        Command::Rp { state, y } => {
            let payload = rp_payload(state, *y)?;
            emit(cli, started, None, Some(state.spec), &payload)
        }
        Command::ScanFull {
            state,
            threshold,
            recovery,
        } => {
            let s = make_state(state)?;
            let opts = scan_options(recovery, ScanOptions::full());
            let report = full_scan(&s, state.spec, *threshold, &opts)?;
            emit(cli, started, None, Some(state.spec), &report)
        }
        Command::ScanPeaks { state, recovery } => {
            let s = make_state(state)?;
            let opts = scan_options(recovery, ScanOptions::peak());
            let report = peak_scan(&s, state.spec, &opts)?;
            emit(cli, started, None, Some(state.spec), &report)
        }
        Command::Table {
            spec,
            n_from,
            n_to,
            runs,
            r_parity,
            seed,
            r_min,
            mode,
            threshold,
            fit,
            recovery,
        } => {
            if n_from > n_to {
                return Err(qift_core::Error::InvalidArgument(format!(
                    "--n-from {n_from} exceeds --n-to {n_to}"
                ))
                .into());
            }
            let base = ScanOptions {
                ceiling: FULL_SCAN_CEILING,
                ..ScanOptions::peak()
            };
            let mut template = RunConfig::new(*n_from, *spec);
            template.run_count = *runs;
            template.period_class = *r_parity;
            template.seed = *seed;
            template.r_min = *r_min;
            template.mode = *mode;
            template.threshold = *threshold;
            template.scan = scan_options(recovery, base);
            let mut table = table_reproduce(*n_from..=*n_to, &template)?;
            if !fit {
                table.fit = None;
            }
            emit(cli, started, Some(*seed), Some(*spec), &TablePayload(table))
        }
        Command::Cf {
            y,
            n,
            bound,
            convergents_only,
        } => {
            if *n == 0 || *n > MAX_WIDTH {
                return Err(qift_core::Error::InvalidArgument(format!(
                    "n = {n} outside 1..={MAX_WIDTH}"
                ))
                .into());
            }
            let big_n = 1u64 << n;
            let mode = approx_mode(*convergents_only);
            let payload = CfPayload {
                y: *y,
                n: *n,
                bound: *bound,
                mode,
                recovered: best_approx(*y, big_n, *bound, mode)?,
                ladder: convergent_ladder(*y, big_n, *bound)?,
            };
            emit(cli, started, None, None, &payload)
        }
        Command::Factor {
            target,
            c_min,
            spec,
            seed,
            max_attempts,
            base,
        } => {
            let job = FactorJob {
                target: *target,
                base: *base,
                c_min: *c_min,
                max_attempts: *max_attempts,
                seed: *seed,
            };
            let outcome = run_factor(&job, *spec)?;
            emit(cli, started, Some(*seed), Some(*spec), &FactorPayload(outcome))
        }
        Command::Bound { n, m } => {
            let payload = BoundPayload {
                n: *n,
                m: *m,
                bound: barenco_bound(*n, *m)?,
            };
            emit(cli, started, None, None, &payload)
        }
        Command::Unitary { n, spec } => {
            let report = unitary_check(*n, *spec)?;
            emit(cli, started, None, Some(*spec), &UnitaryPayload(report))
        }
        Command::Dist { state, force } => {
            let s = make_state(state)?;
            let ceiling = if *force { MAX_WIDTH } else { DISTRIBUTION_CEILING };
            let dist = full_distribution(&s, state.spec, ceiling)?;
            emit(cli, started, None, Some(state.spec), &DistPayload(dist))
        }
    }
}

fn make_state(args: &StateArgs) -> Result<PeriodicState> {
    Ok(PeriodicState::new(args.n, args.x0, args.r)?)
}

fn approx_mode(convergents_only: bool) -> ApproxMode {
    if convergents_only {
        ApproxMode::ConvergentsOnly
    } else {
        ApproxMode::Best
    }
}

fn scan_options(args: &RecoveryArgs, base: ScanOptions) -> ScanOptions {
    let mut opts = ScanOptions {
        bound: args.bound,
        approx: approx_mode(args.convergents_only),
        include_k_zero: args.include_k_zero,
        ..base
    };
    if args.force {
        opts = opts.forced();
    }
    opts
}

fn rp_payload(args: &StateArgs, y: u64) -> Result<RpPayload> {
    let s = make_state(args)?;
    let rel = rp_at(&s, y, args.spec)?;
    let closed_form = match args.spec {
        TransformSpec::ExactQft => Some(rp_closed_form(&s, s.word(y)?)?),
        _ => None,
    };
    let canonical = args.spec.canonical();
    Ok(RpPayload {
        state: s,
        spec: args.spec,
        spec_alias: (canonical != args.spec).then_some(canonical),
        y,
        rp: rel.value,
        rp_exact: rel.exact,
        prob: rel.prob(&s),
        closed_form,
    })
}

fn emit<T: Report>(
    cli: &Cli,
    started: Instant,
    seed: Option<u64>,
    spec: Option<TransformSpec>,
    payload: &T,
) -> Result<()> {
    let envelope = Envelope {
        tool: output::TOOL.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: std::env::args().collect(),
        seed,
        spec: spec.map(|s| s.to_string()),
        payload,
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    if let Some(path) = &cli.global.out {
        let file = output::create(path)?;
        match output::out_format(path) {
            OutFormat::Csv => payload.table().write(file)?,
            OutFormat::Json => output::write_json(file, &envelope)?,
        }
    }
    if cli.global.json {
        output::write_json(io::stdout().lock(), &envelope)?;
    } else {
        io::stdout().lock().write_all(payload.human().as_bytes())?;
    }
    Ok(())
}

fn spec_label(spec: TransformSpec) -> String {
    let canonical = spec.canonical();
    if canonical != spec {
        format!("{spec} ({canonical})")
    } else {
        spec.to_string()
    }
}

fn exact_label(e: Option<ExactRatio>) -> String {
    e.map(|e| format!("{}/{}", e.num, e.den)).unwrap_or_default()
}

impl Report for RpPayload {
    fn human(&self) -> String {
        let s = &self.state;
        let mut out = format!(
            "n={} x0={} r={} A={} y={} spec={}\n",
            s.n(),
            s.x0(),
            s.r(),
            s.term_count(),
            self.y,
            spec_label(self.spec)
        );
        out += &format!("RP(y)   {}\n", sig(self.rp));
        if let Some(e) = self.rp_exact {
            out += &format!("exact   {}/{}\n", e.num, e.den);
        }
        out += &format!("Prob(y) {}\n", sig(self.prob));
        if let Some(c) = self.closed_form {
            out += &format!("closed  {}\n", sig(c));
        }
        out
    }

    fn table(&self) -> Table {
        let s = &self.state;
        let mut t = Table::new(&["n", "x0", "r", "spec", "y", "rp", "rp_exact", "prob"]);
        t.push(vec![
            s.n().to_string(),
            s.x0().to_string(),
            s.r().to_string(),
            self.spec.to_string(),
            self.y.to_string(),
            num(self.rp),
            exact_label(self.rp_exact),
            num(self.prob),
        ]);
        t
    }
}

impl Report for ScanReport {
    fn human(&self) -> String {
        let s = &self.state;
        let mut out = format!(
            "n={} x0={} r={} spec={} bound={} peaks tested={}{}\n",
            s.n(),
            s.x0(),
            s.r(),
            spec_label(self.spec),
            self.bound,
            self.rows.len(),
            if self.excludes_k_zero { " (k=0 excluded)" } else { "" }
        );
        if let Some(th) = self.threshold {
            out += &format!("outcomes with RP > {th}: {}\n", self.threshold_hits.len());
            for h in self.threshold_hits.iter().take(20) {
                out += &format!(
                    "  y={} k={} RP={} -> {}/{}{}{}\n",
                    h.y,
                    h.nearest_k,
                    sig(h.rp),
                    h.recovered.k,
                    h.recovered.r,
                    if h.recovers_peak { "" } else { " (wrong)" },
                    if h.in_window { " window" } else { "" }
                );
            }
            if self.threshold_hits.len() > 20 {
                out += &format!("  ... {} more\n", self.threshold_hits.len() - 20);
            }
            if let Some(t) = self.total_probability {
                out += &format!("total probability {}\n", sig(t));
            }
        }
        out += &format!("Pr        {}\n", sig(self.pr_total));
        out += &format!("MinPr(y)  {} at k={}\n", sig(self.min_pr_y), self.min_pr_y_k);
        out
    }

    fn table(&self) -> Table {
        if self.threshold.is_some() {
            let mut t = Table::new(&[
                "y", "nearest_k", "rp", "rp_exact", "prob", "recovered_k", "recovered_r",
                "recovers_peak", "in_window",
            ]);
            for h in &self.threshold_hits {
                t.push(vec![
                    h.y.to_string(),
                    h.nearest_k.to_string(),
                    num(h.rp),
                    exact_label(h.rp_exact),
                    num(h.prob),
                    h.recovered.k.to_string(),
                    h.recovered.r.to_string(),
                    h.recovers_peak.to_string(),
                    h.in_window.to_string(),
                ]);
            }
            return t;
        }
        let mut t = Table::new(&[
            "k", "y", "rp", "rp_exact", "prob", "recovered_k", "recovered_r", "recovers_peak",
            "in_window", "pr_y",
        ]);
        for row in &self.rows {
            for o in &row.outcomes {
                t.push(vec![
                    row.k.to_string(),
                    o.y.to_string(),
                    num(o.rp),
                    exact_label(o.rp_exact),
                    num(o.prob),
                    o.recovered.k.to_string(),
                    o.recovered.r.to_string(),
                    o.recovers_peak.to_string(),
                    o.in_window.to_string(),
                    num(row.pr_y),
                ]);
            }
        }
        t
    }
}

#[derive(Serialize)]
#[serde(transparent)]
struct TablePayload(qift_core::experiment::PrMinTable);

impl Report for TablePayload {
    fn human(&self) -> String {
        let t = &self.0;
        let mut out = format!("spec={} seed={}\n", spec_label(t.spec), t.seed);
        out += "n    runs  Pr_min    MinPr(y)  spread\n";
        for row in &t.rows {
            out += &format!(
                "{:<4} {:<5} {:<9} {:<9} {}\n",
                row.n,
                row.runs,
                sig(row.pr_min),
                sig(row.min_min_pr_y),
                sig(row.spread)
            );
        }
        if let Some(f) = t.fit {
            out += &format!("fit  Pr_min = {} / n^{}\n", sig(f.constant), sig(f.exponent));
        }
        out
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&["n", "spec", "runs", "pr_min", "min_min_pr_y", "seed"]);
        for row in &self.0.rows {
            t.push(vec![
                row.n.to_string(),
                row.spec.to_string(),
                row.runs.to_string(),
                num(row.pr_min),
                num(row.min_min_pr_y),
                row.seed.to_string(),
            ]);
        }
        t
    }
}

impl Report for CfPayload {
    fn human(&self) -> String {
        let mut out = format!("{}/{}\n", self.recovered.k, self.recovered.r);
        out += &format!(
            "y/N = {}/2^{}  bound={}  mode={}\n",
            self.y,
            self.n,
            self.bound,
            match self.mode {
                ApproxMode::Best => "best",
                ApproxMode::ConvergentsOnly => "convergents-only",
            }
        );
        out += &format!("terms {:?}\n", self.ladder.terms);
        for (p, q) in &self.ladder.convergents {
            out += &format!("  {p}/{q}\n");
        }
        if let Some((p, q)) = self.ladder.stopped_at {
            out += &format!("  stop at {p}/{q}\n");
        }
        out
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&["kind", "k", "r"]);
        for (p, q) in &self.ladder.convergents {
            t.push(vec!["convergent".into(), p.to_string(), q.to_string()]);
        }
        if let Some((p, q)) = self.ladder.stopped_at {
            t.push(vec!["stopped_at".into(), p.to_string(), q.to_string()]);
        }
        t.push(vec![
            "recovered".into(),
            self.recovered.k.to_string(),
            self.recovered.r.to_string(),
        ]);
        t
    }
}

#[derive(Serialize)]
#[serde(transparent)]
struct FactorPayload(FactorOutcome);

impl Report for FactorPayload {
    fn human(&self) -> String {
        let f = &self.0;
        let mut out = format!(
            "target={} spec={} n={} c={} seed={}\n",
            f.target,
            spec_label(f.spec),
            f.n,
            sig(f.effective_c),
            f.seed
        );
        for a in &f.transcript {
            out += &format!(
                "  #{} a={} r={} x0={} y={} -> {}/{} window={} period={} {:?}\n",
                a.index,
                a.base,
                a.order,
                a.x0,
                a.y,
                a.recovered.k,
                a.recovered.r,
                a.in_window,
                opt(a.period),
                a.outcome
            );
        }
        match f.factors {
            Some((p, q)) if f.found_by_gcd => out += &format!("{} = {p} x {q} (base shares a factor)\n", f.target),
            Some((p, q)) => out += &format!("{} = {p} x {q} after {} attempts\n", f.target, f.attempts),
            None => out += &format!("no factor after {} attempts\n", f.attempts),
        }
        out
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&[
            "attempt", "base", "order", "x0", "y", "recovered_k", "recovered_r", "nearest_k",
            "in_window", "period", "outcome",
        ]);
        for a in &self.0.transcript {
            t.push(vec![
                a.index.to_string(),
                a.base.to_string(),
                a.order.to_string(),
                a.x0.to_string(),
                a.y.to_string(),
                a.recovered.k.to_string(),
                a.recovered.r.to_string(),
                a.nearest_k.to_string(),
                a.in_window.to_string(),
                opt(a.period),
                format!("{:?}", a.outcome),
            ]);
        }
        t
    }
}

impl Report for BoundPayload {
    fn human(&self) -> String {
        format!(
            "{}\n{}\n",
            sig(self.bound.value),
            if self.bound.guaranteed {
                "guaranteed (m > log2 n + 2)"
            } else {
                "not guaranteed (m <= log2 n + 2)"
            }
        )
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&["n", "m", "value", "guaranteed"]);
        t.push(vec![
            self.n.to_string(),
            num(self.m),
            num(self.bound.value),
            self.bound.guaranteed.to_string(),
        ]);
        t
    }
}

#[derive(Serialize)]
#[serde(transparent)]
struct UnitaryPayload(UnitaryReport);

impl Report for UnitaryPayload {
    fn human(&self) -> String {
        let u = &self.0;
        format!(
            "n={} spec={} unitary={} max deviation {}\n",
            u.n,
            spec_label(u.spec),
            u.unitary,
            sig(u.max_deviation)
        )
    }

    fn table(&self) -> Table {
        let u = &self.0;
        let mut t = Table::new(&["n", "spec", "unitary", "max_deviation"]);
        t.push(vec![
            u.n.to_string(),
            u.spec.to_string(),
            u.unitary.to_string(),
            num(u.max_deviation),
        ]);
        t
    }
}

#[derive(Serialize)]
#[serde(transparent)]
struct DistPayload(Distribution);

impl Report for DistPayload {
    fn human(&self) -> String {
        let d = &self.0;
        let mut top: Vec<(u64, f64)> = d.probs.iter().copied().enumerate().map(|(y, p)| (y as u64, p)).collect();
        top.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        let mut out = format!(
            "n={} x0={} r={} spec={} total={}{}\n",
            d.state.n(),
            d.state.x0(),
            d.state.r(),
            spec_label(d.spec),
            sig(d.total),
            d.exact_total
                .map(|e| format!(" (exact {}/{})", e.num, e.den))
                .unwrap_or_default()
        );
        for (y, p) in top.iter().take(10) {
            out += &format!("  y={y} Prob={}\n", sig(*p));
        }
        out
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&["y", "prob"]);
        for (y, p) in self.0.probs.iter().enumerate() {
            t.push(vec![y.to_string(), num(*p)]);
        }
        t
    }
}
