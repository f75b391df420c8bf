//! The acceptance battery: thirteen numbered criteria run over the curated
//! suite, each reported as pass or fail with a short detail line.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::load_function;
use crate::monoids::{
    check_closed, check_generosity_propagation, delta, inclusion_report, is_member, is_member_with,
    maximal_monoids, Classified, GRule, Lam, MonoidId,
};
use crate::oracle::{agreement_check, gn_oracle, DEFAULT_LEN};
use crate::profile::fiber_profile;
use crate::suite::{self, FILES};
use crate::transducer::RationalFn;
use crate::witnesses::{
    decompose_ji, escape_to_universal, exists_lambda0, generous_conjugate, m_witness, universal_factor,
    WitnessChain,
};

pub const SCHEMA_VERSION: u32 = 1;

pub const CRITERIA: [&str; 13] = [
    "registry-count",
    "delta-equivalence",
    "gn-oracle-agreement",
    "closure",
    "strict-chain",
    "factorization",
    "universal-factor",
    "m-lambda-witness",
    "escape-chain",
    "descent",
    "generous-conjugate",
    "symbolic-empirical",
    "performance",
];

pub const CLOSURE_TRIALS: usize = 500;
pub const GN_TIME_LIMIT_SECS: f64 = 60.0;
pub const CLASSIFY_TIME_LIMIT_SECS: f64 = 1.0;
pub const SUITE_TIME_LIMIT_SECS: f64 = 300.0;
/// Length bound of the empirical sweep when not running the full battery.
pub const QUICK_LEN: usize = 10;

#[derive(Clone, Copy, Debug)]
pub struct BatteryOptions {
    /// Runs the empirical sweep at the full length bound.
    pub full: bool,
    pub max_len: usize,
    pub rule: GRule,
    pub seed: u64,
}

impl Default for BatteryOptions {
    fn default() -> Self {
        BatteryOptions { full: true, max_len: DEFAULT_LEN, rule: GRule::ClosedForm, seed: 0x6d6f6e6f }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<20} {:>7.2}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BatteryReport {
    pub schema: u32,
    pub suite_size: usize,
    pub results: Vec<CriterionResult>,
    pub total_seconds: f64,
}

impl BatteryReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn first_failure(&self) -> Option<&CriterionResult> {
        self.results.iter().find(|r| !r.passed)
    }
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

/// Fat-co-range injections used as `u` in the universal factorization.
pub const CURATED_INJECTIONS: [&str; 3] = ["prepend_1", "prepend_00", "stutter"];
/// Pairs `(m_ω, m_1)` for the escape chain.
pub const CURATED_ESCAPES: [(&str, &str); 2] = [("double_point", "hilbert_shift"), ("prepend_1", "chain_shift_1")];
/// Pairs `(h, λ)` for the descent.
pub const CURATED_DESCENTS: [(&str, Lam); 6] = [
    ("sep1", Lam::Finite(2)),
    ("sep2", Lam::Finite(3)),
    ("sep3", Lam::Finite(4)),
    ("squash", Lam::Finite(1)),
    ("squash", Lam::Omega),
    ("drop_odd", Lam::Omega),
];
pub const CURATED_CONJUGATES: [&str; 3] = ["prefix_eraser", "g_a", "g_b"];
/// `(λ, m)` with `m ∉ M_λ`.
pub const CURATED_M: [(Lam, &str); 4] = [
    (Lam::Finite(1), "hilbert_shift"),
    (Lam::Finite(1), "chain_shift_1"),
    (Lam::Omega, "prepend_1"),
    (Lam::Omega, "double_point"),
];
pub const M_TARGETS: usize = 10;
/// Separators `sep_n ∈ G_n \ G_{n+1}`.
pub const SEPARATORS: [(&str, u32); 3] = [("sep1", 1), ("sep2", 2), ("sep3", 3)];

struct Context {
    pool: Vec<Classified>,
    opts: BatteryOptions,
}

impl Context {
    fn get(&self, name: &str) -> Result<&Classified> {
        self.pool
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::Precondition(format!("no suite function named {name}")))
    }
}

fn check_chains(chains: Vec<Result<WitnessChain>>) -> Outcome {
    let total = chains.len();
    let failures: Vec<String> = chains
        .into_par_iter()
        .filter_map(|c| match c.and_then(|c| c.verify().map(|v| (c, v))) {
            Ok((_, v)) if v.ok => None,
            Ok((c, v)) => Some(format!("{} [{}]: {:?}", c.identity(), c.kind, v)),
            Err(e) => Some(e.to_string()),
        })
        .collect();
    match failures.first() {
        None => outcome(true, format!("{total} chains verified")),
        Some(first) => outcome(false, format!("{}/{total} chains failed; first: {first}", failures.len())),
    }
}

fn registry_count(_: &Context) -> Result<Outcome> {
    let found = maximal_monoids();
    let expected = [
        MonoidId::A,
        MonoidId::G(Lam::Finite(1)),
        MonoidId::G(Lam::Omega),
        MonoidId::M(Lam::Finite(1)),
        MonoidId::M(Lam::Omega),
    ];
    let tags: Vec<String> = found.iter().map(|m| m.tag()).collect();
    Ok(outcome(found.len() == 5 && expected.iter().all(|m| found.contains(m)), format!("maximal: {}", tags.join(", "))))
}

fn delta_equivalence(cx: &Context) -> Result<Outcome> {
    let mut bad = Vec::new();
    for c in &cx.pool {
        for lam in [Lam::Finite(1), Lam::Omega] {
            if is_member_with(&c.profile, MonoidId::G(lam), cx.opts.rule) != delta(&c.profile, lam) {
                bad.push(format!("{} at {lam}", c.name));
            }
        }
    }
    Ok(outcome(bad.is_empty(), format!("{} comparisons, mismatches: {bad:?}", 2 * cx.pool.len())))
}

fn gn_agreement(cx: &Context) -> Result<Outcome> {
    let start = Instant::now();
    let jobs: Vec<(&Classified, u32)> = cx.pool.iter().flat_map(|c| (1..=3).map(move |n| (c, n))).collect();
    let mut bad: Vec<String> = jobs
        .par_iter()
        .filter_map(|(c, n)| {
            let closed = is_member_with(&c.profile, MonoidId::G(Lam::Finite(*n)), cx.opts.rule);
            let v = gn_oracle(&c.f, &c.profile, *n);
            (closed != v.member).then(|| format!("{} n={n}: formula {closed}, oracle {}", c.name, v.member))
        })
        .collect();
    bad.sort();
    let secs = start.elapsed().as_secs_f64();
    let in_time = secs < GN_TIME_LIMIT_SECS;
    Ok(outcome(
        bad.is_empty() && in_time,
        format!("{} comparisons in {secs:.1}s (limit {GN_TIME_LIMIT_SECS}s), mismatches: {bad:?}", jobs.len()),
    ))
}

fn closure(cx: &Context) -> Result<Outcome> {
    let mut monoids = vec![MonoidId::A, MonoidId::B, MonoidId::E, MonoidId::F];
    monoids.extend((1..=4).map(|n| MonoidId::G(Lam::Finite(n))));
    monoids.extend([
        MonoidId::G(Lam::Omega),
        MonoidId::M(Lam::Finite(1)),
        MonoidId::M(Lam::Omega),
        MonoidId::L,
        MonoidId::ILam(Lam::Finite(0)),
        MonoidId::ILam(Lam::Finite(1)),
        MonoidId::ILam(Lam::Omega),
    ]);
    let mut reports: Vec<_> = monoids
        .iter()
        .enumerate()
        .map(|(i, &m)| check_closed(m, &cx.pool, CLOSURE_TRIALS, cx.opts.seed + i as u64))
        .collect();
    reports.push(check_generosity_propagation(&cx.pool, CLOSURE_TRIALS, cx.opts.seed));
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{} (pool {}, {} violations)", r.property, r.pool_size, r.violations.len()))
        .collect();
    let trials: usize = reports.iter().map(|r| r.trials).sum();
    Ok(outcome(failed.is_empty(), format!("{} properties, {trials} chains, failed: {failed:?}", reports.len())))
}

fn strict_chain(cx: &Context) -> Result<Outcome> {
    let mut bad = Vec::new();
    for (name, n) in SEPARATORS {
        let c = cx.get(name)?;
        let inside = is_member_with(&c.profile, MonoidId::G(Lam::Finite(n)), cx.opts.rule);
        let outside = !is_member_with(&c.profile, MonoidId::G(Lam::Finite(n + 1)), cx.opts.rule);
        if !(inside && outside) {
            bad.push(format!("{name} does not separate G_{n} from G_{}", n + 1));
        }
    }
    let inclusions = inclusion_report(&cx.pool);
    for check in inclusions.checks.iter().filter(|c| !c.holds) {
        bad.push(format!("{} fails (counterexample {:?})", check.claim, check.counterexample));
    }
    Ok(outcome(bad.is_empty(), format!("separators sep1..sep3, {} inclusions; problems: {bad:?}", inclusions.checks.len())))
}

fn factorization(cx: &Context) -> Result<Outcome> {
    Ok(check_chains(cx.pool.iter().map(|c| decompose_ji(&c.f)).collect()))
}

fn universal(cx: &Context) -> Result<Outcome> {
    let mut chains = Vec::new();
    for u in CURATED_INJECTIONS {
        let u = &cx.get(u)?.f;
        chains.extend(cx.pool.iter().map(|c| universal_factor(u, &c.f)));
    }
    Ok(check_chains(chains))
}

fn m_lambda(cx: &Context) -> Result<Outcome> {
    let mut chains = Vec::new();
    for (lam, m) in CURATED_M {
        let m = &cx.get(m)?.f;
        chains.extend(cx.pool.iter().take(M_TARGETS).map(|c| m_witness(m, lam, &c.f)));
    }
    Ok(check_chains(chains))
}

fn escape(cx: &Context) -> Result<Outcome> {
    let mut chains = Vec::new();
    for (mw, m1) in CURATED_ESCAPES {
        let (u, chain) = escape_to_universal(&cx.get(mw)?.f, &cx.get(m1)?.f)?;
        chains.push(Ok(chain));
        chains.extend(cx.pool.iter().map(|c| universal_factor(&u, &c.f)));
    }
    Ok(check_chains(chains))
}

fn descent(cx: &Context) -> Result<Outcome> {
    let mut chains = Vec::new();
    let mut bad = Vec::new();
    let mut seen = Vec::new();
    for (h, lam) in CURATED_DESCENTS {
        match exists_lambda0(&cx.get(h)?.f, lam) {
            Ok((lam0, chain)) => {
                if lam0.as_card() >= lam.as_card() {
                    bad.push(format!("{h} at {lam}: λ0 = {lam0}"));
                }
                seen.push(format!("{h}@{lam}→{lam0}"));
                chains.push(Ok(chain));
            }
            Err(e) => bad.push(format!("{h} at {lam}: {e}")),
        }
    }
    let verified = check_chains(chains);
    let passed = bad.is_empty() && verified.passed;
    Ok(outcome(passed, format!("{}; {}; problems: {bad:?}", seen.join(" "), verified.detail)))
}

fn conjugate(cx: &Context) -> Result<Outcome> {
    let chains: Vec<Result<WitnessChain>> =
        CURATED_CONJUGATES.iter().map(|g| cx.get(g).and_then(|c| generous_conjugate(&c.f))).collect();
    let alphas: Vec<String> =
        chains.iter().filter_map(|c| c.as_ref().ok()).filter_map(|c| c.get("α")).map(|a| a.label()).collect();
    let o = check_chains(chains);
    Ok(outcome(o.passed, format!("α: {alphas:?}; {}", o.detail)))
}

fn symbolic_empirical(cx: &Context) -> Result<Outcome> {
    let len = if cx.opts.full { cx.opts.max_len } else { cx.opts.max_len.min(QUICK_LEN) };
    let mut bad: Vec<String> = cx
        .pool
        .par_iter()
        .filter_map(|c| match agreement_check(&c.f, &c.profile, len) {
            Ok(r) if r.passed() => None,
            Ok(r) => Some(format!("{}: {:?}", c.name, r.failures().map(|f| &f.check).collect::<Vec<_>>())),
            Err(e) => Some(format!("{}: {e}", c.name)),
        })
        .collect();
    bad.sort();
    Ok(outcome(bad.is_empty(), format!("{} functions at length {len}; failures: {bad:?}", cx.pool.len())))
}

/// Parse, profile and classify one suite document.
pub fn classify_source(src: &str) -> Result<(RationalFn, Vec<MonoidId>)> {
    let f = load_function(src)?;
    let p = fiber_profile(&f)?;
    p.check_invariants()?;
    let members = crate::monoids::registry().into_iter().filter(|&m| is_member(&p, m)).collect();
    Ok((f, members))
}

fn performance(_: &Context, elapsed_before: f64) -> Result<Outcome> {
    let mut slowest = (0.0f64, "");
    let mut max_states = 0;
    for (file, src) in FILES {
        let start = Instant::now();
        let (f, _) = classify_source(src)?;
        let secs = start.elapsed().as_secs_f64();
        max_states = max_states.max(f.num_states());
        if secs > slowest.0 {
            slowest = (secs, file);
        }
    }
    let passed = slowest.0 < CLASSIFY_TIME_LIMIT_SECS && elapsed_before < SUITE_TIME_LIMIT_SECS;
    Ok(outcome(
        passed,
        format!(
            "slowest classify {} at {:.3}s (limit {CLASSIFY_TIME_LIMIT_SECS}s), max {max_states} states; battery {elapsed_before:.1}s (limit {SUITE_TIME_LIMIT_SECS}s)",
            slowest.1, slowest.0
        ),
    ))
}

/// Runs every criterion in order, reporting each result as soon as it is known.
pub fn run_battery(opts: BatteryOptions, mut progress: impl FnMut(&CriterionResult)) -> Result<BatteryReport> {
    let start = Instant::now();
    let funcs = suite::load()?;
    let pool = crate::monoids::classify_all(&funcs.into_iter().map(|s| s.f).collect::<Vec<_>>())?;
    let cx = Context { pool, opts };
    type Criterion = fn(&Context) -> Result<Outcome>;
    let criteria: [Criterion; 12] = [
        registry_count,
        delta_equivalence,
        gn_agreement,
        closure,
        strict_chain,
        factorization,
        universal,
        m_lambda,
        escape,
        descent,
        conjugate,
        symbolic_empirical,
    ];
    let mut results = Vec::new();
    let mut record = |id: usize, t: Instant, o: Result<Outcome>| {
        let o = o.unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        let r = CriterionResult {
            id,
            name: CRITERIA[id - 1],
            passed: o.passed,
            detail: o.detail,
            seconds: t.elapsed().as_secs_f64(),
        };
        progress(&r);
        results.push(r);
    };
    for (i, c) in criteria.iter().enumerate() {
        let t = Instant::now();
        record(i + 1, t, c(&cx));
    }
    let t = Instant::now();
    let elapsed = start.elapsed().as_secs_f64();
    record(13, t, performance(&cx, elapsed));
    Ok(BatteryReport {
        schema: SCHEMA_VERSION,
        suite_size: cx.pool.len(),
        results,
        total_seconds: start.elapsed().as_secs_f64(),
    })
}
