use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use monoidlab_core::battery::{run_battery, BatteryOptions, SCHEMA_VERSION};
use monoidlab_core::expr::load_function;
use monoidlab_core::monoids::{is_member, maximal_monoids, registry, GRule, Lam};
use monoidlab_core::oracle::{agreement_check, gn_oracle, DEFAULT_LEN, MAX_LEN};
use monoidlab_core::transducer::text::to_text;
use monoidlab_core::witnesses::{
    decompose_ji, escape_to_universal, exists_lambda0, generous_conjugate, m_witness, universal_factor,
    ChainDocument, WitnessChain,
};
use monoidlab_core::{fiber_profile, suite, Error, RationalFn};

const EXIT_PARSE: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;
const EXIT_PRECONDITION: u8 = 4;

/// Workbench for maximal submonoids of the transformation monoid, with
/// rational functions on binary strings as elements.
#[derive(Parser)]
#[command(name = "monoidlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct Common {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Length bound for exhaustive sweeps.
    #[arg(long, global = true, env = "MONOIDLAB_MAXLEN", default_value_t = DEFAULT_LEN)]
    max_len: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Print monoid memberships of each function.
    Classify {
        /// Function files, or `suite:<name>` for a bundled one.
        #[arg(required = true)]
        paths: Vec<String>,
        /// Also run the empirical agreement check and the G_n oracle.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Print the fiber profile of a function.
    Profile {
        path: String,
        /// Number of sample members listed per language.
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Compose functions, outermost first, and print the result as a transducer.
    Compose {
        #[arg(required = true)]
        paths: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and verify a witness chain.
    Witness {
        #[command(subcommand)]
        kind: WitnessKind,
        /// Write the chain document to this file.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Re-verify a saved chain document.
    Verify {
        path: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run the acceptance battery.
    Suite {
        /// Run the empirical sweep at the full length bound.
        #[arg(long)]
        full: bool,
        /// Replace the G_n rule by a deliberately wrong one.
        #[arg(long, hide = true)]
        sabotage_gn: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum WitnessKind {
    /// f = j ∘ i with j ∈ J and i ∈ I.
    Ji {
        #[arg(long)]
        target: String,
    },
    /// f = g ∘ u with g ∈ I_0, for an injective u with fat co-range.
    Universal {
        #[arg(long)]
        u: String,
        #[arg(long)]
        target: String,
    },
    /// For h ∉ G_λ, a composite h ∘ g' in I_λ0 with λ0 < λ.
    Glambda {
        #[arg(long)]
        h: String,
        #[arg(long)]
        lambda: Lam,
    },
    /// For g ∉ A, a bijection α with g ∘ α ∘ g generous of infinite range.
    Conj {
        #[arg(long)]
        g: String,
    },
    /// For m ∉ M_λ, f = g ∘ m ∘ i with g, i ∈ M_λ.
    Mlambda {
        #[arg(long)]
        lambda: Lam,
        #[arg(long)]
        m: String,
        #[arg(long)]
        target: String,
    },
    /// For m_ω ∉ M_omega and m_1 ∉ M_1, an injective composite with infinite co-range.
    Escape {
        #[arg(long)]
        m_omega: String,
        #[arg(long)]
        m_one: String,
        /// Also factor this target through the composite.
        #[arg(long)]
        target: Option<String>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Parse { .. }
            | Error::NotFunctional { .. }
            | Error::NotTotal { .. }
            | Error::DomainsOverlap { .. }
            | Error::DomainsDoNotCover { .. } => EXIT_PARSE,
            Error::Inconsistent(_) => EXIT_INCONSISTENT,
            _ => EXIT_PRECONDITION,
        };
        Failure { code, message: e.to_string() }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

type Outcome = std::result::Result<u8, Failure>;

fn load(source: &str) -> std::result::Result<RationalFn, Failure> {
    if let Some(name) = source.strip_prefix("suite:") {
        return Ok(suite::get(name)?.named(name));
    }
    let src = fs::read_to_string(source).map_err(|e| fail(EXIT_PARSE, format!("{source}: {e}")))?;
    let f = load_function(&src).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{source}: {}", f.message);
        f
    })?;
    if f.name().is_some() {
        return Ok(f);
    }
    let stem = Path::new(source).file_stem().and_then(|s| s.to_str()).unwrap_or(source).to_string();
    Ok(f.named(stem))
}

fn check_len(max_len: usize) -> std::result::Result<(), Failure> {
    if max_len > MAX_LEN {
        return Err(Error::BoundExceeded { bound: max_len, max: MAX_LEN }.into());
    }
    Ok(())
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn classify(paths: &[String], oracle: bool, common: Common) -> Outcome {
    check_len(common.max_len)?;
    let mut reports = Vec::new();
    let mut code = 0;
    for source in paths {
        let f = load(source)?;
        let p = fiber_profile(&f)?;
        p.check_invariants()?;
        let members: Vec<(String, bool)> = registry().into_iter().map(|m| (m.tag(), is_member(&p, m))).collect();
        let mut oracle_json = Value::Null;
        let mut oracle_lines = Vec::new();
        if oracle {
            let agreement = agreement_check(&f, &p, common.max_len)?;
            if !agreement.passed() {
                code = EXIT_INCONSISTENT;
            }
            for finding in &agreement.findings {
                let mark = if finding.ok { "ok" } else { "MISMATCH" };
                oracle_lines.push(format!("  {mark:<8} {}: {}", finding.check, finding.detail));
            }
            let verdicts: Vec<_> = (1..=3).map(|n| gn_oracle(&f, &p, n)).collect();
            for v in &verdicts {
                let formula = is_member(&p, monoidlab_core::monoids::MonoidId::G(Lam::Finite(v.n)));
                if formula != v.member {
                    code = EXIT_INCONSISTENT;
                }
                oracle_lines.push(format!(
                    "  {:<8} G_{} oracle {} (min deficiency {}, {} candidate sets), formula {formula}",
                    if formula == v.member { "ok" } else { "MISMATCH" },
                    v.n,
                    v.member,
                    v.min_deficiency,
                    v.candidates
                ));
            }
            oracle_json = json!({
                "consistent": code == 0,
                "agreement": agreement,
                "gn": verdicts,
            });
        }
        if common.json {
            reports.push(json!({
                "name": f.label(),
                "source": source,
                "states": f.num_states(),
                "profile": p.report(8),
                "memberships": members.iter().map(|(t, b)| (t.clone(), json!(b))).collect::<serde_json::Map<_, _>>(),
                "oracle": oracle_json,
            }));
            continue;
        }
        println!("== {} ({source}), {} states", f.label(), f.num_states());
        println!(
            "profile: c={} n_inf={} |V|={} |S|={} free_cap={} range={} generous={}",
            p.c, p.n_inf, p.v_size, p.s_size, p.free_cap, p.range_size, p.is_generous
        );
        let inside: Vec<&str> = members.iter().filter(|(_, b)| *b).map(|(t, _)| t.as_str()).collect();
        println!("memberships: {}", inside.join(" "));
        for (tag, b) in &members {
            println!("  {tag}: {b}");
        }
        if oracle {
            println!("oracle:");
            for l in &oracle_lines {
                println!("{l}");
            }
        }
    }
    if common.json {
        print_json(&json!({
            "schema": SCHEMA_VERSION,
            "registry": { "maximal": maximal_monoids().iter().map(|m| m.tag()).collect::<Vec<_>>() },
            "functions": reports,
        }));
    }
    Ok(code)
}

fn profile(path: &str, samples: usize, common: Common) -> Outcome {
    let f = load(path)?;
    let p = fiber_profile(&f)?;
    p.check_invariants()?;
    let report = p.report(samples);
    if common.json {
        print_json(&json!({ "schema": SCHEMA_VERSION, "name": f.label(), "profile": report }));
        return Ok(0);
    }
    println!("{}: {} states", f.label(), f.num_states());
    println!("range size          {}", report.range_size);
    println!("co-range size       {}", report.c);
    println!("infinite fibers     {}", report.n_inf);
    println!("multi-values        {}", report.v_size);
    println!("non-injective pts   {}", report.s_size);
    println!("free capacity       {}", report.free_cap);
    println!("generous            {}", report.is_generous);
    println!("constant            {}", report.is_constant);
    for (label, l) in [
        ("co-range", &report.co_range),
        ("infinite-fiber values", &report.inf_fiber_values),
        ("multi-values", &report.multi_values),
        ("non-injective points", &report.noninj_set),
    ] {
        let shown: Vec<String> = l.first_members.iter().map(|w| w.to_string()).collect();
        println!("{label}: [{}]{}", shown.join(", "), if l.cardinality > monoidlab_core::Card::Finite(shown.len() as u64) { " ..." } else { "" });
    }
    Ok(0)
}

fn compose(paths: &[String], out: Option<&Path>) -> Outcome {
    let fs = paths.iter().map(|p| load(p)).collect::<std::result::Result<Vec<_>, _>>()?;
    let refs: Vec<&RationalFn> = fs.iter().collect();
    let names: Vec<String> = fs.iter().map(RationalFn::label).collect();
    let composite = RationalFn::compose_all(&refs).named(names.join("∘"));
    let text = to_text(&composite);
    match out {
        Some(path) => fs::write(path, &text).map_err(|e| fail(EXIT_PRECONDITION, format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn report_chains(chains: &[WitnessChain], extra: Value, out: Option<&Path>, common: Common) -> Outcome {
    let mut docs = Vec::new();
    let mut all_ok = true;
    for chain in chains {
        let v = chain.verify_with(common.max_len.min(monoidlab_core::oracle::CHAIN_LEN))?;
        all_ok &= v.ok;
        if !common.json {
            println!("chain: {}", chain.identity());
            for (name, f) in &chain.bindings {
                println!("  {name} := {} ({} states)", f.label(), f.num_states());
            }
            println!(
                "  equivalence: {}, pointwise to length {}: {}",
                v.equivalent,
                v.pointwise_len,
                v.disagreement.as_deref().map_or("agree".to_string(), |w| format!("differ at {w}"))
            );
            for a in &v.assertions {
                println!("  {} {}: {}", a.name, a.property, a.holds);
            }
            println!("verdict: {}", if v.ok { "verified" } else { "FAILED" });
        }
        docs.push(chain.to_document(Some(v)));
    }
    let doc = if docs.len() == 1 { json!(docs[0]) } else { json!(docs) };
    let full = json!({ "schema": SCHEMA_VERSION, "chain": doc, "extra": extra });
    if common.json {
        print_json(&full);
    }
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
        fs::write(path, text).map_err(|e| fail(EXIT_PRECONDITION, format!("{}: {e}", path.display())))?;
    }
    Ok(if all_ok { 0 } else { EXIT_INCONSISTENT })
}

fn witness(kind: &WitnessKind, out: Option<&Path>, common: Common) -> Outcome {
    check_len(common.max_len)?;
    let (chains, extra) = match kind {
        WitnessKind::Ji { target } => (vec![decompose_ji(&load(target)?)?], Value::Null),
        WitnessKind::Universal { u, target } => (vec![universal_factor(&load(u)?, &load(target)?)?], Value::Null),
        WitnessKind::Glambda { h, lambda } => {
            let (lam0, chain) = exists_lambda0(&load(h)?, *lambda)?;
            if !common.json {
                println!("lambda0 = {lam0} < {lambda}");
            }
            (vec![chain], json!({ "lambda": lambda.to_string(), "lambda0": lam0.to_string() }))
        }
        WitnessKind::Conj { g } => (vec![generous_conjugate(&load(g)?)?], Value::Null),
        WitnessKind::Mlambda { lambda, m, target } => {
            (vec![m_witness(&load(m)?, *lambda, &load(target)?)?], Value::Null)
        }
        WitnessKind::Escape { m_omega, m_one, target } => {
            let (u, chain) = escape_to_universal(&load(m_omega)?, &load(m_one)?)?;
            let mut chains = vec![chain];
            if let Some(t) = target {
                chains.push(universal_factor(&u, &load(t)?)?);
            }
            (chains, Value::Null)
        }
    };
    report_chains(&chains, extra, out, common)
}

fn verify(path: &Path, common: Common) -> Outcome {
    let src = fs::read_to_string(path).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    let docs: Vec<ChainDocument> = match serde_json::from_str::<Vec<ChainDocument>>(&src) {
        Ok(v) => v,
        Err(_) => vec![serde_json::from_str(&src).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?],
    };
    let chains = docs.iter().map(WitnessChain::from_document).collect::<monoidlab_core::Result<Vec<_>>>()?;
    report_chains(&chains, Value::Null, None, common)
}

fn suite_cmd(full: bool, sabotage: bool, common: Common) -> Outcome {
    check_len(common.max_len)?;
    let opts = BatteryOptions {
        full,
        max_len: common.max_len,
        rule: if sabotage { GRule::Sabotaged } else { GRule::ClosedForm },
        ..BatteryOptions::default()
    };
    let json = common.json;
    let report = run_battery(opts, |r| {
        if !json {
            println!("{}", r.line());
        }
    })?;
    if json {
        print_json(&json!(report));
    } else {
        println!("total {:.1}s over {} suite functions", report.total_seconds, report.suite_size);
    }
    match report.first_failure() {
        None => Ok(0),
        Some(r) => Err(fail(1, format!("first failing criterion: {} ({})", r.name, r.id))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify { paths, oracle, common } => classify(paths, *oracle, *common),
        Command::Profile { path, samples, common } => profile(path, *samples, *common),
        Command::Compose { paths, out } => compose(paths, out.as_deref()),
        Command::Witness { kind, out, common } => witness(kind, out.as_deref(), *common),
        Command::Verify { path, common } => verify(path, *common),
        Command::Suite { full, sabotage_gn, common } => suite_cmd(*full, *sabotage_gn, *common),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
