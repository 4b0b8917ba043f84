//! `sidongap`: one binary, JSON run reports, exit code 0 on
//! success/verified, 1 on a verified-false answer (conflict, deficiency,
//! failed scan), 2 on usage/capacity/budget errors.

use clap::{Args, Parser, Subcommand};
use num::bigint::BigInt;
use num::rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use sidongap::construct::{
    choose_exponents, delta_window, derive_params, elementary, matching_construct,
    verify_theorem1_algebra, ConstructionParams, MatchingOutcome,
};
use sidongap::domain::{gap_measure, SidonSet};
use sidongap::exact::{exact_g, max_sidon_size, ExactResult, DEFAULT_NODE_BUDGET};
use sidongap::matching::{
    deficiency_witness, graph_from_json, max_matching, weighted_hall_check,
};
use sidongap::primes::{bhp_scan, lm_sum, simple_sieve, Sieve, DEFAULT_CAPACITY};
use sidongap::sidon::{
    check_certificate, is_multiplicative_sidon, PrivatePrimeCertificate, SidonVerdict,
    DEFAULT_PRODUCT_BUDGET,
};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "sidongap", version, about = "multiplicative Sidon sets with small gaps")]
struct Cli {
    /// Write the JSON run report here instead of stdout
    /// (give before the subcommand; `exact table --out` is the CSV path)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads for parallel subcommands (default: all cores)
    #[arg(long)]
    threads: Option<usize>,

    /// Sieve capacity ceiling
    #[arg(long, env = "SIDON_SIEVE_CAP", default_value_t = DEFAULT_CAPACITY)]
    sieve_cap: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Prime-interval scans
    Primes {
        #[command(subcommand)]
        cmd: PrimesCmd,
    },
    /// Sidon oracle and certificate checking
    Sidon {
        #[command(subcommand)]
        cmd: SidonCmd,
    },
    /// Gap-bounded set constructions
    Construct {
        #[command(subcommand)]
        cmd: ConstructCmd,
    },
    /// Bipartite matching and weighted Hall checks
    Match {
        #[command(subcommand)]
        cmd: MatchCmd,
    },
    /// Exact small-n ground truth
    Exact {
        #[command(subcommand)]
        cmd: ExactCmd,
    },
}

#[derive(Subcommand)]
enum PrimesCmd {
    /// Verify that (x - x^(21/40), x] contains a prime for every x in [from, to]
    ScanBhp {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Count primes in (x/m, (x + x^alpha)/m] over m <= x^beta
    LmSum {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.0)]
        c0: f64,
        /// Also write per_m_counts as CSV (columns m, count)
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SidonCmd {
    /// Brute-force product-distinctness oracle on a set JSON file
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PRODUCT_BUDGET)]
        budget: u64,
    },
    /// Structural check of a private-prime certificate JSON file
    CheckCert {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args)]
struct MatchingArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, requires = "beta")]
    alpha: Option<f64>,
    #[arg(long, requires = "alpha")]
    beta: Option<f64>,
    /// Defaults to the midpoint of the feasibility window for alpha
    #[arg(long, requires = "alpha")]
    delta: Option<f64>,
    #[arg(long, conflicts_with_all = ["alpha", "beta", "delta"])]
    epsilon: Option<f64>,
    /// Write the constructed set JSON here
    #[arg(long)]
    set_out: Option<PathBuf>,
    /// Write the private-prime certificate JSON here
    #[arg(long)]
    cert_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Residue-class set {a <= n : a = 1 mod floor(sqrt(n))}
    Elementary {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        set_out: Option<PathBuf>,
    },
    /// Two-phase interval/prime matching construction
    Matching(MatchingArgs),
    /// Exhaustive product-distinctness check of the mod-q family
    CheckTheorem1 {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
    },
}

#[derive(Subcommand)]
enum MatchCmd {
    /// Maximum matching; exit 1 with a Hall witness if the left side is uncovered
    Run {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Exact weighted degree bounds: rows >= L0, columns <= L0
    HallCheck {
        #[arg(long)]
        graph: PathBuf,
        /// Threshold as an integer or a fraction p/q
        #[arg(long = "L0", alias = "l0")]
        l0: String,
    },
}

#[derive(Subcommand)]
enum ExactCmd {
    /// Least L such that some Sidon set meets every length-L window
    G {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Largest multiplicative Sidon subset of {1..n}
    MaxSize {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// CSV table of g(n), witnesses, and max sizes for n = 1..to
    Table {
        #[arg(long)]
        to: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct RunReport {
    schema_version: u32,
    command: Vec<String>,
    params: Value,
    timings_ms: BTreeMap<String, u128>,
    verdict: String,
    exit_code: i32,
    artifacts: Vec<String>,
    payload: Value,
}

struct Outcome {
    verdict: String,
    exit_code: i32,
    params: Value,
    payload: Value,
    artifacts: Vec<String>,
    timings_ms: BTreeMap<String, u128>,
}

impl Outcome {
    fn new(verdict: &str, exit_code: i32, params: Value, payload: Value) -> Self {
        Outcome {
            verdict: verdict.into(),
            exit_code,
            params,
            payload,
            artifacts: vec![],
            timings_ms: BTreeMap::new(),
        }
    }
}

/// Anything that should terminate with exit 2.
struct UsageError(String);

impl<E: std::error::Error> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<Outcome, UsageError>;

fn read_json(path: &PathBuf) -> Result<Value, UsageError> {
    let text = fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| UsageError(format!("malformed JSON in {}: {e}", path.display())))
}

fn write_artifact(path: &PathBuf, text: &str, artifacts: &mut Vec<String>) -> Result<(), UsageError> {
    fs::write(path, text).map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))?;
    artifacts.push(path.display().to_string());
    Ok(())
}

fn build_sieve(needed: u64, cap: u64) -> Result<Sieve, UsageError> {
    if needed > cap {
        return Err(UsageError(format!(
            "command needs sieve capacity {needed} but the ceiling is {cap} (raise --sieve-cap or SIDON_SIEVE_CAP)"
        )));
    }
    Ok(Sieve::new(needed))
}

fn parse_rational(s: &str) -> Result<BigRational, UsageError> {
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p = BigInt::from_str(num.trim()).map_err(|e| UsageError(format!("bad L0 numerator: {e}")))?;
    let q = BigInt::from_str(den.trim()).map_err(|e| UsageError(format!("bad L0 denominator: {e}")))?;
    if q == BigInt::from(0) {
        return Err(UsageError("L0 denominator is zero".into()));
    }
    Ok(BigRational::new(p, q))
}

// ---------------------------------------------------------------------------
// Command bodies
// ---------------------------------------------------------------------------

fn run_primes(cmd: PrimesCmd, cap: u64) -> CmdResult {
    match cmd {
        PrimesCmd::ScanBhp { from, to } => {
            let sieve = build_sieve(to.saturating_add(1_000).max(1_000), cap)?;
            let t = Instant::now();
            let r = bhp_scan(&sieve, from, to)?;
            let verdict = if r.holds { "holds" } else { "violated" };
            let mut out = Outcome::new(
                verdict,
                if r.holds { 0 } else { 1 },
                json!({"from": from, "to": to}),
                serde_json::to_value(&r).unwrap(),
            );
            out.timings_ms.insert("scan".into(), t.elapsed().as_millis());
            Ok(out)
        }
        PrimesCmd::LmSum { x, alpha, beta, c0, csv } => {
            let slack = (x as f64).powf(alpha).ceil() as u64 + 16;
            let sieve = build_sieve(x.saturating_add(slack), cap)?;
            let t = Instant::now();
            let r = lm_sum(&sieve, x, alpha, beta, c0)?;
            let verdict = if r.primes_distinct { "distinct" } else { "overlapping" };
            let mut out = Outcome::new(
                verdict,
                if r.primes_distinct { 0 } else { 1 },
                json!({"x": x, "alpha": alpha, "beta": beta, "c0": c0}),
                serde_json::to_value(&r).unwrap(),
            );
            out.timings_ms.insert("sum".into(), t.elapsed().as_millis());
            if let Some(path) = csv {
                let mut body = String::from("m,count\n");
                for (m, c) in &r.per_m_counts {
                    body.push_str(&format!("{m},{c}\n"));
                }
                write_artifact(&path, &body, &mut out.artifacts)?;
            }
            Ok(out)
        }
    }
}

fn run_sidon(cmd: SidonCmd) -> CmdResult {
    match cmd {
        SidonCmd::Verify { input, budget } => {
            let v = read_json(&input)?;
            let set: SidonSet = serde_json::from_value(v)
                .map_err(|e| UsageError(format!("not a set file: {e}")))?;
            let set = SidonSet::new(set.n, set.elements)?;
            let t = Instant::now();
            let verdict = is_multiplicative_sidon(&set.elements, budget)?;
            let gap = gap_measure(&set);
            let (name, code, witness) = match &verdict {
                SidonVerdict::Sidon => ("sidon", 0, Value::Null),
                SidonVerdict::Conflict(w) => ("conflict", 1, serde_json::to_value(w).unwrap()),
            };
            let mut out = Outcome::new(
                name,
                code,
                json!({"input": input.display().to_string(), "budget": budget}),
                json!({"witness": witness, "gap": gap, "size": set.len()}),
            );
            out.timings_ms.insert("verify".into(), t.elapsed().as_millis());
            Ok(out)
        }
        SidonCmd::CheckCert { input } => {
            let v = read_json(&input)?;
            let cert: PrivatePrimeCertificate = serde_json::from_value(v)
                .map_err(|e| UsageError(format!("not a certificate file: {e}")))?;
            let violations = check_certificate(&cert);
            let ok = violations.is_empty();
            let rendered: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            Ok(Outcome::new(
                if ok { "certificate-valid" } else { "certificate-invalid" },
                if ok { 0 } else { 1 },
                json!({"input": input.display().to_string(), "J": cert.j, "items": cert.items.len()}),
                json!({"violations": violations, "violations_text": rendered}),
            ))
        }
    }
}

fn matching_params(a: &MatchingArgs) -> Result<ConstructionParams, UsageError> {
    match (a.alpha, a.beta, a.epsilon) {
        (Some(alpha), Some(beta), None) => {
            let delta = a.delta.unwrap_or_else(|| {
                let (lo, hi) = delta_window(alpha);
                (lo + hi) / 2.0
            });
            Ok(derive_params(a.n, alpha, beta, delta)?)
        }
        (None, None, eps) => {
            let e = choose_exponents(eps.unwrap_or(0.005))?;
            Ok(derive_params(a.n, e.alpha, e.beta, e.delta)?)
        }
        _ => Err(UsageError("give either --alpha and --beta, or --epsilon".into())),
    }
}

fn run_construct(cmd: ConstructCmd, cap: u64) -> CmdResult {
    match cmd {
        ConstructCmd::Elementary { n, set_out } => {
            if n == 0 {
                return Err(UsageError("--n must be positive".into()));
            }
            let set = elementary(n);
            let gap = gap_measure(&set);
            let mut out = Outcome::new(
                "constructed",
                0,
                json!({"n": n, "q": n.isqrt()}),
                json!({"set": set, "gap": gap, "size": set.len()}),
            );
            if let Some(path) = set_out {
                write_artifact(&path, &serde_json::to_string_pretty(&set).unwrap(), &mut out.artifacts)?;
            }
            Ok(out)
        }
        ConstructCmd::Matching(a) => {
            let params = matching_params(&a)?;
            let needed = params.t_total * params.h + 16;
            let sieve = build_sieve(needed, cap)?;
            let t = Instant::now();
            let outcome = matching_construct(&sieve, &params)?;
            let elapsed = t.elapsed().as_millis();
            let mut out = match outcome {
                MatchingOutcome::Success(s) => {
                    let cert = s.certificate.to_private_prime();
                    let mut out = Outcome::new(
                        "constructed",
                        0,
                        serde_json::to_value(&params).unwrap(),
                        json!({
                            "set": s.set,
                            "certificate": cert,
                            "gap": s.gap,
                            "checks": s.checks,
                            "stats": s.stats,
                        }),
                    );
                    if let Some(path) = a.set_out {
                        write_artifact(&path, &serde_json::to_string_pretty(&s.set).unwrap(), &mut out.artifacts)?;
                    }
                    if let Some(path) = a.cert_out {
                        write_artifact(&path, &serde_json::to_string_pretty(&cert).unwrap(), &mut out.artifacts)?;
                    }
                    out
                }
                MatchingOutcome::PrimeFreeInterval { i, lo, hi } => Outcome::new(
                    "prime-free-interval",
                    1,
                    serde_json::to_value(&params).unwrap(),
                    json!({"interval": i, "lo": lo, "hi": hi}),
                ),
                MatchingOutcome::Deficient { intervals, neighborhood_size, witness } => Outcome::new(
                    "deficient",
                    1,
                    serde_json::to_value(&params).unwrap(),
                    json!({
                        "intervals": intervals,
                        "neighborhood_size": neighborhood_size,
                        "witness": witness,
                    }),
                ),
            };
            out.timings_ms.insert("construct".into(), elapsed);
            Ok(out)
        }
        ConstructCmd::CheckTheorem1 { q, budget } => {
            let witness = verify_theorem1_algebra(q, budget)?;
            let ok = witness.is_none();
            Ok(Outcome::new(
                if ok { "distinct" } else { "collision" },
                if ok { 0 } else { 1 },
                json!({"q": q, "budget": budget}),
                json!({"collision": witness.map(|(i, j, k, l)| json!([i, j, k, l]))}),
            ))
        }
    }
}

fn run_match(cmd: MatchCmd) -> CmdResult {
    match cmd {
        MatchCmd::Run { graph } => {
            let g = graph_from_json(&read_json(&graph)?)?;
            let t = Instant::now();
            let m = max_matching(&g);
            let covered = m.covers_left();
            let pairs: Vec<Value> = m
                .pairs
                .iter()
                .enumerate()
                .filter_map(|(u, p)| p.map(|v| json!([g.left_ids[u], g.right_ids[v]])))
                .collect();
            let witness = deficiency_witness(&g, &m);
            let mut out = Outcome::new(
                if covered { "covering" } else { "deficient" },
                if covered { 0 } else { 1 },
                json!({"graph": graph.display().to_string(), "left": g.left_len(), "right": g.right_len()}),
                json!({"size": m.size(), "pairs": pairs, "witness": witness}),
            );
            out.timings_ms.insert("matching".into(), t.elapsed().as_millis());
            Ok(out)
        }
        MatchCmd::HallCheck { graph, l0 } => {
            let g = graph_from_json(&read_json(&graph)?)?;
            let threshold = parse_rational(&l0)?;
            let r = weighted_hall_check(&g, &threshold);
            let ok = r.rows_ok && r.cols_ok;
            Ok(Outcome::new(
                if ok { "hall-ok" } else { "hall-violated" },
                if ok { 0 } else { 1 },
                json!({"graph": graph.display().to_string(), "L0": l0}),
                json!({
                    "rows_ok": r.rows_ok,
                    "cols_ok": r.cols_ok,
                    "row_offenders": r.row_offenders,
                    "col_offenders": r.col_offenders,
                }),
            ))
        }
    }
}

fn exact_outcome(kind: &str, n: u64, budget: u64, r: ExactResult) -> Outcome {
    Outcome::new(
        if r.proven_optimal { "exact" } else { "budget-exhausted" },
        0,
        json!({"kind": kind, "n": n, "budget": budget}),
        serde_json::to_value(&r).unwrap(),
    )
}

fn run_exact(cmd: ExactCmd) -> CmdResult {
    match cmd {
        ExactCmd::G { n, budget } => Ok(exact_outcome("g", n, budget, exact_g(n, budget)?)),
        ExactCmd::MaxSize { n, budget } => {
            Ok(exact_outcome("max-size", n, budget, max_sidon_size(n, budget)?))
        }
        ExactCmd::Table { to, out, budget } => {
            if to == 0 {
                return Err(UsageError("--to must be positive".into()));
            }
            let t = Instant::now();
            let primes = simple_sieve(to);
            let rows: Vec<Result<String, UsageError>> = {
                use rayon::prelude::*;
                (1..=to)
                    .into_par_iter()
                    .map(|n| {
                        let g = exact_g(n, budget)?;
                        let size = max_sidon_size(n, budget)?;
                        let pi = primes.iter().take_while(|&&p| p <= n).count() as i64;
                        let witness: Vec<String> =
                            g.witness.elements.iter().map(|a| a.to_string()).collect();
                        Ok(format!(
                            "{n},{},{},{},{}\n",
                            g.value,
                            witness.join(" "),
                            size.value,
                            size.value as i64 - pi
                        ))
                    })
                    .collect()
            };
            let mut body = String::from("n,g,witness,max_size,excess_over_pi\n");
            for row in rows {
                body.push_str(&row?);
            }
            let mut outcome = Outcome::new(
                "tabulated",
                0,
                json!({"to": to, "budget": budget}),
                json!({"rows": to}),
            );
            write_artifact(&out, &body, &mut outcome.artifacts)?;
            outcome.timings_ms.insert("table".into(), t.elapsed().as_millis());
            Ok(outcome)
        }
    }
}

fn dispatch(cmd: Cmd, cap: u64) -> CmdResult {
    match cmd {
        Cmd::Primes { cmd } => run_primes(cmd, cap),
        Cmd::Sidon { cmd } => run_sidon(cmd),
        Cmd::Construct { cmd } => run_construct(cmd, cap),
        Cmd::Match { cmd } => run_match(cmd),
        Cmd::Exact { cmd } => run_exact(cmd),
    }
}

fn main() {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    if let Some(threads) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let started = Instant::now();
    let mut outcome = match dispatch(cli.cmd, cli.sieve_cap) {
        Ok(o) => o,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            Outcome::new("error", 2, Value::Null, json!({"error": msg}))
        }
    };
    outcome.timings_ms.insert("total".into(), started.elapsed().as_millis());
    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        command: argv,
        params: outcome.params,
        timings_ms: outcome.timings_ms,
        verdict: outcome.verdict,
        exit_code: outcome.exit_code,
        artifacts: outcome.artifacts,
        payload: outcome.payload,
    };
    let text = serde_json::to_string_pretty(&report).unwrap();
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: cannot write report to {}: {e}", path.display());
                std::process::exit(2);
            }
        }
        None => println!("{text}"),
    }
    std::process::exit(report.exit_code);
}
