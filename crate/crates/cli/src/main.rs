mod cache;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use plusrank_core::analytic::{verify_theorem_numeric_with, EvalParams, EvalReport};
use plusrank_core::halfint::{
    iota1, jacobi_cusp_index1, verify_gk_recursion, verify_hecke_eigen, CohenEisenstein,
    JacobiIndex1Form, CUSP_JACOBI_WEIGHTS,
};
use plusrank_core::maass::{verify_dd, verify_maass_a2, verify_psi_chain, verify_theorem_factor, CHI_VALUES};
use plusrank_core::modforms::{eigenform, Eigenform};
use plusrank_core::report::VerificationReport;
use plusrank_core::serial::{rat_to_string, FORMAT_VERSION};
use plusrank_core::Rational;

use cache::{Cache, EntryName};
use error::CliError;

const CACHE_ENV: &str = "PLUSRANK_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(name = "plusrank", version, about = "Exact plus-space coefficients and verification of the Rankin–Selberg identity")]
struct Cli {
    /// Cache directory for coefficient tables; no caching if unset.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print exact coefficients.
    Coeffs(CoeffsArgs),
    /// Run a verifier; exit status 0 on pass, 1 on failure.
    Verify(VerifyArgs),
    /// Inspect or fill the coefficient cache.
    Cache(CacheArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CoeffKind {
    /// Normalised cusp eigenform of weight `--weight` (or `2k - 2`).
    Eigenform,
    /// Cohen–Eisenstein coefficients `h_{k-1/2}(N)`.
    CohenH,
    /// `iota_1` of the index-one Jacobi cusp form of weight `k`.
    PlusForm,
    /// Index-one Jacobi cusp form of weight `k`, by discriminant.
    JacobiCusp,
}

#[derive(clap::Args, Debug)]
struct CoeffsArgs {
    #[arg(value_enum)]
    kind: CoeffKind,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    weight: Option<u32>,
    /// Inclusive range `a..b`.
    #[arg(long, default_value = "0..20")]
    range: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    Dd,
    MaassA2,
    PsiChain,
    EulerFactor,
    HeckeEigen,
    GkRecursion,
    Theorem,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    target: Target,
    #[arg(long, default_value_t = 10)]
    k: u32,
    #[arg(long, default_value_t = 2)]
    n: i64,
    /// Character value; all of -1, 0, 1 if omitted.
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<i64>,
    /// Prime-power bound for `dd`.
    #[arg(long, default_value_t = 5)]
    bound: usize,
    #[arg(long, default_value_t = 6)]
    nu_max: u32,
    /// `n'` for `psi-chain`; 0, 2 and 4 if omitted.
    #[arg(long)]
    nprime: Option<i64>,
    #[arg(long, default_value_t = 12)]
    t_order: usize,
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    #[arg(long, default_value_t = 500)]
    m_max: u64,
    /// Coefficient order for `hecke-eigen`.
    #[arg(long, default_value_t = 2200)]
    order: usize,
    #[arg(long, value_delimiter = ',', default_value = "2.0,3.0")]
    s: Vec<f64>,
    #[arg(long, default_value_t = 4096)]
    mmax: usize,
    #[arg(long, default_value_t = 4096)]
    dmax: usize,
    #[arg(long, default_value_t = 1000)]
    pmax: u64,
    /// Tolerance on `rel_diff`; defaults to 1e-5 below s = 3 and 1e-7 from s = 3.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CacheAction {
    Status,
    Clear,
    Warm,
}

#[derive(clap::Args, Debug)]
struct CacheArgs {
    #[arg(value_enum)]
    action: CacheAction,
    /// Order of the warmed Jacobi pipelines.
    #[arg(long, default_value_t = 4096)]
    order: usize,
    /// Order of the warmed eigenforms.
    #[arg(long, default_value_t = 1000)]
    pmax: u64,
}

/// Everything a command prints, plus whether it passed.
struct Outcome {
    json: Value,
    csv: String,
    pretty: String,
    passed: bool,
}

fn parse_range(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("range must look like a..b, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

struct Store {
    cache: Option<Cache>,
}

impl Store {
    fn jacobi_cusp(&self, k: u32, order: usize) -> Result<JacobiIndex1Form, CliError> {
        if let Some(cache) = &self.cache {
            if let Some(entry) = cache.find("jacobi-cusp", k, order)? {
                let phi: JacobiIndex1Form = cache.load(&entry)?;
                return Ok(phi.truncate(order));
            }
            let phi = jacobi_cusp_index1(k, order)?;
            cache.store(&EntryName { tag: "jacobi-cusp".into(), k, order }, &phi)?;
            return Ok(phi);
        }
        Ok(jacobi_cusp_index1(k, order)?)
    }

    fn eigenform(&self, weight: u32, order: usize) -> Result<Eigenform, CliError> {
        if let Some(cache) = &self.cache {
            if let Some(entry) = cache.find("eigenform", weight, order)? {
                let mut f: Eigenform = cache.load(&entry)?;
                f.coeffs = f.coeffs.truncate(order);
                return Ok(f);
            }
            let f = eigenform(weight, order)?;
            cache.store(&EntryName { tag: "eigenform".into(), k: weight, order }, &f)?;
            return Ok(f);
        }
        Ok(eigenform(weight, order)?)
    }
}

fn table_outcome(kind: &str, params: Value, rows: Vec<(usize, Rational)>) -> Outcome {
    let mut csv = String::from("n,coeff\n");
    let mut pretty = format!("{kind} {params}\n");
    for (n, c) in &rows {
        csv.push_str(&format!("{n},{}\n", rat_to_string(c)));
        pretty.push_str(&format!("{n:>8}  {}\n", rat_to_string(c)));
    }
    let table: Vec<Value> = rows.iter().map(|(n, c)| json!([n, rat_to_string(c)])).collect();
    Outcome {
        json: json!({"version": FORMAT_VERSION, "kind": kind, "parameters": params, "coefficients": table}),
        csv,
        pretty,
        passed: true,
    }
}

fn cmd_coeffs(args: &CoeffsArgs, store: &Store) -> Result<Outcome, CliError> {
    let (lo, hi) = parse_range(&args.range)?;
    let need_k = || args.k.ok_or_else(|| CliError::Usage("--k is required for this kind".into()));
    match args.kind {
        CoeffKind::Eigenform => {
            let weight = match (args.weight, args.k) {
                (Some(w), _) => w,
                (None, Some(k)) => 2 * k - 2,
                (None, None) => return Err(CliError::Usage("--weight or --k is required".into())),
            };
            let f = store.eigenform(weight, hi)?;
            let rows = (lo..=hi).map(|n| (n, f.coeffs.coeff(n).clone())).collect();
            Ok(table_outcome("eigenform", json!({"weight": weight}), rows))
        }
        CoeffKind::CohenH => {
            let k = need_k()?;
            let mut ce = CohenEisenstein::new(k)?;
            let rows = (lo..=hi)
                .map(|n| ce.h(n as u64).map(|c| (n, c)))
                .collect::<Result<_, _>>()?;
            Ok(table_outcome("cohen-h", json!({"k": k}), rows))
        }
        CoeffKind::PlusForm => {
            let k = need_k()?;
            let g = iota1(&store.jacobi_cusp(k, hi)?);
            let rows = (lo..=hi).map(|n| (n, g.coeff(n).clone())).collect();
            Ok(table_outcome("plus-form", json!({"k": k, "half_weight_num": g.half_weight_num}), rows))
        }
        CoeffKind::JacobiCusp => {
            let k = need_k()?;
            let phi = store.jacobi_cusp(k, hi)?;
            let rows = (lo..=hi).map(|d| (d, phi.disc_coeff(d).clone())).collect();
            Ok(table_outcome("jacobi-cusp", json!({"k": k}), rows))
        }
    }
}

fn report_outcome(report: VerificationReport) -> Outcome {
    let passed = report.passed();
    let failure = report.first_failure.clone().unwrap_or_default();
    let status = if passed { "pass" } else { "fail" };
    Outcome {
        csv: format!(
            "identity,status,checks,first_failure\n{},{status},{},\"{}\"\n",
            report.identity,
            report.checks,
            failure.replace('"', "'")
        ),
        pretty: format!(
            "{}: {status} ({} checks){}\n",
            report.identity,
            report.checks,
            if passed { String::new() } else { format!("\n  first failure: {failure}") }
        ),
        json: serde_json::to_value(&report).expect("reports serialise"),
        passed,
    }
}

fn chis(chi: Option<i64>) -> Vec<i64> {
    chi.map(|c| vec![c]).unwrap_or_else(|| CHI_VALUES.to_vec())
}

fn combined(identity: &str, params: Vec<(&str, Value)>, parts: Vec<VerificationReport>) -> VerificationReport {
    let mut report = VerificationReport::new(identity);
    for (key, value) in params {
        report = report.param(key, value);
    }
    for part in parts {
        report.absorb(part);
    }
    report
}

fn default_tol(s: f64) -> f64 {
    if s < 3.0 {
        1e-5
    } else {
        1e-7
    }
}

fn theorem_outcome(reports: Vec<EvalReport>) -> Outcome {
    let passed = reports.iter().all(|r| r.passed);
    let mut csv = String::from("s,lhs,rhs,lhs_tail_bound,rhs_tail_bound,rel_diff,rel_tail,tol,passed\n");
    let mut pretty = String::new();
    for r in &reports {
        csv.push_str(&format!(
            "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{}\n",
            r.s, r.lhs, r.rhs, r.lhs_tail_bound, r.rhs_tail_bound, r.rel_diff, r.rel_tail, r.tol, r.passed
        ));
        pretty.push_str(&format!(
            "s = {}: lhs = {:.15e}, rhs = {:.15e}, rel_diff = {:.3e} (tol {:.0e}, tails {:.3e}) {}\n",
            r.s,
            r.lhs,
            r.rhs,
            r.rel_diff,
            r.tol,
            r.rel_tail,
            if r.passed { "pass" } else { "FAIL" }
        ));
    }
    Outcome {
        json: json!({
            "identity": "theorem",
            "status": if passed { "pass" } else { "fail" },
            "reports": reports,
        }),
        csv,
        pretty,
        passed,
    }
}

fn cmd_verify(args: &VerifyArgs, store: &Store) -> Result<Outcome, CliError> {
    let k = args.k;
    let ki = k as i64;
    let report = match args.target {
        Target::Dd => {
            let parts = chis(args.chi)
                .into_iter()
                .map(|chi| verify_dd(args.bound, ki, args.n, chi))
                .collect::<Result<_, _>>()?;
            combined("dd", vec![("k", k.into()), ("n", args.n.into()), ("bound", args.bound.into())], parts)
        }
        Target::MaassA2 => verify_maass_a2(args.n, ki)?,
        Target::PsiChain => {
            let nps = args.nprime.map(|n| vec![n]).unwrap_or_else(|| vec![0, 2, 4]);
            let parts = nps
                .iter()
                .map(|&np| verify_psi_chain(args.nu_max, np, ki))
                .collect::<Result<_, _>>()?;
            combined("psi-chain", vec![("k", k.into()), ("nu_max", args.nu_max.into()), ("nprime", json!(nps))], parts)
        }
        Target::EulerFactor => {
            let parts = chis(args.chi)
                .into_iter()
                .map(|chi| verify_theorem_factor(args.n, ki, chi, args.t_order))
                .collect::<Result<_, _>>()?;
            combined(
                "euler-factor",
                vec![("k", k.into()), ("n", args.n.into()), ("t_order", args.t_order.into())],
                parts,
            )
        }
        Target::HeckeEigen => {
            let primes = args.primes.clone().unwrap_or_else(|| vec![3, 5, 7, 11, 13]);
            verify_hecke_eigen(k, &primes, args.order)?
        }
        Target::GkRecursion => {
            let primes = args.primes.clone().unwrap_or_else(|| vec![2, 3, 5, 7, 11, 13]);
            verify_gk_recursion(k, args.m_max, &primes)?
        }
        Target::Theorem => {
            if !CUSP_JACOBI_WEIGHTS.contains(&k) {
                return Err(CliError::Usage(format!("theorem needs k in {CUSP_JACOBI_WEIGHTS:?}")));
            }
            if args.s.is_empty() {
                return Err(CliError::Usage("--s needs at least one value".into()));
            }
            let g = iota1(&store.jacobi_cusp(k, args.mmax.max(args.dmax))?);
            let f = store.eigenform(2 * k - 2, args.pmax.max(2) as usize)?;
            let params = EvalParams { k, n: 1, mmax: args.mmax, pmax: args.pmax, dmax: args.dmax };
            let mut reports = Vec::new();
            for &s in &args.s {
                let tol = args.tol.unwrap_or_else(|| default_tol(s));
                reports.extend(verify_theorem_numeric_with(&g, &f, k, &[s], params, tol)?);
            }
            return Ok(theorem_outcome(reports));
        }
    };
    Ok(report_outcome(report))
}

fn cmd_cache(args: &CacheArgs, store: &Store) -> Result<Outcome, CliError> {
    let cache = store
        .cache
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("cache commands need --cache-dir or {CACHE_ENV}")))?;
    let (action, count) = match args.action {
        CacheAction::Status => ("status", 0),
        CacheAction::Clear => ("clear", cache.clear()?),
        CacheAction::Warm => {
            let mut stored = 0;
            for k in CUSP_JACOBI_WEIGHTS {
                store.jacobi_cusp(k, args.order)?;
                store.eigenform(2 * k - 2, args.pmax.max(2) as usize)?;
                stored += 2;
            }
            ("warm", stored)
        }
    };
    let entries = cache.entries()?;
    let names: Vec<String> = entries.iter().map(|e| e.file_name()).collect();
    let mut csv = String::from("tag,k,order\n");
    let mut pretty = format!("{}: {} entries\n", cache.root().display(), entries.len());
    for e in &entries {
        csv.push_str(&format!("{},{},{}\n", e.tag, e.k, e.order));
        pretty.push_str(&format!("  {}\n", e.file_name()));
    }
    Ok(Outcome {
        json: json!({
            "action": action,
            "affected": count,
            "directory": cache.root().display().to_string(),
            "entries": names,
        }),
        csv,
        pretty,
        passed: true,
    })
}

fn emit(outcome: &Outcome, format: Format) -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &outcome.json)?;
            writeln!(out)
        }
        Format::Csv => out.write_all(outcome.csv.as_bytes()),
        Format::Pretty => out.write_all(outcome.pretty.as_bytes()),
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let store = Store { cache: cli.cache_dir.as_deref().map(Cache::new) };
    match &cli.command {
        Command::Coeffs(args) => cmd_coeffs(args, &store),
        Command::Verify(args) => cmd_verify(args, &store),
        Command::Cache(args) => cmd_cache(args, &store),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome, cli.format) {
                eprintln!("plusrank: cannot write output: {e}");
                return ExitCode::from(3);
            }
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("plusrank: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
