use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use orlicz_radius::bounds::{
    evaluate_normalized, BoundCase, BoundError, BoundEvaluation, CaseId, EvalOptions, LinkStatus, Tolerance,
};
use orlicz_radius::ensembles::{generate, EnsembleSpec, Family};
use orlicz_radius::harness::{
    builtin_suite, evaluate_draw, export_report, report_csv, HarnessError, ReportFormat, SuiteConfig, SuiteReport,
};
use orlicz_radius::linalg::{io, operator_norm, CMatrix};
use orlicz_radius::numrad::{boundary_csv, numerical_radius, range_boundary, RadiusOptions};
use orlicz_radius::rng::CounterRng;

#[derive(Parser)]
#[command(name = "orlicz-radius", version, about = "Numerical radius inequalities under Orlicz functions")]
struct Cli {
    /// Worker threads for suite runs.
    #[arg(long, global = true, env = "ORLICZ_RADIUS_JOBS")]
    jobs: Option<usize>,
    /// Human-readable tables on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Numerical radius of a matrix file.
    Radius(RadiusArgs),
    /// Evaluate one inequality chain.
    Bound(BoundArgs),
    /// Run a suite and write its report.
    Verify(VerifyArgs),
    /// Tabulate upper estimates of w(T) from several cases.
    Compare(CompareArgs),
    /// Random search for the tightest input of a case.
    Fuzz(FuzzArgs),
    /// List the inequality catalogue.
    Catalogue(CatalogueArgs),
}

#[derive(Args)]
struct RadiusArgs {
    matrix: PathBuf,
    #[arg(long, default_value_t = RadiusOptions::default().grid)]
    grid: usize,
    #[arg(long, default_value_t = RadiusOptions::default().tol)]
    tol: f64,
    /// Number of boundary points of the numerical range to write.
    #[arg(long, value_name = "M")]
    boundary: Option<usize>,
    #[arg(long, value_name = "PATH", default_value = "boundary.csv")]
    boundary_out: PathBuf,
}

#[derive(Args)]
struct TolArgs {
    #[arg(long, default_value_t = Tolerance::default().abs)]
    tol_abs: f64,
    #[arg(long, default_value_t = Tolerance::default().rel)]
    tol_rel: f64,
}

impl TolArgs {
    fn tolerance(&self) -> Tolerance {
        Tolerance {
            abs: self.tol_abs,
            rel: self.tol_rel,
        }
    }
}

#[derive(Args)]
struct BoundArgs {
    /// Case label, e.g. `th6[phi=expm1]`.
    #[arg(long)]
    case: String,
    #[arg(long, conflicts_with = "ensemble")]
    matrix: Option<PathBuf>,
    /// Second operator for two-operator cases.
    #[arg(long, requires = "matrix")]
    matrix_s: Option<PathBuf>,
    /// Ensemble spec as JSON text or a path to a JSON file.
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// Skip the overflow normalization of exponential cases.
    #[arg(long)]
    raw: bool,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Built-in suite name (`default`, `selftest`) or config path.
    #[arg(long, default_value = "default")]
    suite: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: ReportFormat,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    ensemble: String,
    /// Comma-separated case labels.
    #[arg(long, value_delimiter = ',', required = true)]
    bounds: Vec<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long)]
    seconds: f64,
    #[arg(long)]
    case: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "ginibre")]
    family: String,
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Stop after this many candidates even if time remains.
    #[arg(long)]
    iterations: Option<usize>,
    /// Witness matrix file; a second operator goes to `<stem>_s.json`.
    #[arg(long, default_value = "fuzz_witness.json")]
    out: PathBuf,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct CatalogueArgs {
    /// Show a single case.
    #[arg(long)]
    case: Option<String>,
}

/// Input problems map to exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Usage(msg.into()).into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Radius(a) => cmd_radius(a),
        Cmd::Bound(a) => cmd_bound(a, cli.verbose),
        Cmd::Verify(a) => cmd_verify(a, cli.jobs, cli.verbose),
        Cmd::Compare(a) => cmd_compare(a, cli.verbose),
        Cmd::Fuzz(a) => cmd_fuzz(a, cli.verbose),
        Cmd::Catalogue(a) => cmd_catalogue(a),
    };
    match result {
        Ok(ok) if ok => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_matrix(path: &Path) -> Result<CMatrix> {
    io::read_matrix(path).map_err(|e| Usage(format!("{}: {e}", path.display())).into())
}

fn parse_case(label: &str) -> Result<BoundCase> {
    label.parse().or_else(|e: BoundError| usage(format!("case {label}: {e}")))
}

fn parse_ensemble(s: &str) -> Result<EnsembleSpec> {
    let text = if s.trim_start().starts_with('{') {
        s.to_string()
    } else {
        fs::read_to_string(s).or_else(|e| usage(format!("{s}: {e}")))?
    };
    EnsembleSpec::from_json(&text).or_else(|e| usage(format!("ensemble: {e}")))
}

fn status_name(s: LinkStatus) -> &'static str {
    match s {
        LinkStatus::Pass => "pass",
        LinkStatus::Graze => "graze",
        LinkStatus::Fail => "fail",
    }
}

/// Shortest round-trip form; exponent notation outside `[1e-4, 1e16)`.
fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e16).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn cmd_radius(a: &RadiusArgs) -> Result<bool> {
    let t = read_matrix(&a.matrix)?;
    let opts = RadiusOptions {
        grid: a.grid,
        tol: a.tol,
        ..RadiusOptions::default()
    };
    let r = numerical_radius(&t, &opts).or_else(|e| usage(e.to_string()))?;
    println!("n={}", t.n());
    println!("w={}", num(r.value));
    println!("theta_star={}", num(r.theta_star));
    println!("certified_error={}", num(r.certified_error));
    if let Some(m) = a.boundary {
        let pts = range_boundary(&t, m).or_else(|e| usage(e.to_string()))?;
        fs::write(&a.boundary_out, boundary_csv(&pts))
            .with_context(|| format!("writing {}", a.boundary_out.display()))?;
        println!("boundary_points={}", pts.len());
        println!("boundary_file={}", a.boundary_out.display());
    }
    Ok(true)
}

fn print_evaluation(e: &BoundEvaluation, verbose: bool) {
    println!("case={}", e.case);
    println!("n={}", e.dimension);
    println!("scale={}", num(e.scale));
    for (k, m) in e.chain.iter().enumerate() {
        println!("chain.{k}.name={}", m.name);
        println!("chain.{k}={}", num(m.value));
    }
    for (k, l) in e.links.iter().enumerate() {
        println!("link.{k}.slack={}", num(l.slack));
        println!("link.{k}.ratio={}", fmt_opt(l.ratio));
        println!("link.{k}.status={}", status_name(l.status));
    }
    for q in &e.quantities {
        println!("quantity.{}={}", q.name, num(q.value));
    }
    if let Ok(Some(w)) = e.w_estimate() {
        println!("w_estimate={}", num(w));
    }
    println!("holds={}", e.holds());
    if verbose {
        eprintln!("{:<4} {:<28} {:>24}", "k", "member", "value");
        for (k, m) in e.chain.iter().enumerate() {
            eprintln!("{k:<4} {:<28} {:>24.16e}", m.name, m.value);
        }
        eprintln!("{:<4} {:>24} {:>14} {:>6}", "link", "slack", "ratio", "status");
        for (k, l) in e.links.iter().enumerate() {
            let ratio = l.ratio.map(|r| format!("{r:.10}")).unwrap_or_else(|| "-".into());
            eprintln!("{k:<4} {:>24.16e} {ratio:>14} {:>6}", l.slack, status_name(l.status));
        }
    }
}

fn cmd_bound(a: &BoundArgs, verbose: bool) -> Result<bool> {
    let case = parse_case(&a.case)?;
    let tol = a.tol.tolerance();
    let result = match (&a.matrix, &a.ensemble) {
        (Some(path), None) => {
            if case.id().is_vector() {
                return usage(format!("{} is a vector lemma; use --ensemble", case.id().name()));
            }
            let t = read_matrix(path)?;
            let s = a.matrix_s.as_deref().map(read_matrix).transpose()?;
            let opts = EvalOptions {
                tolerance: tol,
                radius: RadiusOptions::default(),
            };
            if a.raw {
                orlicz_radius::bounds::evaluate_bound(&case, &t, s.as_ref(), &opts).map_err(HarnessError::from)
            } else {
                evaluate_normalized(&case, &t, s.as_ref(), &opts).map_err(HarnessError::from)
            }
        }
        (None, Some(spec)) => {
            let spec = parse_ensemble(spec)?;
            evaluate_draw(&case, &spec, a.index, tol, RadiusOptions::default())
        }
        _ => return usage("give exactly one of --matrix or --ensemble"),
    };
    match result {
        Ok(e) => {
            print_evaluation(&e, verbose);
            println!("status={}", if e.holds() { "ok" } else { "violation" });
            Ok(e.holds())
        }
        Err(HarnessError::Bound(b)) if b.is_untestable() => {
            println!("case={case}");
            println!("status=untestable");
            eprintln!("{b}");
            Ok(true)
        }
        Err(HarnessError::Bound(b)) if b.is_not_applicable() => {
            println!("case={case}");
            println!("status=not_applicable");
            eprintln!("{b}");
            Ok(true)
        }
        Err(e) => usage(e.to_string()),
    }
}

fn load_suite(name: &str) -> Result<SuiteConfig> {
    if let Some(s) = builtin_suite(name) {
        return Ok(s);
    }
    SuiteConfig::load(name).or_else(|e| usage(e.to_string()))
}

fn cmd_verify(a: &VerifyArgs, jobs: Option<usize>, verbose: bool) -> Result<bool> {
    let mut config = load_suite(&a.suite)?;
    if jobs == Some(0) {
        return usage("--jobs must be positive");
    }
    config.jobs = jobs;
    let report = match orlicz_radius::harness::run_suite(&config) {
        Ok(r) => r,
        Err(e @ (HarnessError::Io(_) | HarnessError::Report(_))) => bail!(e),
        Err(e) => return usage(e.to_string()),
    };
    if let Some(out) = &a.out {
        export_report(&report, a.format, out)?;
        println!("report={}", out.display());
    }
    let t = &report.totals;
    println!("suite={}", report.config.name);
    println!("entries={}", t.entries);
    println!("evaluations={}", t.evaluations);
    println!("violations={}", t.violations);
    println!("grazes={}", t.grazes);
    println!("untestable={}", t.untestable);
    println!("skipped={}", t.skipped);
    println!("errors={}", t.errors);
    println!("wall_time_ms={}", report.wall_time_ms);
    if verbose {
        print_suite_table(&report);
    }
    Ok(t.violations == 0 && t.errors == 0)
}

fn print_suite_table(report: &SuiteReport) {
    eprintln!("{:<56} {:<18} {:>6} {:>6} {:>12}", "case", "ensemble", "evals", "viol", "max ratio");
    for e in &report.entries {
        let top = e.links.iter().filter_map(|l| l.max_ratio).fold(None, |m: Option<f64>, r| {
            Some(m.map_or(r, |m| m.max(r)))
        });
        let ens = format!("{} n={}", e.ensemble.family.name(), e.ensemble.n);
        let top = top.map(|r| format!("{r:.8}")).unwrap_or_else(|| "-".into());
        eprintln!("{:<56} {ens:<18} {:>6} {:>6} {top:>12}", e.case.to_string(), e.evaluations, e.violations);
    }
    if report.entries.is_empty() {
        eprint!("{}", report_csv(report));
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_compare(a: &CompareArgs, verbose: bool) -> Result<bool> {
    let spec = parse_ensemble(&a.ensemble)?;
    let cases = a.bounds.iter().map(|b| parse_case(b)).collect::<Result<Vec<_>>>()?;
    for c in &cases {
        if c.lhs_form().is_none() {
            return usage(format!("{c} does not bound w(T) of a single operator"));
        }
    }
    let tol = Tolerance::default();
    let radius = RadiusOptions::default();
    let mut csv = String::from("index,seed,w");
    for c in &cases {
        csv.push(',');
        csv.push_str(&csv_field(&c.to_string()));
    }
    csv.push('\n');
    let mut below = vec![0usize; cases.len()];
    for index in 0..spec.count {
        let t = generate(&spec, index).or_else(|e| usage(e.to_string()))?;
        let w = numerical_radius(&t, &radius)?.value;
        csv.push_str(&format!("{index},{},{}", spec.seed, num(w)));
        for (k, c) in cases.iter().enumerate() {
            let est = match evaluate_draw(c, &spec, index, tol, radius) {
                Ok(e) => e.w_estimate().ok().flatten(),
                Err(HarnessError::Bound(b)) if b.is_untestable() || b.is_not_applicable() => None,
                Err(e) => return usage(e.to_string()),
            };
            if let Some(est) = est {
                if est < w - tol.allowance(w) {
                    below[k] += 1;
                }
            }
            csv.push(',');
            csv.push_str(&fmt_opt(est));
        }
        csv.push('\n');
    }
    fs::write(&a.out, &csv).with_context(|| format!("writing {}", a.out.display()))?;
    println!("rows={}", spec.count);
    println!("out={}", a.out.display());
    for (c, b) in cases.iter().zip(&below) {
        println!("below_w.{c}={b}");
    }
    if verbose {
        eprint!("{csv}");
    }
    Ok(below.iter().all(|&b| b == 0))
}

fn perturb(m: &CMatrix, rng: &mut CounterRng, size: f64) -> CMatrix {
    let n = m.n();
    let data: Vec<Complex64> = m.data().iter().map(|z| z + rng.complex_gaussian() * size).collect();
    CMatrix::new(n, data).expect("same shape")
}

/// Largest link ratio of an evaluation.
fn tightness(e: &BoundEvaluation) -> Option<(usize, f64)> {
    e.links
        .iter()
        .enumerate()
        .filter_map(|(k, l)| l.ratio.map(|r| (k, r)))
        .fold(None, |best, (k, r)| match best {
            Some((_, b)) if b >= r => best,
            _ => Some((k, r)),
        })
}

fn second_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("fuzz_witness");
    out.with_file_name(format!("{stem}_s.json"))
}

fn cmd_fuzz(a: &FuzzArgs, verbose: bool) -> Result<bool> {
    if !(a.seconds > 0.0 && a.seconds.is_finite()) {
        return usage("--seconds must be positive");
    }
    let case = parse_case(&a.case)?;
    if case.id().is_vector() {
        return usage(format!("{} is a vector lemma; fuzz takes operator cases", case.id().name()));
    }
    let spec = format!(r#"{{"family":"{}","n":{},"count":{},"seed":{}}}"#, a.family, a.n, usize::MAX, a.seed);
    let spec = EnsembleSpec::from_json(&spec).or_else(|e| usage(format!("ensemble: {e}")))?;
    let family = spec.family.clone();
    // structured families keep their shape only under fresh draws
    let mutable = matches!(family, Family::Ginibre | Family::Hermitian | Family::Rank1);
    let opts = EvalOptions {
        tolerance: a.tol.tolerance(),
        radius: RadiusOptions::default(),
    };
    let two = case.id().needs_second();
    let draw = |index: usize| -> Result<(CMatrix, Option<CMatrix>)> {
        let t = generate(&spec, index)?;
        let s = two.then(|| generate(&spec.paired(), index)).transpose()?;
        Ok((t, s))
    };

    let mut rng = CounterRng::new(a.seed, 0xF022);
    let deadline = Instant::now() + Duration::from_secs_f64(a.seconds);
    let limit = a.iterations.unwrap_or(usize::MAX);
    let mut best: Option<(f64, usize, CMatrix, Option<CMatrix>, BoundEvaluation)> = None;
    let mut violation: Option<BoundEvaluation> = None;
    let (mut iterations, mut fresh) = (0usize, 0usize);
    while iterations < limit && Instant::now() < deadline {
        let (t, s) = match &best {
            Some((_, _, t, s, _)) if mutable && iterations % 2 == 1 => {
                let size = 0.1 * operator_norm(t).max(1e-3) * rng.uniform_open().powi(3);
                let mut t2 = perturb(t, &mut rng, size);
                if family == Family::Hermitian {
                    t2 = t2.hermitian_part();
                }
                let s2 = s.as_ref().map(|s| perturb(s, &mut rng, size));
                (t2, s2)
            }
            _ => {
                fresh += 1;
                draw(fresh - 1)?
            }
        };
        iterations += 1;
        let e = match evaluate_normalized(&case, &t, s.as_ref(), &opts) {
            Ok(e) => e,
            Err(b) if b.is_untestable() || b.is_not_applicable() => continue,
            Err(b) => return usage(b.to_string()),
        };
        if !e.holds() && violation.is_none() {
            violation = Some(e.clone());
        }
        if let Some((k, r)) = tightness(&e) {
            if best.as_ref().is_none_or(|b| r > b.0) {
                best = Some((r, k, t, s, e));
            }
        }
    }

    println!("case={case}");
    println!("seed={}", a.seed);
    println!("family={}", family.name());
    println!("iterations={iterations}");
    let Some((ratio, link, t, s, e)) = best else {
        println!("status=no_candidate");
        return Ok(true);
    };
    io::write_matrix_json(&t, &a.out)?;
    println!("witness={}", a.out.display());
    if let Some(s) = &s {
        let p = second_path(&a.out);
        io::write_matrix_json(s, &p)?;
        println!("witness_s={}", p.display());
    }
    println!("best_ratio={}", num(ratio));
    println!("best_link={link}");
    println!("best_slack={}", num(e.links[link].slack));
    let violated = violation.is_some() || !e.holds();
    println!("violation={violated}");
    if verbose {
        print_evaluation(&e, true);
    }
    Ok(!violated)
}

fn cmd_catalogue(a: &CatalogueArgs) -> Result<bool> {
    let ids: Vec<CaseId> = match &a.case {
        Some(name) => match CaseId::from_name(name) {
            Some(id) => vec![id],
            None => return usage(format!("unknown case {name}")),
        },
        None => CaseId::ALL.to_vec(),
    };
    for id in ids {
        let params: Vec<&str> = id.params().iter().map(|p| p.name()).collect();
        println!(
            "id={} kind={} params={} chain={} statement=\"{}\"",
            id.name(),
            id.kind().name(),
            params.join(","),
            id.chain_names().join("<="),
            id.statement()
        );
    }
    Ok(true)
}
