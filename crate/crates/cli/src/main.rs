//! `logspec`: command-line front-end for the spectral-entropy pipeline.
//!
//! Exit codes: 0 success, 1 runtime or domain error, 2 usage error.

mod output;
mod parse;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use logspec::baseline::{BaselineEntry, BaselineTable};
use logspec::cramer::{self, CramerConfig, RescaleMode};
use logspec::distances::{truncated_distances, DistanceMultiset, PointSet};
use logspec::entropy::{full_pipeline_with, EntropyReport, WeightMode};
use logspec::experiments::{self, EnsembleParams};
use logspec::nullmodel::{self, NullEstimate, PoissonConfig, StabilizationReport};
use logspec::primes::{first_n_primes, sieve_up_to, PrimeTable};

use output::{Format, RunManifest};
use parse::sig12;

#[derive(Parser, Debug)]
#[command(name = "logspec", version, about = "Scale-invariant spectral entropy of distance distributions")]
struct Cli {
    /// Worker threads (0 = all available cores). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Result file format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Result file. Without it only the summary is printed.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Entropy of the truncated distance multiset around one base point.
    Entropy(EntropyArgs),
    /// Monte Carlo estimate of the Poisson null entropy.
    Null(NullArgs),
    /// Entropy under Cramér's random model.
    Cramer(CramerArgs),
    /// Entropy across a grid of radii for one base point.
    Stability(StabilityArgs),
    /// Prime entropy against the null model at the same radius.
    Deviation(DeviationArgs),
    /// Entropy distribution over random prime multisets.
    Ensemble(EnsembleArgs),
    /// Regenerate a null-baseline table entry.
    Baseline(BaselineArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Weights {
    Linear,
    Squared,
}

impl From<Weights> for WeightMode {
    fn from(w: Weights) -> Self {
        match w {
            Weights::Linear => WeightMode::Linear,
            Weights::Squared => WeightMode::Squared,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Rescale {
    None,
    PerBasePoint,
    PerGap,
}

impl From<Rescale> for RescaleMode {
    fn from(r: Rescale) -> Self {
        match r {
            Rescale::None => RescaleMode::None,
            Rescale::PerBasePoint => RescaleMode::PerBasePoint,
            Rescale::PerGap => RescaleMode::PerGap,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
struct PrimeSource {
    /// Sieve all primes up to this bound.
    #[arg(long = "prime-limit", value_parser = parse::positive_count, conflicts_with = "n_primes")]
    prime_limit: Option<u64>,
    /// Use the first n primes.
    #[arg(long = "n-primes", value_parser = parse::positive_count)]
    n_primes: Option<u64>,
}

impl PrimeSource {
    /// The requested table, or a sieve just large enough for `reach`.
    fn table(&self, reach: f64) -> logspec::Result<PrimeTable> {
        match (self.prime_limit, self.n_primes) {
            (_, Some(n)) => first_n_primes(n),
            (Some(limit), None) => sieve_up_to(limit),
            (None, None) => sieve_up_to((reach.floor() as u64).max(2)),
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
struct EntropyArgs {
    /// Base point.
    #[arg(long, value_parser = parse::non_negative_real)]
    p: f64,
    /// Truncation radius.
    #[arg(long = "R", value_parser = parse::positive_real)]
    radius: f64,
    /// Resolution (number of logarithmic bins, >= 2).
    #[arg(long = "M", value_parser = parse::resolution)]
    m: usize,
    #[command(flatten)]
    primes: PrimeSource,
    /// Read the point configuration from a one-value-per-line file instead of
    /// the primes.
    #[arg(long = "points-file", conflicts_with_all = ["prime_limit", "n_primes"])]
    points_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Weights::Linear)]
    weights: Weights,
    /// Also write the distance multiset, one distance per line.
    #[arg(long = "distances-out")]
    distances_out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
struct NullArgs {
    #[arg(long, value_parser = parse::positive_real)]
    lambda: f64,
    #[arg(long = "R", value_parser = parse::positive_real)]
    radius: f64,
    #[arg(long = "M", value_parser = parse::resolution)]
    m: usize,
    #[arg(long, value_parser = parse::replicates)]
    reps: usize,
    #[arg(long, value_parser = parse::count)]
    seed: u64,
    /// Also probe the stabilization of the log-bin range over --R-grid.
    #[arg(long = "check-stabilization", requires = "radius_grid")]
    check_stabilization: bool,
    #[arg(long = "R-grid", value_delimiter = ',', value_parser = parse::positive_real)]
    radius_grid: Option<Vec<f64>>,
}

#[derive(Args, Debug, Clone, Serialize)]
struct CramerArgs {
    /// Upper bound of the simulated integers.
    #[arg(long = "N", value_parser = parse::count)]
    n_max: u64,
    #[arg(long = "R", value_parser = parse::positive_real)]
    radius: f64,
    #[arg(long = "M", value_parser = parse::resolution)]
    m: usize,
    #[arg(long, value_parser = parse::count)]
    seed: u64,
    /// Coordinate whose nearest simulated point is the base point (default N/2).
    #[arg(long, value_parser = parse::count)]
    target: Option<u64>,
    #[arg(long, value_enum, default_value_t = Rescale::PerBasePoint)]
    rescale: Rescale,
    /// Run this many independent sets and report their mean.
    #[arg(long, value_parser = parse::replicates)]
    reps: Option<usize>,
    /// Write the simulated set in [3, N], one integer per line.
    #[arg(long = "export-set")]
    export_set: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
struct StabilityArgs {
    #[arg(long, value_parser = parse::count)]
    p: u64,
    #[arg(long = "M", value_parser = parse::resolution)]
    m: usize,
    #[arg(long = "R-grid", value_delimiter = ',', value_parser = parse::positive_real, required = true)]
    radius_grid: Vec<f64>,
    #[command(flatten)]
    primes: PrimeSource,
}

#[derive(Args, Debug, Clone, Serialize)]
struct DeviationArgs {
    #[arg(long, value_parser = parse::count)]
    p: u64,
    #[arg(long = "M", value_parser = parse::resolution)]
    m: usize,
    #[arg(long = "R", value_parser = parse::positive_real)]
    radius: f64,
    #[arg(long, value_parser = parse::replicates)]
    reps: usize,
    #[arg(long, value_parser = parse::count)]
    seed: u64,
    /// Null intensity (default 1 / ln p).
    #[arg(long, value_parser = parse::positive_real)]
    lambda: Option<f64>,
    #[command(flatten)]
    primes: PrimeSource,
}

#[derive(Args, Debug, Clone, Serialize)]
struct EnsembleArgs {
    /// Primes per multiset.
    #[arg(long, value_parser = parse::positive_count)]
    m: u64,
    #[arg(long, value_parser = parse::positive_count)]
    samples: u64,
    /// Prime range lo:hi.
    #[arg(long, value_parser = parse::range)]
    range: (u64, u64),
    #[arg(long = "R", value_parser = parse::positive_real)]
    radius: f64,
    #[arg(long = "M", value_parser = parse::resolution)]
    resolution: usize,
    #[arg(long, value_parser = parse::count)]
    seed: u64,
    /// Subtract the null baseline mean for this M from every sample.
    #[arg(long)]
    center: bool,
    #[command(flatten)]
    primes: PrimeSource,
}

#[derive(Args, Debug, Clone, Serialize)]
struct BaselineArgs {
    #[arg(long = "M", value_parser = parse::resolution)]
    m: usize,
    #[arg(long, value_parser = parse::positive_real, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long = "R", value_parser = parse::positive_real, default_value_t = 1e6)]
    radius: f64,
    #[arg(long, value_parser = parse::replicates, default_value_t = 500)]
    reps: usize,
    #[arg(long, value_parser = parse::count)]
    seed: u64,
    /// Existing table to extend (default: the active table).
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(logspec::Error),
    Io(std::io::Error),
}

impl From<logspec::Error> for Failure {
    fn from(e: logspec::Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    format: Format,
    out: Option<PathBuf>,
    threads: usize,
}

impl Ctx {
    fn manifest<A: Serialize>(&self, name: &str, args: &A, seed: Option<u64>) -> RunManifest {
        let params = serde_json::to_value(args).expect("arguments serialize");
        RunManifest::new(name, params, seed, self.threads)
    }

    /// Writes the result in the selected format, if an output path was given.
    fn emit<T: Serialize, Row: Serialize>(
        &self,
        mut manifest: RunManifest,
        result: &T,
        header: &[&str],
        rows: &[Row],
    ) -> Outcome {
        let Some(path) = &self.out else { return Ok(()) };
        manifest.outputs.push(path.display().to_string());
        match self.format {
            Format::Json => output::write_json(path, &manifest, result)?,
            Format::Csv => {
                let side = output::sidecar(path, ".manifest.json");
                manifest.outputs.push(side.display().to_string());
                output::write_csv(path, header, rows)?;
                output::write_manifest(&side, &manifest)?;
            }
        }
        Ok(())
    }
}

const ENTROPY_HEADER: &[&str] = &["M", "H", "k", "weight"];

fn entropy_rows(r: &EntropyReport) -> Vec<(usize, f64, usize, f64)> {
    r.weights.iter().enumerate().map(|(k, &w)| (r.m, r.h, k + 1, w)).collect()
}

fn integral_base(p: f64) -> Result<u64, Failure> {
    if p.fract() != 0.0 || p >= 9.2e18 {
        return Err(Failure::Usage(format!(
            "--p must be an integer when distances are taken to primes, got {p}"
        )));
    }
    Ok(p as u64)
}

fn write_distances(path: &Path, d: &DistanceMultiset) -> Outcome {
    let file = std::fs::File::create(path)?;
    d.write_lines(std::io::BufWriter::new(file))?;
    Ok(())
}

fn cmd_entropy(ctx: &Ctx, a: &EntropyArgs) -> Outcome {
    let (distances, model) = match &a.points_file {
        Some(path) => {
            let file = std::fs::File::open(path)?;
            let set = PointSet::read_lines(std::io::BufReader::new(file))?;
            (set.truncated_distances(a.p, a.radius)?, "points")
        }
        None => {
            let p = integral_base(a.p)?;
            let table = a.primes.table(a.p + a.radius)?;
            (truncated_distances(p, &table, a.radius)?, "primes")
        }
    };
    if let Some(path) = &a.distances_out {
        write_distances(path, &distances)?;
    }
    let mut report = full_pipeline_with(&distances, a.m, a.weights.into())?;
    report.provenance.model = model.into();
    println!("{}", sig12(report.h));
    ctx.emit(ctx.manifest("entropy", a, None), &report, ENTROPY_HEADER, &entropy_rows(&report))
}

#[derive(Serialize)]
struct NullResult {
    #[serde(flatten)]
    estimate: NullEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    stabilization: Option<StabilizationReport>,
}

fn cmd_null(ctx: &Ctx, a: &NullArgs) -> Outcome {
    let config = PoissonConfig::new(a.lambda, a.radius, a.seed)?;
    let estimate = nullmodel::estimate_null_entropy(a.m, &config, a.reps)?;
    println!("{} {}", sig12(estimate.mean_h), sig12(estimate.std_error));
    let stabilization = match (&a.radius_grid, a.check_stabilization) {
        (Some(grid), true) => {
            let report = nullmodel::check_bin_stabilization(a.lambda, grid, a.reps, a.seed)?;
            for row in &report.rows {
                println!(
                    "R={} |log dmax - log R|={} mean dmin={} +- {}",
                    row.radius,
                    sig12(row.mean_abs_log_dmax_gap),
                    sig12(row.mean_dmin),
                    sig12(row.stderr_dmin)
                );
            }
            Some(report)
        }
        _ => None,
    };
    let rows: Vec<(usize, f64)> = estimate.per_replicate_h.iter().copied().enumerate().collect();
    let manifest = ctx.manifest("null", a, Some(a.seed));
    if let (Some(report), Some(path), Format::Csv) = (&stabilization, &ctx.out, ctx.format) {
        let side = output::sidecar(path, ".stabilization.csv");
        let srows: Vec<_> = report
            .rows
            .iter()
            .map(|r| (r.radius, r.mean_abs_log_dmax_gap, r.mean_log_dmin, r.mean_dmin, r.stderr_dmin, r.replicates))
            .collect();
        output::write_csv(
            &side,
            &["R", "mean_abs_log_dmax_gap", "mean_log_dmin", "mean_dmin", "stderr_dmin", "replicates"],
            &srows,
        )?;
    }
    ctx.emit(manifest, &NullResult { estimate, stabilization }, &["replicate", "H"], &rows)
}

fn cmd_cramer(ctx: &Ctx, a: &CramerArgs) -> Outcome {
    let config = CramerConfig::new(a.n_max, a.seed, a.rescale.into())?;
    let target = a.target.unwrap_or(a.n_max / 2);
    if let Some(path) = &a.export_set {
        let set = cramer::simulate_cramer_set(&config);
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        for n in set {
            std::io::Write::write_fmt(&mut out, format_args!("{n}\n"))?;
        }
    }
    let manifest = ctx.manifest("cramer", a, Some(a.seed));
    match a.reps {
        None => {
            let report = cramer::cramer_entropy(&config, target, a.radius, a.m)?;
            println!("{}", sig12(report.h));
            ctx.emit(manifest, &report, ENTROPY_HEADER, &entropy_rows(&report))
        }
        Some(reps) => {
            let ens = cramer::cramer_ensemble(a.n_max, a.seed, reps, target, a.radius, a.m, a.rescale.into())?;
            println!("{} {}", sig12(ens.mean_h), sig12(ens.std_error));
            let rows: Vec<_> = ens
                .per_replicate_h
                .iter()
                .zip(&ens.base_points)
                .enumerate()
                .map(|(i, (&h, &b))| (i, b, h))
                .collect();
            ctx.emit(manifest, &ens, &["replicate", "base_point", "H"], &rows)
        }
    }
}

fn cmd_stability(ctx: &Ctx, a: &StabilityArgs) -> Outcome {
    let reach = a.p as f64 + a.radius_grid.iter().copied().fold(0.0, f64::max);
    let table = a.primes.table(reach)?;
    let profile = experiments::stability_profile(a.p, a.m, &a.radius_grid, &table)?;
    for (r, h) in profile.radii.iter().zip(&profile.h_values) {
        println!("{r} {}", sig12(*h));
    }
    let rows: Vec<_> = profile
        .radii
        .iter()
        .zip(&profile.h_values)
        .zip(&profile.envelope)
        .map(|((&r, &h), &e)| (r, h, e))
        .collect();
    ctx.emit(ctx.manifest("stability", a, None), &profile, &["R", "H", "envelope"], &rows)
}

fn cmd_deviation(ctx: &Ctx, a: &DeviationArgs) -> Outcome {
    let table = a.primes.table(a.p as f64 + a.radius)?;
    let d = experiments::deviation_profile(a.p, a.m, a.radius, &table, a.seed, a.reps, a.lambda)?;
    println!(
        "{} {} {}",
        sig12(d.h_prime),
        sig12(d.delta),
        d.z_score.map(sig12).unwrap_or_else(|| "NA".into())
    );
    let row = [(
        d.base_point,
        d.m,
        d.radius,
        d.h_prime,
        d.null_mean,
        d.null_stderr,
        d.delta,
        d.z_score,
        d.lambda,
        d.replicates,
        d.seed,
    )];
    ctx.emit(
        ctx.manifest("deviation", a, Some(a.seed)),
        &d,
        &["p", "M", "R", "H_prime", "null_mean", "null_stderr", "delta", "z_score", "lambda", "replicates", "seed"],
        &row,
    )
}

fn cmd_ensemble(ctx: &Ctx, a: &EnsembleArgs) -> Outcome {
    let table = a.primes.table(a.range.1 as f64 + a.radius)?;
    let center = if a.center {
        Some(BaselineTable::from_env()?.reference(a.resolution)?.mean)
    } else {
        None
    };
    let params = EnsembleParams {
        size: a.m as usize,
        sample_count: a.samples as usize,
        prime_range: a.range,
        radius: a.radius,
        m: a.resolution,
        seed: a.seed,
        center,
    };
    let dist = experiments::ensemble_distribution(&params, &table)?;
    println!(
        "{}",
        dist.quantiles.iter().map(|&q| sig12(q)).collect::<Vec<_>>().join(" ")
    );
    let rows: Vec<_> = dist
        .samples
        .iter()
        .zip(&dist.draws)
        .enumerate()
        .map(|(i, (&h, pts))| {
            let joined = pts.iter().map(u64::to_string).collect::<Vec<_>>().join(";");
            (i, h, joined)
        })
        .collect();
    ctx.emit(ctx.manifest("ensemble", a, Some(a.seed)), &dist, &["sample", "H", "points"], &rows)
}

fn cmd_baseline(ctx: &Ctx, a: &BaselineArgs) -> Outcome {
    let Some(path) = &ctx.out else {
        return Err(Failure::Usage("baseline requires --out <path>".into()));
    };
    let mut table = match &a.table {
        Some(p) => BaselineTable::load(p)?,
        None => BaselineTable::from_env()?,
    };
    let config = PoissonConfig::new(a.lambda, a.radius, a.seed)?;
    let estimate = nullmodel::estimate_null_entropy(a.m, &config, a.reps)?;
    println!("{} {}", sig12(estimate.mean_h), sig12(estimate.std_error));
    table.upsert(BaselineEntry::from(&estimate));
    std::fs::write(path, table.to_json() + "\n")?;
    let mut manifest = ctx.manifest("baseline", a, Some(a.seed));
    manifest.outputs.push(path.display().to_string());
    output::write_manifest(&output::sidecar(path, ".manifest.json"), &manifest)?;
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    let threads = if cli.threads == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        cli.threads
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot start thread pool: {e}")))?;
    let ctx = Ctx {
        format: cli.format,
        out: cli.out.clone(),
        threads,
    };
    match &cli.command {
        Command::Entropy(a) => cmd_entropy(&ctx, a),
        Command::Null(a) => cmd_null(&ctx, a),
        Command::Cramer(a) => cmd_cramer(&ctx, a),
        Command::Stability(a) => cmd_stability(&ctx, a),
        Command::Deviation(a) => cmd_deviation(&ctx, a),
        Command::Ensemble(a) => cmd_ensemble(&ctx, a),
        Command::Baseline(a) => cmd_baseline(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error[{}]: {e}", e.name());
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error[IoError]: {e}");
            ExitCode::from(1)
        }
    }
}
