//! `walshu`: build, weight, approximate with, verify and inspect universal
//! double Walsh series.
//!
//! Exit status is 0 when every checked condition holds, 2 when the run
//! finished but some condition is unverified, and 3 on any hard error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use walsh_universal::check::{Report, Status};
use walsh_universal::io::{trace_csv, write_atomic, RunConfig, SeriesFile, Target};
use walsh_universal::lemma::{Limits, Mode};
use walsh_universal::series::coeff_power_norm;
use walsh_universal::universal::{
    build_universal, build_weight, generate_catalog, greedy_subseries, verify_block, verify_construction,
    CatalogParams, Construction, OnFailure, WeightFunction, TAIL_EXPONENTS,
};

const EXIT_UNVERIFIED: u8 = 2;
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "walshu", version, about = "Universal double Walsh series in weighted L1")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the series block by block and write the series file.
    Build(BuildArgs),
    /// Attach the weight function to an existing series file.
    Weight(WeightArgs),
    /// Greedy subseries approximation of a target; writes a CSV trace.
    Approx(ApproxArgs),
    /// Recompute every stored condition and compare with the stored margins.
    Verify(FileArg),
    /// Summary of a series file.
    Info(FileArg),
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// Also build the weight for this epsilon.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value = "strict")]
    mode: Mode,
    /// Every frequency stays below this bound.
    #[arg(long, default_value_t = 1 << 10)]
    fmax: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    catalog_rank: u32,
    #[arg(long, default_value_t = 3)]
    catalog_repeats: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct WeightArgs {
    series: PathBuf,
    #[arg(long)]
    epsilon: f64,
    /// Defaults to rewriting the input file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ApproxArgs {
    series: PathBuf,
    #[arg(long)]
    target: PathBuf,
    #[arg(long, default_value_t = 3)]
    steps: usize,
    /// Builds a weight on the fly when the file has none.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Smallest grid rank (both axes) for evaluating the target.
    #[arg(long, default_value_t = 0)]
    grid_rank: u32,
    /// CSV output; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FileArg {
    series: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Weight(a) => cmd_weight(a),
        Command::Approx(a) => cmd_approx(a),
        Command::Verify(a) => cmd_verify(&a.series),
        Command::Info(a) => cmd_info(&a.series),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_UNVERIFIED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn print_report(title: &str, report: &Report) {
    println!("{title}");
    for c in &report.checks {
        println!("  {c}");
    }
}

fn load(path: &Path) -> Result<(SeriesFile, Construction, Option<WeightFunction>)> {
    let file = SeriesFile::load(path).with_context(|| format!("reading {}", path.display()))?;
    let (construction, weight) = file.to_construction()?;
    Ok((file, construction, weight))
}

fn cmd_build(a: BuildArgs) -> Result<bool> {
    let config = RunConfig {
        depth: a.depth,
        epsilon: a.epsilon,
        limits: Limits { mode: a.mode, fmax: a.fmax, seed: a.seed, ..Limits::default() },
        catalog: CatalogParams { max_rank: a.catalog_rank, repeats: a.catalog_repeats, ..CatalogParams::default() },
        on_failure: OnFailure::Fallback,
    };
    config.validate()?;
    let catalog = generate_catalog(config.catalog)?;
    let (construction, error) = match build_universal(&catalog, config.depth, &config.limits, config.on_failure) {
        Ok(c) => (c, None),
        Err(e) => {
            let msg = e.to_string();
            (*e.partial, Some(msg))
        }
    };
    for b in &construction.blocks {
        let title = format!("block {} [{}, {}) h = {}", b.s, b.start, b.end, b.h);
        print_report(&title, &b.report);
        if let Some(f) = &b.failure {
            println!("  builder: {f}");
        }
    }
    let mut ok = construction.all_verified();
    let mut weight = None;
    let mut error = error.map(|msg| format!("{msg} (partial series with {} blocks written)", construction.depth()));
    if let (Some(eps), None) = (config.epsilon, &error) {
        match build_weight(&construction.blocks, eps).and_then(|w| w.check().map(|r| (w, r))) {
            Ok((w, report)) => {
                print_report(&format!("weight eps = {eps}, n0 = {}", w.n0), &report);
                ok &= report.all_passed();
                weight = Some(w);
            }
            Err(e) => error = Some(format!("weight: {e} (series written without weight)")),
        }
    }
    let file = SeriesFile::new(config, &construction, weight.as_ref());
    file.save(&a.out).with_context(|| format!("writing {}", a.out.display()))?;
    println!("N_s = {:?}", construction.boundaries());
    println!("wrote {}", a.out.display());
    if let Some(msg) = error {
        bail!(msg);
    }
    Ok(ok)
}

fn cmd_weight(a: WeightArgs) -> Result<bool> {
    let (mut file, construction, _) = load(&a.series)?;
    let w = build_weight(&construction.blocks, a.epsilon)?;
    let report = w.check()?;
    print_report(&format!("weight eps = {}, n0 = {}", a.epsilon, w.n0), &report);
    file.config.epsilon = Some(a.epsilon);
    file.weight = SeriesFile::new(file.config.clone(), &construction, Some(&w)).weight;
    let out = a.out.unwrap_or(a.series);
    file.save(&out).with_context(|| format!("writing {}", out.display()))?;
    Ok(report.all_passed())
}

fn cmd_approx(a: ApproxArgs) -> Result<bool> {
    let (_, construction, stored) = load(&a.series)?;
    let target = Target::load(&a.target).with_context(|| format!("reading {}", a.target.display()))?;
    let weight = match (stored, a.epsilon) {
        (_, Some(eps)) => build_weight(&construction.blocks, eps)?,
        (Some(w), None) => w,
        (None, None) => bail!("series file has no weight; pass --epsilon"),
    };
    let grid = target.to_grid((a.grid_rank, a.grid_rank))?;
    let trace = greedy_subseries(&grid, &construction, &weight, a.steps)?;
    let csv = trace_csv(&trace);
    match &a.out {
        Some(path) => write_atomic(path, csv.as_bytes()).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{csv}"),
    }
    if let Some(u) = &trace.unreached {
        eprintln!("target not approximable at step {}: best residual {:e} vs bound {:e}", u.step, u.best_residual, u.bound);
    }
    Ok(trace.all_verified() && construction.all_verified())
}

fn cmd_verify(path: &Path) -> Result<bool> {
    let (_, construction, weight) = load(path)?;
    let mut ok = true;
    for b in &construction.blocks {
        let fresh = verify_block(b.s, &b.f, b.start, b.end, &b.coeffs, &b.set, construction.mode, construction.pairs)?;
        for (old, new) in b.report.checks.iter().zip(&fresh.checks) {
            if old.name != new.name || old.value.to_bits() != new.value.to_bits() || old.status != new.status {
                println!("block {}: stored margin differs for {}: stored {}, recomputed {}", b.s, new.name, old.value, new.value);
                ok = false;
            }
        }
        if b.report.checks.len() != fresh.checks.len() {
            println!("block {}: stored report has {} checks, recomputed {}", b.s, b.report.len(), fresh.len());
            ok = false;
        }
    }
    if let Some(w) = &weight {
        let fresh = build_weight(&construction.blocks, w.eps)?;
        if fresh != *w {
            println!("weight: stored levels differ from the recomputed weight");
            ok = false;
        }
    }
    let report = verify_construction(&construction, weight.as_ref())?;
    print_report(&format!("verify {}", path.display()), &report);
    let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    if !failed.is_empty() {
        println!("failed: {}", failed.join("; "));
    }
    let unclaimed = report.checks.iter().filter(|c| c.status == Status::NotClaimed).count();
    if unclaimed > 0 {
        println!("{unclaimed} conditions not claimed in {} mode", construction.mode);
    }
    Ok(ok && failed.is_empty() && construction.blocks.iter().all(|b| b.failure.is_none()))
}

fn cmd_info(path: &Path) -> Result<bool> {
    let (file, construction, weight) = load(path)?;
    println!("format version {}", file.version);
    println!("mode {}, seed {}, fmax {}", file.config.limits.mode, file.config.limits.seed, file.config.limits.fmax);
    println!("depth {}", construction.depth());
    println!("N_s = {:?}", construction.boundaries());
    println!("nnz {}", construction.series.nnz());
    for b in &construction.blocks {
        let status = match (&b.failure, b.report.all_passed()) {
            (Some(_), _) => "fallback",
            (None, true) => "verified",
            (None, false) => "unverified",
        };
        println!("block {} [{}, {}) nnz {} |E_s| {} h {} {}", b.s, b.start, b.end, b.coeffs.len(), b.set.measure(), b.h, status);
    }
    let coeffs = construction.series.coeff_vec();
    for q in TAIL_EXPONENTS {
        println!("sum |c|^{q} = {:e}", coeff_power_norm(&coeffs, q)?);
    }
    if let Some(w) = weight {
        println!("weight eps {} n0 {} |mu != 1| {}", w.eps, w.n0, w.reduced_set().measure());
        for l in &w.levels {
            println!("  mu_{} = {:e}", l.n, l.mu);
        }
    }
    Ok(true)
}
