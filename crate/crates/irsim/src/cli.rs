//! Command-line front end: `run`, `batch`, `validate`, and
//! `threshold-table` subcommands over the library entry points.
//!
//! Exit codes: 0 success, 1 config/runtime/check failure, 2 usage errors
//! (malformed flags, rejected by the argument parser).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{ConfigError, PhaseMode, SimConfig};
use crate::engine::{run_batch, run_simulation};
use crate::report;
use crate::sensing::{exact_threshold, gaussian_threshold};
use crate::validate::run_all_checks;

#[derive(Parser, Debug)]
#[command(name = "irsim", version, about = "Slot-level IRS-assisted uplink simulator")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one seeded simulation and write the output bundle.
    Run(RunArgs),
    /// Run one simulation per seed and aggregate the network metrics.
    Batch(BatchArgs),
    /// Run the fast self-check suite.
    Validate,
    /// Print exact vs Gaussian energy-detection thresholds.
    ThresholdTable(ThresholdArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Config file (key = value text); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed override (beats config file and IRSIM_SEED).
    #[arg(long)]
    seed: Option<u64>,
    /// Slot-count override.
    #[arg(long)]
    slots: Option<usize>,
    /// Phase-control mode override.
    #[arg(long, value_parser = parse_mode)]
    mode: Option<PhaseMode>,
    /// Output directory for the bundle files.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct BatchArgs {
    /// Config file (key = value text); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seeds: an inclusive range `a..b` or a comma list `s1,s2,...`.
    #[arg(long)]
    seeds: String,
    /// Slot-count override.
    #[arg(long)]
    slots: Option<usize>,
    /// Phase-control mode override.
    #[arg(long, value_parser = parse_mode)]
    mode: Option<PhaseMode>,
    /// Output directory (per-seed subdirectories plus aggregate file).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    /// Sample counts M, comma-separated.
    #[arg(long, default_value = "8,32,128,512,1024")]
    samples: String,
    /// Target false-alarm probabilities, comma-separated.
    #[arg(long, default_value = "0.01,0.05,0.1")]
    pfa: String,
}

fn parse_mode(s: &str) -> Result<PhaseMode, String> {
    PhaseMode::parse(s).ok_or_else(|| format!("expected `geometric` or `csi`, got `{s}`"))
}

/// Parse and dispatch; the binary's whole `main`.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Batch(args) => cmd_batch(args),
        Command::Validate => cmd_validate(),
        Command::ThresholdTable(args) => cmd_threshold_table(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load_config(path: Option<&PathBuf>) -> Result<SimConfig, String> {
    let text = match path {
        Some(p) => fs::read_to_string(p).map_err(|e| format!("reading {}: {e}", p.display()))?,
        None => String::new(),
    };
    SimConfig::load(&text).map_err(|e: ConfigError| e.to_string())
}

fn apply_overrides(
    cfg: &mut SimConfig,
    seed: Option<u64>,
    slots: Option<usize>,
    mode: Option<PhaseMode>,
) -> Result<(), String> {
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(t) = slots {
        cfg.num_slots = t;
        if cfg.window > t {
            // A short run caps the warm-up window rather than erroring on
            // the default config's 20-slot window.
            cfg.window = t.max(1);
        }
    }
    if let Some(m) = mode {
        cfg.phase_mode = m;
    }
    cfg.validate().map_err(|e| e.to_string())
}

fn cmd_run(args: RunArgs) -> Result<(), String> {
    let mut cfg = load_config(args.config.as_ref())?;
    apply_overrides(&mut cfg, args.seed, args.slots, args.mode)?;
    let result = run_simulation(&cfg).map_err(|e| e.to_string())?;
    report::write_bundle(&result, &args.out).map_err(|e| e.to_string())?;
    print!("{}", report::render_stdout_report(&result));
    eprintln!(
        "wrote {} files to {} in {:.1} ms",
        report::RUN_FILES.len(),
        args.out.display(),
        result.wall_time.as_secs_f64() * 1e3
    );
    Ok(())
}

fn cmd_batch(args: BatchArgs) -> Result<(), String> {
    let mut cfg = load_config(args.config.as_ref())?;
    apply_overrides(&mut cfg, None, args.slots, args.mode)?;
    let seeds = parse_seeds(&args.seeds)?;
    let batch = run_batch(&cfg, &seeds).map_err(|e| e.to_string())?;
    fs::create_dir_all(&args.out).map_err(|e| e.to_string())?;
    for (seed, run) in seeds.iter().zip(&batch.runs) {
        let dir = args.out.join(format!("seed_{seed}"));
        report::write_bundle(run, &dir).map_err(|e| e.to_string())?;
    }
    let aggregate = report::render_aggregate(&batch, &seeds);
    fs::write(args.out.join(report::AGGREGATE_FILE), &aggregate).map_err(|e| e.to_string())?;
    print!("{aggregate}");
    Ok(())
}

fn cmd_validate() -> Result<(), String> {
    let checks = run_all_checks();
    let mut failed = 0;
    for c in &checks {
        println!("{} {} — {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        if !c.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(format!("{failed} of {} checks failed", checks.len()))
    }
}

fn cmd_threshold_table(args: ThresholdArgs) -> Result<(), String> {
    let samples = parse_usize_list(&args.samples)?;
    let pfas = parse_f64_list(&args.pfa)?;
    println!("M,pfa,exact_over_sigma2,gaussian_over_sigma2,rel_gap");
    for &m in &samples {
        for &pfa in &pfas {
            let exact = exact_threshold(1.0, m, pfa).map_err(|e| e.to_string())?;
            let gauss = gaussian_threshold(1.0, m, pfa).map_err(|e| e.to_string())?;
            let gap = (gauss - exact).abs() / exact;
            println!("{m},{pfa},{exact:.10},{gauss:.10},{gap:.3e}");
        }
    }
    Ok(())
}

/// Seeds syntax: `a..b` (inclusive) or `s1,s2,...`.
pub fn parse_seeds(spec: &str) -> Result<Vec<u64>, String> {
    let spec = spec.trim();
    if let Some((a, b)) = spec.split_once("..") {
        let lo: u64 = a.trim().parse().map_err(|_| format!("bad range start `{a}`"))?;
        let hi: u64 = b.trim().parse().map_err(|_| format!("bad range end `{b}`"))?;
        if hi < lo {
            return Err(format!("empty seed range {lo}..{hi}"));
        }
        Ok((lo..=hi).collect())
    } else {
        spec.split(',')
            .map(|s| s.trim().parse::<u64>().map_err(|_| format!("bad seed `{s}`")))
            .collect()
    }
}

fn parse_usize_list(spec: &str) -> Result<Vec<usize>, String> {
    spec.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| format!("bad integer `{s}`")))
        .collect()
}

fn parse_f64_list(spec: &str) -> Result<Vec<f64>, String> {
    spec.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad number `{s}`")))
        .collect()
}
