use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use antiband_cli::{emit, run_benchmark, run_instance, ExportFormulation, Mode, Report, ReportFormat, RunConfig};
use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Bounds,
    Heuristic,
    Solve,
    Export,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulationArg {
    Flit,
    F,
    Fek,
    Ssp,
    Gcp,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Markdown,
}

/// Bounds, heuristics and exact solutions for the antibandwidth problem.
#[derive(Parser)]
#[command(name = "antiband", version)]
struct Args {
    /// Instance file, or a directory of instances.
    path: PathBuf,

    #[arg(long, value_enum, default_value = "solve")]
    mode: ModeArg,

    /// Total time limit per instance, in seconds.
    #[arg(long, default_value_t = 1800.0, value_parser = positive_seconds)]
    time_limit: f64,

    /// Time limit for each stable-set / coloring sub-solve, in seconds.
    #[arg(long, default_value_t = 10.0, value_parser = positive_seconds)]
    sub_time_limit: f64,

    /// Model to write in export mode.
    #[arg(long, value_enum, default_value = "f")]
    formulation: FormulationArg,

    /// For `--formulation fek`: the model asks for antibandwidth >= k + 1.
    #[arg(long)]
    k: Option<usize>,

    /// Upper bound used for coefficient capping in export mode.
    #[arg(long)]
    ub: Option<usize>,

    /// Report file (default: stdout); in export mode, the model directory.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,

    /// Instances solved in parallel in directory mode.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
}

fn positive_seconds(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number of seconds, got {s:?}")),
    }
}

const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    if let Ok(seed) = std::env::var("ANTIBAND_SEED") {
        log::debug!("ANTIBAND_SEED={seed} ignored: all algorithms are deterministic");
    }
    if matches!(args.formulation, FormulationArg::Fek) && matches!(args.mode, ModeArg::Export) && args.k.is_none() {
        eprintln!("error: --formulation fek requires --k");
        return ExitCode::from(EXIT_USAGE);
    }
    let export = matches!(args.mode, ModeArg::Export);
    let config = RunConfig {
        mode: match args.mode {
            ModeArg::Bounds => Mode::Bounds,
            ModeArg::Heuristic => Mode::Heuristic,
            ModeArg::Solve => Mode::Solve,
            ModeArg::Export => Mode::Export,
            ModeArg::Oracle => Mode::Oracle,
        },
        time_limit: Duration::from_secs_f64(args.time_limit),
        subsolver_time_limit: Duration::from_secs_f64(args.sub_time_limit),
        formulation: match args.formulation {
            FormulationArg::Flit => ExportFormulation::FLit,
            FormulationArg::F => ExportFormulation::F,
            FormulationArg::Fek => ExportFormulation::FEk,
            FormulationArg::Ssp => ExportFormulation::Ssp,
            FormulationArg::Gcp => ExportFormulation::Gcp,
        },
        k: args.k,
        ub: args.ub,
        export_dir: if export {
            args.out.clone().unwrap_or_else(|| PathBuf::from("."))
        } else {
            PathBuf::from(".")
        },
        jobs: args.jobs as usize,
    };
    let format = match args.format {
        FormatArg::Csv => ReportFormat::Csv,
        FormatArg::Markdown => ReportFormat::Markdown,
    };

    let report = if args.path.is_dir() {
        match run_benchmark(&args.path, &config) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {}: {e}", args.path.display());
                return ExitCode::from(EXIT_INPUT);
            }
        }
    } else {
        match run_instance(&args.path, &config) {
            Ok(rec) => Report { records: vec![rec] },
            Err(e) => {
                eprintln!("error: {}: {e}", args.path.display());
                return ExitCode::from(EXIT_INPUT);
            }
        }
    };
    let text = match report.render(format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let out = if export { None } else { args.out.as_deref() };
    if let Err(e) = emit(&text, out) {
        eprintln!("error: writing report: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
