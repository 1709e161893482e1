//! Runs the solver toolkit over instance files and renders result tables.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use antiband_core::bounds::{best_upper_bound, BoundsConfig, BoundsReport};
use antiband_core::exact::{brute_force, solve, SolveConfig, Status};
use antiband_core::heuristics::multi_start;
use antiband_core::io::{instance_name, read_instance};
use antiband_core::mip_export::{write_model, Formulation};
use antiband_core::npsolvers::greedy_coloring;
use antiband_core::{antibandwidth, Error, Graph};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Bounds,
    Heuristic,
    Solve,
    Export,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormulation {
    FLit,
    F,
    FEk,
    Ssp,
    Gcp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Csv,
    Markdown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub time_limit: Duration,
    pub subsolver_time_limit: Duration,
    pub formulation: ExportFormulation,
    /// Target for the feasibility model: asks for antibandwidth ≥ k + 1.
    pub k: Option<usize>,
    /// Upper bound for coefficient capping; computed when absent.
    pub ub: Option<usize>,
    /// Directory for exported models.
    pub export_dir: PathBuf,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Solve,
            time_limit: antiband_core::exact::DEFAULT_TIME_LIMIT,
            subsolver_time_limit: antiband_core::npsolvers::DEFAULT_SUBSOLVER_LIMIT,
            formulation: ExportFormulation::F,
            k: None,
            ub: None,
            export_dir: PathBuf::from("."),
            jobs: 1,
        }
    }
}

/// One report row. Columns a mode does not compute stay empty.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Record {
    pub name: String,
    pub vertices: Option<usize>,
    pub edges: Option<usize>,
    pub degree_bound: Option<usize>,
    pub size_bound: Option<usize>,
    pub stability_bound: Option<usize>,
    pub stability_time: Option<f64>,
    pub stability_optimal: Option<bool>,
    pub coloring_bound: Option<usize>,
    pub coloring_time: Option<f64>,
    pub coloring_optimal: Option<bool>,
    pub best_bound: Option<usize>,
    pub heuristic: Option<usize>,
    pub lower_bound: Option<usize>,
    pub upper_bound: Option<usize>,
    pub status: Option<String>,
    pub time: Option<f64>,
    pub gap: Option<f64>,
    pub model: Option<String>,
    pub error: Option<String>,
}

impl Record {
    fn error(name: String, message: String) -> Self {
        Record {
            name,
            status: Some("error".into()),
            error: Some(message),
            ..Record::default()
        }
    }

    fn fill_bounds(&mut self, b: &BoundsReport) {
        self.degree_bound = Some(b.degree);
        self.size_bound = Some(b.size);
        self.stability_bound = Some(b.stability.value);
        self.stability_time = Some(b.stability.elapsed.as_secs_f64());
        self.stability_optimal = Some(b.stability.optimal);
        self.coloring_bound = Some(b.coloring.value);
        self.coloring_time = Some(b.coloring.elapsed.as_secs_f64());
        self.coloring_optimal = Some(b.coloring.optimal);
        self.best_bound = Some(b.best);
    }
}

/// `100·(UB − LB)/LB`.
pub fn gap(lb: usize, ub: usize) -> Option<f64> {
    (lb > 0).then(|| 100.0 * (ub.saturating_sub(lb)) as f64 / lb as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub records: Vec<Record>,
}

impl Report {
    pub fn optimal_count(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.status.as_deref() == Some(Status::Optimal.as_str()))
            .count()
    }

    pub fn mean_gap(&self) -> Option<f64> {
        let gaps: Vec<f64> = self.records.iter().filter_map(|r| r.gap).collect();
        (!gaps.is_empty()).then(|| gaps.iter().sum::<f64>() / gaps.len() as f64)
    }

    fn footer(&self) -> String {
        let gap = self.mean_gap().map_or_else(|| "-".to_string(), |g| format!("{g:.2}"));
        format!(
            "instances: {}, optimal: {}, mean gap: {gap}",
            self.records.len(),
            self.optimal_count()
        )
    }

    pub fn render(&self, format: ReportFormat) -> anyhow::Result<String> {
        match format {
            ReportFormat::Csv => {
                let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
                w.write_record(HEADERS)?;
                for r in &self.records {
                    w.serialize(r)?;
                }
                let mut out = String::from_utf8(w.into_inner()?)?;
                writeln!(out, "# {}", self.footer())?;
                Ok(out)
            }
            ReportFormat::Markdown => Ok(self.markdown()),
        }
    }

    fn markdown(&self) -> String {
        let mut out = format!("| {} |\n|{}\n", HEADERS.join(" | "), "---|".repeat(HEADERS.len()));
        for r in &self.records {
            let cells = [
                r.name.clone(),
                cell(r.vertices),
                cell(r.edges),
                cell(r.degree_bound),
                cell(r.size_bound),
                cell(r.stability_bound),
                seconds(r.stability_time),
                cell(r.stability_optimal),
                cell(r.coloring_bound),
                seconds(r.coloring_time),
                cell(r.coloring_optimal),
                cell(r.best_bound),
                cell(r.heuristic),
                cell(r.lower_bound),
                cell(r.upper_bound),
                r.status.clone().unwrap_or_default(),
                seconds(r.time),
                r.gap.map(|g| format!("{g:.2}")).unwrap_or_default(),
                r.model.clone().unwrap_or_default(),
                r.error.clone().unwrap_or_default().replace('|', "/"),
            ];
            let _ = writeln!(out, "| {} |", cells.join(" | "));
        }
        let _ = writeln!(out, "\n{}", self.footer());
        out
    }
}

const HEADERS: [&str; 20] = [
    "name",
    "vertices",
    "edges",
    "degree_bound",
    "size_bound",
    "stability_bound",
    "stability_time",
    "stability_optimal",
    "coloring_bound",
    "coloring_time",
    "coloring_optimal",
    "best_bound",
    "heuristic",
    "lower_bound",
    "upper_bound",
    "status",
    "time",
    "gap",
    "model",
    "error",
];

fn cell<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn seconds(v: Option<f64>) -> String {
    v.map(|s| format!("{s:.2}")).unwrap_or_default()
}

/// Runs one instance. Errors cover unreadable or malformed files and
/// instances the requested mode cannot handle (e.g. edgeless graphs).
pub fn run_instance(path: &Path, config: &RunConfig) -> Result<Record, Error> {
    let start = Instant::now();
    let name = instance_name(path);
    let g = read_instance(path)?.graph;
    let mut rec = Record {
        name: name.clone(),
        vertices: Some(g.n()),
        edges: Some(g.m()),
        ..Record::default()
    };
    let bounds_config = BoundsConfig {
        subsolver_time_limit: config.subsolver_time_limit,
    };
    match config.mode {
        Mode::Bounds => {
            rec.fill_bounds(&best_upper_bound(&g, &bounds_config)?);
        }
        Mode::Heuristic => {
            let b = best_upper_bound(&g, &bounds_config)?;
            rec.fill_bounds(&b);
            let z = antibandwidth(&g, &multi_start(&g, b.best)?)?;
            rec.heuristic = Some(z);
            rec.lower_bound = Some(z);
            rec.upper_bound = Some(b.best);
            rec.status = Some(if z == b.best { Status::Optimal } else { Status::Feasible }.as_str().into());
            rec.gap = gap(z, b.best);
        }
        Mode::Solve => {
            let r = solve(
                &g,
                &SolveConfig {
                    time_limit: config.time_limit,
                    subsolver_time_limit: config.subsolver_time_limit,
                    ..SolveConfig::default()
                },
            )?;
            if let Some(b) = &r.bounds {
                rec.fill_bounds(b);
            }
            rec.status = Some(r.status.as_str().into());
            if r.status != Status::InfeasibleInput {
                rec.heuristic = Some(r.heuristic_value);
                rec.lower_bound = Some(r.lower_bound);
                rec.upper_bound = Some(r.upper_bound);
                rec.gap = gap(r.lower_bound, r.upper_bound);
            } else {
                rec.error = Some("graph is not connected".into());
            }
        }
        Mode::Oracle => {
            let ab = brute_force(&g)?;
            rec.lower_bound = Some(ab);
            rec.upper_bound = Some(ab);
            rec.status = Some(Status::Optimal.as_str().into());
            rec.gap = gap(ab, ab);
        }
        Mode::Export => {
            let formulation = export_formulation(&g, config)?;
            fs::create_dir_all(&config.export_dir)?;
            let file = config.export_dir.join(format!("{name}.{}.lp", formulation.tag()));
            let out = fs::File::create(&file).map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
            let stats = write_model(&g, &formulation, out)?;
            log::info!(
                "{}: {} variables, {} constraints",
                file.display(),
                stats.total_variables(),
                stats.total_constraints()
            );
            rec.model = Some(file.display().to_string());
        }
    }
    rec.time = Some(start.elapsed().as_secs_f64());
    Ok(rec)
}

fn export_formulation(g: &Graph, config: &RunConfig) -> Result<Formulation, Error> {
    let computed_ub = || -> Result<usize, Error> {
        match config.ub {
            Some(u) => Ok(u),
            None => Ok(best_upper_bound(
                g,
                &BoundsConfig {
                    subsolver_time_limit: config.subsolver_time_limit,
                },
            )?
            .best),
        }
    };
    Ok(match config.formulation {
        ExportFormulation::FLit => Formulation::FLit { ub: config.ub },
        ExportFormulation::F => Formulation::F {
            ub: computed_ub()?,
            vertex_n: false,
        },
        ExportFormulation::FEk => Formulation::FEk {
            k: config
                .k
                .ok_or_else(|| Error::InvalidArgument("the fek formulation needs --k".into()))?,
            clique_e: false,
        },
        ExportFormulation::Ssp => Formulation::Ssp,
        ExportFormulation::Gcp => Formulation::Gcp {
            color_ub: greedy_coloring(g).upper_value.max(1),
        },
    })
}

const INSTANCE_EXTENSIONS: [&str; 7] = ["mtx", "rnd", "txt", "edges", "el", "graph", "dat"];

/// Instance files directly inside `dir`, sorted by name.
pub fn instance_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        let hidden = path.file_name().is_some_and(|f| f.to_string_lossy().starts_with('.'));
        let known = path
            .extension()
            .is_some_and(|e| INSTANCE_EXTENSIONS.contains(&e.to_string_lossy().to_ascii_lowercase().as_str()));
        if path.is_file() && !hidden && known {
            files.push(path);
        }
    }
    files.sort_by_key(|p| (instance_name(p), p.clone()));
    Ok(files)
}

/// Runs every instance in `dir`; failures become error rows.
pub fn run_benchmark(dir: &Path, config: &RunConfig) -> io::Result<Report> {
    let files = instance_files(dir)?;
    if files.is_empty() {
        log::warn!("no instance files in {}", dir.display());
    }
    let run = |p: &PathBuf| {
        run_instance(p, config).unwrap_or_else(|e| Record::error(instance_name(p), e.to_string()))
    };
    let records = if config.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(io::Error::other)?;
        pool.install(|| files.par_iter().map(run).collect())
    } else {
        files.iter().map(run).collect()
    };
    Ok(Report { records })
}

/// Writes `text` to `out`, or to stdout when absent.
pub fn emit(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}
