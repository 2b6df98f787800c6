//! Command-line front end for the filling library.

pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use filling::continuum::{allocate, count_ways, predicted_uncovered};
use filling::genetic::{run_ga, GaConfig};
use filling::heuristic::{enumerate_all, fill_sequence, way_search_count, HaConfig};
use filling::io::{Method, SolutionJson};
use filling::medial_axis::BranchCase;
use filling::{compute_medial_axis, FillError, FillingSolution, MedialAxis, Polygon};

use report::{compare_polygon, RunReport};
use svg::{render_grid, render_svg, Panel};

#[derive(Debug, Parser)]
#[command(name = "filling", version, about = "Fill simple polygons with overlapping maximal discs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Ha,
    Ga,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Medial axis as JSON, optionally drawn as SVG.
    Ma {
        polygon: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Best filling with N discs.
    Fill {
        polygon: PathBuf,
        #[arg(short = 'n', long = "n")]
        n: usize,
        #[arg(long, value_enum, default_value = "ha")]
        method: MethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        seeds: usize,
        #[arg(long = "pop-mult", default_value_t = 100)]
        pop_mult: usize,
        #[arg(long, default_value_t = 2)]
        neighborhood: usize,
        #[arg(long = "enumerate-all")]
        enumerate_all: bool,
        #[arg(long = "pin-junctions")]
        pin_junctions: bool,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Heuristic fillings for N = 1..=n-max.
    Sweep {
        polygon: PathBuf,
        #[arg(long = "n-max")]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        neighborhood: usize,
        #[arg(long = "pin-junctions")]
        pin_junctions: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Directory receiving one solution file per N.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Heuristic vs genetic comparison over a directory of polygons.
    Compare {
        corpus: PathBuf,
        #[arg(long = "n-max")]
        n_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        seeds: usize,
        #[arg(long = "pop-mult", default_value_t = 100)]
        pop_mult: usize,
        #[arg(long, default_value_t = 2)]
        neighborhood: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Large-N allocation and predicted coverage.
    Continuum {
        polygon: PathBuf,
        #[arg(short = 'n', long = "n")]
        n: usize,
    },
    /// Number of ways to place N discs on K pieces with J junctions.
    Ways {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        j: u64,
        #[arg(short = 'n', long = "n")]
        n: u64,
    },
    /// Re-validates a solution file.
    Check { solution: PathBuf },
}

/// Failure with its process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Fill(FillError),
}

impl From<FillError> for CliError {
    fn from(e: FillError) -> Self {
        CliError::Fill(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Fill(FillError::Numeric(_) | FillError::MedialAxis(_) | FillError::ExcludedBranch(_)) => 3,
            CliError::Fill(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Fill(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_polygon(path: &Path) -> CliResult<Polygon> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(Polygon::from_json_str(&text)?)
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::Fill(FillError::Io(e)))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path.extension().map(|e| format!(".{}", e.to_string_lossy())).unwrap_or_default();
    path.with_file_name(format!("{stem}_{suffix}{ext}"))
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Ha => "ha",
        Method::Ga => "ga",
    }
}

fn cmd_ma(polygon: &Path, json: Option<&Path>, svg_out: Option<&Path>) -> CliResult<()> {
    let poly = read_polygon(polygon)?;
    let m = compute_medial_axis(&poly)?;
    let text = serde_json::to_string_pretty(&m.to_json()).map_err(FillError::from)?;
    match json {
        Some(p) => write_file(p, &text)?,
        None => println!("{text}"),
    }
    if let Some(p) = svg_out {
        write_file(p, &render_svg(&Panel { title: "medial axis".into(), polygon: &poly, axis: Some(&m), discs: &[] }))?;
    }
    Ok(())
}

struct FillArgs {
    n: usize,
    method: MethodArg,
    ha: HaConfig,
    ga: GaConfig,
    enumerate_all: bool,
}

fn solve_ha(poly: &Polygon, m: &MedialAxis, a: &FillArgs) -> CliResult<FillingSolution> {
    if a.enumerate_all {
        let (sol, searched) = enumerate_all(poly, m, a.n, &a.ha.ascent)?;
        eprintln!("ways searched: {searched}");
        return Ok(sol);
    }
    let trace = fill_sequence(poly, m, a.n, &a.ha)?;
    eprintln!("ways searched: {}", way_search_count(&trace));
    Ok(trace.steps.last().map(|s| s.solution.clone()).unwrap_or_else(|| FillingSolution::empty(m)))
}

fn cmd_fill(polygon: &Path, a: FillArgs, json: Option<&Path>, svg_out: Option<&Path>) -> CliResult<()> {
    if a.n == 0 {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    let poly = read_polygon(polygon)?;
    let m = compute_medial_axis(&poly)?;
    let mut results: Vec<(Method, FillingSolution)> = Vec::new();
    if matches!(a.method, MethodArg::Ha | MethodArg::Both) {
        results.push((Method::Ha, solve_ha(&poly, &m, &a)?));
    }
    if matches!(a.method, MethodArg::Ga | MethodArg::Both) {
        results.push((Method::Ga, run_ga(&poly, &m, a.n, &a.ga)?.solution));
    }
    for (method, sol) in &results {
        if !sol.converged {
            eprintln!("warning: {} optimizer stopped before convergence", method_name(*method));
        }
        println!("{} phi {:.9} way {}", method_name(*method), sol.phi, sol.way);
        if let Some(p) = json {
            let path = if results.len() > 1 { with_suffix(p, method_name(*method)) } else { p.to_path_buf() };
            let js = SolutionJson::new(&poly, sol, *method);
            js.validate(1e-10)?;
            write_file(&path, &js.to_json_string()?)?;
        }
    }
    if let Some(p) = svg_out {
        let panels: Vec<Panel> = results
            .iter()
            .map(|(method, sol)| Panel {
                title: format!("{} N={} phi={:.6}", method_name(*method), sol.n(), sol.phi),
                polygon: &poly,
                axis: Some(&m),
                discs: &sol.discs,
            })
            .collect();
        write_file(p, &render_grid(&panels, panels.len()))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    n: usize,
    phi: f64,
    way: String,
    searches: usize,
}

fn cmd_sweep(
    polygon: &Path,
    n_max: usize,
    ha: &HaConfig,
    csv_out: Option<&Path>,
    json_dir: Option<&Path>,
    svg_out: Option<&Path>,
) -> CliResult<()> {
    let poly = read_polygon(polygon)?;
    let m = compute_medial_axis(&poly)?;
    let trace = fill_sequence(&poly, &m, n_max, ha)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for s in &trace.steps {
        let row = SweepRow { n: s.n, phi: s.solution.phi, way: s.solution.way.to_string(), searches: s.searches };
        w.serialize(&row).map_err(|e| FillError::Numeric(e.to_string()))?;
    }
    let table = String::from_utf8_lossy(&w.into_inner().map_err(|e| FillError::Numeric(e.to_string()))?).into_owned();
    match csv_out {
        Some(p) => write_file(p, &table)?,
        None => print!("{table}"),
    }
    if let Some(dir) = json_dir {
        fs::create_dir_all(dir).map_err(FillError::from)?;
        for s in &trace.steps {
            let js = SolutionJson::new(&poly, &s.solution, Method::Ha);
            js.validate(1e-10)?;
            write_file(&dir.join(format!("n{:03}.json", s.n)), &js.to_json_string()?)?;
        }
    }
    if let Some(p) = svg_out {
        let panels: Vec<Panel> = trace
            .steps
            .iter()
            .map(|s| Panel { title: format!("N={}", s.n), polygon: &poly, axis: None, discs: &s.solution.discs })
            .collect();
        write_file(p, &render_grid(&panels, 7))?;
    }
    Ok(())
}

fn corpus_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Usage(format!("no polygon files in {}", dir.display())));
    }
    Ok(files)
}

fn cmd_compare(corpus: &Path, n_max: usize, ha: &HaConfig, ga: &GaConfig, csv_out: Option<&Path>) -> CliResult<RunReport> {
    let files = corpus_files(corpus)?;
    let mut report = RunReport::default();
    for f in files {
        let name = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let poly = read_polygon(&f)?;
        report.rows.extend(compare_polygon(&name, &poly, n_max, ha, ga)?);
    }
    print!("{}", report.to_markdown());
    if let Some(p) = csv_out {
        write_file(p, &report.to_csv()?)?;
    }
    Ok(report)
}

#[derive(Serialize)]
struct ContinuumBranchJson {
    branch: usize,
    case: BranchCase,
    #[serde(rename = "C_i")]
    c_i: f64,
    f_i: f64,
    #[serde(rename = "N_i")]
    n_i: usize,
    excluded: bool,
}

#[derive(Serialize)]
struct ContinuumJson {
    n: usize,
    branches: Vec<ContinuumBranchJson>,
    predicted_phi: f64,
    diagnostics: Vec<String>,
}

fn cmd_continuum(polygon: &Path, n: usize) -> CliResult<()> {
    let poly = read_polygon(polygon)?;
    let m = compute_medial_axis(&poly)?;
    let plan = allocate(&m, n)?;
    let pred = predicted_uncovered(&poly, &m, n)?;
    let branches = plan
        .models
        .iter()
        .zip(plan.fractions.iter().zip(&plan.counts))
        .map(|(b, (&f, &c))| ContinuumBranchJson { branch: b.branch, case: b.case, c_i: b.constant, f_i: f, n_i: c, excluded: b.excluded })
        .collect();
    let out = ContinuumJson { n, branches, predicted_phi: pred.phi, diagnostics: pred.diagnostics };
    println!("{}", serde_json::to_string_pretty(&out).map_err(FillError::from)?);
    Ok(())
}

fn cmd_check(path: &Path) -> CliResult<()> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let js = SolutionJson::from_json_str(&text)?;
    let phi = js.validate(1e-10)?;
    println!("ok phi {phi:.9}");
    Ok(())
}

pub fn execute(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Ma { polygon, json, svg } => cmd_ma(&polygon, json.as_deref(), svg.as_deref()),
        Command::Fill {
            polygon,
            n,
            method,
            seed,
            seeds,
            pop_mult,
            neighborhood,
            enumerate_all,
            pin_junctions,
            json,
            svg,
        } => {
            let args = FillArgs {
                n,
                method,
                ha: HaConfig { neighborhood, pin_junctions, ..HaConfig::default() },
                ga: GaConfig { seed, seeds, population_multiplier: pop_mult, ..GaConfig::default() },
                enumerate_all,
            };
            args.ga.validate()?;
            cmd_fill(&polygon, args, json.as_deref(), svg.as_deref())
        }
        Command::Sweep { polygon, n_max, neighborhood, pin_junctions, csv, json, svg } => {
            let ha = HaConfig { neighborhood, pin_junctions, ..HaConfig::default() };
            cmd_sweep(&polygon, n_max, &ha, csv.as_deref(), json.as_deref(), svg.as_deref())
        }
        Command::Compare { corpus, n_max, seed, seeds, pop_mult, neighborhood, csv } => {
            let ha = HaConfig { neighborhood, ..HaConfig::default() };
            let ga = GaConfig { seed, seeds, population_multiplier: pop_mult, ..GaConfig::default() };
            ga.validate()?;
            cmd_compare(&corpus, n_max, &ha, &ga, csv.as_deref()).map(|_| ())
        }
        Command::Continuum { polygon, n } => cmd_continuum(&polygon, n),
        Command::Ways { k, j, n } => {
            println!("{}", count_ways(n, k, j)?);
            Ok(())
        }
        Command::Check { solution } => cmd_check(&solution),
    }
}

/// Parses arguments and runs the command, mapping failures to exit codes.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
