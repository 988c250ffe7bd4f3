use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ropebound::bounds::{asymptotic_coefficients, lower_bound_report};
use ropebound::config::RunConfig;
use ropebound::construct::{
    build_increment_spec, build_optimal_spec, build_planar_link, donut_double, realize_torus_with,
    sweep, ConstructionReport, Increment, JengaMode, PlanarFamily, PlanarParams, PlanarSpec,
    RealizeOptions, SweepMethod, TorusSpec,
};
use ropebound::geom::{linking_matrix, measure_link, LinkConfiguration, LinkMetrics};
use ropebound::helix::{aggregate_correction, toroidal_correction, CountMode, DEFAULT_EPSILON};
use ropebound::io::{export_geometry, import_geometry, to_text, GeometryFormat};
use ropebound::optimize::{
    minimize_params, reverse_jenga, OptimizationProblem, SimplexOptions, ToroidalFamily,
};
use ropebound::report::{correction_table_csv, fmt_sig, json_document, sweep_csv, ReproHeader};

#[derive(Parser, Debug)]
#[command(
    name = "ropebound",
    version,
    about = "Ropelength bounds and tight constructions for T(pQ,Q) torus links"
)]
struct Cli {
    /// JSON file with RunConfig fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "subcommand", rename_all = "snake_case")]
enum Command {
    /// Lower bounds and three-quarter coefficients.
    Bounds(BoundsArgs),
    /// Build, verify and write a construction.
    Build(BuildArgs),
    /// Measure and verify a geometry file.
    Check(CheckArgs),
    /// Minimize normalized ropelength over a family's parameters.
    Optimize(OptimizeArgs),
    /// Doubled three-quarter coefficients over a range of shell counts.
    Sweep(SweepArgs),
    /// Toroidal length corrections.
    Correction(CorrectionArgs),
    /// Convert a geometry file to another format.
    Export(ExportArgs),
    /// Read a VECT or CSV file into a JSON link configuration.
    Import(ImportArgs),
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize, PartialEq)]
#[serde(rename_all = "snake_case")]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Args, Debug, Serialize)]
struct BoundsArgs {
    #[arg(long, default_value_t = 1)]
    p: u32,
    /// Component counts; repeat or separate with commas.
    #[arg(long, value_delimiter = ',')]
    q: Vec<u32>,
    /// Add the large-Q limits of the coefficients.
    #[arg(long)]
    asymptotic: bool,
    #[arg(long, value_enum, default_value_t = TableFormat::Json)]
    format: TableFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize, PartialEq)]
#[serde(rename_all = "snake_case")]
enum BuildMethod {
    Inc4,
    Inc5,
    Optimal,
    Circles,
    Gibbous,
    Hybrid,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ModeArg {
    Exact,
    Approx,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum JengaArg {
    Naive,
    Deferred,
}

#[derive(Args, Debug, Serialize)]
struct CountArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    count_mode: ModeArg,
    /// Margin subtracted from the continuous count in approx mode.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
}

impl CountArgs {
    fn mode(&self) -> CountMode {
        match self.count_mode {
            ModeArg::Exact => CountMode::Exact,
            ModeArg::Approx => CountMode::Approx(self.epsilon),
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct BuildArgs {
    #[arg(value_enum)]
    method: BuildMethod,
    /// Shell count (toroidal methods).
    #[arg(long, default_value_t = 1)]
    t: u32,
    /// Component count (planar methods).
    #[arg(long, default_value_t = 3)]
    q: u32,
    /// Winding of each helix around the core (toroidal methods).
    #[arg(long, default_value_t = 1)]
    p: u32,
    /// Thread a second copy through the first.
    #[arg(long)]
    double: bool,
    /// Reflect the second copy before threading it.
    #[arg(long)]
    mirror: bool,
    #[arg(long)]
    points: Option<usize>,
    /// Geometry output; format from the extension (.vect, .csv, .json).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report output; stdout when absent.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    no_check: bool,
    /// Optimize planar parameters before building.
    #[arg(long)]
    optimize: bool,
    /// Planar parameters (rho, psi, gamma, delta, square scale, flat fraction).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    params: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = JengaArg::Naive)]
    jenga: JengaArg,
    /// Apply greedy helix moves that shrink the torus before realizing it.
    #[arg(long)]
    reverse_jenga: bool,
    #[command(flatten)]
    count: CountArgs,
}

#[derive(Args, Debug, Serialize)]
struct CheckArgs {
    file: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize, PartialEq)]
#[serde(rename_all = "snake_case")]
enum OptimizeFamily {
    Circles,
    Gibbous,
    Hybrid,
    Torus,
}

#[derive(Args, Debug, Serialize)]
struct OptimizeArgs {
    #[arg(value_enum)]
    family: OptimizeFamily,
    #[arg(long, default_value_t = 3)]
    q: u32,
    /// Helices on the single shell (torus family).
    #[arg(long, default_value_t = 6)]
    helices: u32,
    /// Add a core circle (torus family).
    #[arg(long)]
    core: bool,
    /// Optimize the doubled link (torus family).
    #[arg(long)]
    double: bool,
    /// Starting parameters; the family default otherwise.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    x0: Option<Vec<f64>>,
    #[arg(long)]
    points: Option<usize>,
    /// Geometry of the optimum.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report output; stdout when absent.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SweepArgs {
    #[arg(value_enum)]
    method: SweepArg,
    #[arg(long, default_value_t = 1)]
    tmin: u32,
    #[arg(long, default_value_t = 20)]
    tmax: u32,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    count: CountArgs,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum SweepArg {
    Inc4,
    Inc5,
    Optimal,
}

#[derive(Args, Debug, Serialize)]
struct CorrectionArgs {
    /// `R₀/r`.
    #[arg(long, required_unless_present_any = ["table", "aggregate"])]
    ratio: Option<f64>,
    #[arg(long, default_value_t = 1)]
    p: u32,
    /// Print the full table of corrections as CSV.
    #[arg(long, conflicts_with_all = ["ratio", "aggregate"])]
    table: bool,
    /// Shell-weighted correction of an optimal torus with this many shells.
    #[arg(long, conflicts_with = "ratio")]
    aggregate: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ExportArgs {
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Output format; from the extension of `--out` when absent.
    #[arg(long)]
    format: Option<GeometryFormat>,
}

#[derive(Args, Debug, Serialize)]
struct ImportArgs {
    input: PathBuf,
    /// JSON link configuration output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

type BoxError = Box<dyn std::error::Error>;

/// Outcome of a command whose verification can fail after output is written.
enum Status {
    Ok,
    Failed(String),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed(why)) => {
            eprintln!("verification failed: {why}");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> Result<Status, BoxError> {
    let config = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    config.install_thread_pool()?;
    let header = |name: &str| -> Result<ReproHeader, BoxError> {
        Ok(ReproHeader::new(
            name,
            &config,
            serde_json::to_value(&cli.command)?,
        ))
    };
    match &cli.command {
        Command::Bounds(a) => bounds(a, header("bounds")?),
        Command::Build(a) => build(a, &config, header("build")?),
        Command::Check(a) => check(a, header("check")?),
        Command::Optimize(a) => optimize(a, &config, header("optimize")?),
        Command::Sweep(a) => {
            let method = match a.method {
                SweepArg::Inc4 => SweepMethod::Inc4,
                SweepArg::Inc5 => SweepMethod::Inc5,
                SweepArg::Optimal => SweepMethod::Optimal,
            };
            let rows = sweep(method, a.tmin, a.tmax, a.count.mode())?;
            let text = header("sweep")?.comment_line() + &sweep_csv(&rows);
            emit(a.out.as_deref().or(config.output.as_deref()), &text)?;
            Ok(Status::Ok)
        }
        Command::Correction(a) => correction(a, header("correction")?),
        Command::Export(a) => {
            let link = import_geometry(&a.input)?;
            let format = match a.format {
                Some(f) => f,
                None => GeometryFormat::from_path(&a.out)
                    .ok_or_else(|| format!("cannot tell the format of {}", a.out.display()))?,
            };
            export_geometry(&link, format, &a.out)?;
            Ok(Status::Ok)
        }
        Command::Import(a) => {
            let link = import_geometry(&a.input)?;
            emit(a.out.as_deref(), &to_text(&link, GeometryFormat::Json)?)?;
            Ok(Status::Ok)
        }
    }
}

/// Writes to `path`, or stdout.
fn emit(path: Option<&Path>, text: &str) -> Result<(), BoxError> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn bounds(a: &BoundsArgs, header: ReproHeader) -> Result<Status, BoxError> {
    let reports =
        a.q.iter()
            .map(|&q| lower_bound_report(a.p, q))
            .collect::<Result<Vec<_>, _>>()?;
    let limits = if a.asymptotic {
        Some(asymptotic_coefficients(a.p)?)
    } else {
        None
    };
    let text = match a.format {
        TableFormat::Json => {
            json_document(&header, &json!({ "bounds": reports, "asymptotic": limits }))?
        }
        TableFormat::Csv => {
            let mut s = header.comment_line();
            s.push_str("p,q,crossing_number,small_hull_bound,isoperimetric_bound,wegner_bound,best_bound,alpha_iso,alpha_w,alpha_best,rigor\n");
            for r in &reports {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{}\n",
                    r.p,
                    r.q,
                    r.crossing_number,
                    r.small_hull_bound.map(fmt_sig).unwrap_or_default(),
                    fmt_sig(r.isoperimetric_bound),
                    fmt_sig(r.wegner_bound),
                    fmt_sig(r.best_bound),
                    fmt_sig(r.alpha_iso),
                    fmt_sig(r.alpha_w),
                    fmt_sig(r.alpha_best()),
                    serde_json::to_value(r.rigor_flag)?
                        .as_str()
                        .unwrap_or_default()
                ));
            }
            if let Some(l) = limits {
                s.push_str(&format!(
                    "# limits p={} alpha_w={} alpha_iso={} subleading={}\n",
                    l.p,
                    fmt_sig(l.alpha_w_limit),
                    fmt_sig(l.alpha_iso_limit),
                    fmt_sig(l.subleading)
                ));
            }
            s
        }
    };
    emit(a.out.as_deref(), &text)?;
    Ok(Status::Ok)
}

fn simplex_options(config: &RunConfig) -> SimplexOptions {
    SimplexOptions {
        max_evaluations: config.max_evaluations,
        restarts: config.restarts,
        seed: config.random_seed,
        ..SimplexOptions::default()
    }
}

fn planar_family(m: BuildMethod) -> Option<PlanarFamily> {
    match m {
        BuildMethod::Circles => Some(PlanarFamily::Circles),
        BuildMethod::Gibbous => Some(PlanarFamily::Gibbous),
        BuildMethod::Hybrid => Some(PlanarFamily::HybridSquare),
        _ => None,
    }
}

fn torus_spec(a: &BuildArgs) -> Result<TorusSpec, BoxError> {
    let jenga = match a.jenga {
        JengaArg::Naive => JengaMode::Naive,
        JengaArg::Deferred => JengaMode::DeferredRadius,
    };
    let mut spec = match a.method {
        BuildMethod::Inc4 => build_increment_spec(a.t, Increment::Four, jenga)?,
        BuildMethod::Inc5 => build_increment_spec(a.t, Increment::Five, jenga)?,
        _ => build_optimal_spec(a.t, a.count.mode())?,
    };
    if a.reverse_jenga {
        spec = reverse_jenga(&spec)?;
    }
    spec.p = a.p;
    spec.validate()?;
    Ok(spec)
}

#[derive(Serialize)]
struct Verification {
    checked: bool,
    passed: bool,
    min_distance: f64,
    overlap_tolerance: f64,
}

fn verify(metrics: &LinkMetrics, checked: bool, tolerance: f64) -> Verification {
    Verification {
        checked,
        passed: !checked || metrics.min_distance() >= 2.0 - tolerance,
        min_distance: metrics.min_distance(),
        overlap_tolerance: tolerance,
    }
}

fn build(a: &BuildArgs, config: &RunConfig, header: ReproHeader) -> Result<Status, BoxError> {
    let n_points = a.points.unwrap_or(config.points_per_component);
    let (link, report, params) = if let Some(family) = planar_family(a.method) {
        let params = if a.optimize {
            let problem = OptimizationProblem::planar(a.q, family, n_points);
            let result = minimize_params(&problem, &simplex_options(config))?;
            PlanarParams::from_slice(family, &result.best_params)?
        } else if let Some(x) = &a.params {
            PlanarParams::from_slice(family, x)?
        } else {
            let problem = OptimizationProblem::planar(a.q, family, n_points);
            PlanarParams::from_slice(family, &problem.initial_params)?
        };
        let link = build_planar_link(a.q, family, &params, n_points)?;
        let spec = PlanarSpec {
            q: a.q,
            family,
            params,
        };
        (
            link,
            ConstructionReport::planar(&spec),
            Some(params.to_vec(family)),
        )
    } else {
        let spec = torus_spec(a)?;
        let opts = RealizeOptions {
            n_points,
            overlap_tolerance: config.overlap_tolerance,
            check: false,
        };
        if a.double {
            let d = donut_double(&spec, a.mirror, opts)?;
            (d.link, d.report, None)
        } else {
            let link = realize_torus_with(&spec, opts)?;
            (link, ConstructionReport::torus(&spec, false, false)?, None)
        }
    };
    let metrics = measure_link(&link)?;
    let verification = verify(&metrics, !a.no_check, config.overlap_tolerance);
    if let Some(path) = a.out.as_deref().or(config.output.as_deref()) {
        let format = GeometryFormat::from_path(path).unwrap_or(GeometryFormat::Json);
        export_geometry(&link, format, path)?;
    }
    let doc = json_document(
        &header,
        &json!({
            "construction": report,
            "params": params,
            "components": link.components.len(),
            "metrics": metrics,
            "verification": verification,
        }),
    )?;
    emit(a.report.as_deref(), &doc)?;
    Ok(if verification.passed {
        Status::Ok
    } else {
        Status::Failed(format!(
            "min distance {} below 2 - {}",
            fmt_sig(metrics.min_distance()),
            config.overlap_tolerance
        ))
    })
}

fn check(a: &CheckArgs, header: ReproHeader) -> Result<Status, BoxError> {
    let link: LinkConfiguration = import_geometry(&a.file)?;
    let metrics = measure_link(&link)?;
    let matrix = linking_matrix(&link.components)?;
    let unlinked: Vec<(usize, usize)> = (0..matrix.len())
        .flat_map(|i| (i + 1..matrix.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| matrix[i][j] == 0)
        .collect();
    let doc = json_document(
        &header,
        &json!({
            "components": link.components.len(),
            "metrics": metrics,
            "linking_matrix": matrix,
            "unlinked_pairs": unlinked,
            "complete_linking": unlinked.is_empty(),
        }),
    )?;
    emit(a.out.as_deref(), &doc)?;
    Ok(if unlinked.is_empty() {
        Status::Ok
    } else {
        Status::Failed(format!("{} unlinked pairs", unlinked.len()))
    })
}

fn optimize(a: &OptimizeArgs, config: &RunConfig, header: ReproHeader) -> Result<Status, BoxError> {
    let n_points = a.points.unwrap_or(config.points_per_component);
    let (mut problem, q) = match a.family {
        OptimizeFamily::Circles => (
            OptimizationProblem::planar(a.q, PlanarFamily::Circles, n_points),
            a.q,
        ),
        OptimizeFamily::Gibbous => (
            OptimizationProblem::planar(a.q, PlanarFamily::Gibbous, n_points),
            a.q,
        ),
        OptimizeFamily::Hybrid => (
            OptimizationProblem::planar(a.q, PlanarFamily::HybridSquare, n_points),
            a.q,
        ),
        OptimizeFamily::Torus => {
            let family = ToroidalFamily {
                has_core: a.core,
                helices: a.helices,
                doubled: a.double,
            };
            let r = 2.2;
            let start = [r, if a.double { 2.0 * r + 2.0 } else { 2.0 * r }];
            (
                OptimizationProblem::toroidal(family, start, n_points),
                family.q(),
            )
        }
    };
    if let Some(x0) = &a.x0 {
        problem.initial_params = x0.clone();
    }
    let result = minimize_params(&problem, &simplex_options(config))?;
    let link = problem.build(&result.best_params)?;
    let metrics = measure_link(&link)?;
    let lower = lower_bound_report(1, q)?;
    if let Some(path) = &a.out {
        let format = GeometryFormat::from_path(path).unwrap_or(GeometryFormat::Json);
        export_geometry(&link, format, path)?;
    }
    let doc = json_document(
        &header,
        &json!({
            "problem": problem,
            "result": result,
            "metrics": metrics,
            "lower_bound": lower.best_bound,
            "ratio_to_lower_bound": result.best_value / lower.best_bound,
        }),
    )?;
    emit(a.report.as_deref(), &doc)?;
    Ok(Status::Ok)
}

fn correction(a: &CorrectionArgs, header: ReproHeader) -> Result<Status, BoxError> {
    let text = if a.table {
        header.comment_line()
            + &correction_table_csv(|ratio, p| toroidal_correction(ratio, p).unwrap_or(f64::NAN))
    } else if let Some(t) = a.aggregate {
        json_document(
            &header,
            &json!({ "t_shells": t, "aggregate_correction": aggregate_correction(t)? }),
        )?
    } else {
        let ratio = a.ratio.ok_or("--ratio is required")?;
        json_document(
            &header,
            &json!({ "ratio": ratio, "p": a.p, "correction": toroidal_correction(ratio, a.p)? }),
        )?
    };
    emit(a.out.as_deref(), &text)?;
    Ok(Status::Ok)
}
