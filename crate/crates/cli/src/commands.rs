use std::path::{Path, PathBuf};
use std::sync::Arc;

use idealpoly_core::geom::{close_with_infinity, config_volume, delaunay, klein_obj, layout, to_ball_models};
use idealpoly_core::optvol::optimize_triangulation;
use idealpoly_core::rivin::is_realizable_at;
use idealpoly_core::stats::{
    fit_beta, sample_volumes, scaling_fit, search_max_volume, table_vmax, BetaFit, ScalingFit, SearchResult, TrialSummary, VmaxSource,
    VolumeSample,
};
use idealpoly_core::{PointConfiguration, SphereTriangulation, VertexId};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, EXIT_NEGATIVE, EXIT_OK};
use crate::io::{emit, parse_json, parse_sample_csv, read_input, read_triangulation, sample_csv};
use crate::manifest::{ManifestBuilder, RunManifest};
use crate::report::OptimizeReport;
use crate::{selftest, svg, ApexArgs, Cli, Command, ExportFormat};

#[derive(Serialize)]
struct WithManifest<'a, T: Serialize> {
    #[serde(flatten)]
    body: &'a T,
    manifest: RunManifest,
}

fn json_text<T: Serialize>(body: &T, manifest: &ManifestBuilder) -> String {
    let mut s = serde_json::to_string_pretty(&WithManifest { body, manifest: manifest.finish() }).expect("output serializes");
    s.push('\n');
    s
}

fn output(out: &Option<PathBuf>) -> Option<&Path> {
    out.as_deref()
}

fn apex_of(t: &SphereTriangulation, args: &ApexArgs) -> Result<VertexId, CliError> {
    match args.apex {
        Some(a) if a >= t.n() => Err(CliError::InvalidArgument(format!("apex {a} is not a vertex (n = {})", t.n()))),
        Some(a) => Ok(a),
        None => Ok(t.choose_apex()),
    }
}

fn name_of(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Optimize { .. } => "optimize",
        Command::Search { .. } => "search",
        Command::Sample { .. } => "sample",
        Command::Fit { .. } => "fit",
        Command::Scaling { .. } => "scaling",
        Command::Report { .. } => "report",
        Command::Export { .. } => "export",
        Command::Automorphisms { .. } => "automorphisms",
        Command::Selftest { .. } => "selftest",
        Command::Pipeline { .. } => "pipeline",
    }
}

pub fn dispatch(cli: &Cli, argv: &[String]) -> Result<i32, CliError> {
    let mut m = ManifestBuilder::new(name_of(&cli.command), argv, cli.seed);
    let seed = cli.seed;
    match &cli.command {
        Command::Check { input, apex, out } => check(input, apex, &out.output, &mut m),
        Command::Optimize { input, apex, tol, max_denominator, out } => optimize(input, apex, *tol, *max_denominator, &out.output, &mut m),
        Command::Search { n, trials, eps, out } => {
            let result = search_output(*n, *trials, seed, *eps)?;
            emit(output(&out.output), &json_text(&result, &m))?;
            Ok(EXIT_OK)
        }
        Command::Sample { n, count, vmax, search_trials, out } => {
            let sample = sample(*n, *count, seed, vmax, *search_trials)?;
            emit(output(&out.output), &sample_csv(&sample))?;
            Ok(EXIT_OK)
        }
        Command::Fit { input, out } => {
            let bytes = read_input(input, &mut m)?;
            let sample = parse_sample_csv(input, &bytes)?;
            emit(output(&out.output), &json_text(&FitFile::new(&sample)?, &m))?;
            Ok(EXIT_OK)
        }
        Command::Scaling { inputs, svg, out } => scaling(inputs, svg.as_deref(), &out.output, &mut m),
        Command::Report { input, bins, out } => {
            let bytes = read_input(input, &mut m)?;
            let sample = parse_sample_csv(input, &bytes)?;
            let fit = fit_beta(&sample)?;
            emit(
                output(&out.output),
                &svg::histogram(&sample.normalized(), &fit, *bins, &format!("n = {}, N = {}", sample.n, sample.len())),
            )?;
            Ok(EXIT_OK)
        }
        Command::Export { input, format, apex, out } => export(input, *format, apex, &out.output, &mut m),
        Command::Automorphisms { input, out } => {
            let t = read_triangulation(input, &mut m)?;
            let c = t.automorphism_count();
            let body = AutomorphismOutput { n: t.n(), orientation_preserving: c.orientation_preserving, total: c.total };
            emit(output(&out.output), &json_text(&body, &m))?;
            Ok(EXIT_OK)
        }
        Command::Selftest { json } => {
            let outcomes = selftest::run_all(seed);
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            if *json {
                #[derive(Serialize)]
                struct Body<'a> {
                    passed: bool,
                    checks: &'a [selftest::CheckOutcome],
                }
                print!("{}", json_text(&Body { passed: failed == 0, checks: &outcomes }, &m));
            } else {
                for o in &outcomes {
                    println!("{} {:>2} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.name, o.detail);
                }
            }
            if failed > 0 {
                return Err(CliError::SelftestFailed { failed });
            }
            Ok(EXIT_OK)
        }
        Command::Pipeline { out_dir, count } => pipeline(out_dir, *count, seed, &m),
    }
}

#[derive(Serialize)]
struct CheckOutput {
    realizable: bool,
    n: usize,
    apex: VertexId,
    epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    margin: Option<f64>,
}

fn check(input: &Path, args: &ApexArgs, out: &Option<PathBuf>, m: &mut ManifestBuilder) -> Result<i32, CliError> {
    let t = read_triangulation(input, m)?;
    let apex = apex_of(&t, args)?;
    let r = is_realizable_at(&t, apex, args.eps)?;
    let body =
        CheckOutput { realizable: r.realizable(), n: t.n(), apex, epsilon: args.eps, witness: r.result.witness, margin: r.result.margin };
    emit(output(out), &json_text(&body, m))?;
    Ok(if body.realizable { EXIT_OK } else { EXIT_NEGATIVE })
}

fn optimize(
    input: &Path,
    args: &ApexArgs,
    tol: f64,
    max_den: u64,
    out: &Option<PathBuf>,
    m: &mut ManifestBuilder,
) -> Result<i32, CliError> {
    if !(tol > 0.0 && tol < 0.5) || max_den == 0 {
        return Err(CliError::InvalidArgument("--tol must be in (0, 0.5) and --max-denominator positive".into()));
    }
    let t = read_triangulation(input, m)?;
    let apex = apex_of(&t, args)?;
    let r = optimize_triangulation(&t, apex, args.eps)?.with_rational_params(max_den, tol);
    emit(output(out), &json_text(&OptimizeReport::new(&r, args.eps), m))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
pub struct SearchOutput {
    pub n: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub trials: usize,
    pub distinct_types: usize,
    pub best_volume: f64,
    pub table_volume: Option<f64>,
    pub best_trial: u64,
    pub best_triangulation: SphereTriangulation,
    pub best_configuration: PointConfiguration,
    pub best: OptimizeReport,
    pub per_trial: Vec<TrialSummary>,
}

impl SearchOutput {
    fn new(r: SearchResult) -> Self {
        Self {
            n: r.n,
            seed: r.seed,
            epsilon: r.epsilon,
            trials: r.trials,
            distinct_types: r.distinct_types,
            best_volume: r.best_volume,
            table_volume: table_vmax(r.n),
            best_trial: r.best_trial,
            best: OptimizeReport::new(&r.best, r.epsilon),
            best_triangulation: r.best_triangulation,
            best_configuration: r.best_configuration,
            per_trial: r.per_trial,
        }
    }
}

fn search_output(n: usize, trials: usize, seed: u64, eps: f64) -> Result<SearchOutput, CliError> {
    if trials == 0 {
        return Err(CliError::InvalidArgument("--trials must be positive".into()));
    }
    Ok(SearchOutput::new(search_max_volume(n, trials, seed, eps)?))
}

fn sample(n: usize, count: usize, seed: u64, vmax: &str, search_trials: usize) -> Result<VolumeSample, CliError> {
    if count == 0 {
        return Err(CliError::InvalidArgument("--count must be positive".into()));
    }
    let (value, source) = match vmax {
        "table" => {
            (table_vmax(n).ok_or_else(|| CliError::InvalidArgument(format!("no tabulated maximal volume for n = {n}")))?, VmaxSource::Table)
        }
        "search" => {
            let r = search_max_volume(n, search_trials.max(1), seed, idealpoly_core::rivin::DEFAULT_EPSILON)?;
            // The supremum, when the optimum sits on the polytope boundary.
            let v = if r.best.limit_volume.is_finite() { r.best_volume.max(r.best.limit_volume) } else { r.best_volume };
            (v, VmaxSource::Search)
        }
        other => match other.parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => (v, VmaxSource::Given),
            _ => return Err(CliError::InvalidArgument(format!("--vmax must be 'table', 'search' or a positive number, got '{other}'"))),
        },
    };
    Ok(sample_volumes(n, count, seed, value, source)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitFile {
    pub n: usize,
    pub seed: u64,
    pub vmax: f64,
    pub vmax_source: VmaxSource,
    #[serde(flatten)]
    pub fit: BetaFit,
    pub alpha_se: f64,
    pub beta_se: f64,
}

impl FitFile {
    pub fn new(sample: &VolumeSample) -> Result<Self, CliError> {
        let fit = fit_beta(sample)?;
        let (alpha_se, beta_se) = fit.standard_errors();
        Ok(Self { n: sample.n, seed: sample.seed, vmax: sample.vmax, vmax_source: sample.vmax_source, fit, alpha_se, beta_se })
    }
}

fn scaling(inputs: &[PathBuf], svg_path: Option<&Path>, out: &Option<PathBuf>, m: &mut ManifestBuilder) -> Result<i32, CliError> {
    let mut fits = Vec::new();
    for p in inputs {
        let bytes = read_input(p, m)?;
        let f: FitFile = parse_json(p, &bytes)?;
        fits.push((f.n, f.fit));
    }
    let s = scaling_fit(&fits)?;
    if let Some(p) = svg_path {
        std::fs::write(p, svg::scaling_panels(&s)).map_err(|e| CliError::write(p, e))?;
    }
    emit(output(out), &json_text(&s, m))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct AutomorphismOutput {
    n: usize,
    orientation_preserving: usize,
    total: usize,
}

#[derive(Serialize)]
struct ExportVertex {
    index: VertexId,
    /// `[re, im]`, or `null` for the vertex at infinity.
    complex: Option<[f64; 2]>,
    klein: [f64; 3],
    poincare: [f64; 3],
}

#[derive(Serialize)]
struct ExportOutput {
    n: usize,
    source: &'static str,
    volume: f64,
    vertices: Vec<ExportVertex>,
    faces: Vec<[VertexId; 3]>,
}

/// Realized geometry of `input`: a triangulation is optimized and laid out,
/// a configuration is Delaunay-triangulated, a search result supplies both.
fn realize(
    input: &Path,
    args: &ApexArgs,
    m: &mut ManifestBuilder,
) -> Result<(&'static str, PointConfiguration, SphereTriangulation, f64), CliError> {
    let bytes = read_input(input, m)?;
    let value: Value = parse_json(input, &bytes)?;
    if let (Some(c), Some(t)) = (value.get("best_configuration"), value.get("best_triangulation")) {
        let config: PointConfiguration = serde_json::from_value(c.clone()).map_err(|e| CliError::parse(input, e))?;
        let t: SphereTriangulation = serde_json::from_value(t.clone()).map_err(|e| CliError::parse(input, e))?;
        let volume = config_volume(&config)?;
        return Ok(("search", config, t, volume));
    }
    if value.get("points").is_some() {
        let config: PointConfiguration = parse_json(input, &bytes)?;
        let (t, _) = close_with_infinity(&delaunay(&config)?)?;
        let volume = config_volume(&config)?;
        return Ok(("configuration", config, t, volume));
    }
    let raw = parse_json(input, &bytes)?;
    let t = SphereTriangulation::validate(raw).map_err(|e| CliError::InvalidTriangulation(e.to_string()))?;
    let apex = apex_of(&t, args)?;
    let r = optimize_triangulation(&t, apex, args.eps)?;
    let link = Arc::clone(r.angles.link());
    let lay = layout(&link, &r.angles)?;
    Ok(("triangulation", lay.config.normalized(), t, r.volume))
}

fn export(input: &Path, format: ExportFormat, args: &ApexArgs, out: &Option<PathBuf>, m: &mut ManifestBuilder) -> Result<i32, CliError> {
    let (source, config, t, volume) = realize(input, args, m)?;
    match format {
        ExportFormat::Obj => emit(output(out), &klein_obj(&config, &t))?,
        ExportFormat::Json => {
            let balls = to_ball_models(&config);
            let vertices = config
                .points()
                .iter()
                .enumerate()
                .map(|(i, p)| ExportVertex {
                    index: i,
                    complex: p.finite().map(|z| [z.re, z.im]),
                    klein: balls.klein[i],
                    poincare: balls.poincare[i],
                })
                .collect();
            let body = ExportOutput { n: t.n(), source, volume, vertices, faces: t.faces().to_vec() };
            emit(output(out), &json_text(&body, m))?;
        }
    }
    Ok(EXIT_OK)
}

/// Gated search rows plus two larger vertex counts for inspection.
const PIPELINE_SEARCH: [(usize, usize); 7] = [(4, 1), (5, 5), (6, 30), (7, 100), (8, 200), (9, 300), (10, 300)];

#[derive(Serialize)]
struct Table1Row {
    n: usize,
    trials: usize,
    volume: f64,
    limit_volume: f64,
    table_volume: Option<f64>,
    v_over_v4: f64,
    corner_denominator: Option<u64>,
    dihedral_denominator: Option<u64>,
    distinct_types: usize,
}

#[derive(Serialize)]
struct PipelineOutput {
    out_dir: String,
    table1: Vec<Table1Row>,
    table2: Vec<FitFile>,
    scaling: ScalingFit,
    files: Vec<String>,
}

fn pipeline(dir: &Path, count: usize, seed: u64, m: &ManifestBuilder) -> Result<i32, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::write(dir, e))?;
    let mut files = Vec::new();
    let mut write = |name: String, text: &str| -> Result<(), CliError> {
        let p = dir.join(&name);
        std::fs::write(&p, text).map_err(|e| CliError::write(&p, e))?;
        files.push(name);
        Ok(())
    };
    let mut table1 = Vec::new();
    for (n, trials) in PIPELINE_SEARCH {
        let s = search_output(n, trials, seed, idealpoly_core::rivin::DEFAULT_EPSILON)?;
        write(format!("search_n{n}.json"), &json_text(&s, m))?;
        table1.push(Table1Row {
            n,
            trials,
            volume: s.best_volume,
            limit_volume: s.best.limit_volume,
            table_volume: s.table_volume,
            v_over_v4: s.best.v_over_v4,
            corner_denominator: s.best.corner_denominator,
            dihedral_denominator: s.best.dihedral_denominator,
            distinct_types: s.distinct_types,
        });
    }
    let mut table2 = Vec::new();
    for (n, _, _) in selftest::TABLE2 {
        let sample = sample(n, count, seed, "table", 0)?;
        write(format!("sample_n{n}.csv"), &sample_csv(&sample))?;
        let fit = FitFile::new(&sample)?;
        write(format!("fit_n{n}.json"), &json_text(&fit, m))?;
        write(format!("report_n{n}.svg"), &svg::histogram(&sample.normalized(), &fit.fit, 40, &format!("n = {n}, N = {count}")))?;
        table2.push(fit);
    }
    let s = scaling_fit(&table2.iter().map(|f| (f.n, f.fit.clone())).collect::<Vec<_>>())?;
    write("scaling.json".into(), &json_text(&s, m))?;
    write("scaling.svg".into(), &svg::scaling_panels(&s))?;
    let body = PipelineOutput { out_dir: dir.display().to_string(), table1, table2, scaling: s, files };
    print!("{}", json_text(&body, m));
    Ok(EXIT_OK)
}
