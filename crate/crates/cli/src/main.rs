//! `gapgrid`: build, verify and export sharp incidence constructions.
//!
//! JSON goes to stdout, human-readable notes to stderr. Exit codes:
//! 0 success, 2 spec or usage error, 3 hypothesis violation, 4 richness
//! violation, 5 oracle guard, 6 export cap.

mod points;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gapgrid::construction::{Construction, ParamsRecord};
use gapgrid::export::{export_lines, export_points, ExportError, ExportFormat, DEFAULT_EXPORT_CAP};
use gapgrid::incidence::{materialize, rich_lines_oracle, CanonicalLine, RatPoint};
use gapgrid::json::int_to_value;
use gapgrid::numberfield::SpecError;
use gapgrid::{
    verify_construction, BasisSpec, ConstructionError, ConstructionParams, ConstructionRegistry,
    ConstructionRequest, IncidenceError, StructureTable, VerifyOptions,
};
use num_bigint::BigInt;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "gapgrid", version, about = "Sharp point-line incidence constructions over number fields")]
struct Cli {
    /// Worker threads for verification and the oracle (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a basis spec and print its structure constants summary.
    Basis {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Derive construction parameters.
    Construct(Target),
    /// Check that every constructed line is as rich as promised.
    Verify {
        #[command(flatten)]
        target: Target,
        /// Verify a saved (possibly edited) `construct` report instead.
        #[arg(long, conflicts_with_all = ["spec", "n_points", "r"])]
        params: Option<PathBuf>,
        /// Check this many uniformly drawn lines instead of all of them.
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Count rich lines by brute force and compare with the construction.
    Oracle {
        #[command(flatten)]
        target: Target,
        /// Explicit point set (JSON) instead of a construction.
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Write point and line tables for plotting.
    Export {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output directory; receives points.<ext> and lines.<ext>.
        #[arg(long)]
        out: PathBuf,
        /// Maximum rows per table.
        #[arg(long, default_value_t = DEFAULT_EXPORT_CAP)]
        cap: u64,
    },
    /// List registered constructions.
    List,
}

#[derive(Args, Debug, Clone)]
struct Target {
    /// Basis spec (JSON).
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Construction name; defaults to nice-basis with --spec, elekes without.
    #[arg(long)]
    construction: Option<String>,
    /// Radicand for guth-silier.
    #[arg(long)]
    k: Option<i64>,
    /// Target point count N.
    #[arg(long = "n")]
    n_points: Option<BigInt>,
    /// Richness target r.
    #[arg(long)]
    r: Option<BigInt>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Format {
    Json,
    Csv,
}

impl From<Format> for ExportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ExportFormat::Json,
            Format::Csv => ExportFormat::Csv,
        }
    }
}

/// A failed command: exit code plus message for stderr, and optionally a JSON
/// body for stdout.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
    body: Option<Value>,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into(), body: None }
    }
}

const EXIT_SPEC: u8 = 2;
const EXIT_HYPOTHESIS: u8 = 3;
const EXIT_RICHNESS: u8 = 4;
const EXIT_ORACLE_GUARD: u8 = 5;
const EXIT_EXPORT_CAP: u8 = 6;

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Failure::new(EXIT_SPEC, e.to_string())
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        let code = match e {
            ConstructionError::NonPositive { .. }
            | ConstructionError::HypothesisViolation { .. }
            | ConstructionError::ParametersTooSmall { .. }
            | ConstructionError::RichnessCondition { .. } => EXIT_HYPOTHESIS,
            _ => EXIT_SPEC,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<IncidenceError> for Failure {
    fn from(e: IncidenceError) -> Self {
        match &e {
            IncidenceError::ConstructionViolation { index, line, count, expected } => Failure {
                code: EXIT_RICHNESS,
                message: e.to_string(),
                body: Some(json!({
                    "violation": {
                        "index": int_to_value(index),
                        "slope": line.slope.coords().iter().map(int_to_value).collect::<Vec<_>>(),
                        "intercept": line.intercept.coords().iter().map(int_to_value).collect::<Vec<_>>(),
                        "count": int_to_value(count),
                        "expected": int_to_value(expected),
                    }
                })),
            },
            IncidenceError::TooLargeForOracle { .. } => Failure::new(EXIT_ORACLE_GUARD, e.to_string()),
            _ => Failure::new(EXIT_SPEC, e.to_string()),
        }
    }
}

impl From<ExportError> for Failure {
    fn from(e: ExportError) -> Self {
        let code = match e {
            ExportError::CapExceeded { .. } => EXIT_EXPORT_CAP,
            ExportError::Json(_) => EXIT_SPEC,
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.workers.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(EXIT_SPEC);
        }
    };
    let outcome = pool.install(|| dispatch(&cli.command));
    match outcome {
        Ok(value) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("JSON values serialize"));
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(body) = f.body {
                println!("{}", serde_json::to_string_pretty(&body).expect("JSON values serialize"));
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(command: &Command) -> CmdResult {
    match command {
        Command::Basis { spec } => cmd_basis(spec),
        Command::Construct(target) => cmd_construct(target),
        Command::Verify { target, params, sample, seed } => cmd_verify(target, params.as_deref(), *sample, *seed),
        Command::Oracle { target, points } => cmd_oracle(target, points.as_deref()),
        Command::Export { target, format, out, cap } => cmd_export(target, (*format).into(), out, *cap),
        Command::List => Ok(cmd_list()),
    }
}

fn cmd_list() -> Value {
    let reg = ConstructionRegistry::with_builtins();
    Value::Array(
        reg.iter()
            .map(|s| json!({ "name": s.name(), "summary": s.summary() }))
            .collect(),
    )
}

fn cmd_basis(path: &Path) -> CmdResult {
    let spec = BasisSpec::read(path)?;
    let table = spec.build_unchecked()?;
    let report = table.validate();
    let body = json!({
        "n": table.dim(),
        "c_lambda": int_to_value(&table.c_lambda()),
        "passed": report.passed(),
        "checks": report,
    });
    eprintln!(
        "basis of dimension {}, C = {}: {}",
        table.dim(),
        table.c_lambda(),
        if report.passed() { "valid".to_string() } else { format!("FAILED {}", report.failures().join(", ")) }
    );
    if report.passed() {
        Ok(body)
    } else {
        Err(Failure { code: EXIT_SPEC, message: "basis fails validation".into(), body: Some(body) })
    }
}

fn build(target: &Target) -> Result<Construction, Failure> {
    let n_points = target.n_points.clone().ok_or_else(|| Failure::new(EXIT_SPEC, "--n is required"))?;
    let r = target.r.clone().ok_or_else(|| Failure::new(EXIT_SPEC, "--r is required"))?;
    let mut request = ConstructionRequest::new(n_points, r);
    if let Some(path) = &target.spec {
        request = request.with_basis(BasisSpec::read(path)?);
    }
    if let Some(k) = target.k {
        request = request.with_k(k);
    }
    let name = target
        .construction
        .clone()
        .unwrap_or_else(|| if target.spec.is_some() { "nice-basis" } else { "elekes" }.to_string());
    Ok(ConstructionRegistry::with_builtins().build(&name, &request)?)
}

fn grid_report(c: &Construction) -> Value {
    json!({
        "construction": c.strategy,
        "basis": c.basis,
        "n": c.grid.table.dim(),
        "x_box": c.grid.x_box,
        "y_box": c.grid.y_box,
        "point_count": int_to_value(&c.grid.point_count()),
        "guaranteed_lines": Value::Null,
    })
}

fn construction_report(c: &Construction) -> Value {
    match &c.params {
        Some(p) => serde_json::to_value(p.report(&c.strategy)).expect("report serializes"),
        None => grid_report(c),
    }
}

fn cmd_construct(target: &Target) -> CmdResult {
    let c = build(target)?;
    if let Some(p) = &c.params {
        eprintln!(
            "{}: {} lines guaranteed ({} promised), each with {} points; margin {}{}",
            c.strategy,
            p.guaranteed_lines,
            p.paper_lines,
            p.achieved_richness(),
            p.richness_margin(),
            if p.degenerate() { " [degenerate: single zero slope]" } else { "" }
        );
        if p.below_target() {
            eprintln!("note: achieved richness {} is below r = {}", p.achieved_richness(), p.r);
        }
    } else {
        eprintln!("{}: {} points, no guaranteed line family", c.strategy, c.grid.point_count());
    }
    Ok(construction_report(&c))
}

fn load_params(path: &Path) -> Result<ConstructionParams, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_SPEC, format!("cannot read params {}: {e}", path.display())))?;
    let record: ParamsRecord = serde_json::from_str(&text)
        .map_err(|e| Failure::new(EXIT_SPEC, format!("malformed params {}: {e}", path.display())))?;
    Ok(ConstructionParams::from_record(&record)?)
}

fn cmd_verify(target: &Target, params_path: Option<&Path>, sample: Option<u64>, seed: Option<u64>) -> CmdResult {
    let (name, params) = match params_path {
        Some(path) => ("params-file".to_string(), load_params(path)?),
        None => {
            let c = build(target)?;
            let params = c
                .params
                .ok_or_else(|| Failure::new(EXIT_SPEC, format!("{} has no guaranteed line family", c.strategy)))?;
            (c.strategy, params)
        }
    };
    let report = verify_construction(&params, &VerifyOptions { sample, seed })?;
    eprintln!(
        "{}: {}/{} checked lines carry exactly {} points ({})",
        name, report.lines_meeting_target, report.lines_checked, report.expected_points_on_line, format!("{:?}", report.mode).to_lowercase()
    );
    Ok(json!({
        "construction": name,
        "N": int_to_value(&params.n_points),
        "r": int_to_value(&params.r),
        "n": params.dim(),
        "guaranteed_lines": int_to_value(&params.guaranteed_lines),
        "paper_lines": int_to_value(&params.paper_lines),
        "richness_margin": int_to_value(&params.richness_margin()),
        "report": report,
    }))
}

fn cmd_oracle(target: &Target, points_path: Option<&Path>) -> CmdResult {
    if let Some(path) = points_path {
        let table = match &target.spec {
            Some(spec) => BasisSpec::read(spec)?.build()?,
            None => StructureTable::rational(),
        };
        let pts = points::read_points(path, table.dim())?;
        let r = target.r.clone().ok_or_else(|| Failure::new(EXIT_SPEC, "--r is required"))?;
        let threshold = usize::try_from(&r).map_err(|_| Failure::new(EXIT_SPEC, "--r out of range"))?;
        let rich = rich_lines_oracle(&pts, threshold, &table)?;
        eprintln!("{} points: {} lines with at least {} points", pts.len(), rich.len(), threshold);
        return Ok(json!({
            "points": pts.len(),
            "threshold": threshold,
            "oracle_rich_lines": rich.len(),
            "constructed_lines": Value::Null,
            "containment": Value::Null,
        }));
    }

    let c = build(target)?;
    let pts: Vec<RatPoint> = materialize(&c.grid)?;
    let table = &c.grid.table;
    let r = target.r.clone().unwrap_or_default();
    let requested = usize::try_from(&r).map_err(|_| Failure::new(EXIT_SPEC, "--r out of range"))?;
    let body = match &c.params {
        None => {
            let rich = rich_lines_oracle(&pts, requested, table)?;
            json!({
                "construction": c.strategy,
                "points": pts.len(),
                "threshold": requested,
                "oracle_rich_lines": rich.len(),
                "constructed_lines": Value::Null,
                "containment": Value::Null,
            })
        }
        Some(p) => {
            let achieved = usize::try_from(&p.achieved_richness()).expect("fits: grid was materialized");
            let threshold = requested.min(achieved);
            let rich = rich_lines_oracle(&pts, threshold, table)?;
            let mut missing = 0u64;
            let mut constructed = 0u64;
            for line in p.lines().iter() {
                constructed += 1;
                if rich.get(&CanonicalLine::from_line(&line)) != Some(&achieved) {
                    missing += 1;
                }
            }
            json!({
                "construction": c.strategy,
                "points": pts.len(),
                "threshold": threshold,
                "oracle_rich_lines": rich.len(),
                "constructed_lines": constructed,
                "containment": missing == 0,
                "missing_lines": missing,
            })
        }
    };
    eprintln!(
        "oracle: {} rich lines among {} points",
        body["oracle_rich_lines"], body["points"]
    );
    if body["containment"] == Value::Bool(false) {
        return Err(Failure { code: EXIT_RICHNESS, message: "constructed lines missing from oracle".into(), body: Some(body) });
    }
    Ok(body)
}

fn cmd_export(target: &Target, format: ExportFormat, out: &Path, cap: u64) -> CmdResult {
    let c = build(target)?;
    let points = export_points(&c.grid, format, cap)?;
    let family = c.params.as_ref().map(|p| p.lines());
    let lines = export_lines(family.as_ref(), &c.grid.table, format, cap)?;
    std::fs::create_dir_all(out)
        .map_err(|e| Failure::new(EXIT_SPEC, format!("cannot create {}: {e}", out.display())))?;
    let ext = format.extension();
    let points_file = out.join(format!("points.{ext}"));
    let lines_file = out.join(format!("lines.{ext}"));
    for (path, text) in [(&points_file, &points), (&lines_file, &lines)] {
        std::fs::write(path, text)
            .map_err(|e| Failure::new(EXIT_SPEC, format!("cannot write {}: {e}", path.display())))?;
    }
    let line_rows = family.map(|f| f.len()).unwrap_or_default();
    eprintln!("wrote {} and {}", points_file.display(), lines_file.display());
    Ok(json!({
        "construction": c.strategy,
        "format": ext,
        "points_file": points_file,
        "point_rows": int_to_value(&c.grid.point_count()),
        "lines_file": lines_file,
        "line_rows": int_to_value(&line_rows),
    }))
}
