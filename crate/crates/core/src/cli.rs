//! The `gerbe-kit` command-line front end.
//!
//! Every invocation yields a [`CommandReport`]. Stdout carries a one-line
//! summary followed by the report as JSON; `--output` receives the full
//! result payload, which for `s3-gerbe` includes the generated cocycle in
//! the input format of `dd`.
//!
//! Exit codes: 0 success (a nontrivial class is a successful answer), 1 the
//! operation rejected well-formed input, 2 usage error or unknown
//! subcommand, 3 malformed input, 4 unreadable input or unwritable output.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::chain_complex::cohomology_group;
use crate::connective::{boundary_holonomy_check, check_connective, surface_holonomy, ConnectiveReport};
use crate::error::Error;
use crate::gerbe_cocycle::{
    bockstein, dd_class, is_cyclic_coboundary, lifting_obstruction, stably_isomorphic, trivialize, validate_gerbe,
    DixmierDouadyClass, Trivialization,
};
use crate::geometry::discretize::{discretize, s3_gerbe, total_three_curvature, DescentMode};
use crate::geometry::fields::BasicGerbeS3;
use crate::geometry::mesh::EmbeddedTriangulation;
use crate::geometry::quadrature::{QuadratureRule, DEFAULT_ORDER};
use crate::geometry::wzw::{witten_action, wzw_holonomy};
use crate::io::{
    parse, BoundaryFile, ComplexFile, ConnectiveFile, CyclicFile, ExtensionFile, GerbeFile, HolonomyFile, InputError, MeshFile,
};
use crate::scalar::{circle_distance, circle_from_turns};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MESH_LEVEL: usize = 3;

const GOOD_COVER_NOTE: &str = "cocycle inputs are read as Čech data on the nerve of a good cover; \
classes computed from other covers need not agree with sheaf cohomology";

#[derive(Parser, Debug)]
#[command(name = "gerbe-kit", version, about = "Local bundle gerbes on simplicial complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct Common {
    /// Input JSON file (repeatable).
    #[arg(long = "input", value_name = "FILE")]
    input: Vec<PathBuf>,
    /// Tolerance for residual checks.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Refinement level of generated meshes.
    #[arg(long = "mesh-level", value_name = "INT")]
    mesh_level: Option<usize>,
    /// Level k of the basic gerbe.
    #[arg(long, value_name = "INT", allow_negative_numbers = true)]
    level: Option<i64>,
    /// Write the full result payload to this file.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Gauss points per direction in quadrature rules.
    #[arg(long, value_name = "INT")]
    quadrature: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integral cohomology of a complex in every degree.
    #[command(name = "cohomology")]
    Cohomology(Common),
    /// Check δg = 1 for a gerbe cocycle.
    #[command(name = "check-gerbe")]
    CheckGerbe(Common),
    /// Dixmier–Douady class of a gerbe.
    #[command(name = "dd")]
    Dd(Common),
    /// Solve δh = g, or report the class preventing it.
    #[command(name = "trivialize")]
    Trivialize(Common),
    /// Compare two gerbes on the same complex.
    #[command(name = "stable-iso")]
    StableIso(Common),
    /// Bockstein of a ℤₙ cocycle.
    #[command(name = "bockstein")]
    Bockstein(Common),
    /// Obstruction to lifting transition data through a central extension.
    #[command(name = "lift-obstruction")]
    LiftObstruction(Common),
    /// Check the descent equations of a connective structure.
    #[command(name = "check-connective")]
    CheckConnective(Common),
    /// Holonomy of a connective structure over a charted surface.
    #[command(name = "holonomy")]
    Holonomy(Common),
    /// Compare hol(∂X) with the three-curvature integral over X.
    #[command(name = "boundary-check")]
    BoundaryCheck(Common),
    /// Generate the level-k basic gerbe on a mesh of S³.
    #[command(name = "s3-gerbe")]
    S3Gerbe(Common),
    /// WZW amplitude of a map into SU(2), or the Witten action of an extension.
    #[command(name = "wzw")]
    Wzw(Common),
}

impl Command {
    fn split(&self) -> (&'static str, &Common) {
        match self {
            Command::Cohomology(c) => ("cohomology", c),
            Command::CheckGerbe(c) => ("check-gerbe", c),
            Command::Dd(c) => ("dd", c),
            Command::Trivialize(c) => ("trivialize", c),
            Command::StableIso(c) => ("stable-iso", c),
            Command::Bockstein(c) => ("bockstein", c),
            Command::LiftObstruction(c) => ("lift-obstruction", c),
            Command::CheckConnective(c) => ("check-connective", c),
            Command::Holonomy(c) => ("holonomy", c),
            Command::BoundaryCheck(c) => ("boundary-check", c),
            Command::S3Gerbe(c) => ("s3-gerbe", c),
            Command::Wzw(c) => ("wzw", c),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Effective parameters of a run; unused ones are omitted.
#[derive(Clone, Debug, PartialEq, Serialize, Default)]
pub struct Settings {
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mesh_level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommandReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub settings: Settings,
    pub result: Value,
    pub diagnostics: Vec<String>,
    pub exit_code: i32,
}

/// What a run printed and returned.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<CommandReport>,
}

enum Failure {
    Usage(String),
    Malformed { file: String, error: InputError },
    Io(String),
    Operation(Error),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Operation(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Malformed { .. } => 3,
            Failure::Io(_) => 4,
        }
    }

    fn describe(&self) -> (String, Value) {
        match self {
            Failure::Usage(m) => (m.clone(), json!({"kind": "error", "category": "usage", "message": m})),
            Failure::Io(m) => (m.clone(), json!({"kind": "error", "category": "io", "message": m})),
            Failure::Malformed { file, error } => (
                format!("{file}: {error}"),
                json!({"kind": "error", "category": "malformed-input", "file": file, "pointer": error.pointer, "message": error.message}),
            ),
            Failure::Operation(e) => {
                let mut v = json!({"kind": "error", "category": error_category(e), "message": e.to_string()});
                if let Error::Subordination { simplex, near } = e {
                    v["simplex"] = json!(simplex);
                    v["near"] = json!(near);
                }
                (e.to_string(), v)
            }
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Operation(e)
    }
}

fn error_category(e: &Error) -> &'static str {
    match e {
        Error::MalformedInput(_) => "malformed-input",
        Error::ContractViolation(_) => "contract-violation",
        Error::Domain(_) => "domain",
        Error::NotACocycle(_) => "not-a-cocycle",
        Error::Inconsistent(_) => "inconsistent",
        Error::InvalidMap(_) => "invalid-map",
        Error::InvalidTransition(_) => "invalid-transition",
        Error::IncompleteStructure(_) => "incomplete-structure",
        Error::InvalidChart(_) => "invalid-chart",
        Error::Subordination { .. } => "subordination",
        Error::Unsupported(_) => "unsupported",
    }
}

struct Input {
    path: String,
    text: String,
}

impl Input {
    fn parse<T: serde::de::DeserializeOwned>(&self) -> Result<T, Failure> {
        parse(&self.text).map_err(|error| self.malformed(error))
    }

    fn malformed(&self, error: InputError) -> Failure {
        Failure::Malformed { file: self.path.clone(), error }
    }
}

struct Success {
    summary: String,
    result: Value,
    /// Larger payload for `--output`, when it differs from `result`.
    full: Option<Value>,
    diagnostics: Vec<String>,
}

impl Success {
    fn new(summary: String, result: Value) -> Self {
        Self { summary, result, full: None, diagnostics: Vec::new() }
    }
}

fn exactly(inputs: &[Input], n: usize, command: &str) -> Result<(), Failure> {
    if inputs.len() != n {
        let what = if n == 1 { "one --input file".to_string() } else { format!("{n} --input files") };
        return Err(Failure::Usage(format!("{command} takes {what}, got {}", inputs.len())));
    }
    Ok(())
}

fn class_json(c: &DixmierDouadyClass) -> Value {
    json!({"group": c.group.to_string(), "free": c.coords.free, "torsion": c.coords.torsion})
}


fn near_miss(diagnostics: &mut Vec<String>, what: &str, value: f64, tol: f64) {
    if value <= tol && value > tol / 10.0 {
        diagnostics.push(format!("{what} {value:.3e} is within a factor 10 of the tolerance {tol:.1e}"));
    }
}

fn connective_json(r: &ConnectiveReport) -> Value {
    json!({
        "tolerance": r.tolerance,
        "valid": r.is_valid(),
        "connection_checks": r.connection_checks,
        "curving_checks": r.curving_checks,
        "max_connection_residual": r.max_connection_residual,
        "max_curving_residual": r.max_curving_residual,
        "connection_violations": r.connection_violations,
        "curving_violations": r.curving_violations,
    })
}

fn c2(z: num_complex::Complex<f64>) -> [f64; 2] {
    [z.re, z.im]
}

fn quadrature_rule(order: usize) -> Result<QuadratureRule<f64>, Failure> {
    if order == 0 || order > 32 {
        return Err(Failure::Usage(format!("--quadrature must be between 1 and 32, got {order}")));
    }
    Ok(QuadratureRule::new(order))
}

fn execute(command: &str, common: &Common, inputs: &[Input], settings: &mut Settings) -> Result<Success, Failure> {
    let tol = common.tol;
    match command {
        "cohomology" => {
            exactly(inputs, 1, command)?;
            let file: ComplexFile = inputs[0].parse()?;
            let complex = file.complex().map_err(|e| inputs[0].malformed(e))?;
            let dim = complex.dimension().unwrap_or(0);
            let groups = (0..=dim).map(|p| cohomology_group(&complex, p)).collect::<Result<Vec<_>, _>>()?;
            let summary = groups.iter().map(|g| format!("H^{}={}", g.degree, g)).collect::<Vec<_>>().join(", ");
            let shown: Vec<Value> =
                groups.iter().map(|g| json!({"degree": g.degree, "free_rank": g.free_rank, "torsion": g.torsion, "group": g.to_string()})).collect();
            Ok(Success::new(summary, json!({"kind": "cohomology", "groups": shown})))
        }
        "check-gerbe" => {
            exactly(inputs, 1, command)?;
            let gerbe = gerbe_from(&inputs[0])?;
            let report = validate_gerbe(&gerbe, tol);
            let mut s = Success::new(
                format!("{} violation(s), max defect {:.3e}", report.violations.len(), report.max_defect),
                json!({"kind": "gerbe-report", "valid": report.is_valid(), "report": report}),
            );
            near_miss(&mut s.diagnostics, "max defect", report.max_defect, tol);
            Ok(s)
        }
        "dd" => {
            exactly(inputs, 1, command)?;
            let class = dd_class(&gerbe_from(&inputs[0])?)?;
            let mut result = class_json(&class);
            result["kind"] = json!("dd");
            result["integrality_tolerance"] = json!(crate::gerbe_cocycle::dd::integrality_tol::<f64>());
            Ok(Success::new(format!("class {} in {}", class.coords, class.group), result))
        }
        "trivialize" => {
            exactly(inputs, 1, command)?;
            let gerbe = gerbe_from(&inputs[0])?;
            match trivialize(&gerbe)? {
                Trivialization::Trivial { h, residual } => {
                    let complex = h.complex().clone();
                    let values: Vec<Value> = complex
                        .simplices(1)
                        .iter()
                        .zip(h.h().values())
                        .map(|(e, z)| json!({"simplex": e, "value": c2(*z)}))
                        .collect();
                    let mut s = Success::new(
                        format!("trivialization found, δ-residual {residual:.3e}"),
                        json!({"kind": "trivialization", "residual": residual, "h": values}),
                    );
                    if residual > tol {
                        s.diagnostics.push(format!("δ-residual {residual:.3e} exceeds --tol {tol:.1e}"));
                    }
                    near_miss(&mut s.diagnostics, "δ-residual", residual, tol);
                    Ok(s)
                }
                Trivialization::Nontrivial(class) => {
                    let mut result = class_json(&class);
                    result["kind"] = json!("nontrivial");
                    Ok(Success::new(format!("nontrivial: class {} in {}", class.coords, class.group), result))
                }
            }
        }
        "stable-iso" => {
            exactly(inputs, 2, command)?;
            let (a, b) = (gerbe_from(&inputs[0])?, gerbe_from(&inputs[1])?);
            let iso = stably_isomorphic(&a, &b)?;
            let (ca, cb) = (dd_class(&a)?, dd_class(&b)?);
            Ok(Success::new(
                format!("stably isomorphic: {iso}"),
                json!({"kind": "stable-iso", "isomorphic": iso, "classes": [class_json(&ca), class_json(&cb)]}),
            ))
        }
        "bockstein" => {
            exactly(inputs, 1, command)?;
            let file: CyclicFile = inputs[0].parse()?;
            let eps = file.cocycle().map_err(|e| inputs[0].malformed(e))?;
            let class = bockstein(&eps)?;
            let lifts = is_cyclic_coboundary(&eps)?;
            let mut result = class_json(&class);
            result["kind"] = json!("bockstein");
            result["n"] = json!(file.n);
            result["degree"] = json!(file.degree + 1);
            result["cyclic_coboundary"] = json!(lifts);
            Ok(Success::new(format!("β(ε) = {} in {}", class.coords, class.group), result))
        }
        "lift-obstruction" => {
            exactly(inputs, 1, command)?;
            let file: ExtensionFile = inputs[0].parse()?;
            let (ext, complex, t) = file.parts().map_err(|e| inputs[0].malformed(e))?;
            let eps = lifting_obstruction(&ext, &complex, &t)?;
            let liftable = is_cyclic_coboundary(&eps)?;
            let class = bockstein(&eps)?;
            let values: Vec<Value> = complex
                .simplices(2)
                .iter()
                .zip(eps.cochain().values())
                .filter(|(_, v)| **v != 0)
                .map(|(s, v)| json!({"simplex": s, "value": v}))
                .collect();
            Ok(Success::new(
                format!("liftable: {liftable}; Bockstein class {} in {}", class.coords, class.group),
                json!({"kind": "lift-obstruction", "n": ext.n, "obstruction": values, "liftable": liftable, "bockstein": class_json(&class)}),
            ))
        }
        "check-connective" => {
            exactly(inputs, 1, command)?;
            let file: ConnectiveFile = inputs[0].parse()?;
            let cs = file.structure("").map_err(|e| inputs[0].malformed(e))?;
            let report = check_connective(&cs, tol);
            let mut s = Success::new(
                format!(
                    "{} connection and {} curving violation(s)",
                    report.connection_violations.len(),
                    report.curving_violations.len()
                ),
                json!({"kind": "connective-report", "report": connective_json(&report)}),
            );
            near_miss(&mut s.diagnostics, "max connection residual", report.max_connection_residual, tol);
            near_miss(&mut s.diagnostics, "max curving residual", report.max_curving_residual, tol);
            Ok(s)
        }
        "holonomy" => {
            exactly(inputs, 1, command)?;
            let file: HolonomyFile = inputs[0].parse()?;
            let cs = file.connective.structure("/connective").map_err(|e| inputs[0].malformed(e))?;
            let surface = file.surface.surface("/surface").map_err(|e| inputs[0].malformed(e))?;
            let h = surface_holonomy(&cs, &surface)?;
            Ok(Success::new(
                format!("holonomy {:.12} {:+.12}i", h.value.re, h.value.im),
                json!({"kind": "holonomy", "value": c2(h.value), "log_real_part": h.log_real_part, "vertex_factor": c2(h.vertex_factor)}),
            ))
        }
        "boundary-check" => {
            exactly(inputs, 1, command)?;
            let file: BoundaryFile = inputs[0].parse()?;
            let cs = file.connective.structure("/connective").map_err(|e| inputs[0].malformed(e))?;
            let volume = file.volume.volume("/volume").map_err(|e| inputs[0].malformed(e))?;
            let report = boundary_holonomy_check(&cs, &volume, tol)?;
            let mut s = Success::new(
                format!("pass: {}, distance {:.3e}", report.pass, report.distance),
                json!({"kind": "boundary-check", "report": report}),
            );
            near_miss(&mut s.diagnostics, "distance", report.distance, tol);
            Ok(s)
        }
        "s3-gerbe" => {
            exactly(inputs, 0, command)?;
            let k = common.level.unwrap_or(1);
            let level = common.mesh_level.unwrap_or(DEFAULT_MESH_LEVEL);
            let order = common.quadrature.unwrap_or(DEFAULT_ORDER);
            settings.level = Some(k);
            settings.mesh_level = Some(level);
            settings.quadrature = Some(order);
            if level > 5 {
                return Err(Failure::Usage(format!("--mesh-level above 5 is not supported, got {level}")));
            }
            let rule = quadrature_rule(order)?;
            let data = BasicGerbeS3::<f64>::new(k);
            let mesh = EmbeddedTriangulation::s3(level);
            let gerbe = s3_gerbe(&data, &mesh)?;
            let class = dd_class(&gerbe)?;
            let d = discretize(&data, &mesh, &rule, DescentMode::Enforced)?;
            let report = check_connective(&d.connective, tol);
            let equator = surface_holonomy(&d.connective, &d.equator()?)?;
            let integral = total_three_curvature(&data, &mesh, &rule)?;
            let result = json!({
                "kind": "s3-gerbe",
                "k": k,
                "vertices": mesh.vertices.len(),
                "tetrahedra": mesh.cells.len(),
                "three_curvature_integral": integral,
                "dd": class_json(&class),
                "connective": connective_json(&report),
                "equator_holonomy": c2(equator.value),
            });
            let mut full = result.clone();
            let file = serde_json::to_value(GerbeFile::from_gerbe(&gerbe)).expect("serializable");
            for key in ["facets", "g", "variation"] {
                if let Some(v) = file.get(key) {
                    full[key] = v.clone();
                }
            }
            let mut s = Success::new(format!("level {k} basic gerbe on S³ (mesh level {level}): class {}", class.coords), result);
            s.full = Some(full);
            if common.output.is_none() {
                s.diagnostics.push("the cocycle itself is only written with --output".into());
            }
            Ok(s)
        }
        "wzw" => {
            if inputs.is_empty() || inputs.len() > 2 {
                return Err(Failure::Usage(format!("wzw takes one or two --input files, got {}", inputs.len())));
            }
            let k = common.level.unwrap_or(1);
            let order = common.quadrature.unwrap_or(DEFAULT_ORDER);
            settings.level = Some(k);
            settings.quadrature = Some(order);
            let rule = quadrature_rule(order)?;
            let mesh: MeshFile = inputs[0].parse()?;
            let (values, source, pointer) = if inputs.len() == 2 {
                let map: MeshFile = inputs[1].parse()?;
                (map.values, &inputs[1], "/values")
            } else {
                (mesh.values.clone(), &inputs[0], "/values")
            };
            let values = values.ok_or_else(|| source.malformed(InputError::at("", "missing field `values`")))?;
            let map = mesh.map(&values, pointer).map_err(|e| source.malformed(e))?;
            if map.domain().cell_dimension() == 2 {
                let z = wzw_holonomy(&map, k, &rule)?;
                Ok(Success::new(format!("WZW amplitude {:.12} {:+.12}i", z.re, z.im), json!({"kind": "wzw", "value": c2(z)})))
            } else {
                let action = witten_action(&map, k, &rule)?;
                let mut result = json!({"kind": "witten-action", "action": action, "exp_action": c2(circle_from_turns(action))});
                let boundary = boundary_faces(map.domain());
                if !boundary.is_empty() {
                    let z = wzw_holonomy(&map.restrict(&boundary)?, k, &rule)?;
                    result["boundary_holonomy"] = json!(c2(z));
                    result["distance"] = json!(circle_distance(z, circle_from_turns(action)));
                }
                Ok(Success::new(format!("Witten action {action:.12}"), result))
            }
        }
        other => Err(Failure::Usage(format!("unknown subcommand {other}"))),
    }
}

fn boundary_faces(mesh: &EmbeddedTriangulation) -> Vec<[usize; 3]> {
    let mut count = std::collections::BTreeMap::<[usize; 3], usize>::new();
    let faces: Vec<[usize; 3]> =
        mesh.cells.iter().flat_map(|c| crate::connective::oriented_faces([c[0], c[1], c[2], c[3]])).collect();
    let key = |f: &[usize; 3]| {
        let mut s = *f;
        s.sort_unstable();
        s
    };
    for f in &faces {
        *count.entry(key(f)).or_default() += 1;
    }
    faces.into_iter().filter(|f| count[&key(f)] == 1).collect()
}

fn gerbe_from(input: &Input) -> Result<crate::gerbe_cocycle::LocalGerbe<f64>, Failure> {
    let file: GerbeFile = input.parse()?;
    file.gerbe().map_err(|e| input.malformed(e))
}

fn takes_cocycles(command: &str) -> bool {
    matches!(command, "check-gerbe" | "dd" | "trivialize" | "stable-iso" | "bockstein" | "lift-obstruction")
}

fn render(report: &CommandReport) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}

/// Runs the tool on `args` (including the program name).
pub fn run<I, A>(args: I) -> Outcome
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { exit_code: code, stdout, stderr, report: None };
        }
    };
    let (command, common) = cli.command.split();
    let mut settings = Settings { tol: common.tol, ..Settings::default() };
    let mut stderr = String::new();
    let mut digests = Vec::new();
    let mut inputs = Vec::new();
    let mut failure = None;
    if !(common.tol.is_finite() && common.tol >= 0.0) {
        failure = Some(Failure::Usage(format!("--tol must be a nonnegative number, got {}", common.tol)));
    }
    for path in &common.input {
        match std::fs::read(path) {
            Ok(bytes) => {
                let shown = path.display().to_string();
                digests.push(InputDigest { path: shown.clone(), sha256: hex::encode(Sha256::digest(&bytes)) });
                match String::from_utf8(bytes) {
                    Ok(text) => inputs.push(Input { path: shown, text }),
                    Err(_) => {
                        failure.get_or_insert(Failure::Malformed {
                            file: shown,
                            error: InputError::at("", "the file is not UTF-8 text"),
                        });
                    }
                }
            }
            Err(e) => {
                failure.get_or_insert(Failure::Io(format!("cannot read {}: {e}", path.display())));
            }
        }
    }
    let mut diagnostics = Vec::new();
    if takes_cocycles(command) {
        diagnostics.push(GOOD_COVER_NOTE.to_string());
        stderr.push_str(&format!("note: {GOOD_COVER_NOTE}\n"));
    }
    let outcome = match failure {
        Some(f) => Err(f),
        None => execute(command, common, &inputs, &mut settings),
    };
    let (summary, result, full, exit_code) = match outcome {
        Ok(s) => {
            diagnostics.extend(s.diagnostics);
            (format!("{command}: {}", s.summary), s.result, s.full, 0)
        }
        Err(f) => {
            let (message, value) = f.describe();
            stderr.push_str(&format!("error: {message}\n"));
            (format!("{command}: error: {message}"), value, None, f.exit_code())
        }
    };
    let mut report = CommandReport {
        command: command.to_string(),
        inputs: digests,
        settings,
        result,
        diagnostics,
        exit_code,
    };
    if let Some(path) = &common.output {
        let payload = full.as_ref().unwrap_or(&report.result);
        let text = serde_json::to_string_pretty(payload).expect("payloads serialize");
        if let Err(e) = std::fs::write(path, text + "\n") {
            let message = format!("cannot write {}: {e}", path.display());
            stderr.push_str(&format!("error: {message}\n"));
            report.diagnostics.push(message);
            report.exit_code = 4;
        }
    }
    let stdout = format!("{summary}\n{}\n", render(&report));
    Outcome { exit_code: report.exit_code, stdout, stderr, report: Some(report) }
}
