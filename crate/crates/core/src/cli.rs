//! Command-line front end. Every command is a thin adapter over the library
//! and prints one record of `key=value` lines, or a JSON object with
//! `--json`. `region` writes CSV instead.
//!
//! Exit codes: 0 success, 2 usage error, 3 domain or region error, 4
//! convergence failure or failed check.

use std::ffi::OsString;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::antiprism::{
    c_lower_bound, center_distance, dihedral_angles, existence_margins, octa_angle_from_edge,
    octa_edge_from_angle, tetra_angle_from_edge, tetra_edge_from_angle, tetra_edge_max,
    AntiprismSpec, ExistenceMargins,
};
use crate::embedding::{measured_dihedrals, monte_carlo_volume, polytope, McConfig};
use crate::error::Error;
use crate::trig::{trapezoid_angles, TrapezoidShape};
use crate::volume::{
    antiprism_volume, octa_angle_min, octa_volume_by_angle, octa_volume_by_edge, schlafli_residual,
    snap_to_interval, tetra_angle_min, tetra_volume_by_angle, tetra_volume_by_edge,
    QuadratureConfig, VolumeEstimate,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_FAILURE: i32 = 4;

/// Inputs this close outside a documented parameter range are moved onto
/// its end, so that values typed with 8 or 9 digits still reach it.
pub const INPUT_SNAP: f64 = 1e-8;

pub const REGION_HEADER: &str = "cos_a,cos_c,inside,m1,m2,m3,volume";

/// Tolerances of the `verify` checks.
pub const VERIFY_ANGLE_TOL: f64 = 1e-9;
pub const VERIFY_COS_D_TOL: f64 = 1e-12;
pub const VERIFY_Z_MAX: f64 = 4.0;
pub const VERIFY_SCHLAFLI_STEP: f64 = 1e-4;
pub const VERIFY_SCHLAFLI_TOL: f64 = 1e-7;

#[derive(Debug, Parser)]
#[command(
    name = "sphervol",
    version,
    about = "Spherical antiprisms in the 3-sphere"
)]
pub struct Cli {
    /// Print a single JSON object instead of key=value lines.
    #[arg(long, global = true)]
    pub json: bool,

    /// Include elapsed wall-clock time in the output.
    #[arg(long, global = true)]
    pub timing: bool,

    /// Worker threads for Monte Carlo sampling (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct SpecArgs {
    /// Number of vertices of the top and bottom faces.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub n: u32,
    /// Edge length of the n-gon faces, in radians.
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    /// Lateral edge length, in radians.
    #[arg(long, allow_negative_numbers = true)]
    pub c: f64,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct McArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, env = "SPHERVOL_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VolumeMethod {
    Quadrature,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Edge,
    Angle,
    Both,
}

#[derive(Debug, Args, Clone, Copy)]
#[group(required = true, multiple = false)]
pub struct SolidParam {
    /// Edge length, in radians.
    #[arg(long = "a", allow_negative_numbers = true)]
    pub edge: Option<f64>,
    /// Dihedral angle, in radians.
    #[arg(long = "A", allow_negative_numbers = true)]
    pub angle: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Whether A_n(a, c) exists, with the three existence margins.
    Exists(SpecArgs),
    /// Dihedral angles along the a and c edges.
    Angles {
        #[command(flatten)]
        spec: SpecArgs,
        /// Also print the angles in degrees.
        #[arg(long)]
        degrees: bool,
    },
    /// Volume of A_n(a, c).
    Volume {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 1e-10)]
        rel_tol: f64,
        #[arg(long, value_enum, default_value_t = VolumeMethod::Quadrature)]
        method: VolumeMethod,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Volume of the regular tetrahedron.
    Tetra {
        #[command(flatten)]
        param: SolidParam,
        /// Which integral to evaluate (default: the one matching the input).
        #[arg(long, value_enum)]
        by: Option<Form>,
    },
    /// Volume of the regular octahedron.
    Octa {
        #[command(flatten)]
        param: SolidParam,
        #[arg(long, value_enum)]
        by: Option<Form>,
    },
    /// CSV of the existence region on a grid in (cos a, cos c).
    Region {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(2..))]
        grid: u32,
        /// Output file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-checks angles, face-center distance and volume against the
    /// coordinate model.
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Angles of an isosceles spherical trapezoid with bases x, z and
    /// lateral sides y.
    Trapezoid {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long)]
        z: f64,
        #[arg(long)]
        degrees: bool,
    },
}

/// A value in an [`OutputRecord`].
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // shortest representation that parses back to the same f64
            Value::Float(v) => write!(f, "{v:?}"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(v) => write!(f, "{v}"),
            Value::Text(v) => f.write_str(v),
        }
    }
}

impl Value {
    fn parse(text: &str) -> Value {
        if let Ok(b) = text.parse::<bool>() {
            Value::Bool(b)
        } else if let Ok(i) = text.parse::<i64>() {
            Value::Int(i)
        } else if text.contains(['.', 'e', 'E', 'N', 'i']) {
            match text.parse::<f64>() {
                Ok(v) => Value::Float(v),
                Err(_) => Value::Text(text.to_owned()),
            }
        } else {
            Value::Text(text.to_owned())
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Float(v) => serde_json::Number::from_f64(*v)
                .map(serde_json::Value::Number)
                .unwrap_or_else(|| serde_json::Value::String(format!("{v:?}"))),
            Value::Int(v) => serde_json::Value::from(*v),
            Value::Bool(v) => serde_json::Value::Bool(*v),
            Value::Text(v) => serde_json::Value::String(v.clone()),
        }
    }
}

/// Ordered key-value result of a command.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputRecord {
    pub fields: Vec<(String, Value)>,
}

impl OutputRecord {
    pub fn new() -> Self {
        OutputRecord::default()
    }

    pub fn float(&mut self, key: &str, v: f64) -> &mut Self {
        self.fields.push((key.to_owned(), Value::Float(v)));
        self
    }

    pub fn int(&mut self, key: &str, v: i64) -> &mut Self {
        self.fields.push((key.to_owned(), Value::Int(v)));
        self
    }

    pub fn flag(&mut self, key: &str, v: bool) -> &mut Self {
        self.fields.push((key.to_owned(), Value::Bool(v)));
        self
    }

    pub fn text(&mut self, key: &str, v: impl Into<String>) -> &mut Self {
        self.fields.push((key.to_owned(), Value::Text(v.into())));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        match self.get(key)? {
            Value::Float(v) => Some(*v),
            Value::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    fn estimate(&mut self, prefix: &str, est: &VolumeEstimate) -> &mut Self {
        self.float(prefix, est.value)
            .float(&format!("{prefix}_error_bound"), est.error_bound)
            .text(&format!("{prefix}_method"), est.method.to_string())
            .int(&format!("{prefix}_evaluations"), est.evaluations as i64)
    }

    pub fn to_text(&self) -> String {
        self.fields
            .iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    /// Parses the output of [`OutputRecord::to_text`].
    pub fn from_text(text: &str) -> Option<Self> {
        let fields = text
            .lines()
            .map(|line| {
                line.split_once('=')
                    .map(|(k, v)| (k.to_owned(), Value::parse(v)))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(OutputRecord { fields })
    }

    pub fn to_json(&self) -> String {
        let map: serde_json::Map<String, serde_json::Value> = self
            .fields
            .iter()
            .map(|(k, v)| (k.clone(), v.to_json()))
            .collect();
        serde_json::Value::Object(map).to_string()
    }
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Io(io::Error),
    /// Checks failed; the record is still printed.
    Checks(OutputRecord, Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(Error::Convergence { .. }) | CliError::Checks(..) => EXIT_FAILURE,
            CliError::Lib(_) => EXIT_DOMAIN,
            CliError::Io(_) => EXIT_FAILURE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "I/O error: {e}"),
            CliError::Checks(_, failed) => write!(f, "checks failed: {}", failed.join(", ")),
        }
    }
}

type CmdResult = Result<OutputRecord, CliError>;

fn spec_of(args: &SpecArgs) -> Result<AntiprismSpec, Error> {
    AntiprismSpec::new(args.n, args.a, args.c)
}

fn echo_spec(rec: &mut OutputRecord, spec: &AntiprismSpec) {
    rec.int("n", i64::from(spec.n))
        .float("a", spec.a)
        .float("c", spec.c);
}

fn margins_into(rec: &mut OutputRecord, m: &ExistenceMargins) {
    rec.float("m1", m.m1).float("m2", m.m2).float("m3", m.m3);
}

/// Region error message listing all three margins.
fn region_error(spec: &AntiprismSpec, err: Error) -> CliError {
    if let Error::OutsideRegion { .. } = err {
        let m = existence_margins(spec);
        CliError::Lib(Error::domain(
            "region",
            format!("{err}; margins m1={:?} m2={:?} m3={:?}", m.m1, m.m2, m.m3),
        ))
    } else {
        CliError::Lib(err)
    }
}

pub fn cmd_exists(args: &SpecArgs) -> CmdResult {
    let spec = spec_of(args)?;
    let m = existence_margins(&spec);
    let mut rec = OutputRecord::new();
    echo_spec(&mut rec, &spec);
    rec.flag("inside", m.is_admissible());
    margins_into(&mut rec, &m);
    Ok(rec)
}

pub fn cmd_angles(args: &SpecArgs, degrees: bool) -> CmdResult {
    let spec = spec_of(args)?;
    let angles = dihedral_angles(&spec).map_err(|e| region_error(&spec, e))?;
    let mut rec = OutputRecord::new();
    echo_spec(&mut rec, &spec);
    rec.float("A", angles.a_edge).float("C", angles.c_edge);
    if spec.n == 2 {
        rec.float("A_tetra", 2.0 * angles.a_edge - std::f64::consts::PI);
    }
    if degrees {
        rec.float("A_deg", angles.a_edge.to_degrees())
            .float("C_deg", angles.c_edge.to_degrees());
        if spec.n == 2 {
            rec.float(
                "A_tetra_deg",
                (2.0 * angles.a_edge - std::f64::consts::PI).to_degrees(),
            );
        }
    }
    Ok(rec)
}

pub fn cmd_volume(args: &SpecArgs, rel_tol: f64, method: VolumeMethod, mc: &McArgs) -> CmdResult {
    let spec = spec_of(args)?;
    spec.require_admissible()
        .map_err(|e| region_error(&spec, e))?;
    let mut rec = OutputRecord::new();
    echo_spec(&mut rec, &spec);
    rec.float("c0", c_lower_bound(spec.n, spec.a)?);
    let est = match method {
        VolumeMethod::Quadrature => {
            let cfg = QuadratureConfig {
                rel_tol,
                ..QuadratureConfig::default()
            };
            antiprism_volume(&spec, &cfg)?
        }
        VolumeMethod::Mc => {
            let poly = polytope(&spec).map_err(|e| region_error(&spec, e))?;
            rec.int("samples", mc.samples as i64)
                .int("seed", mc.seed as i64);
            monte_carlo_volume(
                &poly,
                &McConfig {
                    samples: mc.samples,
                    seed: mc.seed,
                },
            )?
        }
    };
    rec.float("value", est.value)
        .float("error_bound", est.error_bound)
        .text("method", est.method.to_string())
        .int("evaluations", est.evaluations as i64);
    Ok(rec)
}

/// Regular solid description used by `tetra` and `octa`.
struct Solid {
    edge_max: f64,
    angle_min: f64,
    angle_max: f64,
    angle_from_edge: fn(f64) -> crate::Result<f64>,
    edge_from_angle: fn(f64) -> crate::Result<f64>,
    by_edge: fn(f64, &QuadratureConfig) -> crate::Result<VolumeEstimate>,
    by_angle: fn(f64, &QuadratureConfig) -> crate::Result<VolumeEstimate>,
}

fn solid_volume(solid: &Solid, param: &SolidParam, by: Option<Form>) -> CmdResult {
    let cfg = QuadratureConfig::default();
    let snap = |v: f64, lo: f64, hi: f64| snap_to_interval(v, lo, hi, INPUT_SNAP);
    let (edge, angle, default_form) = match (param.edge, param.angle) {
        (Some(a), _) => {
            let a = snap(a, 0.0, solid.edge_max);
            (a, (solid.angle_from_edge)(a)?, Form::Edge)
        }
        (None, Some(angle)) => {
            let angle = snap(angle, solid.angle_min, solid.angle_max);
            ((solid.edge_from_angle)(angle)?, angle, Form::Angle)
        }
        (None, None) => unreachable!("clap requires one of --a, --A"),
    };
    let mut rec = OutputRecord::new();
    rec.float("a", edge).float("A", angle);
    let form = by.unwrap_or(default_form);
    if matches!(form, Form::Edge | Form::Both) {
        rec.estimate("volume_by_edge", &(solid.by_edge)(edge, &cfg)?);
    }
    if matches!(form, Form::Angle | Form::Both) {
        rec.estimate("volume_by_angle", &(solid.by_angle)(angle, &cfg)?);
    }
    Ok(rec)
}

pub fn cmd_tetra(param: &SolidParam, by: Option<Form>) -> CmdResult {
    solid_volume(
        &Solid {
            edge_max: tetra_edge_max(),
            angle_min: tetra_angle_min(),
            angle_max: std::f64::consts::PI,
            angle_from_edge: tetra_angle_from_edge,
            edge_from_angle: tetra_edge_from_angle,
            by_edge: tetra_volume_by_edge,
            by_angle: tetra_volume_by_angle,
        },
        param,
        by,
    )
}

pub fn cmd_octa(param: &SolidParam, by: Option<Form>) -> CmdResult {
    solid_volume(
        &Solid {
            edge_max: std::f64::consts::FRAC_PI_2,
            angle_min: octa_angle_min(),
            angle_max: std::f64::consts::PI,
            angle_from_edge: octa_angle_from_edge,
            edge_from_angle: octa_edge_from_angle,
            by_edge: octa_volume_by_edge,
            by_angle: octa_volume_by_angle,
        },
        param,
        by,
    )
}

/// Writes the region grid: `grid` equally spaced values of `cos a` and of
/// `cos c` in `[-1, 1]`, `cos a` varying slowest. `volume` is empty outside
/// the region.
pub fn write_region<W: Write>(n: u32, grid: u32, out: &mut W) -> Result<(), CliError> {
    let cfg = QuadratureConfig::default();
    writeln!(out, "{REGION_HEADER}")?;
    let coord = |i: u32| -1.0 + 2.0 * f64::from(i) / f64::from(grid - 1);
    for i in 0..grid {
        let cos_a = coord(i);
        for j in 0..grid {
            let cos_c = coord(j);
            let m = ExistenceMargins::from_cosines(n, cos_a, cos_c);
            let inside = m.is_admissible();
            let volume = if inside {
                let spec = AntiprismSpec::new(n, cos_a.acos(), cos_c.acos())?;
                format!("{:?}", antiprism_volume(&spec, &cfg)?.value)
            } else {
                String::new()
            };
            writeln!(
                out,
                "{cos_a:?},{cos_c:?},{inside},{:?},{:?},{:?},{volume}",
                m.m1, m.m2, m.m3
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn cmd_verify(args: &SpecArgs, mc: &McArgs) -> CmdResult {
    let spec = spec_of(args)?;
    spec.require_interior()
        .map_err(|e| region_error(&spec, e))?;
    let mut rec = OutputRecord::new();
    echo_spec(&mut rec, &spec);
    let mut failed = Vec::new();
    let mut check = |rec: &mut OutputRecord, name: &str, value: f64, limit: f64| {
        let pass = value <= limit;
        rec.float(name, value).flag(&format!("{name}_pass"), pass);
        if !pass {
            failed.push(name.to_owned());
        }
    };

    let poly = polytope(&spec)?;
    let formula = dihedral_angles(&spec)?;
    let measured = measured_dihedrals(&poly)?;
    rec.float("A", formula.a_edge)
        .float("A_measured", measured.a_edge)
        .float("C", formula.c_edge)
        .float("C_measured", measured.c_edge);
    let angle_diff = (formula.a_edge - measured.a_edge)
        .abs()
        .max((formula.c_edge - measured.c_edge).abs());
    check(&mut rec, "angle_diff", angle_diff, VERIFY_ANGLE_TOL);

    let cos_d = center_distance(&spec)?.cos_center_distance;
    let cos_d_measured = poly.face_center_cos();
    rec.float("cos_d", cos_d)
        .float("cos_d_measured", cos_d_measured);
    check(
        &mut rec,
        "cos_d_diff",
        (cos_d - cos_d_measured).abs(),
        VERIFY_COS_D_TOL,
    );

    let quad = antiprism_volume(&spec, &QuadratureConfig::default())?;
    let mc_est = monte_carlo_volume(
        &poly,
        &McConfig {
            samples: mc.samples,
            seed: mc.seed,
        },
    )?;
    rec.estimate("volume", &quad)
        .int("samples", mc.samples as i64)
        .int("seed", mc.seed as i64)
        .estimate("volume_mc", &mc_est);
    let z = if mc_est.error_bound > 0.0 {
        (mc_est.value - quad.value).abs() / mc_est.error_bound
    } else if mc_est.value == quad.value {
        0.0
    } else {
        f64::INFINITY
    };
    check(&mut rec, "mc_z", z, VERIFY_Z_MAX);

    let residual = schlafli_residual(&spec, VERIFY_SCHLAFLI_STEP)?.max();
    check(&mut rec, "schlafli_residual", residual, VERIFY_SCHLAFLI_TOL);

    rec.flag("all_pass", failed.is_empty());
    if failed.is_empty() {
        Ok(rec)
    } else {
        Err(CliError::Checks(rec, failed))
    }
}

pub fn cmd_trapezoid(x: f64, y: f64, z: f64, degrees: bool) -> CmdResult {
    let shape = TrapezoidShape::new(x, y, z)?;
    let (a, c) = trapezoid_angles(shape)?;
    let mut rec = OutputRecord::new();
    rec.float("x", x)
        .float("y", y)
        .float("z", z)
        .float("A", a)
        .float("C", c);
    if degrees {
        rec.float("A_deg", a.to_degrees())
            .float("C_deg", c.to_degrees());
    }
    Ok(rec)
}

enum Output {
    Record(OutputRecord),
    Raw(Vec<u8>),
}

fn dispatch(command: &Command) -> Result<Output, CliError> {
    let rec = match command {
        Command::Exists(spec) => cmd_exists(spec)?,
        Command::Angles { spec, degrees } => cmd_angles(spec, *degrees)?,
        Command::Volume {
            spec,
            rel_tol,
            method,
            mc,
        } => cmd_volume(spec, *rel_tol, *method, mc)?,
        Command::Tetra { param, by } => cmd_tetra(param, *by)?,
        Command::Octa { param, by } => cmd_octa(param, *by)?,
        Command::Region { n, grid, out: path } => {
            let mut buf = Vec::new();
            match path {
                Some(path) => write_region(*n, *grid, &mut BufWriter::new(File::create(path)?))?,
                None => write_region(*n, *grid, &mut buf)?,
            }
            return Ok(Output::Raw(buf));
        }
        Command::Verify { spec, mc } => cmd_verify(spec, mc)?,
        Command::Trapezoid { x, y, z, degrees } => cmd_trapezoid(*x, *y, *z, *degrees)?,
    };
    Ok(Output::Record(rec))
}

fn emit(rec: &OutputRecord, json: bool, out: &mut dyn Write) -> io::Result<()> {
    if json {
        writeln!(out, "{}", rec.to_json())
    } else {
        out.write_all(rec.to_text().as_bytes())
    }
}

/// Runs the parsed command line, writing results to `out` and diagnostics
/// to `err`. Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let start = Instant::now();
    let result = match cli.threads {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => {
                let _ = writeln!(err, "error: cannot start {threads} worker threads: {e}");
                return EXIT_USAGE;
            }
        },
        None => dispatch(&cli.command),
    };
    let with_timing = |mut rec: OutputRecord| {
        if cli.timing {
            rec.float("elapsed_s", start.elapsed().as_secs_f64());
        }
        rec
    };
    match result {
        Ok(output) => {
            let written = match output {
                Output::Record(rec) => emit(&with_timing(rec), cli.json, out),
                Output::Raw(bytes) => out.write_all(&bytes),
            };
            match written {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_FAILURE
                }
            }
        }
        Err(e) => {
            if let CliError::Checks(rec, _) = &e {
                let _ = emit(&with_timing(rec.clone()), cli.json, out);
            }
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with_args(
            std::iter::once("sphervol").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn record(args: &[&str]) -> OutputRecord {
        let (code, out, err) = run_args(args);
        assert_eq!(code, EXIT_OK, "{err}");
        OutputRecord::from_text(&out).unwrap()
    }

    #[test]
    fn exists_inside_and_outside() {
        let rec = record(&["exists", "--n", "3", "--a", "0.1", "--c", "0.1"]);
        assert_eq!(rec.get("inside"), Some(&Value::Bool(true)));
        let rec = record(&["exists", "--n", "5", "--a", "1.3", "--c", "0.5"]);
        assert_eq!(rec.get("inside"), Some(&Value::Bool(false)));
        assert!(rec.get_f64("m3").unwrap() < 0.0);
    }

    #[test]
    fn n_below_two_is_usage_error() {
        let (code, _, err) = run_args(&["exists", "--n", "1", "--a", "0.1", "--c", "0.1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(!err.is_empty());
        assert_eq!(
            run_args(&["exists", "--n", "3", "--a", "x", "--c", "0.1"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn angles_out_of_region_names_margin() {
        let (code, _, err) = run_args(&["angles", "--n", "5", "--a", "1.3", "--c", "0.5"]);
        assert_eq!(code, EXIT_DOMAIN);
        assert!(err.contains("m3"), "{err}");
    }

    #[test]
    fn volume_orthant() {
        let rec = record(&["volume", "--n", "2", "--a", "1.5707963", "--c", "1.5707963"]);
        let v = rec.get_f64("value").unwrap();
        assert!((v - 1.23370055).abs() < 1e-6);
    }

    #[test]
    fn tetra_angle_lower_limit_snaps() {
        let rec = record(&["tetra", "--A", "1.23095941"]);
        assert_eq!(rec.get_f64("volume_by_angle"), Some(0.0));
        assert_eq!(rec.get_f64("A"), Some(tetra_angle_min()));
    }

    #[test]
    fn both_forms_requested() {
        let rec = record(&["tetra", "--a", "1.5707963", "--by", "both"]);
        let e = rec.get_f64("volume_by_edge").unwrap();
        let a = rec.get_f64("volume_by_angle").unwrap();
        assert!((e - a).abs() < 2e-10);
    }

    #[test]
    fn tetra_needs_exactly_one_parameter() {
        assert_eq!(run_args(&["tetra"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["tetra", "--a", "1", "--A", "2"]).0, EXIT_USAGE);
    }

    #[test]
    fn octa_domain_error() {
        assert_eq!(run_args(&["octa", "--a", "2.0"]).0, EXIT_DOMAIN);
    }

    #[test]
    fn json_output() {
        let (code, out, _) = run_args(&[
            "--json",
            "trapezoid",
            "--x",
            "0.5",
            "--y",
            "0.6",
            "--z",
            "0.7",
        ]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["x"], serde_json::json!(0.5));
        assert!(v["A"].is_f64());
    }

    #[test]
    fn small_region_grid() {
        let mut out = Vec::new();
        write_region(4, 5, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], REGION_HEADER);
        assert_eq!(lines.len(), 26);
    }

    #[test]
    fn record_parses_back() {
        let mut rec = OutputRecord::new();
        rec.float("v", 0.1 + 0.2)
            .float("w", 1e-300)
            .float("z", 3.0)
            .int("n", -4)
            .flag("ok", false)
            .text("method", "quadrature");
        assert_eq!(OutputRecord::from_text(&rec.to_text()), Some(rec));
    }

    proptest! {
        #[test]
        fn floats_round_trip(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let mut rec = OutputRecord::new();
            rec.float("v", v);
            let back = OutputRecord::from_text(&rec.to_text()).unwrap();
            prop_assert_eq!(back.get_f64("v").unwrap().to_bits(), v.to_bits());
        }
    }
}
