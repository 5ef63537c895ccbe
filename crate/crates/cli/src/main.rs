//! `tnn`: command-line access to positivity tests, twist maps, gradient flows,
//! the Toda flow, Jacobi reconstructions and amplituhedron projections.
//!
//! Exit status is 0 on success, 1 when a check reports "outside" or fails its
//! tolerance, and 2 on malformed input.

mod input;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use tnn_orbits::ampli::*;
use tnn_orbits::flagorbit::*;
use tnn_orbits::flows::*;
use tnn_orbits::io::{to_json, MatrixJson, MoserJson, OrbitJson};
use tnn_orbits::jacobi::*;
use tnn_orbits::linalg::{ensure_decreasing, max_abs_diff, unitarity_defect};
use tnn_orbits::positivity::*;
use tnn_orbits::toda::*;
use tnn_orbits::ComplexMatrix;

use input::{load, load_matrix, load_z, wrong_kind, CliResult, Failure, Input};

const CROSS_CHECK_TOL: f64 = 1e-6;
const TWIST_CHECK_TOL: f64 = 1e-7;

#[derive(Parser)]
#[command(
    name = "tnn",
    version,
    about = "Total positivity on adjoint orbits of the unitary group"
)]
struct Cli {
    /// Positivity and rank tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Initial integrator step.
    #[arg(long, global = true, default_value_t = DEFAULT_STEP)]
    step: f64,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// JSON input file, `-` for standard input.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    #[arg(value_name = "FILE", conflicts_with = "input")]
    path: Option<PathBuf>,
}

impl InputArgs {
    fn file(&self) -> Option<&Path> {
        self.input.as_deref().or(self.path.as_deref())
    }

    fn require(&self) -> CliResult<Input> {
        load(
            self.file()
                .ok_or_else(|| Failure("an input file is required (--in FILE)".into()))?,
        )
    }

    fn optional(&self) -> CliResult<Option<Input>> {
        self.file().map(load).transpose()
    }
}

#[derive(Args)]
struct TimeArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    t0: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    t1: f64,
    /// Number of intervals between t0 and t1.
    #[arg(long, default_value_t = 100)]
    samples: usize,
}

impl TimeArgs {
    fn grid(&self) -> CliResult<Vec<f64>> {
        if !(self.t0.is_finite() && self.t1.is_finite()) || self.t1 < self.t0 {
            return Err(Failure(format!(
                "field t1 = {} must be finite and at least t0 = {}",
                self.t1, self.t0
            )));
        }
        if self.t1 == self.t0 {
            return Ok(vec![self.t0]);
        }
        if self.samples == 0 {
            return Err(Failure("field samples must be positive".into()));
        }
        Ok(uniform_times(self.t0, self.t1, self.samples))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PositivityKind {
    /// Unitary inputs as unitary matrices, other matrices as TP tests.
    Auto,
    Tp,
    Unitary,
    Flag,
    Orbit,
    Jacobi,
}

#[derive(Clone, Copy, ValueEnum)]
enum TwistMap {
    Iota,
    Theta,
    ThetaLambda,
    Rev,
    Rho,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Positivity verdict for a matrix, flag or orbit point.
    Positivity {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "auto")]
        kind: PositivityKind,
    },
    /// Apply one of the involutions iota, theta, theta-lambda, rev, rho.
    Twist {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "theta")]
        map: TwistMap,
        /// Expected dimension.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Bruhat cell of a totally nonnegative complete flag.
    Cell {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Gradient flow of the height function on an orbit.
    Flow {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "kahler")]
        metric: Metric,
        /// Skew-Hermitian driving matrix; defaults to -i diag(n-1, ..., 0).
        #[arg(long = "N", value_name = "FILE")]
        drive: Option<PathBuf>,
        /// Decreasing eigenvalues, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Option<Vec<f64>>,
        #[command(flatten)]
        times: TimeArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Print only the final point.
        #[arg(long = "final")]
        last: bool,
    },
    /// The symmetric Toda flow.
    Toda {
        #[command(flatten)]
        input: InputArgs,
        /// Closed-form solution (the default).
        #[arg(long)]
        symes: bool,
        /// Runge-Kutta integration.
        #[arg(long)]
        ode: bool,
        /// Largest difference between the two solutions on the time grid.
        #[arg(long)]
        cross_check: bool,
        /// Residual of the twisted Kahler-flow identity on the time grid.
        #[arg(long)]
        twist_check: bool,
        /// Sorted limits as t tends to plus and minus infinity.
        #[arg(long)]
        limits: bool,
        #[command(flatten)]
        times: TimeArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Jacobi matrices from Moser data or from a {1,2} flag.
    #[command(subcommand)]
    Jacobi(JacobiCommand),
    /// Z-maps, projected drives and amplituhedron samples.
    #[command(subcommand)]
    Ampli(AmpliCommand),
    /// Run the seeded self-check suites.
    Verify {
        /// Cases per suite.
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
}

#[derive(Subcommand)]
enum JacobiCommand {
    FromMoser {
        #[command(flatten)]
        input: InputArgs,
    },
    ToMoser {
        #[command(flatten)]
        input: InputArgs,
    },
    #[command(name = "from-12flag")]
    From12Flag {
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Subcommand)]
enum AmpliCommand {
    /// Twisted Vandermonde Z from Moser data, or the quadrilateral Z.
    #[command(name = "build-Z")]
    BuildZ {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Quadrilateral parameters a,b,c.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        quadrilateral: Option<Vec<f64>>,
        /// Replace Z by its orthonormalization.
        #[arg(long)]
        orthonormal: bool,
    },
    /// Image of an n x k matrix under Z.
    Zmap {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long = "Z", value_name = "FILE")]
        z: PathBuf,
    },
    /// The drive induced on the image by a kernel-preserving N.
    #[command(name = "project-N")]
    ProjectN {
        #[arg(long = "Z", value_name = "FILE")]
        z: PathBuf,
        #[arg(long = "N", value_name = "FILE")]
        drive: PathBuf,
    },
    /// Random points of the amplituhedron.
    Sample {
        #[arg(long = "Z", value_name = "FILE")]
        z: PathBuf,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Test every sample against the convex hull of the columns (k = 1).
        #[arg(long)]
        check_hull: bool,
    },
}

struct Ctx {
    tol: f64,
    step: f64,
    seed: u64,
}

impl Ctx {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Writes one JSON line; a closed pipe is not an error.
fn emit<T: Serialize>(value: &T) -> CliResult<()> {
    match writeln!(std::io::stdout().lock(), "{}", to_json(value)?) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn matrix_json(m: &ComplexMatrix) -> MatrixJson {
    MatrixJson::from_matrix(m)
}

fn emit_trajectory(traj: &Trajectory, format: Format) -> CliResult<()> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(std::io::stdout().lock());
            let written = w.write_record(traj.csv_header()).and_then(|_| {
                traj.csv_rows()
                    .iter()
                    .try_for_each(|row| w.write_record(row.iter().map(|x| format!("{x:?}"))))
            });
            match written.and_then(|_| w.flush().map_err(csv::Error::from)) {
                Err(e) if !matches!(e.kind(), csv::ErrorKind::Io(io) if io.kind() == std::io::ErrorKind::BrokenPipe) => {
                    return Err(e.into())
                }
                _ => {}
            }
        }
        Format::Json => emit(&json!({
            "times": traj.times,
            "points": traj.points.iter().map(OrbitJson::from_orbit).collect::<Vec<_>>(),
            "diagnostics": traj.diagnostics,
        }))?,
    }
    Ok(())
}

fn verdict_exit(v: &Verdict) -> CliResult<u8> {
    emit(v)?;
    Ok(u8::from(!v.is_nonnegative()))
}

fn check_exit(residual: f64, tol: f64, extra: serde_json::Value) -> CliResult<u8> {
    let pass = residual < tol;
    let mut out = json!({ "max_residual": residual, "tol": tol, "status": if pass { "pass" } else { "fail" } });
    if let (Some(o), serde_json::Value::Object(e)) = (out.as_object_mut(), extra) {
        o.extend(e);
    }
    emit(&out)?;
    Ok(u8::from(!pass))
}

fn positivity(ctx: &Ctx, input: Input, kind: PositivityKind) -> CliResult<u8> {
    let v = match (kind, input) {
        (PositivityKind::Auto, Input::Matrix(m))
            if m.is_square() && unitarity_defect(&m) < 1e-9 =>
        {
            is_tnn_unitary(&m, ctx.tol)?
        }
        (PositivityKind::Auto | PositivityKind::Tp, Input::Matrix(m)) => is_tp_matrix(&m, ctx.tol)?,
        (PositivityKind::Unitary, Input::Matrix(m)) => is_tnn_unitary(&m, ctx.tol)?,
        (PositivityKind::Auto | PositivityKind::Flag, Input::Flag(f)) => {
            let k = *f.dims().last().unwrap_or(&0);
            is_plucker_nonneg(&f.rep().columns(0, k).into_owned(), f.dims(), ctx.tol)?
        }
        (PositivityKind::Auto | PositivityKind::Orbit, Input::Orbit(p)) => {
            let f = orbit_to_flag(&p)?;
            let k = *f.dims().last().unwrap_or(&0);
            is_plucker_nonneg(&f.rep().columns(0, k).into_owned(), f.dims(), ctx.tol)?
        }
        (PositivityKind::Jacobi, Input::Orbit(p)) => {
            is_jacobi_cone(&(p.matrix() * -tnn_orbits::linalg::I), ctx.tol)?
        }
        (PositivityKind::Jacobi, Input::Matrix(m)) => is_jacobi_cone(&m, ctx.tol)?,
        (_, other) => return Err(wrong_kind(&other, "an input matching --kind")),
    };
    verdict_exit(&v)
}

fn twist(input: Input, map: TwistMap, n: Option<usize>) -> CliResult<u8> {
    let dim = match &input {
        Input::Matrix(m) => m.nrows(),
        Input::Flag(f) => f.n(),
        Input::Orbit(p) => p.n(),
        other => return Err(wrong_kind(other, "a matrix, flag or orbit point")),
    };
    if let Some(n) = n.filter(|&n| n != dim) {
        return Err(Failure(format!(
            "field n = {n} does not match the {dim}x{dim} input"
        )));
    }
    match (map, input) {
        (TwistMap::Iota, Input::Matrix(g)) => emit(&matrix_json(&twist_unitary(&g)?))?,
        (TwistMap::Theta, Input::Matrix(g)) => {
            emit(&matrix_json(twist_flag(&PartialFlag::complete(g)?)?.rep()))?
        }
        (TwistMap::Theta, Input::Flag(f)) => {
            emit(&tnn_orbits::io::FlagJson::from_flag(&twist_flag(&f)?))?
        }
        (TwistMap::Theta | TwistMap::ThetaLambda, Input::Orbit(p)) => {
            emit(&OrbitJson::from_orbit(&twist_orbit(&p)?))?
        }
        (TwistMap::Rev, Input::Matrix(g)) => emit(&matrix_json(&rev_unitary(&g)))?,
        (TwistMap::Rev, Input::Flag(f)) => {
            emit(&tnn_orbits::io::FlagJson::from_flag(&rev_flag(&f)?))?
        }
        (TwistMap::Rev, Input::Orbit(p)) => emit(&OrbitJson::from_orbit(&rev_orbit(&p)?))?,
        (TwistMap::Rho, Input::Matrix(g)) => emit(&matrix_json(&dual_unitary(&g)))?,
        (TwistMap::Rho, Input::Flag(f)) => {
            emit(&tnn_orbits::io::FlagJson::from_flag(&dual_flag(&f)?))?
        }
        (_, other) => return Err(wrong_kind(&other, "an input supported by this map")),
    }
    Ok(0)
}

fn cell(ctx: &Ctx, input: Input) -> CliResult<u8> {
    let flag = match input {
        Input::Matrix(g) => PartialFlag::complete(g)?,
        Input::Flag(f) => f,
        Input::Orbit(p) => orbit_to_flag(&p)?,
        other => return Err(wrong_kind(&other, "a matrix, flag or orbit point")),
    };
    emit(&locate_cell(&flag, ctx.tol)?)?;
    Ok(0)
}

struct FlowArgs<'a> {
    metric: Metric,
    drive: Option<&'a Path>,
    lambda: Option<Vec<f64>>,
    times: &'a TimeArgs,
    format: Format,
    last: bool,
}

fn flow(ctx: &Ctx, input: Option<Input>, a: FlowArgs) -> CliResult<u8> {
    let lambda = match (&input, a.lambda) {
        (Some(Input::Orbit(p)), Some(l))
            if l.len() != p.n() || max_abs_diff_vec(&l, p.lambda()) > 1e-12 =>
        {
            return Err(Failure(format!(
                "field lambda {l:?} disagrees with the input spectrum {:?}",
                p.lambda()
            )));
        }
        (Some(Input::Orbit(p)), _) => p.lambda().to_vec(),
        (_, Some(l)) => l,
        _ => {
            return Err(Failure(
                "field lambda is required unless the input is an orbit point".into(),
            ))
        }
    };
    ensure_decreasing(&lambda).map_err(|e| Failure(format!("field lambda: {e}")))?;
    let n = lambda.len();
    let start = match &input {
        Some(Input::Orbit(p)) => Some(p.clone()),
        _ => None,
    };
    let g0 = match input {
        Some(Input::Orbit(p)) => orbit_to_flag(&p)?.rep().clone(),
        Some(Input::Matrix(g)) => g,
        Some(Input::Flag(f)) => f.rep().clone(),
        Some(other) => return Err(wrong_kind(&other, "an orbit point, unitary matrix or flag")),
        None => sample_tnn_flag(n, &mut ctx.rng())?,
    };
    if g0.nrows() != n {
        return Err(Failure(format!(
            "field lambda has {n} entries for a {}x{} start",
            g0.nrows(),
            g0.ncols()
        )));
    }
    let drive = match a.drive {
        Some(path) => load_matrix(path)?,
        None => toda_drive(n),
    };
    let spec = FlowSpec::new(a.metric, drive, lambda)?.with_step(ctx.step)?;
    let times = a.times.grid()?;
    let traj = match &start {
        Some(p) => spec.run(p, &times)?,
        None => spec.run_from_rep(&g0, &times)?,
    };
    if a.last || times.len() == 1 {
        emit(&OrbitJson::from_orbit(traj.last()))?;
    } else {
        emit_trajectory(&traj, a.format)?;
    }
    Ok(0)
}

fn max_abs_diff_vec(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

struct TodaArgs<'a> {
    symes: bool,
    ode: bool,
    cross_check: bool,
    twist_check: bool,
    limits: bool,
    times: &'a TimeArgs,
    format: Format,
}

fn toda(ctx: &Ctx, input: Input, a: TodaArgs) -> CliResult<u8> {
    let l0 = match input {
        Input::Orbit(p) => p,
        Input::Moser(d) => jacobi_from_moser(&d)?,
        other => return Err(wrong_kind(&other, "an orbit point or Moser data")),
    };
    let times = a.times.grid()?;
    if a.limits {
        let (plus, minus) = toda_limits(&l0, None)?;
        emit(
            &json!({ "plus": OrbitJson::from_orbit(&plus), "minus": OrbitJson::from_orbit(&minus) }),
        )?;
        return Ok(0);
    }
    if a.cross_check {
        let traj = toda_ode(&l0, &times, ctx.step)?;
        let mut worst = 0.0f64;
        for (&t, p) in times.iter().zip(&traj.points) {
            worst = worst.max(max_abs_diff(p.matrix(), toda_symes(&l0, t)?.matrix()));
        }
        return check_exit(
            worst,
            CROSS_CHECK_TOL,
            json!({ "spectrum_drift": traj.max_spectrum_drift() }),
        );
    }
    if a.twist_check {
        let mut worst = 0.0f64;
        for &t in &times {
            worst = worst.max(toda_twist_residual(&l0, t)?);
        }
        return check_exit(worst, TWIST_CHECK_TOL, json!({}));
    }
    let traj = if a.ode && !a.symes {
        toda_ode(&l0, &times, ctx.step)?
    } else {
        let points = times
            .iter()
            .map(|&t| toda_symes(&l0, t))
            .collect::<tnn_orbits::Result<Vec<_>>>()?;
        let drive = toda_drive(l0.n());
        let diagnostics = points
            .iter()
            .map(|p| {
                Ok(StepDiagnostics {
                    spectrum_drift: 0.0,
                    unitarity_drift: 0.0,
                    lyapunov: lyapunov(p.matrix(), &drive)?,
                })
            })
            .collect::<tnn_orbits::Result<Vec<_>>>()?;
        Trajectory {
            times,
            points,
            diagnostics,
        }
    };
    emit_trajectory(&traj, a.format)?;
    Ok(0)
}

fn jacobi(cmd: JacobiCommand) -> CliResult<u8> {
    match cmd {
        JacobiCommand::FromMoser { input } => match input.require()? {
            Input::Moser(d) => emit(&OrbitJson::from_orbit(&jacobi_from_moser(&d)?))?,
            other => return Err(wrong_kind(&other, "Moser data")),
        },
        JacobiCommand::ToMoser { input } => match input.require()? {
            Input::Orbit(p) => emit(&MoserJson::from_moser(&moser_from_jacobi(&p)?))?,
            other => return Err(wrong_kind(&other, "an orbit point")),
        },
        JacobiCommand::From12Flag { input } => match input.require()? {
            Input::Flag(f) => emit(&OrbitJson::from_orbit(&jacobi_from_12flag(&f)?))?,
            other => return Err(wrong_kind(&other, "a flag")),
        },
    }
    Ok(0)
}

fn ampli(ctx: &Ctx, cmd: AmpliCommand) -> CliResult<u8> {
    match cmd {
        AmpliCommand::BuildZ {
            input,
            k,
            m,
            quadrilateral,
            orthonormal,
        } => {
            let z = match (quadrilateral, input.optional()?) {
                (Some(q), None) => match q[..] {
                    [a, b, c] => quadrilateral_z(a, b, c)?,
                    _ => {
                        return Err(Failure(format!(
                            "field quadrilateral needs three values, got {}",
                            q.len()
                        )))
                    }
                },
                (None, Some(Input::Moser(d))) => twisted_vdm_z(&d, k, m)?,
                (None, Some(other)) => return Err(wrong_kind(&other, "Moser data")),
                (Some(_), Some(_)) => {
                    return Err(Failure(
                        "give either --quadrilateral or an input file".into(),
                    ))
                }
                (None, None) => {
                    return Err(Failure(
                        "an input file or --quadrilateral is required".into(),
                    ))
                }
            };
            let z = if orthonormal { z.orthonormalized()? } else { z };
            emit(&z.to_json())?;
        }
        AmpliCommand::Zmap { input, z } => {
            let z = load_z(&z)?;
            let v = match input.require()? {
                Input::Matrix(v) => v,
                other => return Err(wrong_kind(&other, "an n x k matrix")),
            };
            emit(&matrix_json(&zmap(&z, &v)?))?;
        }
        AmpliCommand::ProjectN { z, drive } => {
            let z = load_z(&z)?;
            emit(&matrix_json(&project_n(&z, &load_matrix(&drive)?)?))?;
        }
        AmpliCommand::Sample {
            z,
            count,
            check_hull,
        } => {
            let z = load_z(&z)?;
            let points = sample_amplituhedron(&z, count, &mut ctx.rng())?;
            let json_points: Vec<_> = points.iter().map(matrix_json).collect();
            if !check_hull {
                emit(&json!({ "points": json_points }))?;
                return Ok(0);
            }
            let inside = points
                .iter()
                .map(|p| polytope_contains(&z, p, ctx.tol))
                .collect::<tnn_orbits::Result<Vec<_>>>()?;
            emit(&json!({ "points": json_points, "in_hull": inside }))?;
            return Ok(u8::from(inside.iter().any(|&b| !b)));
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> CliResult<u8> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(Failure(format!("field tol = {} must be positive", cli.tol)));
    }
    if !(cli.step > 0.0 && cli.step.is_finite()) {
        return Err(Failure(format!(
            "field step = {} must be positive",
            cli.step
        )));
    }
    let ctx = Ctx {
        tol: cli.tol,
        step: cli.step,
        seed: cli.seed,
    };
    match cli.command {
        Command::Positivity { input, kind } => positivity(&ctx, input.require()?, kind),
        Command::Twist { input, map, n } => twist(input.require()?, map, n),
        Command::Cell { input } => cell(&ctx, input.require()?),
        Command::Flow {
            input,
            metric,
            drive,
            lambda,
            times,
            format,
            last,
        } => flow(
            &ctx,
            input.optional()?,
            FlowArgs {
                metric,
                drive: drive.as_deref(),
                lambda,
                times: &times,
                format,
                last,
            },
        ),
        Command::Toda {
            input,
            symes,
            ode,
            cross_check,
            twist_check,
            limits,
            times,
            format,
        } => toda(
            &ctx,
            input.require()?,
            TodaArgs {
                symes,
                ode,
                cross_check,
                twist_check,
                limits,
                times: &times,
                format,
            },
        ),
        Command::Jacobi(cmd) => jacobi(cmd),
        Command::Ampli(cmd) => ampli(&ctx, cmd),
        Command::Verify { cases } => Ok(u8::from(!verify::run_all(
            ctx.seed,
            cases,
            &mut std::io::stdout().lock(),
        )?)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => {
            let _ = std::io::stdout().flush();
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
