use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ptolemy_core::filling::{common_line, rho, FillingPoint};
use ptolemy_core::zigzag::{zigzag_limit, zigzag_slope_check, ZigzagSpec};
use ptolemy_core::{Model, OrientedLine};
use ptolemy_cli::{run, ConfigError, FileConfig, Format, ModelKind, Overrides, Report, Suite, SuiteConfig};
use serde_json::json;

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "ptolemy", version, about = "Numerical checks of Möbius and Ptolemy geometry")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites and write a report.
    Verify(VerifyArgs),
    /// Compute a zigzag limit through the origin along the model frame.
    Zigzag(ZigzagArgs),
    /// Distance in the hyperbolic filling between two points `(x, r)`, `(y, s)`.
    Filling(FillingArgs),
    /// Render a JSON report as a table.
    Report {
        path: PathBuf,
    },
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    model: Option<ModelKind>,
    /// Euclidean dimension, or `m` for the Heisenberg group of dimension `2m+1`.
    #[arg(long)]
    dim: Option<usize>,
}

impl ModelArgs {
    fn resolve(&self) -> Result<Model, ConfigError> {
        let dim = self.dim.unwrap_or(1);
        if dim == 0 {
            return Err(ConfigError::field("dim", "must be at least 1"));
        }
        Ok(match self.model.unwrap_or(ModelKind::Heisenberg) {
            ModelKind::Euclidean => Model::euclidean(dim),
            ModelKind::Heisenberg => Model::heisenberg(dim),
        })
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Suite to run; repeat for several. Defaults to all.
    #[arg(long = "suite")]
    suites: Vec<Suite>,
    #[arg(long)]
    samples: Option<usize>,
    /// Tolerance applied to every check.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, env = "PTOLEMY_SEED")]
    seed: Option<u64>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
    /// TOML config file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Record wall-clock time per check.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct ZigzagArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Step lengths, one per frame line.
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.5")]
    steps: Vec<f64>,
    #[arg(long, default_value_t = 14)]
    p_max: u32,
}

#[derive(Args)]
struct FillingArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Vec<f64>,
    #[arg(long)]
    r: f64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    y: Vec<f64>,
    #[arg(long)]
    s: f64,
}

enum Failure {
    Config(String),
    Failed,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<ptolemy_core::Error> for Failure {
    fn from(e: ptolemy_core::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Verify(a) => verify(a),
        Cmd::Zigzag(a) => zigzag(a),
        Cmd::Filling(a) => filling(a),
        Cmd::Report { path } => render(&path),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let file = match &a.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let cli = Overrides {
        model: a.model.model,
        dim: a.model.dim,
        suites: a.suites,
        samples: a.samples,
        tol: a.tol,
        seed: a.seed,
        out: a.out,
        format: a.format,
        timings: a.timings,
    };
    let cfg = SuiteConfig::resolve(file, cli)?;
    let report = run(&cfg);
    let body = match cfg.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match &cfg.out {
        Some(p) => std::fs::write(p, body).map_err(|e| Failure::Config(format!("cannot write {}: {e}", p.display())))?,
        None => print!("{body}"),
    }
    eprint!("{}", report.render());
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Failed)
    }
}

fn zigzag(a: ZigzagArgs) -> Result<(), Failure> {
    let m = a.model.resolve()?;
    let frame = m.horizontal_frame();
    if a.steps.is_empty() || a.steps.len() > frame.len() {
        return Err(ConfigError::field("steps", format!("need between 1 and {} step lengths", frame.len())).into());
    }
    let o = m.origin();
    let lines = frame
        .into_iter()
        .take(a.steps.len())
        .map(|v| OrientedLine::new(m, o.clone(), v))
        .collect::<ptolemy_core::Result<Vec<_>>>()?;
    let spec = ZigzagSpec::new(m, o, lines, a.steps, a.p_max)?;
    let res = zigzag_limit(&spec)?;
    let slopes = zigzag_slope_check(&res, &spec).ok();
    let out = json!({
        "speed": res.speed,
        "converged_depth": res.converged_depth,
        "degenerate": res.degenerate,
        "depth_diffs": res.depth_diffs,
        "limit_direction": res.limit_line.as_ref().map(|l| &l.direction),
        "slope_residuals": slopes,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(())
}

fn filling(a: FillingArgs) -> Result<(), Failure> {
    let m = a.model.resolve()?;
    for (name, v) in [("x", &a.x), ("y", &a.y)] {
        if v.len() != m.coord_dim() {
            return Err(ConfigError::field(name, format!("expected {} coordinates, got {}", m.coord_dim(), v.len())).into());
        }
    }
    let s = FillingPoint::new(m, a.x, a.r)?;
    let t = FillingPoint::new(m, a.y, a.s)?;
    let line = common_line(&s, &t)?;
    let out = json!({
        "rho": rho(&s, &t)?,
        "line": { "a": line.a, "a_prime": line.a_prime },
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(())
}

fn render(path: &PathBuf) -> Result<(), Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    let report: Report =
        serde_json::from_str(&text).map_err(|e| Failure::Config(format!("cannot parse {}: {e}", path.display())))?;
    print!("{}", report.render());
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Failed)
    }
}
