mod config;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hypersurf::algebra::{identifiers, parse_poly, resultant, AlgebraError, Strategy, VarTable};
use hypersurf::derivation::DerivationTable;
use hypersurf::pipeline::{run_pipeline, FixtureError, PipelineConfig, PipelineError, StepId, StrategyChoice, Verdict};
use hypersurf_geometry::{
    check_trajectory, integrate_2hopf, pointwise, read_csv, write_csv, FrameState, GeometryError, IntegrateOptions,
    Model, PhiStructure, ShapeOp, StopReason, Thresholds, Verdict as CheckVerdict,
};

use config::{Config, ConfigError};

const OK: u8 = 0;
const FAILED: u8 = 2;
const EVENT: u8 = 3;
const USAGE: u8 = 64;
const DATA: u8 = 65;
const NO_INPUT: u8 = 66;

#[derive(Parser)]
#[command(name = "hypersurf", version, about = "Exact elimination pipeline and frame-equation checks")]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Fixtures directory (overrides HYPERSURF_FIXTURES and the config file).
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification and write its certificate.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Integrate the frame ODE and write a trajectory CSV.
    Integrate(IntegrateArgs),
    /// Recompute curvature residuals along a trajectory CSV.
    Check(CheckArgs),
    /// Evaluate the δ(2) equality at one shape operator.
    IdealCheck {
        /// Entries "alpha,beta,gamma,mu".
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Resultant of two polynomial files in a variable.
    Resultant(ResultantArgs),
}

#[derive(Subcommand)]
enum VerifyTarget {
    /// The elimination pipeline against its golden fixtures.
    Pipeline {
        /// Comma-separated step ids; dependencies are added.
        #[arg(long, value_delimiter = ',')]
        steps: Option<Vec<StepId>>,
        /// sylvester, interp or both.
        #[arg(long)]
        strategy: Option<StrategyChoice>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct IntegrateArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha0: f64,
    #[arg(long, allow_hyphen_values = true)]
    beta0: f64,
    #[arg(long, allow_hyphen_values = true)]
    gamma0: f64,
    /// Initial μ; only with --free-mu (on the ideal slice μ = α + γ).
    #[arg(long, allow_hyphen_values = true, requires = "free_mu")]
    mu0: Option<f64>,
    /// Carry μ as a free state with constant derivative RATE.
    #[arg(long, value_name = "RATE", allow_hyphen_values = true)]
    free_mu: Option<f64>,
    /// LO:HI
    #[arg(long, allow_hyphen_values = true)]
    s_range: String,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Single-threaded evaluation for bit-identical output.
    #[arg(long)]
    strict_sequential: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    traj: PathBuf,
    /// TOML file with `ideal`, `codazzi` and `gauss`.
    #[arg(long)]
    thresholds: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    strict_sequential: bool,
}

#[derive(Args)]
struct ResultantArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long)]
    var: String,
    #[arg(long)]
    strategy: Option<StrategyChoice>,
    /// Print the resultant as computed instead of its primitive normal form.
    #[arg(long)]
    raw: bool,
}

/// A failed command: exit code and message for stderr.
struct Failure(u8, String);

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure(USAGE, msg.into())
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Missing(p) => Failure(NO_INPUT, format!("config file not found: {}", p.display())),
            ConfigError::Invalid(m) => Failure(USAGE, format!("invalid configuration: {m}")),
        }
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Usage(_) | GeometryError::Singular(_) => Failure(USAGE, e.to_string()),
            GeometryError::Data(_) => Failure(DATA, e.to_string()),
            GeometryError::Io(ref io) => Failure(io_code(io), e.to_string()),
        }
    }
}

fn io_code(e: &io::Error) -> u8 {
    if e.kind() == io::ErrorKind::NotFound {
        NO_INPUT
    } else {
        DATA
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(io_code(&e), format!("{}: {e}", path.display())))
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure(DATA, format!("cannot write {}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let cfg = Config::resolve(cli.config.as_deref(), cli.fixtures)?;
    match cli.command {
        Command::Verify { target: VerifyTarget::Pipeline { steps, strategy, out, seed } } => {
            cmd_verify(&cfg, steps, strategy, out, seed)
        }
        Command::Integrate(args) => cmd_integrate(&cfg, args),
        Command::Check(args) => cmd_check(&cfg, args),
        Command::IdealCheck { matrix } => cmd_ideal_check(&cfg, &matrix),
        Command::Resultant(args) => cmd_resultant(&cfg, args),
    }
}

fn cmd_verify(
    cfg: &Config,
    steps: Option<Vec<StepId>>,
    strategy: Option<StrategyChoice>,
    out: Option<PathBuf>,
    seed: Option<u64>,
) -> Result<u8, Failure> {
    if !cfg.fixtures.is_dir() {
        return Err(Failure(NO_INPUT, format!("fixtures directory not found: {}", cfg.fixtures.display())));
    }
    let pc = PipelineConfig {
        fixtures_dir: cfg.fixtures.clone(),
        steps,
        strategy: strategy.unwrap_or(cfg.strategy),
        seed: seed.unwrap_or(cfg.seed),
    };
    let cert = run_pipeline(&pc).map_err(|PipelineError::Fixture(e)| {
        let code = match &e {
            FixtureError::Missing { .. } => NO_INPUT,
            FixtureError::Io { source, .. } => io_code(source),
            FixtureError::Corrupt { .. } | FixtureError::Table { .. } => DATA,
        };
        Failure(code, e.to_string())
    })?;
    let json = cert.to_json();
    match out.or_else(|| cfg.certificate_out.clone()) {
        Some(p) => write_output(&p, json.as_bytes())?,
        None => println!("{json}"),
    }
    for s in &cert.steps {
        eprintln!("{:<4} {:<9} {}", format!("{:?}", s.id), format!("{:?}", s.verdict), s.description);
    }
    if cert.overall == Verdict::Match {
        eprintln!("overall: match ({} steps)", cert.steps.len());
        Ok(OK)
    } else {
        let names: Vec<String> = cert.culprits.iter().map(|c| format!("{c:?}")).collect();
        eprintln!("overall: {:?}; culprits: {}", cert.overall, names.join(", "));
        Ok(FAILED)
    }
}

fn parse_range(text: &str) -> Result<(f64, f64), Failure> {
    let bad = || Failure::usage(format!("--s-range expects LO:HI, got `{text}`"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn cmd_integrate(cfg: &Config, args: IntegrateArgs) -> Result<u8, Failure> {
    if args.beta0 == 0.0 {
        return Err(Failure::usage("non-Hopf requires β ≠ 0"));
    }
    let (lo, hi) = parse_range(&args.s_range)?;
    let tol = args.tol.unwrap_or(cfg.tol);
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Failure::usage(format!("--tol must be positive (got {tol})")));
    }
    let out = args
        .out
        .or_else(|| cfg.trajectory_out.clone())
        .ok_or_else(|| Failure::usage("--out is required (or set trajectory_out in the config)"))?;
    let (model, initial) = match args.free_mu {
        Some(rate) => {
            let mu = args.mu0.unwrap_or(args.alpha0 + args.gamma0);
            let st = FrameState { s: lo, alpha: args.alpha0, beta: args.beta0, gamma: args.gamma0, mu };
            (Model::FreeMu { mu_rate: rate }, st)
        }
        None => (Model::IdealSlice, FrameState::on_slice(lo, args.alpha0, args.beta0, args.gamma0)),
    };
    let opts = IntegrateOptions {
        eps_beta: cfg.eps_beta,
        blow_up: cfg.blow_up,
        h_min: cfg.h_min,
        ..IntegrateOptions::new(hi, tol)
    };
    let traj = integrate_2hopf(initial, model, &opts)?;
    let sequential = args.strict_sequential || cfg.strict_sequential;
    let report = check_trajectory(&traj, &DerivationTable::case_b(), &cfg.thresholds, sequential)?;
    let mut buf = Vec::new();
    write_csv(&mut buf, &report.reports)?;
    write_output(&out, &buf)?;
    let last = traj.last().expect("trajectory has its initial sample");
    eprintln!(
        "{} samples, {} rejected steps, stopped at s = {} ({})",
        traj.len(),
        traj.rejected,
        last.s,
        traj.stop.label()
    );
    if traj.stop == StopReason::RangeEnd {
        Ok(OK)
    } else {
        eprintln!("integration stopped early: {} at s = {}", traj.stop.label(), last.s);
        Ok(EVENT)
    }
}

fn cmd_check(cfg: &Config, args: CheckArgs) -> Result<u8, Failure> {
    let thresholds = match &args.thresholds {
        Some(p) => {
            let t: Thresholds = toml::from_str(&read_input(p)?)
                .map_err(|e| Failure::usage(format!("thresholds {}: {e}", p.display())))?;
            t.validate()?;
            t
        }
        None => cfg.thresholds,
    };
    let text = read_input(&args.traj)?;
    let traj = read_csv(text.as_bytes())?;
    let sequential = args.strict_sequential || cfg.strict_sequential;
    let report = check_trajectory(&traj, &DerivationTable::case_b(), &thresholds, sequential)?;
    if let Some(p) = args.report.or_else(|| cfg.report_out.clone()) {
        write_output(&p, report.to_json().as_bytes())?;
    }
    println!(
        "{:?}: {} samples, max ideal {:.3e}, max codazzi {:.3e}, max gauss {:.3e}, max slice defect {:.3e}",
        report.verdict,
        report.samples,
        report.max_ideal_residual,
        report.max_codazzi_residual,
        report.max_gauss_residual,
        report.max_slice_defect
    );
    Ok(if report.verdict == CheckVerdict::Pass { OK } else { FAILED })
}

fn cmd_ideal_check(cfg: &Config, matrix: &str) -> Result<u8, Failure> {
    let vals: Vec<f64> = matrix
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::usage(format!("--matrix: {e}")))?;
    let [a, b, g, m] = vals[..] else {
        return Err(Failure::usage(format!("--matrix expects 4 entries, got {}", vals.len())));
    };
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Failure::usage("--matrix entries must be finite"));
    }
    let pc = pointwise(&ShapeOp::from_entries(a, b, g, m), &PhiStructure::standard());
    println!("{}", serde_json::to_string_pretty(&pc).expect("point curvature serializes"));
    Ok(if pc.ideal_residual.abs() <= cfg.thresholds.ideal { OK } else { FAILED })
}

fn cmd_resultant(cfg: &Config, args: ResultantArgs) -> Result<u8, Failure> {
    let (ta, tb) = (read_input(&args.a)?, read_input(&args.b)?);
    let parse_err = |p: &Path, e: hypersurf::algebra::ParseError| Failure(DATA, format!("{}: {e}", p.display()));
    let mut extra = identifiers(&ta).map_err(|e| parse_err(&args.a, e))?;
    extra.extend(identifiers(&tb).map_err(|e| parse_err(&args.b, e))?);
    extra.push(args.var.clone());
    let vars = VarTable::canonical_with(&extra);
    let a = parse_poly(&ta, &vars).map_err(|e| parse_err(&args.a, e))?;
    let b = parse_poly(&tb, &vars).map_err(|e| parse_err(&args.b, e))?;
    let v = vars.index_of(&args.var).expect("variable was registered");
    let strategy = match args.strategy.unwrap_or(cfg.strategy) {
        StrategyChoice::Sylvester => Strategy::SylvesterBareiss,
        StrategyChoice::Interp | StrategyChoice::Both => Strategy::EvalInterpolate,
    };
    let alg = |e: AlgebraError| match e {
        AlgebraError::Usage(_) | AlgebraError::UnknownVariable(_) => Failure::usage(e.to_string()),
        _ => Failure(DATA, e.to_string()),
    };
    let r = resultant(&a, &b, v, strategy).map_err(alg)?;
    if args.strategy.unwrap_or(cfg.strategy) == StrategyChoice::Both {
        let other = resultant(&a, &b, v, Strategy::SylvesterBareiss).map_err(alg)?;
        if other != r {
            return Err(Failure(FAILED, "resultant strategies disagree".into()));
        }
    }
    let mut stdout = io::stdout().lock();
    if args.raw || r.is_zero() {
        writeln!(stdout, "{r}").ok();
    } else {
        let (p, scalar) = r.normalize_primitive().map_err(alg)?;
        writeln!(stdout, "{p}").ok();
        eprintln!("scalar: {scalar}");
    }
    Ok(OK)
}
