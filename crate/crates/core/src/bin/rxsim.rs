use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fock_receiver::analysis::{
    cmd_fit, cmd_oracle, cmd_sweep, cmd_validate, FitVerdict, PairSource, RunConfig, SweepSpec,
    ValidateConfig, DEGENERATE_GRID, GENERIC_GRID,
};
use fock_receiver::engine::Mode;
use fock_receiver::receiver::Planner;
use fock_receiver::Result;

/// Simulate and audit the adaptive photon-counting receiver.
#[derive(Parser)]
#[command(name = "rxsim", version)]
struct Cli {
    /// JSON run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the error probability over a grid of N and fit its power law.
    Sweep(SweepArgs),
    /// Check the analytic bounds on their deterministic grids.
    Validate(ValidateArgs),
    /// Replay one detection record step by step.
    Oracle(OracleArgs),
    /// Fit the error column of a sweep CSV.
    Fit(FitArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Args)]
struct PairArgs {
    /// Pair JSON file, or one of zero-one, plus-minus, cat, cat:<alpha>.
    #[arg(long, default_value = "cat")]
    pair: String,
    /// Rotation exponent for degenerate pairs.
    #[arg(long = "delta-exp")]
    delta_exp: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Comma-separated, strictly increasing N values.
    #[arg(long = "n", value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Where to write the per-N rows; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long = "n")]
    n: usize,
    /// Comma-separated counts, e.g. 0,0,1.
    #[arg(long, value_delimiter = ',', default_value = "")]
    record: Vec<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct FitArgs {
    csv: PathBuf,
    /// Expected slope of ln p_err against ln N.
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    expected: f64,
    /// Allowed distance from the expected slope; the generic tolerance by default.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

enum Outcome {
    Pass,
    Fail,
}

fn emit(out: Option<&PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn apply_pair_args(cfg: &mut RunConfig, args: &PairArgs) {
    if let Some(d) = args.delta_exp {
        cfg.engine.receiver.perturbation.delta_exp = d;
    }
}

fn sweep(mut cfg: RunConfig, args: SweepArgs) -> Result<Outcome> {
    apply_pair_args(&mut cfg, &args.pair);
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.mode = args.mode.unwrap_or(cfg.mode);
    cfg.samples = args.samples.or(cfg.samples);
    let source = PairSource::parse(&args.pair.pair);
    let mut spec = SweepSpec::from_config(source.clone(), &cfg);
    match (args.n, &cfg.n_values) {
        (Some(n), _) => spec.n_values = n,
        (None, Some(_)) => {}
        (None, None) => {
            let pair = source.load(cfg.cutoff, cfg.engine.trunc_budget)?;
            let probe = Planner::new(&pair, GENERIC_GRID[0], &cfg.engine.receiver)?;
            let grid: &[usize] = if probe.is_perturbed() {
                &DEGENERATE_GRID
            } else {
                &GENERIC_GRID
            };
            spec.n_values = grid.to_vec();
        }
    }
    let report = cmd_sweep(&spec, &cfg)?;
    match args.format {
        Format::Json => emit(args.out.as_ref(), &serde_json::to_vec_pretty(&report)?)?,
        _ => emit(args.out.as_ref(), &report.to_csv()?)?,
    }
    let fit = &report.fit;
    match (fit.slope, fit.slope_stderr) {
        (Some(s), Some(e)) => eprintln!(
            "slope {s:.4} +/- {e:.4} (expected {:.4} +/- {}), used N = {:?}, excluded N = {:?}: {:?}",
            fit.expected_slope, fit.tolerance, fit.used, fit.excluded, fit.verdict
        ),
        _ => eprintln!("fit: {:?}", fit.verdict),
    }
    if let Some(f) = &report.failure_fit {
        if let Some(s) = f.slope {
            eprintln!("failure slope {s:.4}: {:?}", f.verdict);
        }
    }
    Ok(if report.passed() {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn validate(cfg: RunConfig, args: ValidateArgs) -> Result<Outcome> {
    let vcfg = ValidateConfig {
        cutoff: cfg.cutoff,
        beta_cap_factor: cfg.engine.receiver.beta_cap_factor,
    };
    let report = cmd_validate(&vcfg)?;
    let body = match args.format {
        Format::Json => serde_json::to_vec_pretty(&report)?,
        _ => {
            let mut s = String::new();
            for g in &report.grids {
                let verdict = if g.passed() { "ok" } else { "FAIL" };
                s += &format!(
                    "{:<22} {:>7} points {:>4} violations  max ratio {:.4e}  {verdict}\n",
                    g.name, g.points, g.violations, g.max_ratio
                );
            }
            s += &format!("report hash {}\n", report.hash);
            s.into_bytes()
        }
    };
    emit(args.out.as_ref(), &body)?;
    Ok(if report.passed {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn oracle(mut cfg: RunConfig, args: OracleArgs) -> Result<Outcome> {
    apply_pair_args(&mut cfg, &args.pair);
    let pair = PairSource::parse(&args.pair.pair).load(cfg.cutoff, cfg.engine.trunc_budget)?;
    let record = args
        .record
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| s.trim().parse::<u8>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| fock_receiver::Error::InvalidParameter(format!("record: {e}")))?;
    let report = cmd_oracle(&pair, args.n, &record, &cfg.engine)?;
    match args.format {
        Format::Json => emit(None, &serde_json::to_vec_pretty(&report)?)?,
        _ => emit(None, report.to_string().as_bytes())?,
    }
    Ok(Outcome::Pass)
}

fn fit(cfg: RunConfig, args: FitArgs) -> Result<Outcome> {
    let tol = args.tol.unwrap_or(cfg.fit.slope_tol_generic);
    let fit = cmd_fit(&args.csv, args.expected, tol, &cfg.fit)?;
    match args.format {
        Format::Json => emit(None, &serde_json::to_vec_pretty(&fit)?)?,
        _ => {
            let line = match (fit.slope, fit.slope_stderr, fit.r_squared) {
                (Some(s), Some(e), Some(r2)) => format!(
                    "slope {s:.6} +/- {e:.6}  r2 {r2:.6}  expected {} +/- {}  used {:?}  excluded {:?}  {:?}\n",
                    fit.expected_slope, fit.tolerance, fit.used, fit.excluded, fit.verdict
                ),
                _ => format!("{:?}\n", fit.verdict),
            };
            emit(None, line.as_bytes())?
        }
    }
    Ok(if fit.verdict == FitVerdict::Fail {
        Outcome::Fail
    } else {
        Outcome::Pass
    })
}

fn run(cli: Cli) -> Result<Outcome> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Sweep(a) => sweep(cfg, a),
        Command::Validate(a) => validate(cfg, a),
        Command::Oracle(a) => oracle(cfg, a),
        Command::Fit(a) => fit(cfg, a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
