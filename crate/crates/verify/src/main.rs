use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use griesz::config::{ExperimentConfig, Format, Suite};
use griesz::probe::kernel_probe;
use griesz::report::{render, Tabular};
use griesz::{run_suite, theorem_experiment, Error};
use serde::Serialize;
use serde_json::Value;

/// Numerical verification of Gaussian Riesz potentials on variable Lebesgue spaces.
#[derive(Parser, Debug)]
#[command(name = "griesz", version)]
struct Cli {
    /// JSON experiment configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification suites (all of them unless `--suite` is given).
    Suite {
        /// Suite to run; repeat for several.
        #[arg(long = "suite", value_name = "NAME")]
        suites: Vec<Suite>,
        #[command(flatten)]
        common: Common,
    },
    /// Norm ratios of I_beta over seeded test functions.
    Theorem {
        #[command(flatten)]
        common: Common,
    },
    /// Kernel value, dominating terms and geometry at one pair.
    KernelProbe {
        /// Comma-separated coordinates of x.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
        /// Comma-separated coordinates of y.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        y: Vec<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<Format>,
    },
}

#[derive(Args, Debug, Default)]
struct Common {
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    /// Exponent preset such as `decay:2,1` or `constant:2`.
    #[arg(long)]
    exponent: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Test functions in the theorem experiment.
    #[arg(long)]
    samples: Option<usize>,
    /// Pairs or points per sampled check.
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
    /// Budget overrides, `key=value[,key=value...]`.
    #[arg(long, value_name = "KEY=VALUE")]
    budget: Option<String>,
    /// Tolerance overrides, `key=value[,key=value...]`.
    #[arg(long, value_name = "KEY=VALUE")]
    tolerance: Option<String>,
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn overrides(target: &mut Value, spec: &str) -> Result<(), Error> {
    for pair in spec.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got '{pair}'")))?;
        let value = serde_json::from_str(v.trim()).unwrap_or_else(|_| Value::String(v.trim().to_string()));
        target[k.trim()] = value;
    }
    Ok(())
}

fn build_config(path: Option<&PathBuf>, common: &Common, suites: Option<&[Suite]>) -> Result<ExperimentConfig, Error> {
    let base = match path {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let mut v = serde_json::to_value(&base).map_err(|e| Error::Config(e.to_string()))?;
    let mut set = |key: &str, value: Option<Value>| {
        if let Some(value) = value {
            v[key] = value;
        }
    };
    set("dim", common.dim.map(Value::from));
    set("beta", common.beta.map(Value::from));
    set("exponent", common.exponent.clone().map(Value::from));
    set("seed", common.seed.map(Value::from));
    set("samples", common.samples.map(Value::from));
    set("pairs", common.pairs.map(Value::from));
    set("output", common.out.as_ref().map(|p| Value::from(p.display().to_string())));
    set("format", common.format.map(|f| serde_json::to_value(f).expect("format serialises")));
    if let Some(s) = suites.filter(|s| !s.is_empty()) {
        set("suites", Some(serde_json::to_value(s).expect("suites serialise")));
    }
    if let Some(b) = &common.budget {
        overrides(&mut v["budget"], b)?;
    }
    if let Some(t) = &common.tolerance {
        overrides(&mut v["tolerances"], t)?;
    }
    let config: ExperimentConfig = serde_json::from_value(v).map_err(|e| Error::Config(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

fn configure_threads() -> Result<(), Error> {
    if let Ok(s) = std::env::var("GRIESZ_THREADS") {
        let n: usize = s
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| Error::Config(format!("GRIESZ_THREADS must be a positive integer, got '{s}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    Ok(())
}

fn write<R: Serialize + Tabular>(report: &R, format: Format, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => griesz::emit_report(report, format, path),
        None => {
            print!("{}", render(report, format)?);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    configure_threads()?;
    let path = cli.config.as_ref();
    match cli.command {
        Command::Suite { suites, common } => {
            let c = build_config(path, &common, Some(&suites))?;
            let r = run_suite(&c)?;
            for check in r.checks.iter().filter(|c| !c.passed()) {
                eprintln!("FAIL {}/{}: {}", check.suite, check.name, check.detail);
            }
            write(&r, c.format, c.output.as_ref())?;
            Ok(r.passed)
        }
        Command::Theorem { common } => {
            let c = build_config(path, &common, None)?;
            c.validate_theorem()?;
            let r = theorem_experiment(&c)?;
            write(&r, c.format, c.output.as_ref())?;
            Ok(r.summary.passed)
        }
        Command::KernelProbe { x, y, beta, out, format } => {
            let base = match path {
                Some(p) => ExperimentConfig::load(p)?,
                None => ExperimentConfig::default(),
            };
            let p = kernel_probe(&x, &y, beta.unwrap_or(base.beta))?;
            let out = out.or(base.output);
            write(&p, format.unwrap_or(base.format), out.as_ref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e @ Error::Config(_)) => {
            eprintln!("{e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}
