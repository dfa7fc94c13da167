//! Command-line front end: run experiments, sweep lapses and grid sizes,
//! and self-validate, emitting CSV or JSON.
//!
//! Exit codes: 0 ok, 1 failed validation, 2 bad config/usage, 3 I/O error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use qwalk::analysis::{self, LapseRule};
use qwalk::engine::{
    run_ima_deterministic_recording, run_ima_monte_carlo, run_unitary_recording, RunMode,
};
use qwalk::error::Error;
use qwalk::experiment::{DeltaSpec, ExperimentConfig, LapseSpec, ModeSpec, OutputFormat};
use qwalk::output::{self, TraceColumns};
use qwalk::validation;

#[derive(Parser)]
#[command(
    name = "qwalk",
    about = "Controlled quantum-walk search on a torus grid with intermediate control measurements",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and emit its per-step trace (or Monte Carlo tally).
    Run(RunArgs),
    /// Sweep the measurement lapse at a fixed grid size.
    SweepLapse(SweepLapseArgs),
    /// Sweep the grid size under one or more lapse rules.
    SweepOrder(SweepOrderArgs),
    /// Run the built-in self checks and report pass/fail per property.
    Validate(ValidateArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Worker cap for sweep parallelism (or env QWALK_JOBS).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Position qubits (even).
    #[arg(long, short)]
    n: Option<u32>,
    /// Rotation angle in radians, or "tulsi", or "pi/4".
    #[arg(long)]
    delta: Option<String>,
    /// Target site "x,y".
    #[arg(long)]
    target: Option<String>,
    /// Steps between control measurements.
    #[arg(long, conflicts_with = "unitary")]
    lapse: Option<usize>,
    /// No intermediate measurements.
    #[arg(long)]
    unitary: bool,
    /// Step budget (defaults to round((pi/4) sqrt(N log2 N))).
    #[arg(long)]
    kmax: Option<usize>,
    /// Overall success probability used by TS arithmetic.
    #[arg(long)]
    p: Option<f64>,
    /// Comma-separated correlation columns (e.g. MI_coin_pos,CCM_ctrcoin).
    #[arg(long)]
    correlations: Option<String>,
    /// Odd moving-average window for smoothed companion columns.
    #[arg(long)]
    smoothing_window: Option<usize>,
    /// Rescale smoothed columns to unit maximum.
    #[arg(long)]
    normalize: bool,
    /// Sample trials instead of the deterministic branch evolution.
    #[arg(long)]
    monte_carlo: bool,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SweepLapseArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, short)]
    n: Option<u32>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    target: Option<String>,
    /// Comma-separated measurement densities m = sqrt(N)/l.
    #[arg(long)]
    m_values: Option<String>,
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Args)]
struct SweepOrderArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated even grid exponents, e.g. 8,10,12,14.
    #[arg(long)]
    exponents: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    target: Option<String>,
    /// Comma-separated rules: unitary, an integer, 2sqrtN, sqrtN, sqrtN/2, ...
    #[arg(long)]
    lapse_rules: Option<String>,
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = 1234)]
    seed: u64,
}

enum CliError {
    Validation,
    Config(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::Io(message) => CliError::Io(message),
            other => CliError::Config(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::SweepLapse(args) => cmd_sweep_lapse(args),
        Command::SweepOrder(args) => cmd_sweep_order(args),
        Command::Validate(args) => cmd_validate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation) => ExitCode::from(1),
        Err(CliError::Config(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Io(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}

fn init_jobs(common: &CommonArgs, config: &ExperimentConfig) {
    let jobs = common
        .jobs
        .or(config.jobs)
        .or_else(|| std::env::var("QWALK_JOBS").ok().and_then(|v| v.parse().ok()));
    if let Some(jobs) = jobs {
        // Ignore failure: the global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global();
    }
}

fn load_config(common: &CommonArgs) -> Result<ExperimentConfig, CliError> {
    match &common.config {
        Some(path) => ExperimentConfig::load(path).map_err(|err| CliError::Config(err.to_string())),
        None => Ok(ExperimentConfig::default()),
    }
}

fn parse_target(text: &str) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Config(format!(
            "target must be 'x,y', got '{text}'"
        )));
    }
    let x = parts[0]
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("bad target x '{}'", parts[0])))?;
    let y = parts[1]
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("bad target y '{}'", parts[1])))?;
    Ok((x, y))
}

fn parse_list<T: FromStr>(text: &str, what: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<T>()
                .map_err(|_| CliError::Config(format!("bad {what} entry '{part}'")))
        })
        .collect()
}

/// Writes through a closure either to a file or stdout.
fn emit(
    output: &Option<PathBuf>,
    write: impl FnOnce(&mut dyn Write) -> qwalk::error::Result<()>,
) -> Result<(), CliError> {
    let io_err = |err: std::io::Error, path: &PathBuf| {
        CliError::Io(format!("cannot write {}: {err}", path.display()))
    };
    match output {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|err| io_err(err, path))?;
            let mut writer = std::io::BufWriter::new(file);
            write(&mut writer).map_err(CliError::from)?;
            writer.flush().map_err(|err| io_err(err, path))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock).map_err(CliError::from)
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let mut config = load_config(&args.common)?;
    init_jobs(&args.common, &config);

    if let Some(n) = args.n {
        config.n_qubits = Some(n);
    }
    if let Some(delta) = &args.delta {
        config.delta = DeltaSpec::from_str(delta)?;
    }
    if let Some(target) = &args.target {
        config.target = Some(parse_target(target)?);
    }
    if args.unitary {
        config.lapse = Some(LapseSpec::Unitary);
    } else if let Some(lapse) = args.lapse {
        config.lapse = Some(LapseSpec::Steps(lapse));
    }
    if let Some(kmax) = args.kmax {
        config.k_max = Some(kmax);
    }
    if let Some(p) = args.p {
        config.success_target = p;
    }
    if let Some(correlations) = &args.correlations {
        config.correlations = correlations.split(',').map(|s| s.trim().to_string()).collect();
    }
    if let Some(window) = args.smoothing_window {
        config.smoothing_window = Some(window);
    }
    if args.normalize {
        config.normalize = true;
    }
    if args.monte_carlo {
        config.mode = Some(ModeSpec::MonteCarlo);
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(format) = &args.common.format {
        config.output_format = OutputFormat::from_str(format)?;
    }
    let output_path = args.common.output.clone().or(config.output_path.clone());

    let kinds = config.correlation_kinds()?;
    let (ima, unitary) = config.ima_config()?;

    if let RunMode::MonteCarlo { seed, .. } = ima.mode {
        let result = run_ima_monte_carlo(&ima)?;
        return emit(&output_path, |writer| match config.output_format {
            OutputFormat::Csv => output::write_mc_csv(&result, seed, writer),
            OutputFormat::Json => output::write_mc_json(&result, seed, writer),
        });
    }

    let trace = if unitary {
        run_unitary_recording(&ima, &kinds)?
    } else {
        run_ima_deterministic_recording(&ima, &kinds)?
    };
    let columns = TraceColumns {
        smoothing_window: config.smoothing_window,
        normalize: config.normalize,
    };
    emit(&output_path, |writer| match config.output_format {
        OutputFormat::Csv => output::write_trace_csv(&trace, &columns, writer),
        OutputFormat::Json => output::write_trace_json(&trace, &columns, writer),
    })
}

fn cmd_sweep_lapse(args: SweepLapseArgs) -> Result<(), CliError> {
    let mut config = load_config(&args.common)?;
    init_jobs(&args.common, &config);

    if let Some(n) = args.n {
        config.n_qubits = Some(n);
    }
    if let Some(delta) = &args.delta {
        config.delta = DeltaSpec::from_str(delta)?;
    }
    if let Some(target) = &args.target {
        config.target = Some(parse_target(target)?);
    }
    if let Some(p) = args.p {
        config.success_target = p;
    }
    if let Some(m_values) = &args.m_values {
        config.m_values = parse_list(m_values, "m value")?;
    }
    if let Some(format) = &args.common.format {
        config.output_format = OutputFormat::from_str(format)?;
    }
    let output_path = args.common.output.clone().or(config.output_path.clone());

    let geometry = config.geometry()?;
    let delta = config.delta.resolve(&geometry);
    let target = config.target_position();
    let m_values = if config.m_values.is_empty() {
        vec![1, 2, 4, 8, 16]
    } else {
        config.m_values.clone()
    };
    let lapses: Vec<usize> = m_values
        .iter()
        .map(|&m| {
            if m == 0 {
                return Err(CliError::Config("m must be >= 1".into()));
            }
            Ok((geometry.side() / m as usize).max(1))
        })
        .collect::<Result<_, _>>()?;

    let sweep = analysis::sweep_lapse(geometry, delta, target, &lapses, config.success_target)?;
    emit(&output_path, |writer| match config.output_format {
        OutputFormat::Csv => output::write_sweep_csv(&sweep, writer),
        OutputFormat::Json => output::write_sweep_json(&sweep, writer),
    })
}

fn cmd_sweep_order(args: SweepOrderArgs) -> Result<(), CliError> {
    let mut config = load_config(&args.common)?;
    init_jobs(&args.common, &config);

    if let Some(exponents) = &args.exponents {
        config.exponents = parse_list(exponents, "exponent")?;
    }
    if let Some(delta) = &args.delta {
        config.delta = DeltaSpec::from_str(delta)?;
    }
    if let Some(target) = &args.target {
        config.target = Some(parse_target(target)?);
    }
    if let Some(p) = args.p {
        config.success_target = p;
    }
    if let Some(rules) = &args.lapse_rules {
        config.lapse_rules = rules.split(',').map(|s| s.trim().to_string()).collect();
    }
    if let Some(format) = &args.common.format {
        config.output_format = OutputFormat::from_str(format)?;
    }
    let output_path = args.common.output.clone().or(config.output_path.clone());

    if config.exponents.is_empty() {
        return Err(CliError::Config(
            "sweep-order needs a non-empty --exponents list".into(),
        ));
    }
    let rules = if config.lapse_rules.is_empty() {
        vec![LapseRule::Unitary]
    } else {
        config.lapse_rules()?
    };
    let delta_spec = config.delta;
    let target = config.target_position();

    let mut rows = Vec::new();
    for rule in rules {
        let sweep = analysis::sweep_order(
            &config.exponents,
            |geometry| delta_spec.resolve(geometry),
            target,
            rule,
            config.success_target,
        )?;
        rows.extend(sweep.rows);
    }
    let combined = analysis::SweepResult { rows };
    emit(&output_path, |writer| match config.output_format {
        OutputFormat::Csv => output::write_sweep_csv(&combined, writer),
        OutputFormat::Json => output::write_sweep_json(&combined, writer),
    })
}

fn cmd_validate(args: ValidateArgs) -> Result<(), CliError> {
    let config = load_config(&args.common)?;
    init_jobs(&args.common, &config);
    let outcomes = validation::run_all(args.seed);
    let mut all_passed = true;
    for outcome in &outcomes {
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} {:<24} max deviation {:.3e} (tolerance {:.1e}) — {}",
            outcome.name, outcome.deviation, outcome.tolerance, outcome.detail
        );
        all_passed &= outcome.passed;
    }
    if all_passed {
        println!("all {} checks passed", outcomes.len());
        Ok(())
    } else {
        Err(CliError::Validation)
    }
}
