//! `genham`: scenario runner and validation suite for the generalized
//! Hamilton principle toolkit.
//!
//! Exit codes: 0 success, 1 scientific failure (an invariant or propagation
//! failed), 2 config error. The final stdout line is always
//! `RESULT <kind> <pass|fail>`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use genham::scenario::{self, ScenarioConfig, ScenarioKind};
use genham::thermoq;
use genham::Error;

#[derive(Parser)]
#[command(name = "genham", version, about, max_term_width = 100)]
struct Cli {
    /// Print per-step detail where available.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Path to a scenario JSON file.
    #[arg(long)]
    config: PathBuf,
    /// Parameter overrides, repeatable: -P key=value.
    #[arg(short = 'P', long = "param", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory (overrides the config's `output`).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a classical or classical-heat scenario.
    SimulateClassical(ScenarioArgs),
    /// Run a quantum wavepacket scenario.
    SimulateQuantum(ScenarioArgs),
    /// Run a thermo-spectrum or t0-roundtrip scenario.
    Thermo(ScenarioArgs),
    /// Extract the temperature constant T0 from a line shift.
    FitT0 {
        /// Upper principal quantum number.
        #[arg(long)]
        m: u32,
        /// Lower principal quantum number.
        #[arg(long)]
        n: u32,
        /// Measured transition frequency, Hz.
        #[arg(long)]
        nu_exp: f64,
        /// Uncorrected theoretical frequency, Hz.
        #[arg(long)]
        nu_th: f64,
    },
    /// Run the full invariant suite.
    Validate {
        /// Seed for the randomized property checks.
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Print the scenario config schema as JSON.
    Schema,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::ConfigValidation(_) | Error::Io { .. } | Error::InvalidInput(_) => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::SimulateClassical(args) => run_scenario_command(
            args,
            &[ScenarioKind::Classical, ScenarioKind::ClassicalHeat],
            cli.verbose,
        ),
        Command::SimulateQuantum(args) => {
            run_scenario_command(args, &[ScenarioKind::Quantum], cli.verbose)
        }
        Command::Thermo(args) => run_scenario_command(
            args,
            &[ScenarioKind::ThermoSpectrum, ScenarioKind::T0Roundtrip],
            cli.verbose,
        ),
        Command::FitT0 {
            m,
            n,
            nu_exp,
            nu_th,
        } => {
            let t0 = thermoq::extract_t0(nu_exp, nu_th, m, n)?;
            println!("T0 = {t0:.12e} K");
            println!("RESULT fit-t0 pass");
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { seed } => run_validate(seed),
        Command::Schema => {
            let schema = scenario::schema::schema_json();
            println!(
                "{}",
                serde_json::to_string_pretty(&schema).expect("schema serializes")
            );
            println!("RESULT schema pass");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_scenario_command(
    args: ScenarioArgs,
    allowed: &[ScenarioKind],
    verbose: bool,
) -> Result<ExitCode, Error> {
    let mut config = scenario::load_config(&args.config)?;
    if !allowed.contains(&config.kind) {
        return Err(Error::ConfigValidation(vec![format!(
            "scenario kind `{}` is not supported by this subcommand (expected {})",
            config.kind.as_str(),
            allowed
                .iter()
                .map(|k| k.as_str())
                .collect::<Vec<_>>()
                .join(" or ")
        )]));
    }
    for assignment in &args.overrides {
        config.apply_override(assignment)?;
    }
    config.validate()?;
    if let Some(dir) = args.output {
        config.output = Some(dir);
    }

    let kind = config.kind.as_str();
    println!("running {kind} scenario from {}", args.config.display());
    let tables = run_tables(&config)?;
    for table in &tables {
        println!("  table `{}`: {} rows", table.name, table.rows());
        if verbose {
            for col in &table.columns {
                println!("    column {}", col.name);
            }
        }
    }
    if let Some(dir) = &config.output {
        for table in &tables {
            for path in scenario::write_results(table, dir)? {
                println!("  wrote {}", path.display());
            }
        }
    }
    println!("RESULT {kind} pass");
    Ok(ExitCode::SUCCESS)
}

fn run_tables(config: &ScenarioConfig) -> Result<Vec<scenario::ResultTable>, Error> {
    scenario::run_scenario(config)
}

fn run_validate(seed: u64) -> Result<ExitCode, Error> {
    let started = std::time::Instant::now();
    let report = genham::validate::run_suite(seed);
    let mut all_pass = true;
    for check in &report {
        let status = if check.pass { "pass" } else { "FAIL" };
        all_pass &= check.pass;
        println!(
            "{status}  {:<40} measured {:>12.5e}  threshold {:>12.5e}",
            check.name, check.measured, check.threshold
        );
    }
    println!(
        "{} checks in {:.2} s, seed {seed}",
        report.len(),
        started.elapsed().as_secs_f64()
    );
    if all_pass {
        println!("RESULT validate pass");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("RESULT validate fail");
        Ok(ExitCode::from(1))
    }
}
