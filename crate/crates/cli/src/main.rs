use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mintime_cli::{
    envelope_csv, render_report, run_oracle, run_solve, run_sweep, trajectory_csv, CliError,
    ScenarioConfig, SweepSpec,
};
use mintime_core::ocp::FeasibilityVerdict;

#[derive(Parser)]
#[command(name = "mintime", about = "Minimum-time speed profiles under drag", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct ScenarioArgs {
    /// Initial speed (m/s)
    #[arg(long, default_value_t = 6.0)]
    v0: f64,
    /// Final speed (m/s)
    #[arg(long, default_value_t = 5.0)]
    vf: f64,
    /// Path length (m)
    #[arg(long, default_value_t = 100.0)]
    length: f64,
    /// Maximum drive acceleration (m/s^2)
    #[arg(long = "a-plus", default_value_t = 2.0)]
    a_plus: f64,
    /// Maximum braking magnitude (m/s^2)
    #[arg(long = "a-minus", default_value_t = 2.0)]
    a_minus: f64,
    /// Linear drag coefficient (1/s)
    #[arg(long, default_value_t = 0.01)]
    c0: f64,
    /// Quadratic drag coefficient (1/m)
    #[arg(long, default_value_t = 0.01)]
    c1: f64,
    /// Rows per emitted trajectory
    #[arg(long, default_value_t = 400)]
    samples: usize,
}

impl From<ScenarioArgs> for ScenarioConfig {
    fn from(a: ScenarioArgs) -> Self {
        ScenarioConfig {
            v0: a.v0,
            vf: a.vf,
            length: a.length,
            a_plus: a.a_plus,
            a_minus: a.a_minus,
            c0: a.c0,
            c1: a.c1,
            samples: a.samples,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario and print the report
    Solve {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Solve and write the sampled trajectory as CSV
    Sample {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-solve for each value of one swept parameter, writing per-value CSVs
    /// and a summary table
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Swept parameter and values, e.g. `c0=0,1e-5,0.01`
        #[arg(long)]
        sweep: SweepSpecArg,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Debug aid: integrate one arc numerically and print (v, s)
    #[command(hide = true)]
    Oracle {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Constant control acceleration of the integrated arc
        #[arg(long, allow_hyphen_values = true)]
        accel: f64,
        /// Integration end time (s)
        #[arg(long, allow_hyphen_values = true)]
        t_end: f64,
    },
}

#[derive(Clone)]
struct SweepSpecArg(SweepSpec);

impl std::str::FromStr for SweepSpecArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<SweepSpec>().map(SweepSpecArg).map_err(|e| e.to_string())
    }
}

fn main() -> ExitCode {
    // Malformed flags exit 1 (clap's default would be 2, which is reserved
    // for infeasible scenarios here).
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Solve { scenario } => {
            let report = run_solve(&ScenarioConfig::from(scenario))?;
            print!("{}", render_report(&report));
            Ok(exit_for(report.feasibility.verdict))
        }
        Command::Sample { scenario, out } => {
            let config = ScenarioConfig::from(scenario);
            let report = run_solve(&config)?;
            match report.solution {
                Some(sol) => {
                    std::fs::write(&out, trajectory_csv(&sol, config.samples)?)?;
                    println!("wrote {}", out.display());
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    std::fs::write(&out, envelope_csv(&config)?)?;
                    println!("verdict    {}", report.feasibility.verdict);
                    println!("wrote envelope curves to {}", out.display());
                    Ok(exit_for(report.feasibility.verdict))
                }
            }
        }
        Command::Sweep { scenario, sweep, out } => {
            let config = ScenarioConfig::from(scenario);
            let rows = run_sweep(&config, &sweep.0, &out)?;
            for row in &rows {
                println!(
                    "{} = {:<14} {}",
                    sweep.0.parameter.name(),
                    mintime_cli::format_value(row.value),
                    row.verdict
                );
            }
            println!("wrote {} files to {}", rows.len() + 1, out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { scenario, accel, t_end } => {
            let config = ScenarioConfig::from(scenario);
            let (v, s) = run_oracle(&config, accel, t_end)?;
            println!("v {}", mintime_cli::format_value(v));
            println!("s {}", mintime_cli::format_value(s));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn exit_for(verdict: FeasibilityVerdict) -> ExitCode {
    match verdict {
        FeasibilityVerdict::Feasible => ExitCode::SUCCESS,
        _ => ExitCode::from(2),
    }
}
