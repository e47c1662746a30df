use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use restruct_cli::{cmd_restructure, cmd_solve, cmd_trajectory, load, CliError, Overrides, RunReport};
use restruct_core::restructure::KnapsackObjective;
use restruct_core::Money;

#[derive(Parser)]
#[command(name = "restruct", version, about = "Budgeted restructuring of combinatorial solutions")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Objective {
    MaxProfit,
    MinProximity,
}

#[derive(clap::Args)]
struct Common {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, value_enum)]
    objective: Option<Objective>,
    /// Candidate counts per goal stage.
    #[arg(long, value_delimiter = ',')]
    candidates: Option<Vec<usize>>,
    /// Cross-check against brute-force enumeration.
    #[arg(long)]
    oracle: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Optimal solution of one stage (all stages by default).
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        stage: Option<usize>,
    },
    /// Restructure the solution of one stage toward another under a budget.
    Restructure {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        from: Option<usize>,
        #[arg(long)]
        to: Option<usize>,
        #[arg(long, value_parser = parse_money)]
        budget: Option<Money>,
    },
    /// Build a restructuring trajectory over all stages.
    Trajectory {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        scheme: Option<u8>,
        #[arg(long, value_delimiter = ',', value_parser = parse_money)]
        budgets: Option<Vec<Money>>,
    },
}

fn parse_money(s: &str) -> Result<Money, String> {
    s.parse::<Money>().map_err(|e| e.to_string())
}

fn overrides(c: &Common) -> Overrides {
    Overrides {
        objective: c.objective.map(|o| match o {
            Objective::MaxProfit => KnapsackObjective::MaxProfit,
            Objective::MinProximity => KnapsackObjective::MinProximity,
        }),
        candidates: c.candidates.clone(),
        oracle: c.oracle,
        ..Overrides::default()
    }
}

fn run(cli: Cli) -> Result<(RunReport, Format), CliError> {
    match cli.command {
        Cmd::Solve { common, stage } => {
            let doc = load(&common.file)?;
            Ok((cmd_solve(&doc, stage, &overrides(&common))?, common.format))
        }
        Cmd::Restructure { common, from, to, budget } => {
            let doc = load(&common.file)?;
            let ov = Overrides { budget, ..overrides(&common) };
            Ok((cmd_restructure(&doc, from, to, &ov)?, common.format))
        }
        Cmd::Trajectory { common, scheme, budgets } => {
            let doc = load(&common.file)?;
            let ov = Overrides { scheme, budgets, ..overrides(&common) };
            Ok((cmd_trajectory(&doc, &ov)?, common.format))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((report, Format::Json)) => {
            print!("{}", report.to_json());
            ExitCode::SUCCESS
        }
        Ok((report, Format::Text)) => {
            print!("{}", report.to_text());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
