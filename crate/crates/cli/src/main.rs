use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use qgames_cli::{catalog, config, csv, print_case_results, scenario};
use std::path::PathBuf;

/// Payoffs, equilibria and evolutionary stability of quantized matrix games.
#[derive(Parser)]
#[command(name = "qgames", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config and emit a JSON report.
    Run {
        /// Path to the scenario config (JSON).
        config: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Export trajectories and grid scans as CSV into this directory.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Re-run a published case study (or `all`) against stored expectations.
    Reproduce {
        /// Case id from `list-cases`, or `all`.
        case: String,
    },
    /// List the ids of the bundled reproduction cases.
    ListCases,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out, csv: csv_dir } => {
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let parsed = config::parse_config(&text)?;
            let report = scenario::run_scenario(&parsed)?;
            let json = report.to_json();
            match out {
                Some(path) => std::fs::write(&path, &json)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{json}"),
            }
            if let Some(dir) = csv_dir {
                let files = csv::export_report(&report, &dir)?;
                for file in files {
                    eprintln!("wrote {}", dir.join(file).display());
                }
            }
            Ok(())
        }
        Command::Reproduce { case } => {
            let runs = if case == "all" {
                catalog::run_all()
            } else {
                match catalog::run_case(&case) {
                    Some(run) => vec![run],
                    None => bail!(
                        "unknown case id `{case}`; available: {}",
                        catalog::CASE_IDS.join(", ")
                    ),
                }
            };
            let failures = print_case_results(&runs, &mut std::io::stdout())?;
            let total: usize = runs.iter().map(|r| r.assertions.len()).sum();
            println!("{} assertions, {} failed", total, failures);
            if failures > 0 {
                bail!("{failures} assertion(s) failed");
            }
            Ok(())
        }
        Command::ListCases => {
            for id in catalog::CASE_IDS {
                println!("{id}");
            }
            Ok(())
        }
    }
}
