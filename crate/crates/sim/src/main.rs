use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

/// Simulates collective-ensemble blockade, gates and cavity designs.
///
/// Exit status: 0 success, 2 config error, 3 physics precondition error,
/// 4 internal numerical or output error.
#[derive(Parser)]
#[command(name = "lsiib-sim", version)]
struct Cli {
    /// Experiment description (TOML).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Directory for trajectory.csv, report.json and sweep.csv.
    #[arg(long, value_name = "DIR")]
    output: Option<PathBuf>,
    /// Suppress the summary line and warnings.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { lsiib_sim::exit::CONFIG } else { lsiib_sim::exit::SUCCESS };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match lsiib_sim::run(&cli.config, cli.output.as_deref()) {
        Ok(outcome) => {
            if !cli.quiet {
                for w in &outcome.warnings {
                    eprintln!("warning: {w}");
                }
                println!("{}", outcome.summary);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
