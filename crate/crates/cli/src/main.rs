use std::process::ExitCode;

use clap::Parser;
use zeta_reciprocity_cli::{exit, run, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::INVALID_INPUT as u8 } else { 0 });
        }
    };
    let config = RunConfig::from_cli(cli);
    let outcome = run(&config);
    if let Some(message) = &outcome.message {
        if outcome.status == exit::PASS {
            print!("{message}");
        } else {
            eprint!("{message}");
            if !message.ends_with('\n') {
                eprintln!();
            }
        }
    }
    if let Some(report) = &outcome.report {
        let failures = report.failures();
        if !failures.is_empty() {
            eprintln!("failed: {}", failures.join(", "));
        }
    }
    ExitCode::from(outcome.status as u8)
}
