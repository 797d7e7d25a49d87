use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use bklr::Cli;
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = bklr::run(&cli);
    if cli.timing {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(report) => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{}", report.to_json());
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
