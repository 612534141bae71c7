use std::process::ExitCode;

use clap::Parser;
use ssbroyden::bench::{format_table, run_benchmark, BenchArgs, BenchError};

fn main() -> ExitCode {
    let spec = match BenchArgs::parse().into_spec() {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("bench: {e}");
            return ExitCode::from(2);
        }
    };
    match run_benchmark(&spec) {
        Ok(report) => {
            let rows: Vec<_> = report.runs.iter().map(|r| r.summary.clone()).collect();
            print!("{}", format_table(&rows));
            println!("summary: {}", report.summary_path.display());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e @ BenchError::Usage(_)) => {
            eprintln!("bench: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("bench: {e}");
            ExitCode::from(1)
        }
    }
}
