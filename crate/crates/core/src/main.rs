use std::process::ExitCode;

use clap::Parser;
use natspec::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(report) = f.report {
                println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
            }
            eprintln!("natspec: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
