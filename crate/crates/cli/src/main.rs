use std::process::ExitCode;

use clap::Parser;
use cutilde::cli::{exit_code, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    match &result {
        Ok(out) if cli.global.json => match serde_json::to_string_pretty(out) {
            Ok(s) => println!("{s}"),
            Err(e) => eprintln!("error: {e}"),
        },
        Ok(out) => print!("{}", out.render()),
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}
