use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use katz_cli::commands::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = run(&cli);
    if !outcome.stdout.is_empty() {
        // a closed pipe is not an error of the command
        let _ = writeln!(std::io::stdout().lock(), "{}", outcome.stdout);
    }
    match outcome.failure {
        None => ExitCode::SUCCESS,
        Some(f) => {
            eprintln!("katz: {}", f.message());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
