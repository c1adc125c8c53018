use std::io;
use std::process::ExitCode;

use capgraph::cli::{self, Cli};
use clap::Parser;

fn main() -> ExitCode {
    // Let clap handle --help/--version and print its own usage errors.
    let parsed = Cli::try_parse().unwrap_or_else(|e| {
        let code = if e.use_stderr() { cli::EXIT_USAGE } else { 0 };
        let _ = e.print();
        std::process::exit(code);
    });
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match cli::run(parsed, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("capgraph: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
