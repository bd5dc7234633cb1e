use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ulam_cli::{init_threads, run, Cli};

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = e.exit_code();
            if code == 1 {
                print!("{e}");
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code as u8)
        }
    }
}
