use std::process::ExitCode;

use attnet_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("attnet: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
