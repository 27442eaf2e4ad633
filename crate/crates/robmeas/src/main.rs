use std::process::ExitCode;

use clap::Parser;
use robmeas::cli::{run, Cli, Status};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli, &mut std::io::stdout().lock()) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::GuaranteeViolated) => {
            eprintln!("error: a trial inside the correction guarantee failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
