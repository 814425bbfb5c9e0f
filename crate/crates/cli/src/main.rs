use std::process::ExitCode;

use clap::Parser;
use schwarz_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match schwarz_cli::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if !out.text.ends_with('\n') {
                println!();
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("schwarz: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
