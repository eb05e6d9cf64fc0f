use std::process::ExitCode;

use arcflock_cli::{init_threads, run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads(std::env::var("ARCFLOCK_THREADS").ok().as_deref())
        .and_then(|_| run(&cli))
        .and_then(|out| {
            match &cli.global.out {
                Some(path) => std::fs::write(path, &out.body)?,
                None => print!("{}", out.body),
            }
            Ok(out.ok)
        });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
