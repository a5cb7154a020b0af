mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{Output, Violation};

fn run(cli: &Cli, out: &mut Output) -> anyhow::Result<()> {
    match &cli.command {
        Command::Generate(a) => commands::generate(a, out),
        Command::Render(a) => commands::render(a, out),
        Command::Matrix(a) => commands::matrix(a, out),
        Command::Spectrum(a) => commands::spectrum(a, out),
        Command::Density(a) => commands::density(a, out),
        Command::Verify(a) => commands::verify(a, cli.rng_seed, out),
        Command::Reconstruct(a) => commands::reconstruct_cmd(a, out),
        Command::Stars(a) => commands::stars(a, out),
        Command::Period(a) => commands::period(a, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Output::new();
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(usize::from(n)).build() {
            Ok(pool) => pool.install(|| run(&cli, &mut out)),
            Err(e) => Err(anyhow::anyhow!("thread pool: {e}")),
        },
        None => run(&cli, &mut out),
    };
    // a closed pipe (`| head`) is not an error
    let _ = std::io::stdout().lock().write_all(out.stdout.as_bytes());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Violation>() => {
            eprintln!("violation: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
