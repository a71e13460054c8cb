//! Runs a bundled recipe through the command-line front end in-process.
//!
//! `cargo run --example run_recipe -- fig8c spectrum`

use std::process::ExitCode;

fn main() -> ExitCode {
    let mut args = std::env::args().skip(1);
    let recipe = args.next().unwrap_or_else(|| "fig2a".into());
    let command = args.next().unwrap_or_else(|| "potential".into());
    let path = format!("{}/recipes/{recipe}.json", env!("CARGO_MANIFEST_DIR"));
    let code = helix_spectra::cli::run(["helix-spectra", &command, "--config", &path]);
    ExitCode::from(code as u8)
}
