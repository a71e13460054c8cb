//! Command-line front end: argument parsing, configuration, and dispatch.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use commands::CommandOutput;
pub use config::{Overrides, RunConfig};

pub const THREADS_ENV: &str = "HELIX_SPECTRA_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Model(#[from] crate::Error),
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "helix-spectra", version, about = "Spectra of a particle on a helicoid in a harmonic trap")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Effective potential profiles and their minima.
    Potential,
    /// Effective potential over the helicoid surface.
    Surface3d,
    /// Quantized (E, Omega) lines.
    Spectrum,
    /// Check lines against the finite-difference solver.
    Verify,
    /// Evaluate the confluent Heun function.
    Heun,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    /// Helicoid twist rate.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// Oscillator frequency.
    #[arg(long = "Omega", global = true, allow_hyphen_values = true)]
    pub frequency: Option<f64>,
    /// Mass pairs, "M1:M2[,M1:M2...]".
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = config::parse_masses)]
    pub masses: Option<MassList>,
    /// Angular numbers, "0..4" or "0,2,3".
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = config::parse_m_list)]
    pub m: Option<MList>,
    /// Polynomial degree.
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Half width of the finite-difference box.
    #[arg(long = "grid-L", global = true)]
    pub grid_l: Option<f64>,
    /// Number of finite-difference nodes (odd).
    #[arg(long = "grid-N", global = true)]
    pub grid_n: Option<usize>,
    /// Worker threads; overridden by HELIX_SPECTRA_THREADS.
    #[arg(long, global = true)]
    pub parallel: Option<usize>,
    /// Heun parameters "alpha,beta,gamma,delta,eta".
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = config::parse_heun_params)]
    pub heun_params: Option<HeunList>,
    /// Heun arguments "z1,z2,...".
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = config::parse_f64_list)]
    pub z: Option<FloatList>,
    /// Spectrum CSV to verify.
    #[arg(long, global = true)]
    pub from: Option<PathBuf>,
}

// clap treats a bare `Vec<T>` as a repeated argument; these aliases keep one value per flag.
pub type MassList = Vec<[f64; 2]>;
pub type MList = Vec<i64>;
pub type HeunList = [f64; 5];
pub type FloatList = Vec<f64>;

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            out: self.out.clone(),
            hbar: self.hbar,
            omega: self.omega,
            frequency: self.frequency,
            masses: self.masses.clone(),
            m: self.m.clone(),
            n: self.n,
            grid_l: self.grid_l,
            grid_n: self.grid_n,
            parallel: self.parallel,
            heun: self.heun_params,
            z: self.z.clone(),
            from: self.from.clone(),
        }
    }
}

/// Loads the config file (if any) and applies flag and environment overrides.
pub fn resolve_config(flags: &Flags, threads_env: Option<&str>) -> Result<RunConfig, CliError> {
    let mut cfg = match &flags.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.apply(flags.overrides());
    if let Some(s) = threads_env.filter(|s| !s.trim().is_empty()) {
        let n = s
            .trim()
            .parse::<usize>()
            .map_err(|e| CliError::Usage(format!("{THREADS_ENV}={s:?}: {e}")))?;
        cfg.parallel = Some(n);
    }
    Ok(cfg)
}

pub fn execute(command: Command, cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallel.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| match command {
        Command::Potential => commands::potential(cfg),
        Command::Surface3d => commands::surface3d(cfg),
        Command::Spectrum => commands::spectrum(cfg),
        Command::Verify => commands::verify(cfg),
        Command::Heun => commands::heun_table(cfg),
    })
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let env = std::env::var(THREADS_ENV).ok();
    let result = resolve_config(&cli.flags, env.as_deref()).and_then(|cfg| execute(cli.command, &cfg));
    match result {
        Ok(out) => {
            if let Some(report) = &out.report {
                print!("{report}");
            }
            for f in &out.files {
                eprintln!("wrote {}", f.display());
            }
            if out.failed {
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
