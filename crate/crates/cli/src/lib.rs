//! Front end for the `godel-c60` binary: configuration, sweeps and output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod table;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

use config::{Format, Preset, RunConfig, SweepAxis};
use table::{render_csv, render_structured};

pub const JOBS_ENV: &str = "GODEL_C60_JOBS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] godel_c60::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

#[derive(Debug, Parser)]
#[command(
    name = "godel-c60",
    version,
    about = "Dirac spectrum and persistent current of a rotating C60 fullerene"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form spectrum over the level window at every sweep point.
    Spectrum,
    /// Persistent current at every sweep point.
    Current,
    /// Causal structure of the Gödel-type class at every (omega, l2) point.
    Causality,
    /// All verification suites; exits 2 if any check fails.
    Verify,
    /// Shooting eigenvalues next to the closed-form roots.
    Oracle,
}

/// Flags shared by every subcommand. Precedence, lowest first: built-in
/// defaults, `--config` file, `--preset`, individual flags.
#[derive(Debug, Args, Default)]
pub struct Common {
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub radius: Option<f64>,
    /// String flux Φ_B.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub flux: Option<f64>,
    /// l² of the Gödel-type class (causality only).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub l2: Option<f64>,
    #[arg(long, global = true)]
    pub nmax: Option<u32>,
    /// Largest |m|, e.g. 2.5.
    #[arg(long, global = true)]
    pub mmax: Option<f64>,
    /// Repeatable; `param:start:stop:count[:log]`, first axis outermost.
    #[arg(long, global = true, value_name = "SPEC")]
    pub sweep: Vec<String>,
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; falls back to GODEL_C60_JOBS, then the CPU count.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

impl Common {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                RunConfig::from_toml(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(p) = self.preset {
            p.apply(&mut cfg.model);
        }
        let m = &mut cfg.model;
        if let Some(v) = self.alpha {
            m.alpha = v;
        }
        if let Some(v) = self.omega {
            m.omega = v;
        }
        if let Some(v) = self.radius {
            m.radius = v;
        }
        if let Some(v) = self.flux {
            m.flux = v;
        }
        if let Some(v) = self.l2 {
            m.l2 = v;
        }
        if let Some(v) = self.nmax {
            cfg.levels.n_max = v;
        }
        if let Some(v) = self.mmax {
            cfg.levels.m_max = v;
        }
        if !self.sweep.is_empty() {
            cfg.sweep = self
                .sweep
                .iter()
                .map(|s| s.parse::<SweepAxis>())
                .collect::<Result<_, _>>()?;
        }
        if let Some(p) = &self.out {
            cfg.output.path = Some(p.display().to_string());
        }
        if let Some(f) = self.format {
            cfg.output.format = f;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn jobs(&self) -> Result<usize, CliError> {
        if let Some(j) = self.jobs {
            return if j == 0 {
                Err(CliError::Config("--jobs must be at least 1".into()))
            } else {
                Ok(j)
            };
        }
        match std::env::var(JOBS_ENV) {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(j) if j > 0 => Ok(j),
                _ => Err(CliError::Config(format!("{JOBS_ENV}='{v}' is not a positive integer"))),
            },
            Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
        }
    }
}

/// Rendered output plus the exit status it implies.
pub struct Outcome {
    pub text: String,
    pub exit_code: i32,
    /// Human-readable lines for stderr.
    pub summary: Vec<String>,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Spectrum => "spectrum",
        Command::Current => "current",
        Command::Causality => "causality",
        Command::Verify => "verify",
        Command::Oracle => "oracle",
    }
}

pub fn execute(command: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let name = command_name(command);
    let (tables, report, exit_code, summary) = match command {
        Command::Spectrum => (commands::spectrum(cfg)?, None, EXIT_OK, Vec::new()),
        Command::Current => (commands::current(cfg)?, None, EXIT_OK, Vec::new()),
        Command::Causality => (commands::causality(cfg)?, None, EXIT_OK, Vec::new()),
        Command::Oracle => (commands::oracle(cfg)?, None, EXIT_OK, Vec::new()),
        Command::Verify => {
            let r = commands::verify(cfg)?;
            let summary = r
                .checks
                .iter()
                .map(|c| {
                    format!(
                        "{} {:>2} {}: {:e} (tol {:e}) {}",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.id,
                        c.name,
                        c.metric,
                        c.tolerance,
                        c.detail
                    )
                })
                .collect();
            let code = if r.all_passed() { EXIT_OK } else { EXIT_VERIFY_FAILED };
            (commands::verify_tables(&r), Some(r), code, summary)
        }
    };
    let text = match cfg.output.format {
        Format::Csv => render_csv(name, &tables),
        Format::Structured => render_structured(name, cfg, &tables, report.as_ref()),
    };
    Ok(Outcome {
        text,
        exit_code,
        summary,
    })
}

/// Full run: resolve configuration, execute in a sized pool, write output.
pub fn run(cli: &Cli) -> Result<i32, CliError> {
    let cfg = cli.common.resolve()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.jobs()?)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let outcome = pool.install(|| execute(&cli.command, &cfg))?;
    for line in &outcome.summary {
        eprintln!("{line}");
    }
    match &cfg.output.path {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|e| CliError::Io(format!("{path}: {e}")))?,
        None => print!("{}", outcome.text),
    }
    Ok(outcome.exit_code)
}
