//! Front end for the verification engine. `run` parses arguments, runs the
//! requested suites and writes one report.
//!
//! Exit codes: `0` every check passed, `1` a mathematical check failed,
//! `2` usage or configuration error.

pub mod commands;
pub mod config;
pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};

use biharm_core::registry::Registry;
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use config::{ConfigError, RunConfig};
use report::{render, Report};

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "BIHARM_CONFIG";

#[derive(Parser, Debug)]
#[command(
    name = "biharm",
    version,
    about = "Verify the identities, parameter claims and numerics behind a biharmonic Liouville theorem"
)]
#[command(arg_required_else_help = true)]
struct Cli {
    /// Output format: json or markdown.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// key = value config file; defaults to $BIHARM_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Disable the parallel executor.
    #[arg(long, global = true)]
    sequential: bool,
    /// Zero wall-clock fields so reports compare byte for byte.
    #[arg(long, global = true)]
    reproducible: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Symbolic identity suite and master-combination recovery.
    Verify {
        #[arg(long, value_delimiter = ',')]
        ids: Vec<String>,
        /// free or onshell; overrides each identity's own mode.
        #[arg(long)]
        mode: Option<String>,
        /// Include the corrected variants of the displayed errata.
        #[arg(long)]
        with_corrections: bool,
    },
    /// Exact matrix algebra, Sturm certificates and exponent arithmetic.
    Params {
        #[arg(long)]
        n_max: Option<i64>,
    },
    /// Numeric smallest-eigenvalue scan of the coefficient matrix.
    ScanPd {
        /// Range such as 5..100.
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Random-jet evaluation of every identity and the sharp-constant probe.
    Oracle {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Comma-separated dimensions.
        #[arg(long)]
        dims: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
        /// Comma-separated alpha:a pairs.
        #[arg(long)]
        points: Option<String>,
        #[arg(long)]
        with_corrections: bool,
        /// Directory for failing-jet replay files.
        #[arg(long)]
        replay_dir: Option<PathBuf>,
    },
    /// Radial shooting scans.
    Radial {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Cells as U0xV0, e.g. 10x10.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        rmax: Option<f64>,
        /// Directory for per-trajectory CSV files.
        #[arg(long)]
        dump_trajectories: Option<PathBuf>,
    },
    /// Every suite in turn; a failure in one does not stop the others.
    All,
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Verify { .. } => "verify",
            Cmd::Params { .. } => "params",
            Cmd::ScanPd { .. } => "scan-pd",
            Cmd::Oracle { .. } => "oracle",
            Cmd::Radial { .. } => "radial",
            Cmd::All => "all",
        }
    }
}

fn set_opt<T: ToString>(cfg: &mut RunConfig, key: &str, v: &Option<T>) -> Result<(), ConfigError> {
    match v {
        Some(v) => cfg.set(key, &v.to_string()),
        None => Ok(()),
    }
}

/// Defaults, then the config file, then flags.
fn build_config(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig {
        command: cli.cmd.name().to_string(),
        ..RunConfig::default()
    };
    let file = cli
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    if let Some(path) = file {
        cfg.load_file(&path)?;
    }
    set_opt(&mut cfg, "format", &cli.format)?;
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    cfg.sequential |= cli.sequential;
    cfg.reproducible |= cli.reproducible;
    match &cli.cmd {
        Cmd::Verify {
            ids,
            mode,
            with_corrections,
        } => {
            if !ids.is_empty() {
                cfg.ids = ids.clone();
            }
            set_opt(&mut cfg, "mode", mode)?;
            cfg.with_corrections |= with_corrections;
        }
        Cmd::Params { n_max } => set_opt(&mut cfg, "n_max", n_max)?,
        Cmd::ScanPd { n, grid } => {
            set_opt(&mut cfg, "n", n)?;
            set_opt(&mut cfg, "grid", grid)?;
        }
        Cmd::Oracle {
            seed,
            samples,
            dims,
            tol,
            points,
            with_corrections,
            replay_dir,
        } => {
            set_opt(&mut cfg, "seed", seed)?;
            set_opt(&mut cfg, "samples", samples)?;
            set_opt(&mut cfg, "dims", dims)?;
            set_opt(&mut cfg, "tol", tol)?;
            set_opt(&mut cfg, "points", points)?;
            cfg.with_corrections |= with_corrections;
            if let Some(d) = replay_dir {
                cfg.replay_dir = Some(d.clone());
            }
        }
        Cmd::Radial {
            n,
            alpha,
            grid,
            rmax,
            dump_trajectories,
        } => {
            if n.is_some() || alpha.is_some() {
                cfg.radial_cases = vec![(n.unwrap_or(6), alpha.unwrap_or(2.0))];
            }
            set_opt(&mut cfg, "radial_grid", grid)?;
            set_opt(&mut cfg, "rmax", rmax)?;
            if let Some(d) = dump_trajectories {
                cfg.dump_trajectories = Some(d.clone());
            }
        }
        Cmd::All => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs the suites named by `cfg.command` into a finished report.
pub fn execute(cfg: RunConfig, reg: &Registry) -> Report {
    let cmd = cfg.command.clone();
    let mut report = Report::new(cfg.clone());
    let all = cmd == "all";
    if all || cmd == "verify" {
        commands::verify(&cfg, reg, &mut report);
    }
    if all || cmd == "params" {
        commands::params(&cfg, &mut report);
    }
    if all || cmd == "scan-pd" {
        commands::scan_pd(&cfg, &mut report);
    }
    if all || cmd == "oracle" {
        commands::oracle(&cfg, reg, &mut report);
    }
    if all || cmd == "radial" {
        commands::radial(&cfg, &mut report);
    }
    report.finalize();
    report
}

/// Writes via a temporary file in the target directory and a rename.
pub fn write_atomic(path: &Path, body: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(body.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Entry point shared by the binary and the tests. `registry` replaces the
/// built-in catalog when given.
pub fn run<I, T>(
    args: I,
    registry: Option<Registry>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let cfg = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let reg = registry.unwrap_or_else(|| {
        if cfg.with_corrections {
            Registry::with_corrections()
        } else {
            Registry::printed()
        }
    });
    let report = execute(cfg.clone(), &reg);
    let body = render(&report, cfg.format);
    match &cfg.out {
        Some(path) => {
            if let Err(e) = write_atomic(path, &body) {
                let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => {
            let _ = out.write_all(body.as_bytes());
        }
    }
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    if failed.is_empty() {
        let _ = writeln!(
            err,
            "{}: pass ({} checks)",
            cfg.command,
            report.checks.len()
        );
        0
    } else {
        let _ = writeln!(err, "{}: FAIL ({})", cfg.command, failed.join(", "));
        1
    }
}
