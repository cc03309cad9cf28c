//! Experiments on delay-coupled oscillator networks.
//!
//! Every run reads an optional TOML configuration (command-line flags
//! override it), writes its artifacts into one directory, and ends with a
//! `manifest.json` checksumming every input and output. Artifacts are
//! bit-identical across reruns and `--jobs` settings. Exit codes: 0 on
//! success, 1 for computation failures, 2 for schema violations.

mod artifacts;
mod commands;
mod config;
mod context;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use artifacts::ArtifactSet;
use config::{CommandKind, ExperimentConfig, TableConfig, TableId};
use error::{schema, CliError};

#[derive(Parser)]
#[command(
    name = "phaseclust",
    version,
    about = "Cluster states of delay-coupled oscillator networks: phase reduction, \
             spectra, delay sweeps, DDE runs, and stability-table reproduction"
)]
struct Cli {
    /// Experiment configuration (TOML); flags override file values
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output directory for artifacts and the run manifest
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Seed recorded in every artifact and used wherever noise enters
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for independent cases; outputs keep a fixed order
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the limit cycle, phase response, and interaction function
    Reduce {
        /// Fourier truncation order of the interaction-function fit
        #[arg(long)]
        fit_order: Option<usize>,
        /// Interaction-function grid size
        #[arg(long)]
        resolution: Option<usize>,
    },
    /// List the symmetric cluster states of a network
    Catalog {
        /// Network size
        #[arg(long = "N")]
        n: Option<usize>,
    },
    /// Eigenvalue spectra of cluster states at fixed delays
    Stability {
        /// Restrict to the twist state with this index
        #[arg(long)]
        q: Option<usize>,
        /// Restrict to an alternating state: aabb or abba
        #[arg(long, value_name = "VARIANT")]
        alternating: Option<String>,
        /// Delay to evaluate; repeat for several
        #[arg(long = "tau", value_name = "TAU")]
        taus: Vec<f64>,
    },
    /// Stability intervals of cluster states over a delay range
    Sweep {
        /// Restrict to the twist state with this index
        #[arg(long)]
        q: Option<usize>,
        /// Restrict to an alternating state: aabb or abba
        #[arg(long, value_name = "VARIANT")]
        alternating: Option<String>,
        /// Sweep range end (defaults to one period)
        #[arg(long)]
        tau_max: Option<f64>,
        /// Sweep grid cells
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Integrate the delay network from a cluster state
    Simulate {
        /// Twist index of the initial state
        #[arg(long)]
        q: Option<usize>,
        /// Delay to run; repeat for several
        #[arg(long = "tau", value_name = "TAU")]
        taus: Vec<f64>,
        /// Coupling strength to run; repeat for several
        #[arg(long = "epsilon", value_name = "EPS")]
        epsilons: Vec<f64>,
        /// Initial phase jitter in radians
        #[arg(long)]
        jitter: Option<f64>,
    },
    /// Integrate with a current pulse and compare patterns before and after
    Perturb {
        /// Delay to run
        #[arg(long)]
        tau: Option<f64>,
    },
    /// Recompute a published stability table and diff it
    #[command(name = "reproduce-table")]
    ReproduceTable {
        /// Table id: w1, w2, n140-w1, or n140-w2
        table: Option<String>,
        /// Restrict rows to a network-size range like 2..9 (or one size)
        #[arg(long = "N", value_name = "RANGE")]
        range: Option<String>,
    },
}

impl Command {
    fn kind(&self) -> CommandKind {
        match self {
            Command::Reduce { .. } => CommandKind::Reduce,
            Command::Catalog { .. } => CommandKind::Catalog,
            Command::Stability { .. } => CommandKind::Stability,
            Command::Sweep { .. } => CommandKind::Sweep,
            Command::Simulate { .. } => CommandKind::Simulate,
            Command::Perturb { .. } => CommandKind::Perturb,
            Command::ReproduceTable { .. } => CommandKind::ReproduceTable,
        }
    }
}

/// Parse a row filter like `2..9`, `2..=9`, or `6` into inclusive bounds.
fn parse_range(s: &str) -> Result<(u32, u32), CliError> {
    let bad = || schema(format!("--N {s}: expected LO..HI or a single size"));
    if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
        Ok((lo, hi))
    } else {
        let n: u32 = s.trim().parse().map_err(|_| bad())?;
        Ok((n, n))
    }
}

/// Fold the command-line flags into the configuration.
fn apply_overrides(cfg: &mut ExperimentConfig, cli: &Cli) -> Result<(), CliError> {
    if let Some(out) = &cli.out {
        cfg.output = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }

    let set_state = |cfg: &mut ExperimentConfig,
                     q: &Option<usize>,
                     alternating: &Option<String>|
     -> Result<(), CliError> {
        if q.is_some() && alternating.is_some() {
            return Err(schema("--q and --alternating are mutually exclusive"));
        }
        if let Some(q) = q {
            cfg.simulation.q = Some(*q);
            cfg.simulation.alternating = None;
        }
        if let Some(v) = alternating {
            cfg.simulation.alternating = Some(v.clone());
            cfg.simulation.q = None;
        }
        Ok(())
    };

    match &cli.command {
        Command::Reduce {
            fit_order,
            resolution,
        } => {
            if let Some(k) = fit_order {
                cfg.interaction.fit_order = *k;
            }
            if let Some(r) = resolution {
                cfg.interaction.resolution = *r;
            }
        }
        Command::Catalog { n } => {
            if let Some(n) = n {
                cfg.topology.n = *n;
            }
        }
        Command::Stability { q, alternating, taus } => {
            set_state(cfg, q, alternating)?;
            if !taus.is_empty() {
                cfg.delays.taus = Some(taus.clone());
            }
        }
        Command::Sweep {
            q,
            alternating,
            tau_max,
            grid,
        } => {
            set_state(cfg, q, alternating)?;
            if tau_max.is_some() {
                cfg.delays.tau_max = *tau_max;
            }
            if grid.is_some() {
                cfg.delays.grid = *grid;
            }
        }
        Command::Simulate {
            q,
            taus,
            epsilons,
            jitter,
        } => {
            set_state(cfg, q, &None)?;
            if !taus.is_empty() {
                cfg.delays.taus = Some(taus.clone());
            }
            if !epsilons.is_empty() {
                cfg.coupling.epsilons = Some(epsilons.clone());
            }
            if let Some(j) = jitter {
                cfg.simulation.jitter = *j;
            }
        }
        Command::Perturb { tau } => {
            if let Some(tau) = tau {
                cfg.delays.taus = Some(vec![*tau]);
            }
        }
        Command::ReproduceTable { table, range } => {
            let id = match table {
                Some(s) => Some(TableId::parse(s)?),
                None => cfg.table.as_ref().map(|t| t.id),
            };
            let id = id.ok_or_else(|| {
                schema("reproduce-table requires a table id (argument or [table])")
            })?;
            let (mut n_min, mut n_max) = cfg
                .table
                .as_ref()
                .map_or((None, None), |t| (t.n_min, t.n_max));
            if let Some(r) = range {
                let (lo, hi) = parse_range(r)?;
                n_min = Some(lo);
                n_max = Some(hi);
            }
            cfg.table = Some(TableConfig { id, n_min, n_max });
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let kind = cli.command.kind();
    let mut cfg = match &cli.config {
        Some(path) => {
            let cfg = ExperimentConfig::load(path)?;
            if cfg.command != kind {
                return Err(schema(format!(
                    "command = \"{}\" in {} does not match the invoked subcommand \"{}\"",
                    cfg.command.name(),
                    path.display(),
                    kind.name()
                )));
            }
            cfg
        }
        None => ExperimentConfig::defaults(kind),
    };
    apply_overrides(&mut cfg, cli)?;
    cfg.validate()?;

    let jobs = cli.jobs.unwrap_or(1);
    let mut artifacts = ArtifactSet::create(&cfg.output)?;
    if let Some(path) = &cli.config {
        artifacts.record_input(path)?;
    }

    match kind {
        CommandKind::Reduce => commands::reduce::run(&cfg, jobs, &mut artifacts)?,
        CommandKind::Catalog => commands::catalog::run(&cfg, jobs, &mut artifacts)?,
        CommandKind::Stability => commands::stability::run(&cfg, jobs, &mut artifacts)?,
        CommandKind::Sweep => commands::sweep::run(&cfg, jobs, &mut artifacts)?,
        CommandKind::Simulate => commands::simulate::run(&cfg, jobs, &mut artifacts)?,
        CommandKind::Perturb => commands::perturb::run(&cfg, jobs, &mut artifacts)?,
        CommandKind::ReproduceTable => commands::table::run(&cfg, jobs, &mut artifacts)?,
    }
    artifacts.finish(&cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
