//! `sweep`: stability intervals of cluster states over a delay range.

use serde::Serialize;

use phaseclust::stability::{
    sweep_alternating, sweep_twist, StabilityInterval, SweepOptions, SweepResult, DEFAULT_MARGIN,
};

use crate::artifacts::{interval_cell, ArtifactSet, Csv};
use crate::commands::states::{select_states, StateSpec};
use crate::config::ExperimentConfig;
use crate::context::{build_topology, fan_out, resolve_interaction};
use crate::error::Result;

/// Boundary bracketing width used by every sweep in this tool.
pub const BISECTION_TOL: f64 = 1e-4;

/// Sweep options shared by `sweep` and `reproduce-table`.
pub fn sweep_options(tau_min: f64, tau_max: f64, grid: usize) -> SweepOptions {
    SweepOptions {
        tau_min,
        tau_max,
        grid,
        bisection_tol: BISECTION_TOL,
        max_bisections: 60,
        margin: DEFAULT_MARGIN,
    }
}

#[derive(Serialize)]
struct StateIntervals {
    state: String,
    n_clusters: usize,
    intervals: Vec<StabilityInterval>,
}

#[derive(Serialize)]
struct SweepReport {
    seed: u64,
    period: f64,
    omega: f64,
    sign: crate::config::SignKind,
    tau_min: f64,
    tau_max: f64,
    grid: usize,
    states: Vec<StateIntervals>,
}

pub fn run(cfg: &ExperimentConfig, jobs: usize, artifacts: &mut ArtifactSet) -> Result<()> {
    let interaction = resolve_interaction(cfg, artifacts)?;
    let top = build_topology(cfg)?;
    let states = select_states(cfg, &top)?;
    let sign = cfg.coupling.sign.to_sign();

    let tau_min = cfg.delays.tau_min;
    let tau_max = cfg.delays.tau_max.unwrap_or(interaction.period);
    let grid = cfg.delays.grid.unwrap_or(400);
    let opts = sweep_options(tau_min, tau_max, grid);

    let results: Vec<Result<SweepResult>> = fan_out(jobs, states.iter().collect(), |_, state| {
        let res = match state {
            StateSpec::Twist(sol) => {
                sweep_twist(&top, &interaction.series, sol, interaction.omega, sign, &opts)
            }
            StateSpec::Alternating(sol) => sweep_alternating(
                &top,
                &interaction.series,
                sol,
                interaction.omega,
                sign,
                &opts,
            ),
        };
        res.map_err(Into::into)
    });

    let mut intervals_csv = Csv::new(cfg.seed, "state,interval_index,tau_start,tau_end");
    let mut reports = Vec::new();
    for (state, result) in states.iter().zip(results) {
        let result = result?;
        let id = state.id();
        for (k, iv) in result.intervals.iter().enumerate() {
            intervals_csv.row(format_args!("{id},{k},{:.4},{:.4}", iv.start, iv.end));
        }

        let mut curve = Csv::new(cfg.seed, "tau,max_re,verdict");
        for p in &result.curve {
            curve.row(format_args!("{:.6},{:.9e},{}", p.tau, p.max_re, p.verdict));
        }
        artifacts.write(&format!("sweep_{id}.csv"), &curve.into_bytes())?;

        let cells: Vec<(f64, f64)> = result.intervals.iter().map(|iv| (iv.start, iv.end)).collect();
        println!("{}: stable on {}", state.label(), interval_cell(&cells));
        reports.push(StateIntervals {
            state: id,
            n_clusters: state.n_clusters(),
            intervals: result.intervals,
        });
    }
    artifacts.write("intervals.csv", &intervals_csv.into_bytes())?;

    let report = SweepReport {
        seed: cfg.seed,
        period: interaction.period,
        omega: interaction.omega,
        sign: cfg.coupling.sign,
        tau_min,
        tau_max,
        grid,
        states: reports,
    };
    artifacts.write_json("sweep.json", &report)?;
    Ok(())
}
