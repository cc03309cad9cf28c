//! `stability`: eigenvalue spectra of cluster states at fixed delays.

use serde::Serialize;

use phaseclust::stability::{
    alternating_spectrum, twist_spectrum, Spectrum, Stability, DEFAULT_MARGIN,
};

use crate::artifacts::{ArtifactSet, Csv};
use crate::commands::states::{select_states, StateSpec};
use crate::config::ExperimentConfig;
use crate::context::{build_topology, resolve_interaction};
use crate::error::{schema, Result};

#[derive(Serialize)]
struct DelayVerdict {
    tau: f64,
    /// Phase lag η = Ωτ.
    eta: f64,
    max_re: f64,
    verdict: Stability,
    structural_zero_abs: f64,
    /// Eigenvalues at ε = +1 as (re, im) pairs.
    eigenvalues: Vec<(f64, f64)>,
}

#[derive(Serialize)]
struct StateReport {
    state: String,
    n_clusters: usize,
    delays: Vec<DelayVerdict>,
}

#[derive(Serialize)]
struct StabilityReport {
    seed: u64,
    period: f64,
    omega: f64,
    sign: crate::config::SignKind,
    states: Vec<StateReport>,
}

pub fn run(cfg: &ExperimentConfig, _jobs: usize, artifacts: &mut ArtifactSet) -> Result<()> {
    let taus = cfg
        .delays
        .taus
        .clone()
        .ok_or_else(|| schema("stability requires delays.taus (or --tau)"))?;
    let interaction = resolve_interaction(cfg, artifacts)?;
    let top = build_topology(cfg)?;
    let states = select_states(cfg, &top)?;
    let sign = cfg.coupling.sign.to_sign();

    let mut csv = Csv::new(cfg.seed, "state,tau,index,re,im");
    let mut reports = Vec::new();
    for state in &states {
        let id = state.id();
        let mut delays = Vec::new();
        for &tau in &taus {
            let eta = interaction.omega * tau;
            let spectrum: Spectrum = match state {
                StateSpec::Twist(sol) => {
                    twist_spectrum(&top, &interaction.series, sol, eta)?
                }
                StateSpec::Alternating(sol) => {
                    alternating_spectrum(&top, &interaction.series, sol, eta)?
                }
            };
            for (k, l) in spectrum.eigenvalues().iter().enumerate() {
                csv.row(format_args!("{id},{tau:.6},{k},{:.9e},{:.9e}", l.re, l.im));
            }
            let verdict = spectrum.classify(sign, DEFAULT_MARGIN);
            let max_re = spectrum.max_re(sign);
            println!(
                "{} at tau = {tau:.4}: {verdict} (leading rate {max_re:.3e})",
                state.label()
            );
            delays.push(DelayVerdict {
                tau,
                eta,
                max_re,
                verdict,
                structural_zero_abs: spectrum.structural_zero().norm(),
                eigenvalues: spectrum.eigenvalues().iter().map(|l| (l.re, l.im)).collect(),
            });
        }
        reports.push(StateReport {
            state: id,
            n_clusters: state.n_clusters(),
            delays,
        });
    }
    artifacts.write("eigenvalues.csv", &csv.into_bytes())?;

    let report = StabilityReport {
        seed: cfg.seed,
        period: interaction.period,
        omega: interaction.omega,
        sign: cfg.coupling.sign,
        states: reports,
    };
    artifacts.write_json("stability.json", &report)?;
    Ok(())
}
