//! `reduce`: limit cycle, phase response, and interaction function.

use serde::Serialize;

use phaseclust::reference;

use crate::artifacts::{ArtifactSet, Csv};
use crate::config::ExperimentConfig;
use crate::context::resolve_interaction;
use crate::error::{schema, Result};

#[derive(Serialize)]
struct AdjointSummary {
    normalization_residual: f64,
    convergence_gap: f64,
    periods_used: usize,
}

#[derive(Serialize)]
struct FitSummary {
    order: usize,
    rms_residual: f64,
}

#[derive(Serialize)]
struct PublishedComparison {
    period: f64,
    omega: f64,
    period_delta: f64,
    omega_delta: f64,
}

#[derive(Serialize)]
struct ReductionReport {
    seed: u64,
    period: f64,
    omega: f64,
    cycle_closure_error: f64,
    adjoint: AdjointSummary,
    fit: FitSummary,
    /// The values the reference study reports for the same cell.
    published: PublishedComparison,
}

#[derive(Serialize)]
struct HFitFile<'a> {
    seed: u64,
    period: f64,
    omega: f64,
    series: &'a phaseclust::FourierSeries,
    rms_residual: f64,
}

pub fn run(cfg: &ExperimentConfig, _jobs: usize, artifacts: &mut ArtifactSet) -> Result<()> {
    if !cfg.interaction.is_computed() {
        return Err(schema(
            "reduce always computes; set interaction.source = \"compute\"",
        ));
    }
    let interaction = resolve_interaction(cfg, artifacts)?;
    let red = interaction
        .reduction
        .as_ref()
        .expect("computed interactions carry the pipeline output");
    let period = interaction.period;
    let omega = interaction.omega;

    let mut cycle_csv = Csv::new(cfg.seed, "t,v,w");
    let m = red.cycle.sample_count();
    for k in 0..m {
        let x = red.cycle.state_node(k);
        cycle_csv.row(format_args!(
            "{:.6},{:.9},{:.9}",
            period * k as f64 / m as f64,
            x[0],
            x[1]
        ));
    }
    artifacts.write("cycle.csv", &cycle_csv.into_bytes())?;

    let mut adjoint_csv = Csv::new(cfg.seed, "t,z_v,z_w");
    let m = red.adjoint.sample_count();
    for k in 0..m {
        let z = red.adjoint.node(k);
        adjoint_csv.row(format_args!(
            "{:.6},{:.9},{:.9}",
            period * k as f64 / m as f64,
            z[0],
            z[1]
        ));
    }
    artifacts.write("adjoint.csv", &adjoint_csv.into_bytes())?;

    let mut h_csv = Csv::new(cfg.seed, "theta,h");
    for (theta, h) in &red.h_samples {
        h_csv.row(format_args!("{theta:.9},{h:.9}"));
    }
    artifacts.write("h_samples.csv", &h_csv.into_bytes())?;

    artifacts.write_json(
        "h_fit.json",
        &HFitFile {
            seed: cfg.seed,
            period,
            omega,
            series: &red.h_fit.series,
            rms_residual: red.h_fit.rms_residual,
        },
    )?;

    let report = ReductionReport {
        seed: cfg.seed,
        period,
        omega,
        cycle_closure_error: red.cycle.closure_error(),
        adjoint: AdjointSummary {
            normalization_residual: red.adjoint.normalization_residual(),
            convergence_gap: red.adjoint.convergence_gap(),
            periods_used: red.adjoint.periods_used(),
        },
        fit: FitSummary {
            order: red.h_fit.series.order(),
            rms_residual: red.h_fit.rms_residual,
        },
        published: PublishedComparison {
            period: reference::REFERENCE_PERIOD,
            omega: reference::REFERENCE_OMEGA,
            period_delta: period - reference::REFERENCE_PERIOD,
            omega_delta: omega - reference::REFERENCE_OMEGA,
        },
    };
    artifacts.write_json("reduction.json", &report)?;

    println!(
        "period T = {period:.4} (published {:.2}), omega = {omega:.6}",
        reference::REFERENCE_PERIOD
    );
    println!(
        "fit order {} rms residual {:.3e}; h_fit.json is ready as interaction.source",
        red.h_fit.series.order(),
        red.h_fit.rms_residual
    );
    Ok(())
}
