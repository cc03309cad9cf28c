//! `simulate`: integrate the delay network from a cluster state and
//! classify what it settles into.

use serde::Serialize;

use phaseclust::reduction::{find_limit_cycle, CycleOptions};
use phaseclust::simulate::{
    classify_clusters, identify_pattern, integrate, jitter_offsets, pattern_residual, Delay,
    InitialHistory, IntegrationOptions, MeasuredPattern, NetworkSpec, PatternMatch,
};

use crate::artifacts::{ArtifactSet, Csv};
use crate::commands::states::select_initial_state;
use crate::config::ExperimentConfig;
use crate::context::{build_oscillator, build_topology, fan_out};
use crate::error::{runtime, schema, Result};

#[derive(Serialize)]
pub struct CaseReport {
    pub index: usize,
    pub tau: f64,
    pub epsilon: f64,
    /// Seed used for this case's phase jitter, when jitter is active.
    pub jitter_seed: Option<u64>,
    pub measured: MeasuredPattern,
    /// Best catalog match of the measured fractions, if any is close.
    pub identified: Option<PatternMatch>,
    /// Deviation of the measured fractions from the initial state's.
    pub residual_vs_initial: f64,
    pub spike_file: String,
    pub trajectory_file: Option<String>,
}

#[derive(Serialize)]
struct SimulateReport {
    seed: u64,
    period: f64,
    omega: f64,
    initial_state: String,
    initial_offsets: Vec<f64>,
    jitter: f64,
    duration: f64,
    step: f64,
    cases: Vec<CaseReport>,
}

/// Everything one integration produces before artifact writing.
pub struct CaseOutput {
    pub report: CaseReport,
    pub spikes_csv: Vec<u8>,
    pub trajectory_csv: Option<Vec<u8>>,
}

/// Integrate one (τ, ε) case and classify the trailing window.
#[allow(clippy::too_many_arguments)]
fn run_case(
    cfg: &ExperimentConfig,
    index: usize,
    tau: f64,
    epsilon: f64,
    cycle: &phaseclust::reduction::LimitCycle,
    topology: &phaseclust::topology::CouplingTopology,
    offsets: &[f64],
    predicted: &[f64],
) -> Result<CaseOutput> {
    let sim = &cfg.simulation;
    let period = cycle.period();
    let duration = sim.duration_periods * period;

    let mut offsets = offsets.to_vec();
    let jitter_seed = if sim.jitter > 0.0 {
        let seed = cfg.seed.wrapping_add(index as u64);
        jitter_offsets(&mut offsets, sim.jitter, seed);
        Some(seed)
    } else {
        None
    };

    let spec = NetworkSpec {
        oscillator: build_oscillator(cfg),
        topology: topology.clone(),
        weights: None,
        epsilon,
        delay: Delay::Uniform(tau),
    };
    let history = InitialHistory::from_offsets(cycle.clone(), offsets);
    let opts = IntegrationOptions {
        step: sim.step,
        duration,
        substeps: None,
        record_stride: sim.record_stride,
        pulses: Vec::new(),
    };
    let result = integrate(&spec, &history, &opts)
        .map_err(|e| runtime(format!("case tau = {tau}, epsilon = {epsilon}: {e}")))?;

    let window = (duration * (1.0 - sim.window_fraction), duration);
    let measured = classify_clusters(&result.spikes, window, sim.classify_tol)
        .map_err(|e| runtime(format!("case tau = {tau}, epsilon = {epsilon}: {e}")))?;
    let identified = identify_pattern(&measured.fractions, sim.classify_tol);
    let residual_vs_initial = pattern_residual(&measured.fractions, predicted)?;

    let mut spikes_csv = Csv::new(cfg.seed, "oscillator,time");
    for (i, train) in result.spikes.iter().enumerate() {
        for t in train {
            spikes_csv.row(format_args!("{},{t:.6}", i + 1));
        }
    }
    let spike_file = format!("case{index:02}_spikes.csv");

    let trajectory_csv = result.trajectory.as_ref().map(|traj| {
        let n = topology.n_osc();
        let header: Vec<String> = std::iter::once("t".to_string())
            .chain((1..=n).flat_map(|i| [format!("v{i}"), format!("w{i}")]))
            .collect();
        let mut csv = Csv::new(cfg.seed, &header.join(","));
        for (t, state) in traj.times.iter().zip(&traj.states) {
            let cells: Vec<String> = state.iter().map(|x| format!("{x:.9}")).collect();
            csv.row(format_args!("{t:.6},{}", cells.join(",")));
        }
        csv.into_bytes()
    });
    let trajectory_file = trajectory_csv
        .as_ref()
        .map(|_| format!("case{index:02}_trajectory.csv"));

    Ok(CaseOutput {
        report: CaseReport {
            index,
            tau,
            epsilon,
            jitter_seed,
            measured,
            identified,
            residual_vs_initial,
            spike_file,
            trajectory_file,
        },
        spikes_csv: spikes_csv.into_bytes(),
        trajectory_csv,
    })
}

pub fn run(cfg: &ExperimentConfig, jobs: usize, artifacts: &mut ArtifactSet) -> Result<()> {
    let taus = cfg
        .delays
        .taus
        .clone()
        .ok_or_else(|| schema("simulate requires delays.taus (or --tau)"))?;
    let epsilons = cfg
        .coupling
        .epsilons
        .clone()
        .unwrap_or_else(|| vec![cfg.coupling.epsilon]);

    let sys = build_oscillator(cfg);
    let topology = build_topology(cfg)?;
    let cycle = find_limit_cycle(
        &sys,
        &phaseclust::oscillator::MorrisLecar::default_initial_state(),
        &CycleOptions::default(),
    )?;
    let state = select_initial_state(cfg, &topology)?;
    let offsets = state.phase_offsets();
    let predicted = state.firing_fractions();

    let cases: Vec<(f64, f64)> = taus
        .iter()
        .flat_map(|&tau| epsilons.iter().map(move |&eps| (tau, eps)))
        .collect();
    let outputs: Vec<Result<CaseOutput>> = fan_out(jobs, cases, |index, (tau, epsilon)| {
        run_case(cfg, index, tau, epsilon, &cycle, &topology, &offsets, &predicted)
    });

    let mut reports = Vec::new();
    for output in outputs {
        let output = output?;
        artifacts.write(&output.report.spike_file, &output.spikes_csv)?;
        if let (Some(name), Some(bytes)) = (&output.report.trajectory_file, &output.trajectory_csv)
        {
            artifacts.write(name, bytes)?;
        }
        let verdict = match &output.report.identified {
            Some(m) => format!("{} (residual {:.4})", m.label, m.residual),
            None => "no catalog pattern".to_string(),
        };
        println!(
            "tau = {:.4}, epsilon = {}: {verdict}",
            output.report.tau, output.report.epsilon
        );
        reports.push(output.report);
    }

    let report = SimulateReport {
        seed: cfg.seed,
        period: cycle.period(),
        omega: cycle.omega(),
        initial_state: state.label(),
        initial_offsets: offsets,
        jitter: cfg.simulation.jitter,
        duration: cfg.simulation.duration_periods * cycle.period(),
        step: cfg.simulation.step,
        cases: reports,
    };
    artifacts.write_json("simulate.json", &report)?;
    Ok(())
}
