//! `perturb`: integrate with a current pulse and compare the cluster
//! pattern before and after it.

use serde::Serialize;

use phaseclust::reduction::{find_limit_cycle, CycleOptions};
use phaseclust::simulate::{
    classify_clusters, identify_pattern, integrate, jitter_offsets, residual_timeline, Delay,
    InitialHistory, IntegrationOptions, MeasuredPattern, NetworkSpec, PatternMatch, Pulse,
};

use crate::artifacts::{ArtifactSet, Csv};
use crate::commands::states::select_initial_state;
use crate::config::ExperimentConfig;
use crate::context::{build_oscillator, build_topology};
use crate::error::{runtime, schema, Result};

#[derive(Serialize)]
struct PatternReport {
    window: (f64, f64),
    measured: MeasuredPattern,
    identified: Option<PatternMatch>,
}

#[derive(Serialize)]
struct PerturbReport {
    seed: u64,
    period: f64,
    tau: f64,
    epsilon: f64,
    initial_state: String,
    pulse: Pulse,
    before: PatternReport,
    after: PatternReport,
    /// Whether the pulse left the network in a different pattern.
    switched: bool,
}

fn classify_window(
    spikes: &[Vec<f64>],
    window: (f64, f64),
    tol: f64,
    what: &str,
) -> Result<(MeasuredPattern, Option<PatternMatch>)> {
    let measured = classify_clusters(spikes, window, tol)
        .map_err(|e| runtime(format!("classifying the {what}-pulse window: {e}")))?;
    let identified = identify_pattern(&measured.fractions, tol);
    Ok((measured, identified))
}

pub fn run(cfg: &ExperimentConfig, _jobs: usize, artifacts: &mut ArtifactSet) -> Result<()> {
    let pulse_cfg = cfg
        .pulse
        .as_ref()
        .ok_or_else(|| schema("perturb requires a [pulse] section"))?;
    let taus = cfg
        .delays
        .taus
        .clone()
        .ok_or_else(|| schema("perturb requires delays.taus (or --tau)"))?;
    let tau = taus[0];
    let epsilon = cfg.coupling.epsilon;
    let sim = &cfg.simulation;

    let sys = build_oscillator(cfg);
    let topology = build_topology(cfg)?;
    let cycle = find_limit_cycle(
        &sys,
        &phaseclust::oscillator::MorrisLecar::default_initial_state(),
        &CycleOptions::default(),
    )?;
    let period = cycle.period();
    let duration = sim.duration_periods * period;

    let state = select_initial_state(cfg, &topology)?;
    let mut offsets = state.phase_offsets();
    if sim.jitter > 0.0 {
        jitter_offsets(&mut offsets, sim.jitter, cfg.seed);
    }

    let pulse = Pulse {
        targets: pulse_cfg.targets.clone(),
        t_start: pulse_cfg.start_periods * period,
        t_end: (pulse_cfg.start_periods + pulse_cfg.length_periods) * period,
        amplitude: pulse_cfg.amplitude,
    };

    let spec = NetworkSpec {
        oscillator: sys,
        topology: topology.clone(),
        weights: None,
        epsilon,
        delay: Delay::Uniform(tau),
    };
    let history = InitialHistory::from_offsets(cycle, offsets);
    let opts = IntegrationOptions {
        step: sim.step,
        duration,
        substeps: None,
        record_stride: sim.record_stride,
        pulses: vec![pulse.clone()],
    };
    let result = integrate(&spec, &history, &opts)?;

    // Settled windows on either side of the pulse.
    let before_window = (0.5 * pulse.t_start, pulse.t_start);
    let after_window = (pulse.t_end + 0.5 * (duration - pulse.t_end), duration);
    let (before_measured, before_id) =
        classify_window(&result.spikes, before_window, sim.classify_tol, "before")?;
    let (after_measured, after_id) =
        classify_window(&result.spikes, after_window, sim.classify_tol, "after")?;

    let before_label = before_id.as_ref().map(|m| m.label.clone());
    let after_label = after_id.as_ref().map(|m| m.label.clone());
    let switched = before_label != after_label;

    let mut spikes_csv = Csv::new(cfg.seed, "oscillator,time");
    for (i, train) in result.spikes.iter().enumerate() {
        for t in train {
            spikes_csv.row(format_args!("{},{t:.6}", i + 1));
        }
    }
    artifacts.write("spikes.csv", &spikes_csv.into_bytes())?;

    // Residual of every inter-spike span against both settled patterns;
    // the crossover locates the switch.
    let vs_before = residual_timeline(&result.spikes, &before_measured.fractions, (0.0, duration))?;
    let vs_after = residual_timeline(&result.spikes, &after_measured.fractions, (0.0, duration))?;
    let mut residual_csv = Csv::new(cfg.seed, "t,residual_vs_before,residual_vs_after");
    for ((t, rb), (_, ra)) in vs_before.iter().zip(&vs_after) {
        residual_csv.row(format_args!("{t:.6},{rb:.6},{ra:.6}"));
    }
    artifacts.write("residuals.csv", &residual_csv.into_bytes())?;

    if let Some(traj) = &result.trajectory {
        let n = topology.n_osc();
        let header: Vec<String> = std::iter::once("t".to_string())
            .chain((1..=n).flat_map(|i| [format!("v{i}"), format!("w{i}")]))
            .collect();
        let mut csv = Csv::new(cfg.seed, &header.join(","));
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let cells: Vec<String> = s.iter().map(|x| format!("{x:.9}")).collect();
            csv.row(format_args!("{t:.6},{}", cells.join(",")));
        }
        artifacts.write("trajectory.csv", &csv.into_bytes())?;
    }

    let describe = |label: &Option<String>| match label {
        Some(l) => l.clone(),
        None => "no catalog pattern".to_string(),
    };
    println!(
        "before: {} -> after: {} ({})",
        describe(&before_label),
        describe(&after_label),
        if switched { "switched" } else { "unchanged" }
    );

    let report = PerturbReport {
        seed: cfg.seed,
        period,
        tau,
        epsilon,
        initial_state: state.label(),
        pulse,
        before: PatternReport {
            window: before_window,
            measured: before_measured,
            identified: before_id,
        },
        after: PatternReport {
            window: after_window,
            measured: after_measured,
            identified: after_id,
        },
        switched,
    };
    artifacts.write_json("perturb.json", &report)?;
    Ok(())
}
