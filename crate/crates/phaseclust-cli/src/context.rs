//! Shared run machinery: building model objects from a configuration,
//! resolving the interaction function, and a deterministic worker pool.

use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Deserialize;

use phaseclust::oscillator::MorrisLecar;
use phaseclust::reduction::{reduce, PhaseReduction, ReductionOptions};
use phaseclust::topology::CouplingTopology;
use phaseclust::FourierSeries;

use crate::artifacts::ArtifactSet;
use crate::config::{ExperimentConfig, TopologyKind};
use crate::error::{runtime, Result};

/// Build the cell model described by the configuration.
pub fn build_oscillator(cfg: &ExperimentConfig) -> MorrisLecar {
    MorrisLecar::new(cfg.oscillator.params(), cfg.oscillator.e_rev)
}

/// Build the coupling topology described by the configuration.
pub fn build_topology(cfg: &ExperimentConfig) -> Result<CouplingTopology> {
    let n = cfg.topology.n;
    let top = match cfg.topology.kind {
        TopologyKind::Global => CouplingTopology::global(n)?,
        TopologyKind::DistanceWeighted => CouplingTopology::distance_weighted(n)?,
        TopologyKind::Circulant => {
            let weights = cfg
                .topology
                .weights
                .as_ref()
                .expect("validated: circulant topologies carry weights");
            CouplingTopology::from_circulant(n, weights)?
        }
    };
    Ok(top)
}

/// The interaction function h with the frequency it belongs to.
pub struct Interaction {
    pub series: FourierSeries,
    pub omega: f64,
    pub period: f64,
    /// Full pipeline output when h was computed rather than loaded.
    pub reduction: Option<PhaseReduction>,
}

/// Wire format of an `h_fit.json` file.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HFile {
    #[allow(dead_code)]
    seed: Option<u64>,
    period: f64,
    omega: f64,
    series: FourierSeries,
    #[allow(dead_code)]
    rms_residual: Option<f64>,
}

/// Obtain h per the configuration: run the reduction pipeline, or load a
/// previously written `h_fit.json`. Loaded files are checksummed into the
/// manifest.
pub fn resolve_interaction(
    cfg: &ExperimentConfig,
    artifacts: &mut ArtifactSet,
) -> Result<Interaction> {
    if cfg.interaction.is_computed() {
        let sys = build_oscillator(cfg);
        let opts = ReductionOptions {
            h_resolution: cfg.interaction.resolution,
            fit_order: cfg.interaction.fit_order,
            ..ReductionOptions::default()
        };
        let red = reduce(&sys, &MorrisLecar::default_initial_state(), &opts)?;
        Ok(Interaction {
            series: red.h_fit.series.clone(),
            omega: red.cycle.omega(),
            period: red.cycle.period(),
            reduction: Some(red),
        })
    } else {
        let path = Path::new(&cfg.interaction.source);
        artifacts.record_input(path)?;
        let text = fs::read_to_string(path)
            .map_err(|e| runtime(format!("{}: {e}", path.display())))?;
        let file: HFile = serde_json::from_str(&text)
            .map_err(|e| runtime(format!("{}: {e}", path.display())))?;
        if !(file.period > 0.0) || !(file.omega > 0.0) {
            return Err(runtime(format!(
                "{}: period and omega must be positive",
                path.display()
            )));
        }
        Ok(Interaction {
            series: file.series,
            omega: file.omega,
            period: file.period,
            reduction: None,
        })
    }
}

/// Run `work` over `items` on up to `jobs` threads. Results come back in
/// item order no matter how the work interleaves, so artifacts derived from
/// them are identical for every `--jobs` value.
pub fn fan_out<T, R, F>(jobs: usize, items: Vec<T>, work: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(usize, T) -> R + Sync,
{
    let n = items.len();
    let workers = jobs.max(1).min(n.max(1));
    if workers <= 1 {
        return items
            .into_iter()
            .enumerate()
            .map(|(i, item)| work(i, item))
            .collect();
    }

    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<(Option<T>, Option<R>)>> = items
        .into_iter()
        .map(|item| Mutex::new((Some(item), None)))
        .collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let item = slots[i].lock().unwrap().0.take().expect("item claimed once");
                let result = work(i, item);
                slots[i].lock().unwrap().1 = Some(result);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| {
            slot.into_inner()
                .unwrap()
                .1
                .expect("every slot was filled")
        })
        .collect()
}
