//! Selecting which cluster states a command works on.

use std::f64::consts::TAU;

use phaseclust::catalog::{
    alternating_solution, enumerate_symmetric, twist_solution, AlternatingSolution,
    AlternatingVariant, ClusterSolution,
};
use phaseclust::topology::CouplingTopology;

use crate::config::ExperimentConfig;
use crate::error::Result;

/// One state under study: a twist or an alternating pattern.
pub enum StateSpec {
    Twist(ClusterSolution),
    Alternating(AlternatingSolution),
}

impl StateSpec {
    /// File-name-safe identifier ("q2", "aabb").
    pub fn id(&self) -> String {
        match self {
            StateSpec::Twist(sol) => format!("q{}", sol.q()),
            StateSpec::Alternating(sol) => variant_name(sol.variant()).to_string(),
        }
    }

    /// Human label ("q2 (3C)", "aabb (alternating)").
    pub fn label(&self) -> String {
        match self {
            StateSpec::Twist(sol) => format!("q{} ({})", sol.q(), sol.label()),
            StateSpec::Alternating(sol) => {
                format!("{} (alternating)", variant_name(sol.variant()))
            }
        }
    }

    pub fn n_clusters(&self) -> usize {
        match self {
            StateSpec::Twist(sol) => sol.n_clusters(),
            StateSpec::Alternating(_) => 2,
        }
    }

    pub fn phase_offsets(&self) -> Vec<f64> {
        match self {
            StateSpec::Twist(sol) => sol.phase_offsets(),
            StateSpec::Alternating(sol) => sol.phase_offsets(),
        }
    }

    /// Fraction of a period after oscillator 1's event at which each
    /// oscillator fires: an oscillator leading by phase θ fires (−θ/2π)
    /// mod 1 of a period later.
    pub fn firing_fractions(&self) -> Vec<f64> {
        self.phase_offsets()
            .iter()
            .map(|theta| (-theta / TAU).rem_euclid(1.0))
            .collect()
    }
}

pub fn variant_name(v: AlternatingVariant) -> &'static str {
    match v {
        AlternatingVariant::Aabb => "aabb",
        AlternatingVariant::Abba => "abba",
    }
}

pub fn parse_variant(s: &str) -> Option<AlternatingVariant> {
    match s {
        "aabb" => Some(AlternatingVariant::Aabb),
        "abba" => Some(AlternatingVariant::Abba),
        _ => None,
    }
}

/// States a spectrum command works on: the configured one, or — when the
/// configuration names none — every symmetric state plus the alternating
/// patterns where they exist.
pub fn select_states(cfg: &ExperimentConfig, top: &CouplingTopology) -> Result<Vec<StateSpec>> {
    let n = top.n_osc();
    if let Some(v) = &cfg.simulation.alternating {
        let variant = parse_variant(v).expect("validated variant");
        return Ok(vec![StateSpec::Alternating(alternating_solution(
            top, variant,
        )?)]);
    }
    if let Some(q) = cfg.simulation.q {
        return Ok(vec![StateSpec::Twist(twist_solution(n, q)?)]);
    }

    let mut states: Vec<StateSpec> = enumerate_symmetric(n)?
        .into_iter()
        .map(StateSpec::Twist)
        .collect();
    for variant in [AlternatingVariant::Aabb, AlternatingVariant::Abba] {
        if let Ok(sol) = alternating_solution(top, variant) {
            states.push(StateSpec::Alternating(sol));
        }
    }
    Ok(states)
}

/// The single state a simulation starts from (twist q = 0 when unspecified).
pub fn select_initial_state(
    cfg: &ExperimentConfig,
    top: &CouplingTopology,
) -> Result<StateSpec> {
    if let Some(v) = &cfg.simulation.alternating {
        let variant = parse_variant(v).expect("validated variant");
        return Ok(StateSpec::Alternating(alternating_solution(top, variant)?));
    }
    let q = cfg.simulation.q.unwrap_or(0);
    Ok(StateSpec::Twist(twist_solution(top.n_osc(), q)?))
}
