//! Published reference values for the delay-coupled Morris–Lecar network
//! study: interaction-function Fourier coefficients and phase-model
//! stability intervals. The validation suite and the `reproduce-table`
//! command compare freshly computed results against these constants.

use crate::fourier::FourierSeries;

/// Constant term a_0 of the reference interaction function.
pub const INTERACTION_A0: f64 = -2.0214064;

/// Cosine coefficients a_1..a_9 of the reference interaction function.
pub const INTERACTION_A: [f64; 9] = [
    1.994447,
    0.010604496,
    -0.051657807,
    -0.029127343,
    -0.01054942,
    -0.002131111,
    9.9814584e-05,
    0.00015646126,
    -8.1846403e-05,
];

/// Sine coefficients b_1..b_9 of the reference interaction function.
pub const INTERACTION_B: [f64; 9] = [
    -0.93897837,
    0.27575842,
    0.042355601,
    0.01801952,
    0.010251001,
    0.0046384884,
    0.0013808256,
    7.391713e-05,
    -0.00024995379,
];

/// Reference period of the uncoupled dimensionless Morris–Lecar cycle.
pub const REFERENCE_PERIOD: f64 = 23.87;

/// Reference frequency Ω = 2π/T of the uncoupled cycle.
pub const REFERENCE_OMEGA: f64 = 0.2632;

/// The reference interaction function as a 9-term Fourier series.
pub fn reference_interaction() -> FourierSeries {
    FourierSeries::new(
        INTERACTION_A0,
        INTERACTION_A.to_vec(),
        INTERACTION_B.to_vec(),
    )
    .expect("reference coefficients are valid")
}

/// A published stability row for a circulant network whose ψ classes have
/// distinct spectra: τ-intervals where the phase model predicts the state
/// asymptotically stable. Empty `intervals` means "all unstable".
#[derive(Debug, Clone, Copy)]
pub struct ReferenceCase {
    pub n_osc: u32,
    pub clusters: u32,
    /// Representative q with ψ = 2πq/N; the class {q, N−q} shares the row.
    pub q: u32,
    pub intervals: &'static [(f64, f64)],
}

/// A published stability row for the globally homogeneous coupling, where
/// every ψ class of an n-cluster state shares one spectrum.
#[derive(Debug, Clone, Copy)]
pub struct HomogeneousCase {
    pub n_osc: u32,
    pub clusters: u32,
    pub intervals: &'static [(f64, f64)],
}

/// Synchronized (1-cluster) stability intervals, identical for every N and
/// every coupling considered here.
pub const SYNC_INTERVALS: &[(f64, f64)] = &[(0.0, 1.53), (14.28, 23.87)];

/// Reference intervals for the bidirectional distance-weighted coupling
/// W = circ(0, 1, 1/2, 1/3, ..., 1/2, 1), networks of 4 to 9 oscillators.
pub static DISTANCE_WEIGHTED_INTERVALS: &[ReferenceCase] = &[
    ReferenceCase { n_osc: 4, clusters: 1, q: 0, intervals: SYNC_INTERVALS },
    ReferenceCase { n_osc: 4, clusters: 2, q: 2, intervals: &[(2.47, 10.46)] },
    ReferenceCase { n_osc: 4, clusters: 4, q: 1, intervals: &[(0.57, 3.22), (8.69, 14.69)] },
    ReferenceCase { n_osc: 5, clusters: 1, q: 0, intervals: SYNC_INTERVALS },
    ReferenceCase { n_osc: 5, clusters: 5, q: 1, intervals: &[(1.26, 2.48), (10.84, 13.46)] },
    ReferenceCase { n_osc: 5, clusters: 5, q: 2, intervals: &[(1.66, 3.66), (4.26, 13.09)] },
    ReferenceCase { n_osc: 6, clusters: 1, q: 0, intervals: SYNC_INTERVALS },
    ReferenceCase { n_osc: 6, clusters: 2, q: 3, intervals: &[(2.64, 9.45)] },
    ReferenceCase { n_osc: 6, clusters: 3, q: 2, intervals: &[(0.41, 13.31)] },
    ReferenceCase { n_osc: 6, clusters: 6, q: 1, intervals: &[(0.58, 0.87), (12.32, 14.10)] },
    ReferenceCase { n_osc: 7, clusters: 1, q: 0, intervals: SYNC_INTERVALS },
    ReferenceCase { n_osc: 7, clusters: 7, q: 1, intervals: &[(12.82, 13.86)] },
    ReferenceCase { n_osc: 7, clusters: 7, q: 2, intervals: &[(2.33, 4.37), (7.59, 13.83)] },
    ReferenceCase {
        n_osc: 7,
        clusters: 7,
        q: 3,
        intervals: &[(2.51, 3.45), (4.04, 4.93), (5.48, 5.96), (7.47, 13.13)],
    },
    ReferenceCase { n_osc: 8, clusters: 1, q: 0, intervals: SYNC_INTERVALS },
    ReferenceCase { n_osc: 8, clusters: 2, q: 4, intervals: &[(2.63, 9.53)] },
    ReferenceCase { n_osc: 8, clusters: 4, q: 2, intervals: &[(1.71, 3.22), (8.69, 14.57)] },
    ReferenceCase { n_osc: 8, clusters: 8, q: 1, intervals: &[(13.34, 13.95)] },
    ReferenceCase { n_osc: 8, clusters: 8, q: 3, intervals: &[(3.96, 13.13)] },
    ReferenceCase { n_osc: 9, clusters: 1, q: 0, intervals: SYNC_INTERVALS },
    ReferenceCase { n_osc: 9, clusters: 3, q: 3, intervals: &[(0.41, 5.04), (8.08, 12.93)] },
    ReferenceCase { n_osc: 9, clusters: 9, q: 1, intervals: &[(13.46, 14.01)] },
    ReferenceCase { n_osc: 9, clusters: 9, q: 2, intervals: &[(2.50, 2.57), (9.81, 13.94)] },
    ReferenceCase { n_osc: 9, clusters: 9, q: 4, intervals: &[(2.90, 3.77), (8.08, 11.38)] },
];

/// Reference intervals for global homogeneous coupling W = circ(0, 1, ..., 1),
/// networks of 2 to 9 oscillators.
pub static HOMOGENEOUS_INTERVALS: &[HomogeneousCase] = &[
    HomogeneousCase { n_osc: 2, clusters: 1, intervals: SYNC_INTERVALS },
    HomogeneousCase { n_osc: 2, clusters: 2, intervals: &[(2.35, 13.46)] },
    HomogeneousCase { n_osc: 3, clusters: 1, intervals: SYNC_INTERVALS },
    HomogeneousCase { n_osc: 3, clusters: 3, intervals: &[(0.41, 13.74)] },
    HomogeneousCase { n_osc: 4, clusters: 1, intervals: SYNC_INTERVALS },
    HomogeneousCase { n_osc: 4, clusters: 2, intervals: &[(2.73, 9.19)] },
    HomogeneousCase { n_osc: 4, clusters: 4, intervals: &[(1.93, 3.22), (8.69, 14.47)] },
    HomogeneousCase { n_osc: 5, clusters: 1, intervals: SYNC_INTERVALS },
    HomogeneousCase { n_osc: 5, clusters: 5, intervals: &[(1.57, 2.69), (9.76, 13.20)] },
    HomogeneousCase { n_osc: 6, clusters: 1, intervals: SYNC_INTERVALS },
    HomogeneousCase { n_osc: 6, clusters: 2, intervals: &[(2.73, 9.19)] },
    HomogeneousCase { n_osc: 6, clusters: 3, intervals: &[(0.41, 4.83), (8.29, 12.79)] },
    HomogeneousCase { n_osc: 6, clusters: 6, intervals: &[(12.26, 13.86)] },
    HomogeneousCase { n_osc: 7, clusters: 1, intervals: SYNC_INTERVALS },
    HomogeneousCase { n_osc: 7, clusters: 7, intervals: &[(12.47, 13.54)] },
    HomogeneousCase { n_osc: 8, clusters: 1, intervals: SYNC_INTERVALS },
    HomogeneousCase { n_osc: 8, clusters: 2, intervals: &[(2.73, 9.19)] },
    HomogeneousCase {
        n_osc: 8,
        clusters: 4,
        intervals: &[(1.94, 3.22), (8.69, 9.35), (12.37, 14.47)],
    },
    HomogeneousCase { n_osc: 8, clusters: 8, intervals: &[] },
    HomogeneousCase { n_osc: 9, clusters: 1, intervals: SYNC_INTERVALS },
    HomogeneousCase { n_osc: 9, clusters: 3, intervals: &[(0.41, 4.83), (8.29, 12.79)] },
    HomogeneousCase { n_osc: 9, clusters: 9, intervals: &[(13.30, 13.65)] },
];

/// Reference intervals for the 140-oscillator network, distance-weighted
/// coupling, cluster counts 1, 2, 5, 7, 10.
pub static N140_DISTANCE_WEIGHTED: &[ReferenceCase] = &[
    ReferenceCase { n_osc: 140, clusters: 1, q: 0, intervals: &[(0.0, 1.52), (14.28, 23.87)] },
    ReferenceCase { n_osc: 140, clusters: 2, q: 70, intervals: &[(2.73, 9.19)] },
    ReferenceCase { n_osc: 140, clusters: 5, q: 28, intervals: &[(1.52, 2.61), (10.78, 12.55)] },
    ReferenceCase {
        n_osc: 140,
        clusters: 5,
        q: 56,
        intervals: &[(1.61, 2.81), (6.21, 7.77), (10.03, 12.55)],
    },
    ReferenceCase { n_osc: 140, clusters: 7, q: 20, intervals: &[(12.77, 13.29)] },
    ReferenceCase { n_osc: 140, clusters: 7, q: 40, intervals: &[(8.13, 9.81), (11.12, 13.28)] },
    ReferenceCase { n_osc: 140, clusters: 7, q: 60, intervals: &[(8.45, 9.88), (11.11, 13.13)] },
    ReferenceCase { n_osc: 140, clusters: 10, q: 14, intervals: &[] },
    ReferenceCase { n_osc: 140, clusters: 10, q: 42, intervals: &[(7.85, 7.86), (11.80, 12.62)] },
];

/// Reference intervals for the 140-oscillator network, global homogeneous
/// coupling, cluster counts 1, 2, 5, 7, 10.
pub static N140_HOMOGENEOUS: &[HomogeneousCase] = &[
    HomogeneousCase { n_osc: 140, clusters: 1, intervals: &[(0.0, 1.52), (14.28, 23.87)] },
    HomogeneousCase { n_osc: 140, clusters: 2, intervals: &[(2.73, 9.19)] },
    HomogeneousCase { n_osc: 140, clusters: 5, intervals: &[(1.57, 2.69), (10.03, 12.54)] },
    HomogeneousCase { n_osc: 140, clusters: 7, intervals: &[(12.47, 13.28)] },
    HomogeneousCase { n_osc: 140, clusters: 10, intervals: &[] },
];

/// Cluster counts the phase model predicts stable at integer delays
/// τ = 1..15 for the 6-oscillator distance-weighted network.
pub static N6_TAU_STABLE_CLUSTERS: &[(u32, &[u32])] = &[
    (1, &[1, 3]),
    (2, &[3]),
    (3, &[2, 3]),
    (4, &[2, 3]),
    (5, &[2, 3]),
    (6, &[2, 3]),
    (7, &[2, 3]),
    (8, &[2, 3]),
    (9, &[2, 3]),
    (10, &[3]),
    (11, &[3]),
    (12, &[3]),
    (13, &[3, 6]),
    (14, &[6]),
    (15, &[1]),
];

/// Delays at which the reported ε = 0.001 simulations (original, perturbed
/// weights, perturbed delays) all reach the same cluster verdict in the
/// 6-oscillator distance-weighted network, with that agreed cluster count.
pub static N6_EPS001_AGREED_VERDICTS: &[(u32, u32)] = &[(5, 3), (13, 6), (15, 1)];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_series_has_order_nine() {
        let s = reference_interaction();
        assert_eq!(s.order(), 9);
        assert_eq!(s.a0(), INTERACTION_A0);
    }

    #[test]
    fn interval_tables_are_sorted_and_disjoint() {
        let all: Vec<&[(f64, f64)]> = DISTANCE_WEIGHTED_INTERVALS
            .iter()
            .map(|c| c.intervals)
            .chain(HOMOGENEOUS_INTERVALS.iter().map(|c| c.intervals))
            .chain(N140_DISTANCE_WEIGHTED.iter().map(|c| c.intervals))
            .chain(N140_HOMOGENEOUS.iter().map(|c| c.intervals))
            .collect();
        for intervals in all {
            for window in intervals.windows(2) {
                assert!(window[0].1 < window[1].0);
            }
            for &(lo, hi) in intervals {
                assert!(lo < hi && lo >= 0.0 && hi <= REFERENCE_PERIOD + 1e-9);
            }
        }
    }

    #[test]
    fn stable_cluster_lists_match_interval_table() {
        // The τ-by-τ stability lists must agree with the interval rows for
        // the same network; checks internal consistency of the constants.
        let cases: Vec<&ReferenceCase> = DISTANCE_WEIGHTED_INTERVALS
            .iter()
            .filter(|c| c.n_osc == 6)
            .collect();
        for &(tau, stable) in N6_TAU_STABLE_CLUSTERS {
            let t = tau as f64;
            for case in &cases {
                let inside = case.intervals.iter().any(|&(lo, hi)| t > lo && t < hi);
                let listed = stable.contains(&case.clusters);
                assert_eq!(
                    inside, listed,
                    "tau={tau} clusters={} inside={inside}",
                    case.clusters
                );
            }
        }
    }
}
