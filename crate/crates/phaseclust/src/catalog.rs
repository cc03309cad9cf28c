//! Enumeration of symmetric cluster states on a ring of N oscillators.
//!
//! A twist state assigns oscillator j (1-based) the phase offset
//! θ_j = (j−1)·ψ with ψ = 2πq/N; it is a relative fixed point of the phase
//! dynamics for every circulant topology and uniform delay. Oscillators
//! sharing a phase form clusters: with g = gcd(q, N) there are n = N/g
//! clusters, and cluster C_r = {r, r+n, r+2n, …} (labels and oscillator ids
//! are 1-based throughout, matching the usual presentation; array positions
//! are 0-based).
//!
//! Separately, for N divisible by four and balanced odd-distance weights, an
//! alternating two-cluster state exists whose blocks of two oscillators are
//! π apart; it is not a twist state and gets its own certificate and type.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::topology::CouplingTopology;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// An angle 2πq/N stored exactly as the pair (q, N).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RationalAngle {
    q: usize,
    n_osc: usize,
}

impl RationalAngle {
    pub fn new(q: usize, n_osc: usize) -> Result<Self> {
        if n_osc < 2 {
            return Err(Error::InvalidNetworkSize(n_osc));
        }
        if q >= n_osc {
            return Err(Error::InvalidParameter(format!(
                "twist index q = {q} must lie in 0..{n_osc}"
            )));
        }
        Ok(Self { q, n_osc })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n_osc(&self) -> usize {
        self.n_osc
    }

    pub fn radians(&self) -> f64 {
        2.0 * PI * self.q as f64 / self.n_osc as f64
    }
}

/// One symmetric (twist) cluster state.
#[derive(Debug, Clone, Serialize)]
pub struct ClusterSolution {
    psi: RationalAngle,
    n_clusters: usize,
    clusters: Vec<Vec<usize>>,
    ordering: Vec<usize>,
}

impl ClusterSolution {
    pub fn n_osc(&self) -> usize {
        self.psi.n_osc()
    }

    pub fn q(&self) -> usize {
        self.psi.q()
    }

    pub fn psi(&self) -> RationalAngle {
        self.psi
    }

    pub fn n_clusters(&self) -> usize {
        self.n_clusters
    }

    /// Cluster memberships; `clusters()[r-1]` is C_r with 1-based ids.
    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    /// Cluster labels sorted by increasing phase offset, starting at C_1.
    pub fn ordering(&self) -> &[usize] {
        &self.ordering
    }

    /// Short display name like "3C".
    pub fn label(&self) -> String {
        format!("{}C", self.n_clusters)
    }

    /// Phase offset θ of every oscillator, in [0, 2π); index i holds
    /// oscillator i+1.
    pub fn phase_offsets(&self) -> Vec<f64> {
        let n = self.n_osc();
        let q = self.q();
        (0..n)
            .map(|i| 2.0 * PI * ((i * q) % n) as f64 / n as f64)
            .collect()
    }

    /// Fraction of a period after oscillator 1's event at which each
    /// oscillator's event occurs: an oscillator leading by phase θ fires
    /// (−θ/2π) mod 1 of a period later.
    pub fn firing_fractions(&self) -> Vec<f64> {
        let n = self.n_osc();
        let q = self.q();
        (0..n)
            .map(|i| ((n - (i * q) % n) % n) as f64 / n as f64)
            .collect()
    }
}

/// The twist state with offset ψ = 2πq/N.
pub fn twist_solution(n_osc: usize, q: usize) -> Result<ClusterSolution> {
    let psi = RationalAngle::new(q, n_osc)?;
    // gcd(0, N) = N, so the sync state q = 0 yields a single cluster.
    let n_clusters = n_osc / gcd(q, n_osc);

    let mut clusters = vec![Vec::new(); n_clusters];
    for osc in 1..=n_osc {
        clusters[(osc - 1) % n_clusters].push(osc);
    }
    let mut labels: Vec<usize> = (1..=n_clusters).collect();
    labels.sort_by_key(|r| ((r - 1) * q) % n_osc);
    Ok(ClusterSolution {
        psi,
        n_clusters,
        clusters,
        ordering: labels,
    })
}

/// All twist states of an N-ring, one per q in 0..N.
pub fn enumerate_symmetric(n_osc: usize) -> Result<Vec<ClusterSolution>> {
    (0..n_osc).map(|q| twist_solution(n_osc, q)).collect()
}

/// Which of the two alternating phase patterns a solution uses: blocks of
/// two in-phase oscillators arranged as (0, 0, π, π, …) or (0, π, π, 0, …).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlternatingVariant {
    Aabb,
    Abba,
}

/// Existence certificate for alternating states: the odd-distance weight
/// sums that must balance.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AlternatingCertificate {
    /// Σ w_k over distances k ≡ 1 (mod 4).
    pub odd_sum_1: f64,
    /// Σ w_k over distances k ≡ 3 (mod 4).
    pub odd_sum_3: f64,
    /// odd_sum_1 − odd_sum_3.
    pub imbalance: f64,
}

/// Check whether the topology admits alternating two-cluster states:
/// N must be divisible by 4 and the two odd-distance weight sums equal.
pub fn alternating_admissible(top: &CouplingTopology) -> Result<AlternatingCertificate> {
    let weights = top.circulant_weights().ok_or(Error::NotCirculant)?;
    let n = top.n_osc();
    if n % 4 != 0 {
        return Err(Error::AlternatingNotAdmissible(format!(
            "network size {n} is not divisible by 4"
        )));
    }
    let mut odd_sum_1 = 0.0;
    let mut odd_sum_3 = 0.0;
    let mut scale = 0.0f64;
    for (k, &w) in weights.iter().enumerate() {
        scale = scale.max(w.abs());
        match k % 4 {
            1 => odd_sum_1 += w,
            3 => odd_sum_3 += w,
            _ => {}
        }
    }
    let imbalance = odd_sum_1 - odd_sum_3;
    if imbalance.abs() > 1e-12 * scale.max(1.0) {
        return Err(Error::AlternatingNotAdmissible(format!(
            "odd-distance weight sums differ: {odd_sum_1} (k ≡ 1 mod 4) vs {odd_sum_3} (k ≡ 3 mod 4)"
        )));
    }
    Ok(AlternatingCertificate {
        odd_sum_1,
        odd_sum_3,
        imbalance,
    })
}

/// An alternating two-cluster state (blocks of two, π apart).
#[derive(Debug, Clone, Serialize)]
pub struct AlternatingSolution {
    n_osc: usize,
    variant: AlternatingVariant,
    certificate: AlternatingCertificate,
}

impl AlternatingSolution {
    pub fn n_osc(&self) -> usize {
        self.n_osc
    }

    pub fn variant(&self) -> AlternatingVariant {
        self.variant
    }

    pub fn certificate(&self) -> AlternatingCertificate {
        self.certificate
    }

    /// Phase offsets (0 or π); index i holds oscillator i+1.
    pub fn phase_offsets(&self) -> Vec<f64> {
        (0..self.n_osc)
            .map(|i| {
                let flipped = match self.variant {
                    AlternatingVariant::Aabb => matches!(i % 4, 2 | 3),
                    AlternatingVariant::Abba => matches!(i % 4, 1 | 2),
                };
                if flipped {
                    PI
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// The two clusters as 1-based oscillator ids (in-phase block first).
    pub fn clusters(&self) -> [Vec<usize>; 2] {
        let phases = self.phase_offsets();
        let mut zero = Vec::new();
        let mut pi = Vec::new();
        for (i, &p) in phases.iter().enumerate() {
            if p == 0.0 {
                zero.push(i + 1);
            } else {
                pi.push(i + 1);
            }
        }
        [zero, pi]
    }
}

/// Build an alternating state after verifying admissibility.
pub fn alternating_solution(
    top: &CouplingTopology,
    variant: AlternatingVariant,
) -> Result<AlternatingSolution> {
    let certificate = alternating_admissible(top)?;
    Ok(AlternatingSolution {
        n_osc: top.n_osc(),
        variant,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sync_state_is_one_cluster() {
        let sol = twist_solution(6, 0).unwrap();
        assert_eq!(sol.n_clusters(), 1);
        assert_eq!(sol.clusters()[0], vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(sol.ordering(), &[1]);
        assert!(sol.phase_offsets().iter().all(|&p| p == 0.0));
    }

    #[test]
    fn five_cluster_orderings_for_all_twists() {
        // n = 5 oscillators, all four non-trivial twists.
        let expect: [(usize, [usize; 5]); 4] = [
            (1, [1, 2, 3, 4, 5]),
            (2, [1, 4, 2, 5, 3]),
            (3, [1, 3, 5, 2, 4]),
            (4, [1, 5, 4, 3, 2]),
        ];
        for (q, want) in expect {
            let sol = twist_solution(5, q).unwrap();
            assert_eq!(sol.n_clusters(), 5);
            assert_eq!(sol.ordering(), &want, "ordering for q = {q}");
        }
    }

    #[test]
    fn seven_cluster_orderings_match_phase_offsets() {
        let sol = twist_solution(7, 3).unwrap();
        assert_eq!(sol.ordering(), &[1, 6, 4, 2, 7, 5, 3]);
        let sol = twist_solution(7, 4).unwrap();
        assert_eq!(sol.ordering(), &[1, 3, 5, 7, 2, 4, 6]);
    }

    #[test]
    fn partner_twists_reverse_the_ordering() {
        let a = twist_solution(9, 2).unwrap();
        let b = twist_solution(9, 7).unwrap();
        let mut reversed = a.ordering()[1..].to_vec();
        reversed.reverse();
        let expected: Vec<usize> = std::iter::once(1).chain(reversed).collect();
        assert_eq!(b.ordering(), &expected[..]);
    }

    #[test]
    fn large_ring_memberships_are_residue_classes() {
        let sol = twist_solution(140, 28).unwrap();
        assert_eq!(sol.n_clusters(), 5);
        let c1 = &sol.clusters()[0];
        assert_eq!(c1.len(), 28);
        assert_eq!(&c1[..4], &[1, 6, 11, 16]);
        assert_eq!(c1[27], 136);
        let c5 = &sol.clusters()[4];
        assert_eq!(c5[0], 5);
        assert_eq!(c5[27], 140);
    }

    #[test]
    fn firing_fractions_complement_phase_offsets() {
        let sol = twist_solution(5, 1).unwrap();
        let offsets = sol.phase_offsets();
        let fractions = sol.firing_fractions();
        assert_eq!(fractions[0], 0.0);
        for i in 1..5 {
            let sum = fractions[i] + offsets[i] / (2.0 * PI);
            assert!((sum - 1.0).abs() < 1e-14, "oscillator {}: {sum}", i + 1);
        }
    }

    #[test]
    fn enumerate_covers_every_twist_once() {
        let all = enumerate_symmetric(8).unwrap();
        assert_eq!(all.len(), 8);
        let qs: Vec<usize> = all.iter().map(|s| s.q()).collect();
        assert_eq!(qs, (0..8).collect::<Vec<_>>());
        // Cluster counts: q = 0 → 1, odd q → 8, q = 2, 6 → 4, q = 4 → 2.
        let counts: Vec<usize> = all.iter().map(|s| s.n_clusters()).collect();
        assert_eq!(counts, vec![1, 8, 4, 8, 2, 8, 4, 8]);
    }

    #[test]
    fn alternating_certificate_accepts_balanced_rings() {
        let top = CouplingTopology::distance_weighted(8).unwrap();
        let cert = alternating_admissible(&top).unwrap();
        assert!((cert.odd_sum_1 - 4.0 / 3.0).abs() < 1e-14);
        assert!((cert.odd_sum_3 - 4.0 / 3.0).abs() < 1e-14);
        assert!(cert.imbalance.abs() < 1e-14);

        let global = CouplingTopology::global(8).unwrap();
        assert!(alternating_admissible(&global).is_ok());
    }

    #[test]
    fn alternating_certificate_rejects_bad_rings() {
        let top = CouplingTopology::distance_weighted(6).unwrap();
        assert!(matches!(
            alternating_admissible(&top),
            Err(Error::AlternatingNotAdmissible(_))
        ));
        let lopsided = CouplingTopology::from_circulant(8, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
            .unwrap();
        assert!(matches!(
            alternating_admissible(&lopsided),
            Err(Error::AlternatingNotAdmissible(_))
        ));
    }

    #[test]
    fn alternating_phase_patterns() {
        let top = CouplingTopology::distance_weighted(8).unwrap();
        let a = alternating_solution(&top, AlternatingVariant::Aabb).unwrap();
        let phases = a.phase_offsets();
        let want = [0.0, 0.0, PI, PI, 0.0, 0.0, PI, PI];
        assert_eq!(&phases[..], &want[..]);
        let [zero, pi] = a.clusters();
        assert_eq!(zero, vec![1, 2, 5, 6]);
        assert_eq!(pi, vec![3, 4, 7, 8]);

        let b = alternating_solution(&top, AlternatingVariant::Abba).unwrap();
        let want_b = [0.0, PI, PI, 0.0, 0.0, PI, PI, 0.0];
        assert_eq!(&b.phase_offsets()[..], &want_b[..]);
    }
}
