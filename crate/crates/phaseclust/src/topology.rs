//! Coupling topologies: circulant weight patterns on a ring of oscillators,
//! with an escape hatch for arbitrary dense weight matrices.
//!
//! Weights are oriented source→target: `weight(i, j)` multiplies the signal
//! oscillator j sends to oscillator i. Circulant topologies depend only on
//! the forward distance (j − i) mod N, which is what makes the cluster-state
//! spectra computable in closed form.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Weights {
    /// Entry k is the weight at forward distance k; entry 0 is always 0.
    Circulant(Vec<f64>),
    Dense(DMatrix<f64>),
}

/// Who couples to whom, and how strongly.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTopology {
    n: usize,
    weights: Weights,
}

impl CouplingTopology {
    /// Distance-weighted ring: w_k = 1 / min(k, N−k).
    pub fn distance_weighted(n: usize) -> Result<Self> {
        Self::check_size(n)?;
        let w = (1..n).map(|k| 1.0 / k.min(n - k) as f64).collect::<Vec<_>>();
        Self::from_circulant(n, &w)
    }

    /// Homogeneous all-to-all coupling: w_k = 1 for every k ≥ 1.
    pub fn global(n: usize) -> Result<Self> {
        Self::check_size(n)?;
        Self::from_circulant(n, &vec![1.0; n - 1])
    }

    /// Circulant topology from the weights at forward distances 1..N−1.
    pub fn from_circulant(n: usize, weights: &[f64]) -> Result<Self> {
        Self::check_size(n)?;
        if weights.len() != n - 1 {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                got: weights.len(),
            });
        }
        if !weights.iter().all(|w| w.is_finite()) {
            return Err(Error::InvalidParameter(
                "circulant weights must be finite".into(),
            ));
        }
        let mut stored = Vec::with_capacity(n);
        stored.push(0.0);
        stored.extend_from_slice(weights);
        Ok(Self {
            n,
            weights: Weights::Circulant(stored),
        })
    }

    /// Arbitrary dense weight matrix; entry (i, j) couples source j to
    /// target i. The diagonal must be exactly zero.
    pub fn from_dense(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: matrix.ncols(),
            });
        }
        Self::check_size(n)?;
        if !matrix.iter().all(|w| w.is_finite()) {
            return Err(Error::InvalidParameter(
                "dense weights must be finite".into(),
            ));
        }
        for i in 0..n {
            if matrix[(i, i)] != 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "dense weight matrix must have a zero diagonal (entry ({i}, {i}) = {})",
                    matrix[(i, i)]
                )));
            }
        }
        Ok(Self {
            n,
            weights: Weights::Dense(matrix),
        })
    }

    fn check_size(n: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::InvalidNetworkSize(n));
        }
        Ok(())
    }

    pub fn n_osc(&self) -> usize {
        self.n
    }

    pub fn is_circulant(&self) -> bool {
        matches!(self.weights, Weights::Circulant(_))
    }

    /// Circulant weight list indexed by forward distance 0..N−1 (entry 0 is
    /// zero), or None for a dense topology.
    pub fn circulant_weights(&self) -> Option<&[f64]> {
        match &self.weights {
            Weights::Circulant(w) => Some(w),
            Weights::Dense(_) => None,
        }
    }

    /// Weight of source j onto target i.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.n && j < self.n);
        match &self.weights {
            Weights::Circulant(w) => w[(j + self.n - i) % self.n],
            Weights::Dense(m) => m[(i, j)],
        }
    }

    /// Materialize the full N×N weight matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        match &self.weights {
            Weights::Circulant(_) => {
                DMatrix::from_fn(self.n, self.n, |i, j| self.weight(i, j))
            }
            Weights::Dense(m) => m.clone(),
        }
    }

    /// Total inbound weight Σ_j w(i, j) for oscillator i.
    pub fn in_strength(&self, i: usize) -> f64 {
        (0..self.n).map(|j| self.weight(i, j)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_weighted_matches_hand_values() {
        let t = CouplingTopology::distance_weighted(8).unwrap();
        let w = t.circulant_weights().unwrap();
        let expected = [
            0.0,
            1.0,
            0.5,
            1.0 / 3.0,
            0.25,
            1.0 / 3.0,
            0.5,
            1.0,
        ];
        for (k, (&got, &want)) in w.iter().zip(&expected).enumerate() {
            assert!((got - want).abs() < 1e-15, "distance {k}: {got} vs {want}");
        }
    }

    #[test]
    fn circulant_weight_lookup_wraps_symmetrically() {
        let t = CouplingTopology::distance_weighted(6).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(t.weight(i, j), t.weight(j, i), "symmetry at ({i}, {j})");
                if i != j {
                    let d = (j as i64 - i as i64).rem_euclid(6) as usize;
                    let d_sym = d.min(6 - d);
                    assert!((t.weight(i, j) - 1.0 / d_sym as f64).abs() < 1e-15);
                } else {
                    assert_eq!(t.weight(i, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn global_coupling_is_all_ones_off_diagonal() {
        let t = CouplingTopology::global(5).unwrap();
        let m = t.matrix();
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == j { 0.0 } else { 1.0 };
                assert_eq!(m[(i, j)], want);
            }
        }
        assert_eq!(t.in_strength(2), 4.0);
    }

    #[test]
    fn dense_round_trip_preserves_entries() {
        let m = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 2.0, 3.0, 0.0, 4.0, 5.0, 6.0, 0.0]);
        let t = CouplingTopology::from_dense(m.clone()).unwrap();
        assert!(!t.is_circulant());
        assert!(t.circulant_weights().is_none());
        assert_eq!(t.weight(1, 2), 4.0);
        assert_eq!(t.weight(2, 0), 5.0);
        assert_eq!(t.matrix(), m);
    }

    #[test]
    fn invalid_topologies_are_rejected() {
        assert!(matches!(
            CouplingTopology::distance_weighted(1),
            Err(Error::InvalidNetworkSize(1))
        ));
        assert!(matches!(
            CouplingTopology::from_circulant(4, &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            CouplingTopology::from_circulant(4, &[1.0, f64::NAN, 1.0]),
            Err(Error::InvalidParameter(_))
        ));
        let bad_diag = DMatrix::from_row_slice(2, 2, &[0.5, 1.0, 1.0, 0.0]);
        assert!(matches!(
            CouplingTopology::from_dense(bad_diag),
            Err(Error::InvalidParameter(_))
        ));
        let rect = DMatrix::from_row_slice(2, 3, &[0.0; 6]);
        assert!(matches!(
            CouplingTopology::from_dense(rect),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
