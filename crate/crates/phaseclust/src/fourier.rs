//! Truncated Fourier representation of the 2π-periodic interaction function.
//!
//! The interaction function H and its derivative H′ enter every stability
//! formula only through point evaluations at phase arguments, so this module
//! keeps those evaluations cheap, exact to truncation order, and
//! serializable as `{"a0": ..., "a": [...], "b": [...]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance (radians) when validating that fit samples lie on a
/// uniform grid spanning one period.
const GRID_SPACING_TOL: f64 = 1e-9;

/// Truncated Fourier series h(θ) = a0 + Σ_{k=1}^{K} (a_k cos kθ + b_k sin kθ).
///
/// Invariants: `a` and `b` have identical length K ≥ 1 and all coefficients
/// are finite. Evaluation is exactly 2π-periodic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFourierSeries")]
pub struct FourierSeries {
    a0: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

/// Wire format for deserialization; validated into [`FourierSeries`].
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFourierSeries {
    a0: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TryFrom<RawFourierSeries> for FourierSeries {
    type Error = Error;

    fn try_from(raw: RawFourierSeries) -> Result<Self> {
        FourierSeries::new(raw.a0, raw.a, raw.b)
    }
}

impl FourierSeries {
    /// Build a series from its constant term and harmonic coefficients.
    pub fn new(a0: f64, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::MismatchedCoefficients {
                a_len: a.len(),
                b_len: b.len(),
            });
        }
        if a.is_empty() {
            return Err(Error::InvalidParameter(
                "truncation order must be at least 1".into(),
            ));
        }
        if !a0.is_finite() || a.iter().chain(&b).any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "Fourier coefficients must be finite".into(),
            ));
        }
        Ok(Self { a0, a, b })
    }

    /// Truncation order K.
    pub fn order(&self) -> usize {
        self.a.len()
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// Cosine coefficients a_1..a_K.
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// Sine coefficients b_1..b_K.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// h(θ) = a0 + Σ_k (a_k cos kθ + b_k sin kθ).
    pub fn eval(&self, theta: f64) -> f64 {
        let mut acc = self.a0;
        for (i, (&ak, &bk)) in self.a.iter().zip(&self.b).enumerate() {
            let k = (i + 1) as f64;
            let (s, c) = (k * theta).sin_cos();
            acc += ak * c + bk * s;
        }
        acc
    }

    /// h′(θ) = Σ_k k (−a_k sin kθ + b_k cos kθ).
    pub fn eval_derivative(&self, theta: f64) -> f64 {
        let mut acc = 0.0;
        for (i, (&ak, &bk)) in self.a.iter().zip(&self.b).enumerate() {
            let k = (i + 1) as f64;
            let (s, c) = (k * theta).sin_cos();
            acc += k * (bk * c - ak * s);
        }
        acc
    }

    /// Tabulate (θ, h(θ), h′(θ)) on `count` uniform points over [0, 2π);
    /// used for CSV export.
    pub fn sample_table(&self, count: usize) -> Vec<(f64, f64, f64)> {
        (0..count)
            .map(|j| {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / count as f64;
                (theta, self.eval(theta), self.eval_derivative(theta))
            })
            .collect()
    }

    /// Fit a series of order K to samples (θ_i, h_i) on a uniform grid over
    /// one period by discrete trigonometric projection.
    ///
    /// Discrete orthogonality makes the projection an exact DFT-style
    /// recovery whenever the sampled function is itself a series of order
    /// ≤ (count − 1)/2, so fit ∘ eval round trips to machine precision.
    /// Requires at least 2K+1 samples.
    pub fn fit(samples: &[(f64, f64)], order: usize) -> Result<FourierFit> {
        if order == 0 {
            return Err(Error::InvalidParameter(
                "truncation order must be at least 1".into(),
            ));
        }
        let m = samples.len();
        let need = 2 * order + 1;
        if m < need {
            return Err(Error::InsufficientSamples { have: m, need });
        }
        let spacing = 2.0 * std::f64::consts::PI / m as f64;
        for (i, &(theta, _)) in samples.iter().enumerate() {
            let expected = samples[0].0 + spacing * i as f64;
            if (theta - expected).abs() > GRID_SPACING_TOL {
                return Err(Error::NonUniformGrid {
                    detail: format!(
                        "sample {i} at theta = {theta} but uniform spacing implies {expected}"
                    ),
                });
            }
        }

        let inv_m = 1.0 / m as f64;
        let a0 = samples.iter().map(|&(_, h)| h).sum::<f64>() * inv_m;
        let mut a = vec![0.0; order];
        let mut b = vec![0.0; order];
        for (k, (ak, bk)) in a.iter_mut().zip(&mut b).enumerate() {
            let kf = (k + 1) as f64;
            let mut ca = 0.0;
            let mut sa = 0.0;
            for &(theta, h) in samples {
                let (s, c) = (kf * theta).sin_cos();
                ca += h * c;
                sa += h * s;
            }
            *ak = 2.0 * ca * inv_m;
            *bk = 2.0 * sa * inv_m;
        }

        let series = FourierSeries::new(a0, a, b)?;
        let sq_sum: f64 = samples
            .iter()
            .map(|&(theta, h)| {
                let r = h - series.eval(theta);
                r * r
            })
            .sum();
        Ok(FourierFit {
            series,
            rms_residual: (sq_sum * inv_m).sqrt(),
        })
    }
}

/// Result of [`FourierSeries::fit`]: the fitted series plus the RMS residual
/// of the samples against it.
#[derive(Debug, Clone)]
pub struct FourierFit {
    pub series: FourierSeries,
    pub rms_residual: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn eval_constant_series() {
        let s = FourierSeries::new(1.0, vec![0.0], vec![0.0]).unwrap();
        for theta in [0.0, 0.3, -2.0, 11.0] {
            assert_eq!(s.eval(theta), 1.0);
        }
    }

    #[test]
    fn eval_pure_sine() {
        let s = FourierSeries::new(0.0, vec![0.0], vec![1.0]).unwrap();
        assert!((s.eval(PI / 2.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eval_reference_series_at_zero_is_coefficient_sum() {
        let s = reference::reference_interaction();
        let expected = s.a0() + s.a().iter().sum::<f64>();
        assert!((s.eval(0.0) - expected).abs() < 1e-12);
    }

    #[test]
    fn derivative_trivial_cases() {
        let cos1 = FourierSeries::new(0.0, vec![1.0], vec![0.0]).unwrap();
        assert_eq!(cos1.eval_derivative(0.0), 0.0);
        let sin1 = FourierSeries::new(0.0, vec![0.0], vec![1.0]).unwrap();
        assert!((sin1.eval_derivative(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_differences_on_reference_series() {
        let s = reference::reference_interaction();
        let step = 1e-5;
        let mut worst: f64 = 0.0;
        for j in 0..257 {
            let theta = 2.0 * PI * j as f64 / 257.0;
            let fd = (s.eval(theta + step) - s.eval(theta - step)) / (2.0 * step);
            worst = worst.max((fd - s.eval_derivative(theta)).abs());
        }
        assert!(worst < 1e-6, "max deviation {worst:.3e}");
    }

    #[test]
    fn periodicity_to_machine_precision() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let reference = reference::reference_interaction();
        let random = FourierSeries::new(
            rng.gen_range(-1.0..1.0),
            (0..9).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            (0..9).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        )
        .unwrap();
        for s in [&reference, &random] {
            for _ in 0..100 {
                let theta = rng.gen_range(0.0..2.0 * PI);
                assert!((s.eval(theta) - s.eval(theta + 2.0 * PI)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fit_recovers_pure_cosine() {
        let samples: Vec<(f64, f64)> = (0..64)
            .map(|j| {
                let theta = 2.0 * PI * j as f64 / 64.0;
                (theta, theta.cos())
            })
            .collect();
        let fit = FourierSeries::fit(&samples, 3).unwrap();
        let s = fit.series;
        assert!((s.a()[0] - 1.0).abs() < 1e-12);
        assert!(s.a0().abs() < 1e-12);
        for k in 1..3 {
            assert!(s.a()[k].abs() < 1e-12);
        }
        for k in 0..3 {
            assert!(s.b()[k].abs() < 1e-12);
        }
        assert!(fit.rms_residual < 1e-12);
    }

    #[test]
    fn fit_recovers_shifted_second_harmonic() {
        let samples: Vec<(f64, f64)> = (0..32)
            .map(|j| {
                let theta = 2.0 * PI * j as f64 / 32.0;
                (theta, (2.0 * theta).sin() + 0.5)
            })
            .collect();
        let s = FourierSeries::fit(&samples, 2).unwrap().series;
        assert!((s.a0() - 0.5).abs() < 1e-12);
        assert!((s.b()[1] - 1.0).abs() < 1e-12);
        assert!(s.a()[0].abs() < 1e-12 && s.a()[1].abs() < 1e-12 && s.b()[0].abs() < 1e-12);
    }

    #[test]
    fn fit_round_trips_reference_series() {
        let s = reference::reference_interaction();
        let samples: Vec<(f64, f64)> = (0..256)
            .map(|j| {
                let theta = 2.0 * PI * j as f64 / 256.0;
                (theta, s.eval(theta))
            })
            .collect();
        let fitted = FourierSeries::fit(&samples, 9).unwrap().series;
        assert!((fitted.a0() - s.a0()).abs() < 1e-10);
        for k in 0..9 {
            assert!((fitted.a()[k] - s.a()[k]).abs() < 1e-10);
            assert!((fitted.b()[k] - s.b()[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn fit_round_trips_random_series_up_to_order_16() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let order = rng.gen_range(1..=16);
            let original = FourierSeries::new(
                rng.gen_range(-2.0..2.0),
                (0..order).map(|_| rng.gen_range(-2.0..2.0)).collect(),
                (0..order).map(|_| rng.gen_range(-2.0..2.0)).collect(),
            )
            .unwrap();
            let count = [2 * order + 1, 64.max(2 * order + 1)][rng.gen_range(0..2)];
            let samples: Vec<(f64, f64)> = (0..count)
                .map(|j| {
                    let theta = 2.0 * PI * j as f64 / count as f64;
                    (theta, original.eval(theta))
                })
                .collect();
            let fitted = FourierSeries::fit(&samples, order).unwrap().series;
            assert!((fitted.a0() - original.a0()).abs() < 1e-10);
            for k in 0..order {
                assert!((fitted.a()[k] - original.a()[k]).abs() < 1e-10);
                assert!((fitted.b()[k] - original.b()[k]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn fit_rejects_bad_inputs() {
        let uniform: Vec<(f64, f64)> = (0..8)
            .map(|j| (2.0 * PI * j as f64 / 8.0, 0.0))
            .collect();
        assert!(matches!(
            FourierSeries::fit(&uniform, 4),
            Err(Error::InsufficientSamples { have: 8, need: 9 })
        ));
        let mut skewed = uniform.clone();
        skewed[3].0 += 1e-3;
        assert!(matches!(
            FourierSeries::fit(&skewed, 2),
            Err(Error::NonUniformGrid { .. })
        ));
        assert!(FourierSeries::new(0.0, vec![1.0], vec![]).is_err());
        assert!(FourierSeries::new(0.0, vec![], vec![]).is_err());
    }

    #[test]
    fn json_round_trip_and_schema() {
        let s = reference::reference_interaction();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.starts_with("{\"a0\":"));
        let back: FourierSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let bad = "{\"a0\":0.0,\"a\":[1.0],\"b\":[1.0],\"c\":[]}";
        assert!(serde_json::from_str::<FourierSeries>(bad).is_err());
        let mismatched = "{\"a0\":0.0,\"a\":[1.0],\"b\":[]}";
        assert!(serde_json::from_str::<FourierSeries>(mismatched).is_err());
    }
}
