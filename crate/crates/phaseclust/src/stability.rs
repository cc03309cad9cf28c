//! Linear stability of cluster states in the reduced phase model.
//!
//! Linearizing the phase dynamics θ̇_i = Ω + ε Σ_j W_ij H(θ_j − θ_i − η)
//! about a cluster state gives δ̇ = ε M δ. This module computes the spectrum
//! of M (the ε = +1 growth rates) three ways — a circulant closed form for
//! twist states, a cluster-level closed form for homogeneous coupling, and
//! dense assembly plus a Schur eigensolve for everything else — and sweeps
//! the delay to locate stability windows. Classification multiplies the
//! stored spectrum by the sign of ε, so one spectrum answers both coupling
//! signs.
//!
//! Every spectrum contains one structural zero (M annihilates the uniform
//! phase shift); it is identified as the eigenvalue of smallest magnitude
//! and excluded from classification.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::catalog::{AlternatingSolution, ClusterSolution};
use crate::error::{Error, Result};
use crate::fourier::FourierSeries;
use crate::topology::CouplingTopology;

/// Largest magnitude at which an eigenvalue still qualifies as the
/// structural zero.
pub const STRUCTURAL_TOL: f64 = 1e-8;

/// Default half-width of the marginal band around Re λ = 0.
pub const DEFAULT_MARGIN: f64 = 1e-9;

/// Sign of the coupling strength ε the classification should assume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsilonSign {
    Positive,
    Negative,
}

impl EpsilonSign {
    pub fn factor(&self) -> f64 {
        match self {
            EpsilonSign::Positive => 1.0,
            EpsilonSign::Negative => -1.0,
        }
    }
}

impl std::fmt::Display for EpsilonSign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EpsilonSign::Positive => write!(f, "positive"),
            EpsilonSign::Negative => write!(f, "negative"),
        }
    }
}

/// Verdict on a cluster state at one delay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Marginal,
    Unstable,
}

impl std::fmt::Display for Stability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Stability::Stable => write!(f, "stable"),
            Stability::Marginal => write!(f, "marginal"),
            Stability::Unstable => write!(f, "unstable"),
        }
    }
}

/// Growth-rate spectrum of a cluster state at ε = +1, with the structural
/// zero singled out.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    eigenvalues: Vec<Complex64>,
    structural_index: usize,
}

impl Spectrum {
    pub fn from_eigenvalues(eigenvalues: Vec<Complex64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::InvalidParameter(
                "spectrum needs at least one eigenvalue".into(),
            ));
        }
        let structural_index = eigenvalues
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.norm().total_cmp(&b.norm()))
            .map(|(i, _)| i)
            .unwrap();
        Ok(Self {
            eigenvalues,
            structural_index,
        })
    }

    /// All eigenvalues, structural zero included.
    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn structural_index(&self) -> usize {
        self.structural_index
    }

    /// The eigenvalue designated as the structural zero.
    pub fn structural_zero(&self) -> Complex64 {
        self.eigenvalues[self.structural_index]
    }

    /// Its magnitude, when it is too large to pass for zero. A Some here
    /// means the state is not actually a fixed point (or the assembly is
    /// inconsistent) and verdicts should not be trusted.
    pub fn structural_anomaly(&self) -> Option<f64> {
        let abs = self.structural_zero().norm();
        if abs < STRUCTURAL_TOL {
            None
        } else {
            Some(abs)
        }
    }

    /// Eigenvalues with the structural zero removed.
    pub fn nonstructural(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(move |(i, _)| *i != self.structural_index)
            .map(|(_, l)| *l)
    }

    /// Largest real part among non-structural eigenvalues after applying
    /// the coupling sign: the leading growth rate.
    pub fn max_re(&self, sign: EpsilonSign) -> f64 {
        self.nonstructural()
            .map(|l| sign.factor() * l.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Stable iff every non-structural growth rate is below −margin;
    /// unstable if any exceeds +margin; marginal otherwise.
    pub fn classify(&self, sign: EpsilonSign, margin: f64) -> Stability {
        let mut marginal = false;
        for l in self.nonstructural() {
            let re = sign.factor() * l.re;
            if re > margin {
                return Stability::Unstable;
            }
            if re >= -margin {
                marginal = true;
            }
        }
        if marginal {
            Stability::Marginal
        } else {
            Stability::Stable
        }
    }
}

/// Phase velocity deviations Σ_j W_ij H(θ_j − θ_i − η) at ε = +1 (the
/// common rotation Ω is omitted). A cluster state is a relative fixed point
/// exactly when all entries are equal.
pub fn phase_velocity(
    top: &CouplingTopology,
    h: &FourierSeries,
    phases: &[f64],
    eta: f64,
) -> Result<Vec<f64>> {
    let n = top.n_osc();
    if phases.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: phases.len(),
        });
    }
    let mut out = vec![0.0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for j in 0..n {
            if j != i {
                acc += top.weight(i, j) * h.eval(phases[j] - phases[i] - eta);
            }
        }
        *o = acc;
    }
    Ok(out)
}

/// Spread (max − min) of the phase velocities: zero for a relative fixed
/// point, independent of the common rotation.
pub fn fixed_point_residual(
    top: &CouplingTopology,
    h: &FourierSeries,
    phases: &[f64],
    eta: f64,
) -> Result<f64> {
    let v = phase_velocity(top, h, phases, eta)?;
    let max = v.iter().fold(f64::NEG_INFINITY, |m, x| m.max(*x));
    let min = v.iter().fold(f64::INFINITY, |m, x| m.min(*x));
    Ok(max - min)
}

/// Jacobian M of the phase dynamics at an arbitrary phase pattern (ε = +1):
/// M_ij = W_ij H′(θ_j − θ_i − η) off the diagonal, rows summing to zero.
pub fn state_jacobian(
    top: &CouplingTopology,
    h: &FourierSeries,
    phases: &[f64],
    eta: f64,
) -> Result<DMatrix<f64>> {
    let n = top.n_osc();
    if phases.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: phases.len(),
        });
    }
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if j == i {
                continue;
            }
            let entry = top.weight(i, j) * h.eval_derivative(phases[j] - phases[i] - eta);
            m[(i, j)] = entry;
            diag -= entry;
        }
        m[(i, i)] = diag;
    }
    Ok(m)
}

/// Spectrum of an arbitrary phase pattern through dense assembly and a
/// Schur eigensolve. Works for any topology; O(N³).
pub fn dense_spectrum(
    top: &CouplingTopology,
    h: &FourierSeries,
    phases: &[f64],
    eta: f64,
) -> Result<Spectrum> {
    let m = state_jacobian(top, h, phases, eta)?;
    let eigs = m.complex_eigenvalues();
    Spectrum::from_eigenvalues(eigs.iter().copied().collect())
}

/// Closed-form spectrum of a twist state on a circulant topology:
/// λ_j = −Σ_k w_k H′(kψ − η)(1 − e^{2πi jk/N}). O(N²), no eigensolve.
pub fn twist_spectrum(
    top: &CouplingTopology,
    h: &FourierSeries,
    sol: &ClusterSolution,
    eta: f64,
) -> Result<Spectrum> {
    let weights = top.circulant_weights().ok_or(Error::NotCirculant)?;
    let n = top.n_osc();
    if sol.n_osc() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: sol.n_osc(),
        });
    }
    let psi = sol.psi().radians();
    let d: Vec<f64> = (0..n)
        .map(|k| weights[k] * h.eval_derivative(k as f64 * psi - eta))
        .collect();
    let root: Vec<Complex64> = (0..n)
        .map(|m| Complex64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64))
        .collect();
    let mut eigs = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, dk) in d.iter().enumerate().skip(1) {
            acc += dk * (Complex64::new(1.0, 0.0) - root[(j * k) % n]);
        }
        eigs.push(-acc);
    }
    Spectrum::from_eigenvalues(eigs)
}

/// Closed-form spectrum of the n-cluster twist under homogeneous all-to-all
/// coupling (every weight 1). The N − n transversal directions share one
/// real eigenvalue −(N/n) Σ_m H′(2πm/n − η); the remaining n are the
/// cluster-level twist eigenvalues.
pub fn homogeneous_spectrum(
    n_osc: usize,
    n_clusters: usize,
    h: &FourierSeries,
    eta: f64,
) -> Result<Spectrum> {
    if n_osc < 2 {
        return Err(Error::InvalidNetworkSize(n_osc));
    }
    if n_clusters == 0 || n_osc % n_clusters != 0 {
        return Err(Error::Divisibility {
            n: n_clusters,
            n_osc,
        });
    }
    let n = n_clusters;
    let block = (n_osc / n) as f64;
    let g: Vec<f64> = (0..n)
        .map(|m| h.eval_derivative(2.0 * PI * m as f64 / n as f64 - eta))
        .collect();
    let g_sum: f64 = g.iter().sum();
    let mut eigs = Vec::with_capacity(n_osc);
    for j in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, gm) in g.iter().enumerate() {
            let w = Complex64::from_polar(1.0, 2.0 * PI * (m * j) as f64 / n as f64);
            acc += gm * (Complex64::new(1.0, 0.0) - w);
        }
        eigs.push(-block * acc);
    }
    let transversal = Complex64::new(-block * g_sum, 0.0);
    for _ in 0..(n_osc - n) {
        eigs.push(transversal);
    }
    Spectrum::from_eigenvalues(eigs)
}

/// Spectrum of an alternating two-cluster state. The state's Jacobian has
/// two alternating row stencils; assembling it densely and eigensolving is
/// exact and fast at these sizes.
pub fn alternating_spectrum(
    top: &CouplingTopology,
    h: &FourierSeries,
    sol: &AlternatingSolution,
    eta: f64,
) -> Result<Spectrum> {
    if sol.n_osc() != top.n_osc() {
        return Err(Error::DimensionMismatch {
            expected: top.n_osc(),
            got: sol.n_osc(),
        });
    }
    if !top.is_circulant() {
        return Err(Error::NotCirculant);
    }
    dense_spectrum(top, h, &sol.phase_offsets(), eta)
}

/// Controls for a delay sweep.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepOptions {
    pub tau_min: f64,
    pub tau_max: f64,
    /// Number of grid cells; the grid has grid + 1 points.
    pub grid: usize,
    /// Desired width of the bracket around each stability boundary.
    pub bisection_tol: f64,
    pub max_bisections: usize,
    pub margin: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            tau_min: 0.0,
            tau_max: 1.0,
            grid: 400,
            bisection_tol: 1e-4,
            max_bisections: 40,
            margin: DEFAULT_MARGIN,
        }
    }
}

impl SweepOptions {
    /// Defaults with the sweep range set to [0, tau_max].
    pub fn up_to(tau_max: f64) -> Self {
        Self {
            tau_max,
            ..Self::default()
        }
    }
}

/// One delay interval on which the state is stable. Endpoints are resolved
/// to the bisection tolerance; an endpoint coinciding with the sweep range
/// boundary is reported as that boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityInterval {
    pub start: f64,
    pub end: f64,
}

/// Verdict and leading growth rate at one grid delay.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepPoint {
    pub tau: f64,
    /// Leading non-structural growth rate, coupling sign applied.
    pub max_re: f64,
    pub verdict: Stability,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub intervals: Vec<StabilityInterval>,
    pub curve: Vec<SweepPoint>,
}

/// Sweep the delay over a grid, classify each point, and refine every
/// stability boundary by bisection. `eval` maps a delay to the spectrum of
/// the state under study.
pub fn sweep_tau<F>(mut eval: F, sign: EpsilonSign, opts: &SweepOptions) -> Result<SweepResult>
where
    F: FnMut(f64) -> Result<Spectrum>,
{
    if opts.grid < 2 {
        return Err(Error::InvalidParameter(
            "sweep grid needs at least 2 cells".into(),
        ));
    }
    if !(opts.tau_max > opts.tau_min) || !opts.tau_max.is_finite() || !opts.tau_min.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "invalid sweep range [{}, {}]",
            opts.tau_min, opts.tau_max
        )));
    }
    if !(opts.bisection_tol > 0.0) {
        return Err(Error::InvalidParameter(
            "bisection tolerance must be positive".into(),
        ));
    }

    let span = opts.tau_max - opts.tau_min;
    let taus: Vec<f64> = (0..=opts.grid)
        .map(|g| opts.tau_min + span * g as f64 / opts.grid as f64)
        .collect();
    let mut curve = Vec::with_capacity(taus.len());
    for &tau in &taus {
        let spectrum = eval(tau)?;
        curve.push(SweepPoint {
            tau,
            max_re: spectrum.max_re(sign),
            verdict: spectrum.classify(sign, opts.margin),
        });
    }

    let stable_at = |p: &SweepPoint| p.verdict == Stability::Stable;
    let mut refine = |mut lo: f64, mut hi: f64, stable_lo: bool| -> Result<f64> {
        for _ in 0..opts.max_bisections {
            if hi - lo <= opts.bisection_tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let s_mid = eval(mid)?.classify(sign, opts.margin) == Stability::Stable;
            if s_mid == stable_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    };

    let mut intervals = Vec::new();
    let mut g = 0;
    while g < curve.len() {
        if stable_at(&curve[g]) {
            let run_start = g;
            while g + 1 < curve.len() && stable_at(&curve[g + 1]) {
                g += 1;
            }
            let start = if run_start == 0 {
                taus[0]
            } else {
                refine(taus[run_start - 1], taus[run_start], false)?
            };
            let end = if g == curve.len() - 1 {
                taus[g]
            } else {
                refine(taus[g], taus[g + 1], true)?
            };
            intervals.push(StabilityInterval { start, end });
        }
        g += 1;
    }
    Ok(SweepResult { intervals, curve })
}

/// Delay sweep of a twist state via the circulant closed form.
pub fn sweep_twist(
    top: &CouplingTopology,
    h: &FourierSeries,
    sol: &ClusterSolution,
    omega: f64,
    sign: EpsilonSign,
    opts: &SweepOptions,
) -> Result<SweepResult> {
    sweep_tau(
        |tau| twist_spectrum(top, h, sol, omega * tau),
        sign,
        opts,
    )
}

/// Delay sweep of the n-cluster state under homogeneous coupling.
pub fn sweep_homogeneous(
    n_osc: usize,
    n_clusters: usize,
    h: &FourierSeries,
    omega: f64,
    sign: EpsilonSign,
    opts: &SweepOptions,
) -> Result<SweepResult> {
    sweep_tau(
        |tau| homogeneous_spectrum(n_osc, n_clusters, h, omega * tau),
        sign,
        opts,
    )
}

/// Delay sweep of an alternating state.
pub fn sweep_alternating(
    top: &CouplingTopology,
    h: &FourierSeries,
    sol: &AlternatingSolution,
    omega: f64,
    sign: EpsilonSign,
    opts: &SweepOptions,
) -> Result<SweepResult> {
    sweep_tau(
        |tau| alternating_spectrum(top, h, sol, omega * tau),
        sign,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{alternating_solution, twist_solution, AlternatingVariant};
    use crate::numerics::finite_difference_jacobian;
    use crate::reference::reference_interaction;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_series(rng: &mut ChaCha8Rng, order: usize) -> FourierSeries {
        let a: Vec<f64> = (0..order).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (0..order).map(|_| rng.gen_range(-1.0..1.0)).collect();
        FourierSeries::new(rng.gen_range(-1.0..1.0), a, b).unwrap()
    }

    fn assert_spectra_match(a: &Spectrum, b: &Spectrum, tol: f64) {
        let key = |c: &Complex64| (c.re, c.im);
        let mut va: Vec<_> = a.eigenvalues().iter().map(|c| key(c)).collect();
        let mut vb: Vec<_> = b.eigenvalues().iter().map(|c| key(c)).collect();
        assert_eq!(va.len(), vb.len());
        let cmp = |x: &(f64, f64), y: &(f64, f64)| {
            x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1))
        };
        va.sort_by(cmp);
        vb.sort_by(cmp);
        for ((ra, ia), (rb, ib)) in va.iter().zip(&vb) {
            assert!(
                (ra - rb).abs() < tol && (ia - ib).abs() < tol,
                "eigenvalue mismatch: {ra}+{ia}i vs {rb}+{ib}i"
            );
        }
    }

    #[test]
    fn sync_spectrum_matches_hand_calculation() {
        // Global coupling, H = sin θ: all non-structural eigenvalues equal
        // −N cos η for the sync state.
        let top = CouplingTopology::global(5).unwrap();
        let h = FourierSeries::new(0.0, vec![0.0], vec![1.0]).unwrap();
        let sol = twist_solution(5, 0).unwrap();
        let eta = 0.3;
        let spec = twist_spectrum(&top, &h, &sol, eta).unwrap();
        assert_eq!(spec.structural_zero().norm(), 0.0);
        for l in spec.nonstructural() {
            assert!((l.re + 5.0 * eta.cos()).abs() < 1e-12);
            assert!(l.im.abs() < 1e-12);
        }
    }

    #[test]
    fn twist_closed_form_agrees_with_dense_assembly() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5 {
            let n = 7;
            let weights: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.1..2.0)).collect();
            let top = CouplingTopology::from_circulant(n, &weights).unwrap();
            let h = random_series(&mut rng, 6);
            let sol = twist_solution(n, 3).unwrap();
            let eta = rng.gen_range(0.0..6.0);
            let closed = twist_spectrum(&top, &h, &sol, eta).unwrap();
            let dense = dense_spectrum(&top, &h, &sol.phase_offsets(), eta).unwrap();
            assert_spectra_match(&closed, &dense, 1e-9);
        }
    }

    #[test]
    fn state_jacobian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let top = CouplingTopology::distance_weighted(6).unwrap();
        let h = random_series(&mut rng, 5);
        let phases: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        let eta = 1.234;
        let analytic = state_jacobian(&top, &h, &phases, eta).unwrap();
        let fd = finite_difference_jacobian(
            |p, out| {
                let v = phase_velocity(&top, &h, p, eta).unwrap();
                out.copy_from_slice(&v);
            },
            &phases,
            1e-6,
        );
        let err = (&analytic - &fd).amax();
        assert!(err < 1e-6, "Jacobian error {err:.3e}");
    }

    #[test]
    fn homogeneous_closed_form_agrees_with_twist_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let h = random_series(&mut rng, 6);
        // N = 6 global coupling; q = 2 has gcd 2, i.e. 3 clusters.
        let top = CouplingTopology::global(6).unwrap();
        let sol = twist_solution(6, 2).unwrap();
        assert_eq!(sol.n_clusters(), 3);
        for eta in [0.0, 0.7, 2.9, 5.5] {
            let a = homogeneous_spectrum(6, 3, &h, eta).unwrap();
            let b = twist_spectrum(&top, &h, &sol, eta).unwrap();
            assert_spectra_match(&a, &b, 1e-10);
        }
    }

    #[test]
    fn alternating_spectrum_matches_row_stencils() {
        // Independent assembly from the two-row stencil structure: for the
        // (0, 0, π, π) pattern, rows at even 0-based positions see a π
        // offset at distances k ≡ 2, 3 (mod 4), odd rows at k ≡ 1, 2.
        let top = CouplingTopology::distance_weighted(8).unwrap();
        let w = top.circulant_weights().unwrap().to_vec();
        let h = reference_interaction();
        let eta = 0.83;
        let sol = alternating_solution(&top, AlternatingVariant::Aabb).unwrap();
        let spec = alternating_spectrum(&top, &h, &sol, eta).unwrap();

        let n = 8;
        let mut m = DMatrix::zeros(n, n);
        for r in 0..n {
            let mut diag = 0.0;
            for k in 1..n {
                let pi_shift = if r % 2 == 0 {
                    matches!(k % 4, 2 | 3)
                } else {
                    matches!(k % 4, 1 | 2)
                };
                let arg = if pi_shift { PI } else { 0.0 } - eta;
                let entry = w[k] * h.eval_derivative(arg);
                m[(r, (r + k) % n)] = entry;
                diag -= entry;
            }
            m[(r, r)] = diag;
        }
        let stencil =
            Spectrum::from_eigenvalues(m.complex_eigenvalues().iter().copied().collect()).unwrap();
        assert_spectra_match(&spec, &stencil, 1e-9);

        // The two variants are ring rotations of each other and share a
        // spectrum.
        let sol_b = alternating_solution(&top, AlternatingVariant::Abba).unwrap();
        let spec_b = alternating_spectrum(&top, &h, &sol_b, eta).unwrap();
        assert_spectra_match(&spec, &spec_b, 1e-9);
    }

    #[test]
    fn twist_states_are_relative_fixed_points() {
        let top = CouplingTopology::distance_weighted(9).unwrap();
        let h = reference_interaction();
        for q in 0..9 {
            let sol = twist_solution(9, q).unwrap();
            let r = fixed_point_residual(&top, &h, &sol.phase_offsets(), 1.7).unwrap();
            assert!(r < 1e-12, "q = {q}: residual {r:.3e}");
        }
        // A generic phase pattern is not a fixed point.
        let phases = [0.0, 0.3, 1.1, 2.0, 2.2, 4.0, 5.1, 5.5, 6.0];
        let r = fixed_point_residual(&top, &h, &phases, 1.7).unwrap();
        assert!(r > 1e-3);
    }

    #[test]
    fn classification_respects_sign_and_margin() {
        let spec = Spectrum::from_eigenvalues(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 2.0),
            Complex64::new(-0.5, -2.0),
        ])
        .unwrap();
        assert_eq!(spec.classify(EpsilonSign::Positive, 1e-9), Stability::Stable);
        assert_eq!(
            spec.classify(EpsilonSign::Negative, 1e-9),
            Stability::Unstable
        );
        assert!((spec.max_re(EpsilonSign::Positive) + 0.5).abs() < 1e-15);
        assert!((spec.max_re(EpsilonSign::Negative) - 1.0).abs() < 1e-15);

        let marginal = Spectrum::from_eigenvalues(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1e-12, 0.5),
            Complex64::new(-1e-12, -0.5),
        ])
        .unwrap();
        assert_eq!(
            marginal.classify(EpsilonSign::Positive, 1e-9),
            Stability::Marginal
        );
        assert_eq!(
            marginal.classify(EpsilonSign::Negative, 1e-9),
            Stability::Marginal
        );
        // A mode that is merely damped for one sign is growing for the
        // other.
        let damped = Spectrum::from_eigenvalues(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1e-12, 0.5),
            Complex64::new(-3.0, 0.0),
        ])
        .unwrap();
        assert_eq!(
            damped.classify(EpsilonSign::Positive, 1e-9),
            Stability::Marginal
        );
        assert_eq!(
            damped.classify(EpsilonSign::Negative, 1e-9),
            Stability::Unstable
        );

        // A definite instability wins over a coexisting marginal mode.
        let mixed = Spectrum::from_eigenvalues(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1e-12, 0.0),
            Complex64::new(2.0, 0.0),
        ])
        .unwrap();
        assert_eq!(
            mixed.classify(EpsilonSign::Positive, 1e-9),
            Stability::Unstable
        );
    }

    #[test]
    fn structural_anomaly_is_flagged() {
        let spec = Spectrum::from_eigenvalues(vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(3.0, 0.0),
        ])
        .unwrap();
        assert_eq!(spec.structural_anomaly(), Some(2.0));
        let ok = Spectrum::from_eigenvalues(vec![
            Complex64::new(1e-12, 0.0),
            Complex64::new(3.0, 0.0),
        ])
        .unwrap();
        assert_eq!(ok.structural_anomaly(), None);
    }

    #[test]
    fn sweep_locates_analytic_boundaries() {
        // Two globally coupled oscillators with H = sin θ: the sync state's
        // single non-structural eigenvalue is −2 cos(Ωτ). With Ω = 1 and
        // τ ∈ [0, 2π], stability for ε > 0 holds on (0, π/2) ∪ (3π/2, 2π).
        let top = CouplingTopology::global(2).unwrap();
        let h = FourierSeries::new(0.0, vec![0.0], vec![1.0]).unwrap();
        let sol = twist_solution(2, 0).unwrap();
        let opts = SweepOptions::up_to(2.0 * PI);
        let res = sweep_twist(&top, &h, &sol, 1.0, EpsilonSign::Positive, &opts).unwrap();
        assert_eq!(res.curve.len(), 401);
        assert_eq!(res.intervals.len(), 2);
        assert_eq!(res.intervals[0].start, 0.0);
        assert!((res.intervals[0].end - PI / 2.0).abs() < 1e-3);
        assert!((res.intervals[1].start - 1.5 * PI).abs() < 1e-3);
        assert_eq!(res.intervals[1].end, 2.0 * PI);

        let res_neg = sweep_twist(&top, &h, &sol, 1.0, EpsilonSign::Negative, &opts).unwrap();
        assert_eq!(res_neg.intervals.len(), 1);
        assert!((res_neg.intervals[0].start - PI / 2.0).abs() < 1e-3);
        assert!((res_neg.intervals[0].end - 1.5 * PI).abs() < 1e-3);
    }
}
