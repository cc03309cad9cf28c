//! Phase reduction of a limit-cycle oscillator: locating the periodic orbit,
//! solving the adjoint (phase-response) problem, and computing the interaction
//! function induced by a pairwise coupling.
//!
//! The pipeline is `find_limit_cycle` → `compute_adjoint` → `compute_h`, or
//! the bundled [`reduce`] which also fits a truncated Fourier series to the
//! interaction-function samples.

use nalgebra::DMatrix;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fourier::{FourierFit, FourierSeries};
use crate::numerics::{bisect, rk4_step, PeriodicTable, Rk4Scratch};
use crate::oscillator::OscillatorSystem;

/// Time span integrated while measuring the attractor's extent; also the
/// budget for a single section-crossing search. Must exceed one period.
const PROBE_TIME: f64 = 200.0;

/// Extra Poincaré iterations run at the fine (table) step after the coarse
/// hunt has converged.
const MAX_FINE_RETURNS: usize = 12;

/// Controls for the limit-cycle search.
#[derive(Debug, Clone, Copy)]
pub struct CycleOptions {
    /// Time discarded before looking for the cycle.
    pub transient: f64,
    /// Integration step during the coarse hunt.
    pub search_step: f64,
    /// Nodes stored over one period; also sets the fine integration step.
    pub sample_count: usize,
    /// Relative tolerance for Poincaré return-map convergence.
    pub tol: f64,
    /// Maximum coarse return-map iterations.
    pub max_returns: usize,
}

impl Default for CycleOptions {
    fn default() -> Self {
        Self {
            transient: 300.0,
            search_step: 1e-2,
            sample_count: 4096,
            tol: 1e-10,
            max_returns: 50,
        }
    }
}

/// A converged periodic orbit, sampled on a uniform grid with states and
/// velocities stored at every node.
#[derive(Debug, Clone)]
pub struct LimitCycle {
    states: PeriodicTable,
    derivs: PeriodicTable,
    closure_error: f64,
}

impl LimitCycle {
    pub fn period(&self) -> f64 {
        self.states.period()
    }

    /// Angular frequency 2π/T.
    pub fn omega(&self) -> f64 {
        2.0 * PI / self.states.period()
    }

    pub fn dim(&self) -> usize {
        self.states.dim()
    }

    pub fn sample_count(&self) -> usize {
        self.states.sample_count()
    }

    /// Interpolated state X̂(t); accepts any real t.
    pub fn state_at(&self, t: f64, out: &mut [f64]) {
        self.states.value_at(t, out);
    }

    /// Interpolated velocity F(X̂(t)).
    pub fn deriv_at(&self, t: f64, out: &mut [f64]) {
        self.derivs.value_at(t, out);
    }

    /// Stored state at node k (t = k·T/sample_count).
    pub fn state_node(&self, k: usize) -> &[f64] {
        self.states.row(k)
    }

    /// Stored velocity at node k.
    pub fn deriv_node(&self, k: usize) -> &[f64] {
        self.derivs.row(k)
    }

    /// Sup-norm gap ‖X̂(T) − X̂(0)‖ left by the final sampling pass.
    pub fn closure_error(&self) -> f64 {
        self.closure_error
    }
}

struct SectionSpec {
    level: f64,
    hysteresis: f64,
}

/// Integrate with fixed step `h` until the first component crosses
/// `section.level` upward, having first retreated below level − hysteresis.
/// Returns the elapsed time; `y` is left at the crossing point.
fn advance_to_upward_crossing<S: OscillatorSystem>(
    sys: &S,
    y: &mut [f64],
    h: f64,
    section: &SectionSpec,
    max_time: f64,
) -> Result<f64> {
    let dim = sys.dim();
    let mut scratch = Rk4Scratch::new(dim);
    let mut rhs = |_t: f64, x: &[f64], out: &mut [f64]| sys.rhs(x, out);
    let mut prev = vec![0.0; dim];
    let mut t = 0.0;
    let mut armed = false;
    while t <= max_time {
        prev.copy_from_slice(y);
        let g_prev = y[0] - section.level;
        rk4_step(&mut rhs, t, y, h, &mut scratch);
        t += h;
        if !y.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteState { t });
        }
        let g_new = y[0] - section.level;
        if !armed {
            if g_new < -section.hysteresis {
                armed = true;
            }
            continue;
        }
        if g_prev < 0.0 && g_new >= 0.0 {
            let mut probe = vec![0.0; dim];
            let mut inner = Rk4Scratch::new(dim);
            let mut eval = |s: f64| -> f64 {
                probe.copy_from_slice(&prev);
                if s > 0.0 {
                    rk4_step(&mut rhs, 0.0, &mut probe, s, &mut inner);
                }
                probe[0] - section.level
            };
            let s_star = bisect(&mut eval, 0.0, h, g_prev, 1e-13, 60);
            eval(s_star);
            y.copy_from_slice(&probe);
            return Ok(t - h + s_star);
        }
    }
    Err(Error::NoConvergence {
        what: "section crossing search".into(),
        budget: (max_time / h) as usize,
    })
}

/// Converge onto the attracting limit cycle reached from `x0`.
///
/// After a transient, a transversal section is placed at mid-range of the
/// first state component and the Poincaré return map is iterated to a fixed
/// point, first at the coarse search step and then at the fine table step so
/// the stored samples close on themselves.
pub fn find_limit_cycle<S: OscillatorSystem>(
    sys: &S,
    x0: &[f64],
    opts: &CycleOptions,
) -> Result<LimitCycle> {
    let dim = sys.dim();
    if x0.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: x0.len(),
        });
    }
    if opts.sample_count < 16 {
        return Err(Error::InvalidParameter(
            "sample_count must be at least 16".into(),
        ));
    }
    if !(opts.search_step > 0.0 && opts.search_step.is_finite()) || opts.transient < 0.0 {
        return Err(Error::InvalidParameter(
            "transient must be non-negative and search_step positive".into(),
        ));
    }

    let h = opts.search_step;
    let mut scratch = Rk4Scratch::new(dim);
    let mut rhs = |_t: f64, x: &[f64], out: &mut [f64]| sys.rhs(x, out);

    let mut y = x0.to_vec();
    let transient_steps = (opts.transient / h).ceil() as usize;
    for _ in 0..transient_steps {
        rk4_step(&mut rhs, 0.0, &mut y, h, &mut scratch);
    }
    if !y.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFiniteState { t: opts.transient });
    }

    // Measure the attractor's extent in the first component to place a
    // transversal section at mid-range.
    let probe_steps = (PROBE_TIME / h).ceil() as usize;
    let (mut lo, mut hi) = (y[0], y[0]);
    let mut scale = 1.0f64;
    for _ in 0..probe_steps {
        rk4_step(&mut rhs, 0.0, &mut y, h, &mut scratch);
        lo = lo.min(y[0]);
        hi = hi.max(y[0]);
        for v in y.iter() {
            scale = scale.max(v.abs());
        }
    }
    if !y.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFiniteState {
            t: opts.transient + PROBE_TIME,
        });
    }
    let amp = hi - lo;
    if amp < 1e-8 * scale {
        return Err(Error::FixedPointDetected);
    }
    let section = SectionSpec {
        level: 0.5 * (lo + hi),
        hysteresis: 0.05 * amp,
    };

    // Coarse Poincaré iteration at the search step.
    advance_to_upward_crossing(sys, &mut y, h, &section, PROBE_TIME)?;
    let mut prev_state = vec![0.0; dim];
    let mut period = f64::NAN;
    let mut converged = false;
    for _ in 0..opts.max_returns {
        prev_state.copy_from_slice(&y);
        let t_ret = advance_to_upward_crossing(sys, &mut y, h, &section, PROBE_TIME)?;
        let gap = y
            .iter()
            .zip(&prev_state)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        let shift = if period.is_finite() {
            (t_ret - period).abs()
        } else {
            f64::INFINITY
        };
        period = t_ret;
        if gap < opts.tol * scale && shift < opts.tol * period.max(1.0) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "Poincaré return map".into(),
            budget: opts.max_returns,
        });
    }

    // Re-converge at the fine step so the stored table closes on itself
    // within the same discretization.
    let h_fine = period / opts.sample_count as f64;
    let mut fine_ok = false;
    for _ in 0..MAX_FINE_RETURNS {
        prev_state.copy_from_slice(&y);
        let t_ret = advance_to_upward_crossing(sys, &mut y, h_fine, &section, 3.0 * period)?;
        let gap = y
            .iter()
            .zip(&prev_state)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        let shift = (t_ret - period).abs();
        period = t_ret;
        if gap < opts.tol * scale && shift < opts.tol * period.max(1.0) {
            fine_ok = true;
            break;
        }
    }
    if !fine_ok {
        return Err(Error::NoConvergence {
            what: "fine Poincaré polish".into(),
            budget: MAX_FINE_RETURNS,
        });
    }

    // Sample one period with exactly sample_count steps.
    let m = opts.sample_count;
    let hs = period / m as f64;
    let mut state_rows = Vec::with_capacity(m);
    let mut deriv_rows = Vec::with_capacity(m);
    let mut d = vec![0.0; dim];
    for _ in 0..m {
        sys.rhs(&y, &mut d);
        state_rows.push(y.clone());
        deriv_rows.push(d.clone());
        rk4_step(&mut rhs, 0.0, &mut y, hs, &mut scratch);
    }
    let closure_error = y
        .iter()
        .zip(&state_rows[0])
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    Ok(LimitCycle {
        states: PeriodicTable::from_rows(period, dim, &state_rows)?,
        derivs: PeriodicTable::from_rows(period, dim, &deriv_rows)?,
        closure_error,
    })
}

/// Controls for the adjoint solve.
#[derive(Debug, Clone, Copy)]
pub struct AdjointOptions {
    /// Relative sup-norm change between successive periods at which the
    /// backward integration is considered periodic.
    pub tol: f64,
    /// Maximum backward periods integrated.
    pub max_periods: usize,
}

impl Default for AdjointOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_periods: 8,
        }
    }
}

/// The periodic adjoint (phase-response) solution Ẑ on the cycle grid,
/// normalized so that Ẑ(t)·F(X̂(t)) averages to one over the period.
#[derive(Debug, Clone)]
pub struct Adjoint {
    table: PeriodicTable,
    normalization_residual: f64,
    convergence_gap: f64,
    periods_used: usize,
}

impl Adjoint {
    pub fn sample_count(&self) -> usize {
        self.table.sample_count()
    }

    pub fn value_at(&self, t: f64, out: &mut [f64]) {
        self.table.value_at(t, out);
    }

    pub fn node(&self, k: usize) -> &[f64] {
        self.table.row(k)
    }

    /// Sup-norm deviation of Ẑ·F from 1 after rescaling. The exact adjoint
    /// keeps this product constant, so this measures overall solve quality.
    pub fn normalization_residual(&self) -> f64 {
        self.normalization_residual
    }

    /// Relative change over the final backward period.
    pub fn convergence_gap(&self) -> f64 {
        self.convergence_gap
    }

    pub fn periods_used(&self) -> usize {
        self.periods_used
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solve dZ/dt = −DF(X̂(t))ᵀ Z for its periodic solution by backward
/// integration (where the solution is attracting), then rescale so the
/// normalization Ẑ·F averages to one.
pub fn compute_adjoint<S: OscillatorSystem>(
    sys: &S,
    cycle: &LimitCycle,
    opts: &AdjointOptions,
) -> Result<Adjoint> {
    let dim = sys.dim();
    if cycle.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: cycle.dim(),
        });
    }
    if opts.max_periods < 2 {
        return Err(Error::InvalidParameter(
            "adjoint max_periods must be at least 2".into(),
        ));
    }
    let m = cycle.sample_count();
    let t_per = cycle.period();
    let h = t_per / m as f64;

    // Substituting u = −t turns the backward problem into a forward one:
    // dẐ/du = DF(X̂(−u))ᵀ Ẑ.
    let mut jac = DMatrix::zeros(dim, dim);
    let mut xbuf = vec![0.0; dim];
    let mut rhs = |u: f64, z: &[f64], out: &mut [f64]| {
        cycle.state_at(-u, &mut xbuf);
        sys.jacobian(&xbuf, &mut jac);
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, zj) in z.iter().enumerate() {
                acc += jac[(j, i)] * zj;
            }
            *o = acc;
        }
    };

    // Start along the flow direction with Ẑ·F = 1 at the base point.
    let f0 = cycle.deriv_node(0);
    let norm2 = dot(f0, f0);
    if norm2 <= 0.0 {
        return Err(Error::InvalidParameter(
            "cycle velocity vanishes at the base point".into(),
        ));
    }
    let mut z: Vec<f64> = f0.iter().map(|v| v / norm2).collect();

    let mut scratch = Rk4Scratch::new(dim);
    let mut prev_period = vec![0.0; m * dim];
    let mut cur_period = vec![0.0; m * dim];
    let mut gap = f64::INFINITY;
    let mut periods_used = 0;
    let mut converged = false;
    for p in 0..opts.max_periods {
        for k in 0..m {
            cur_period[k * dim..(k + 1) * dim].copy_from_slice(&z);
            let u = p as f64 * t_per + k as f64 * h;
            rk4_step(&mut rhs, u, &mut z, h, &mut scratch);
        }
        if !z.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteState {
                t: -((p + 1) as f64) * t_per,
            });
        }
        // Pin the neutral component: the exact solution keeps Ẑ·F constant,
        // but the discrete monodromy drifts it by O(h⁴) per period, which
        // would put a floor under the convergence gap. Re-impose Ẑ·F = 1 at
        // the period seam (u ≡ 0 is forward t = 0) before the next period.
        let seam = dot(&z, f0);
        if seam.abs() < 1e-300 {
            return Err(Error::NoConvergence {
                what: "adjoint normalization (Ẑ orthogonal to F)".into(),
                budget: opts.max_periods,
            });
        }
        for v in z.iter_mut() {
            *v /= seam;
        }
        periods_used = p + 1;
        if p > 0 {
            let zscale = cur_period
                .iter()
                .fold(0.0f64, |mx, v| mx.max(v.abs()))
                .max(1e-300);
            gap = cur_period
                .iter()
                .zip(&prev_period)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max)
                / zscale;
            if gap < opts.tol {
                converged = true;
                break;
            }
        }
        std::mem::swap(&mut prev_period, &mut cur_period);
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "adjoint periodicity".into(),
            budget: opts.max_periods,
        });
    }

    // Map backward samples to forward time: Ẑ(u ≡ k·h mod T) is Z(T − k·h).
    let mut rows = vec![vec![0.0; dim]; m];
    for (j, row) in rows.iter_mut().enumerate() {
        let k = (m - j) % m;
        row.copy_from_slice(&cur_period[k * dim..(k + 1) * dim]);
    }

    let mut mean = 0.0;
    for (j, row) in rows.iter().enumerate() {
        mean += dot(row, cycle.deriv_node(j));
    }
    mean /= m as f64;
    if mean.abs() < 1e-12 {
        return Err(Error::NoConvergence {
            what: "adjoint normalization (Ẑ orthogonal to F)".into(),
            budget: opts.max_periods,
        });
    }
    let inv = 1.0 / mean;
    let mut residual = 0.0f64;
    for (j, row) in rows.iter_mut().enumerate() {
        for v in row.iter_mut() {
            *v *= inv;
        }
        residual = residual.max((dot(row, cycle.deriv_node(j)) - 1.0).abs());
    }

    Ok(Adjoint {
        table: PeriodicTable::from_rows(t_per, dim, &rows)?,
        normalization_residual: residual,
        convergence_gap: gap,
        periods_used,
    })
}

/// Interaction function samples H(θ_m) at θ_m = 2πm/resolution,
///
///   H(θ) = (1/T) ∫₀ᵀ Ẑ(s) · G(X̂(s), X̂(s + θ/Ω)) ds.
///
/// `resolution` must divide the cycle sample count so the phase shift is an
/// exact node shift and no interpolation enters the quadrature.
pub fn compute_h<S: OscillatorSystem>(
    sys: &S,
    cycle: &LimitCycle,
    adjoint: &Adjoint,
    resolution: usize,
) -> Result<Vec<(f64, f64)>> {
    let m = cycle.sample_count();
    if resolution < 8 {
        return Err(Error::InvalidParameter(
            "interaction-function resolution must be at least 8".into(),
        ));
    }
    if m % resolution != 0 {
        return Err(Error::InvalidParameter(format!(
            "resolution {resolution} must divide the cycle sample count {m}"
        )));
    }
    if adjoint.sample_count() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: adjoint.sample_count(),
        });
    }
    let stride = m / resolution;
    let dim = cycle.dim();
    let mut g = vec![0.0; dim];
    let mut samples = Vec::with_capacity(resolution);
    for idx in 0..resolution {
        let shift = idx * stride;
        let mut acc = 0.0;
        for k in 0..m {
            let here = cycle.state_node(k);
            let shifted = cycle.state_node((k + shift) % m);
            sys.coupling(here, shifted, &mut g);
            acc += dot(adjoint.node(k), &g);
        }
        let theta = 2.0 * PI * idx as f64 / resolution as f64;
        samples.push((theta, acc / m as f64));
    }
    Ok(samples)
}

/// Controls for the bundled reduction pipeline.
#[derive(Debug, Clone)]
pub struct ReductionOptions {
    pub cycle: CycleOptions,
    pub adjoint: AdjointOptions,
    /// Uniform grid size for the interaction-function samples.
    pub h_resolution: usize,
    /// Truncation order of the fitted Fourier series.
    pub fit_order: usize,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        Self {
            cycle: CycleOptions::default(),
            adjoint: AdjointOptions::default(),
            h_resolution: 256,
            fit_order: 20,
        }
    }
}

/// Everything the phase model needs about one oscillator: its cycle, its
/// phase response, and the interaction function with a Fourier fit.
#[derive(Debug, Clone)]
pub struct PhaseReduction {
    pub cycle: LimitCycle,
    pub adjoint: Adjoint,
    pub h_samples: Vec<(f64, f64)>,
    pub h_fit: FourierFit,
}

/// Run the full reduction pipeline from an initial state.
pub fn reduce<S: OscillatorSystem>(
    sys: &S,
    x0: &[f64],
    opts: &ReductionOptions,
) -> Result<PhaseReduction> {
    let cycle = find_limit_cycle(sys, x0, &opts.cycle)?;
    let adjoint = compute_adjoint(sys, &cycle, &opts.adjoint)?;
    let h_samples = compute_h(sys, &cycle, &adjoint, opts.h_resolution)?;
    let h_fit = FourierSeries::fit(&h_samples, opts.fit_order)?;
    Ok(PhaseReduction {
        cycle,
        adjoint,
        h_samples,
        h_fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::{MorrisLecar, MorrisLecarParams, StuartLandau, StuartLandauCoupling};
    use crate::reference;

    fn circle_cycle(sample_count: usize) -> (StuartLandau, LimitCycle) {
        let sys = StuartLandau::new(StuartLandauCoupling::FirstComponent);
        let opts = CycleOptions {
            sample_count,
            ..CycleOptions::default()
        };
        let cycle = find_limit_cycle(&sys, &[0.3, -0.1], &opts).unwrap();
        (sys, cycle)
    }

    #[test]
    fn circle_limit_cycle_has_unit_radius_and_period_two_pi() {
        let (_, cycle) = circle_cycle(1024);
        assert!(
            (cycle.period() - 2.0 * PI).abs() < 1e-7,
            "period {} vs 2π",
            cycle.period()
        );
        for k in 0..cycle.sample_count() {
            let x = cycle.state_node(k);
            let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
            assert!((r - 1.0).abs() < 1e-7, "radius {r} at node {k}");
        }
        assert!(cycle.closure_error() < 1e-8);
    }

    #[test]
    fn circle_adjoint_is_the_unit_tangent() {
        let (sys, cycle) = circle_cycle(1024);
        let adjoint = compute_adjoint(&sys, &cycle, &AdjointOptions::default()).unwrap();
        assert!(adjoint.normalization_residual() < 1e-7);
        assert!(adjoint.periods_used() <= 8);

        // On this cycle the asymptotic phase is exactly atan2(y, x), so the
        // adjoint is the unit tangent (−sin φ, cos φ).
        let x0 = cycle.state_node(0);
        let phi0 = x0[1].atan2(x0[0]);
        let h = cycle.period() / cycle.sample_count() as f64;
        let mut worst = 0.0f64;
        for k in 0..cycle.sample_count() {
            let phi = phi0 + k as f64 * h;
            let z = adjoint.node(k);
            worst = worst
                .max((z[0] + phi.sin()).abs())
                .max((z[1] - phi.cos()).abs());
        }
        assert!(worst < 1e-6, "adjoint deviates from tangent by {worst:.3e}");
    }

    #[test]
    fn circle_interaction_function_is_half_sine() {
        let (sys, cycle) = circle_cycle(1024);
        let adjoint = compute_adjoint(&sys, &cycle, &AdjointOptions::default()).unwrap();
        let samples = compute_h(&sys, &cycle, &adjoint, 128).unwrap();
        let mut worst = 0.0f64;
        for &(theta, h) in &samples {
            worst = worst.max((h - 0.5 * theta.sin()).abs());
        }
        assert!(worst < 1e-6, "H deviates from sin(θ)/2 by {worst:.3e}");

        let fit = FourierSeries::fit(&samples, 6).unwrap();
        assert!((fit.series.b()[0] - 0.5).abs() < 1e-6);
        assert!(fit.series.a0().abs() < 1e-7);
        for k in 1..6 {
            assert!(fit.series.a()[k].abs() < 1e-7);
            assert!(fit.series.b()[k].abs() < 1e-7);
        }
        assert!(fit.rms_residual < 1e-7);
    }

    #[test]
    fn zero_coupling_gives_zero_interaction_function() {
        let (_, cycle) = circle_cycle(512);
        let silent = StuartLandau::new(StuartLandauCoupling::None);
        let adjoint = compute_adjoint(&silent, &cycle, &AdjointOptions::default()).unwrap();
        let samples = compute_h(&silent, &cycle, &adjoint, 64).unwrap();
        for &(_, h) in &samples {
            assert!(h.abs() < 1e-12);
        }
    }

    #[test]
    fn morris_lecar_cycle_matches_reference_period() {
        let sys = MorrisLecar::new(MorrisLecarParams::default(), 0.5);
        let cycle = find_limit_cycle(
            &sys,
            &MorrisLecar::default_initial_state(),
            &CycleOptions::default(),
        )
        .unwrap();
        let rel = (cycle.period() - reference::REFERENCE_PERIOD).abs() / reference::REFERENCE_PERIOD;
        assert!(rel < 5e-3, "period {} off by {rel:.2e}", cycle.period());
        assert!(cycle.closure_error() < 1e-8);

        let adjoint = compute_adjoint(&sys, &cycle, &AdjointOptions::default()).unwrap();
        assert!(adjoint.normalization_residual() < 1e-6);
    }

    struct Damped;

    impl OscillatorSystem for Damped {
        fn dim(&self) -> usize {
            2
        }
        fn rhs(&self, x: &[f64], dxdt: &mut [f64]) {
            dxdt[0] = -x[0];
            dxdt[1] = -x[1];
        }
        fn jacobian(&self, _x: &[f64], out: &mut DMatrix<f64>) {
            out[(0, 0)] = -1.0;
            out[(0, 1)] = 0.0;
            out[(1, 0)] = 0.0;
            out[(1, 1)] = -1.0;
        }
        fn coupling(&self, _a: &[f64], _b: &[f64], out: &mut [f64]) {
            out[0] = 0.0;
            out[1] = 0.0;
        }
    }

    #[test]
    fn fixed_point_is_reported_not_mistaken_for_a_cycle() {
        let opts = CycleOptions {
            transient: 50.0,
            ..CycleOptions::default()
        };
        match find_limit_cycle(&Damped, &[0.5, 0.2], &opts) {
            Err(Error::FixedPointDetected) => {}
            other => panic!("expected FixedPointDetected, got {other:?}"),
        }
    }

    #[test]
    fn reduction_rejects_bad_inputs() {
        let (sys, cycle) = circle_cycle(512);
        let adjoint = compute_adjoint(&sys, &cycle, &AdjointOptions::default()).unwrap();
        assert!(matches!(
            find_limit_cycle(&sys, &[0.1], &CycleOptions::default()),
            Err(Error::DimensionMismatch { .. })
        ));
        // 500 does not divide 512.
        assert!(matches!(
            compute_h(&sys, &cycle, &adjoint, 500),
            Err(Error::InvalidParameter(_))
        ));
    }
}
