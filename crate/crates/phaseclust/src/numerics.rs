//! Shared numerical kernels: fixed-step RK4, periodic interpolation and
//! quadrature, bracketed root refinement, and finite-difference Jacobians.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scratch buffers for [`rk4_step`], reused across steps to avoid
/// per-step allocation.
#[derive(Debug, Clone)]
pub struct Rk4Scratch {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4Scratch {
    pub fn new(dim: usize) -> Self {
        Self {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            tmp: vec![0.0; dim],
        }
    }
}

/// One classical 4th-order Runge–Kutta step for dy/dt = f(t, y),
/// advancing `y` in place from `t` to `t + h`.
pub fn rk4_step<F>(f: &mut F, t: f64, y: &mut [f64], h: f64, s: &mut Rk4Scratch)
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let dim = y.len();
    f(t, y, &mut s.k1);
    for i in 0..dim {
        s.tmp[i] = y[i] + 0.5 * h * s.k1[i];
    }
    f(t + 0.5 * h, &s.tmp, &mut s.k2);
    for i in 0..dim {
        s.tmp[i] = y[i] + 0.5 * h * s.k2[i];
    }
    f(t + 0.5 * h, &s.tmp, &mut s.k3);
    for i in 0..dim {
        s.tmp[i] = y[i] + h * s.k3[i];
    }
    f(t + h, &s.tmp, &mut s.k4);
    for i in 0..dim {
        y[i] += h / 6.0 * (s.k1[i] + 2.0 * s.k2[i] + 2.0 * s.k3[i] + s.k4[i]);
    }
}

/// Uniformly sampled T-periodic vector-valued function with 4-point
/// Lagrange (cubic) interpolation on the circular grid.
///
/// Sample `i` holds the value at t = i·T/M; lookups at arbitrary t wrap
/// periodically, so interpolation error is O(Δt⁴) everywhere.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeriodicTable {
    period: f64,
    dim: usize,
    data: Vec<f64>,
}

impl PeriodicTable {
    /// Build from `rows[i]` = value at t = i·period/rows.len().
    pub fn from_rows(period: f64, dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        if period <= 0.0 || !period.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "period must be positive and finite, got {period}"
            )));
        }
        if rows.len() < 4 {
            return Err(Error::InsufficientSamples {
                have: rows.len(),
                need: 4,
            });
        }
        let mut data = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { period, dim, data })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sample_count(&self) -> usize {
        self.data.len() / self.dim
    }

    /// Stored sample i (no interpolation).
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Interpolate the table at arbitrary time `t` (any real; wraps).
    pub fn value_at(&self, t: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.dim);
        let m = self.sample_count();
        let dt = self.period / m as f64;
        let u = t / dt;
        let i1 = u.floor();
        let x = u - i1;
        let base = i1 as i64;
        let idx = |offset: i64| -> usize { (base + offset).rem_euclid(m as i64) as usize };
        // Lagrange cubic through nodes at offsets -1, 0, 1, 2.
        let wm1 = -x * (x - 1.0) * (x - 2.0) / 6.0;
        let w0 = (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0;
        let w1 = -(x + 1.0) * x * (x - 2.0) / 2.0;
        let w2 = (x + 1.0) * x * (x - 1.0) / 6.0;
        let rm1 = self.row(idx(-1));
        let r0 = self.row(idx(0));
        let r1 = self.row(idx(1));
        let r2 = self.row(idx(2));
        for d in 0..self.dim {
            out[d] = wm1 * rm1[d] + w0 * r0[d] + w1 * r1[d] + w2 * r2[d];
        }
    }
}

/// Refine a bracketed sign change of `f` on [lo, hi] by bisection until the
/// bracket is narrower than `tol` (capped at `max_iter` halvings); returns
/// the bracket midpoint. `f_lo` is the already-computed value at `lo`.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, mut f_lo: f64, tol: f64, max_iter: usize) -> f64
where
    F: FnMut(f64) -> f64,
{
    for _ in 0..max_iter {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if (f_mid >= 0.0) == (f_lo >= 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Central-difference Jacobian of `f: R^n -> R^n` at `x`.
pub fn finite_difference_jacobian<F>(mut f: F, x: &[f64], step: f64) -> DMatrix<f64>
where
    F: FnMut(&[f64], &mut [f64]),
{
    let n = x.len();
    let mut jac = DMatrix::zeros(n, n);
    let mut xp = x.to_vec();
    let mut fp = vec![0.0; n];
    let mut fm = vec![0.0; n];
    for col in 0..n {
        xp[col] = x[col] + step;
        f(&xp, &mut fp);
        xp[col] = x[col] - step;
        f(&xp, &mut fm);
        xp[col] = x[col];
        for row in 0..n {
            jac[(row, col)] = (fp[row] - fm[row]) / (2.0 * step);
        }
    }
    jac
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rk4_is_fourth_order_on_exponential_decay() {
        let mut err = Vec::new();
        for &steps in &[32usize, 64] {
            let mut y = vec![1.0];
            let h = 1.0 / steps as f64;
            let mut scratch = Rk4Scratch::new(1);
            let mut f = |_t: f64, y: &[f64], dy: &mut [f64]| dy[0] = -y[0];
            for i in 0..steps {
                rk4_step(&mut f, i as f64 * h, &mut y, h, &mut scratch);
            }
            err.push((y[0] - (-1.0f64).exp()).abs());
        }
        let order = (err[0] / err[1]).log2();
        assert!(order > 3.9, "observed order {order}");
    }

    #[test]
    fn periodic_table_interpolates_sine_to_fourth_order() {
        let m = 128;
        let rows: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / m as f64;
                vec![t.sin(), t.cos()]
            })
            .collect();
        let table = PeriodicTable::from_rows(2.0 * PI, 2, &rows).unwrap();
        let mut out = [0.0; 2];
        let mut worst: f64 = 0.0;
        for j in 0..1000 {
            let t = 13.0 * j as f64 / 1000.0 - 6.0; // includes negative times
            table.value_at(t, &mut out);
            worst = worst.max((out[0] - t.sin()).abs()).max((out[1] - t.cos()).abs());
        }
        // Δt ≈ 0.049, so cubic interpolation error ≈ Δt⁴ ≈ 6e-6.
        assert!(worst < 2e-5, "worst interpolation error {worst:.3e}");
    }

    #[test]
    fn periodic_table_exact_at_nodes() {
        let rows: Vec<Vec<f64>> = (0..16).map(|i| vec![i as f64]).collect();
        let table = PeriodicTable::from_rows(16.0, 1, &rows).unwrap();
        let mut out = [0.0];
        for i in 0..16 {
            table.value_at(i as f64, &mut out);
            assert!((out[0] - i as f64).abs() < 1e-12);
        }
        table.value_at(-1.0, &mut out);
        assert!((out[0] - 15.0).abs() < 1e-12);
    }

    #[test]
    fn bisect_finds_cosine_root() {
        let root = bisect(|x: f64| x.cos(), 1.0, 2.0, 1.0f64.cos(), 1e-12, 60);
        assert!((root - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn finite_difference_jacobian_matches_analytic() {
        let f = |x: &[f64], out: &mut [f64]| {
            out[0] = x[0] * x[0] + x[1];
            out[1] = x[0] * x[1].sin();
        };
        let x = [0.7, -0.3];
        let jac = finite_difference_jacobian(f, &x, 1e-6);
        assert!((jac[(0, 0)] - 2.0 * x[0]).abs() < 1e-8);
        assert!((jac[(0, 1)] - 1.0).abs() < 1e-8);
        assert!((jac[(1, 0)] - x[1].sin()).abs() < 1e-8);
        assert!((jac[(1, 1)] - x[0] * x[1].cos()).abs() < 1e-8);
    }
}
