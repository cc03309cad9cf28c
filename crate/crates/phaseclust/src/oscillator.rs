//! Single-oscillator systems: the right-hand-side/Jacobian/coupling trait
//! consumed by the phase reduction, plus the dimensionless Morris–Lecar
//! instance and an analytically solvable test oscillator.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// A smooth autonomous ODE x′ = F(x) with an exact Jacobian DF and a
/// pairwise coupling function G(x_self, x_other).
///
/// `jacobian` must be the exact derivative of `rhs`; the test suite checks
/// this against finite differences at random states.
pub trait OscillatorSystem {
    fn dim(&self) -> usize;

    /// F(x).
    fn rhs(&self, x: &[f64], dxdt: &mut [f64]);

    /// DF(x), written into `out` (dim × dim).
    fn jacobian(&self, x: &[f64], out: &mut DMatrix<f64>);

    /// Pairwise coupling G(x_self, x_other).
    ///
    /// The sign convention is fixed by the synaptic model: the network
    /// equation adds the current −ε Σ_j W_ij s(v_j(t−τ_ij)) (v_i − E_rev)
    /// to v_i′, and G is defined as the *negative* of that perturbation,
    /// G_v = s(v_other) (v_self − E_rev). The interaction function computed
    /// from this G therefore describes ε < 0 phase dynamics for physical
    /// ε > 0 networks; see `stability::EpsilonSign` for how classifications
    /// account for this.
    fn coupling(&self, x_self: &[f64], x_other: &[f64], out: &mut [f64]);
}

/// Parameters of the dimensionless Morris–Lecar oscillator.
///
/// Defaults are the standard "set I" values for which the uncoupled cell
/// has a stable limit cycle of period ≈ 23.87.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MorrisLecarParams {
    pub v_ca: f64,
    pub v_k: f64,
    pub v_l: f64,
    pub g_ca: f64,
    pub g_k: f64,
    pub g_l: f64,
    pub phi: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub nu3: f64,
    pub nu4: f64,
    pub i_app: f64,
}

impl Default for MorrisLecarParams {
    fn default() -> Self {
        Self {
            v_ca: 1.0,
            v_k: -0.7,
            v_l: -0.5,
            g_ca: 1.0,
            g_k: 2.0,
            g_l: 0.5,
            phi: 1.0 / 3.0,
            nu1: -0.01,
            nu2: 0.15,
            nu3: 0.1,
            nu4: 0.145,
            i_app: 0.09,
        }
    }
}

impl MorrisLecarParams {
    pub fn m_inf(&self, v: f64) -> f64 {
        0.5 * (1.0 + ((v - self.nu1) / self.nu2).tanh())
    }

    pub fn w_inf(&self, v: f64) -> f64 {
        0.5 * (1.0 + ((v - self.nu3) / self.nu4).tanh())
    }

    pub fn lambda(&self, v: f64) -> f64 {
        ((v - self.nu3) / (2.0 * self.nu4)).cosh()
    }
}

/// Synaptic activation s(v) = (1 + tanh 10v)/2.
pub fn synaptic_gate(v: f64) -> f64 {
    0.5 * (1.0 + (10.0 * v).tanh())
}

/// Dimensionless Morris–Lecar oscillator with synaptic coupling towards the
/// reversal potential `e_rev`. State is (v, w).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MorrisLecar {
    pub params: MorrisLecarParams,
    pub e_rev: f64,
}

impl MorrisLecar {
    pub fn new(params: MorrisLecarParams, e_rev: f64) -> Self {
        Self { params, e_rev }
    }

    /// A state on the spiking branch, handy as an integration start.
    pub fn default_initial_state() -> Vec<f64> {
        vec![0.0, 0.3]
    }
}

impl OscillatorSystem for MorrisLecar {
    fn dim(&self) -> usize {
        2
    }

    fn rhs(&self, x: &[f64], dxdt: &mut [f64]) {
        let p = &self.params;
        let (v, w) = (x[0], x[1]);
        dxdt[0] = p.i_app
            - p.g_ca * p.m_inf(v) * (v - p.v_ca)
            - p.g_k * w * (v - p.v_k)
            - p.g_l * (v - p.v_l);
        dxdt[1] = p.phi * p.lambda(v) * (p.w_inf(v) - w);
    }

    fn jacobian(&self, x: &[f64], out: &mut DMatrix<f64>) {
        let p = &self.params;
        let (v, w) = (x[0], x[1]);
        let th_m = ((v - p.nu1) / p.nu2).tanh();
        let m_inf_prime = (1.0 - th_m * th_m) / (2.0 * p.nu2);
        let th_w = ((v - p.nu3) / p.nu4).tanh();
        let w_inf_prime = (1.0 - th_w * th_w) / (2.0 * p.nu4);
        let lambda_prime = ((v - p.nu3) / (2.0 * p.nu4)).sinh() / (2.0 * p.nu4);

        out[(0, 0)] = -p.g_ca * (m_inf_prime * (v - p.v_ca) + p.m_inf(v)) - p.g_k * w - p.g_l;
        out[(0, 1)] = -p.g_k * (v - p.v_k);
        out[(1, 0)] = p.phi * (lambda_prime * (p.w_inf(v) - w) + p.lambda(v) * w_inf_prime);
        out[(1, 1)] = -p.phi * p.lambda(v);
    }

    fn coupling(&self, x_self: &[f64], x_other: &[f64], out: &mut [f64]) {
        out[0] = synaptic_gate(x_other[0]) * (x_self[0] - self.e_rev);
        out[1] = 0.0;
    }
}

/// Coupling used by the [`StuartLandau`] test oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StuartLandauCoupling {
    /// G ≡ 0: the interaction function must vanish identically.
    None,
    /// G = (x_other, 0): the interaction function is sin(θ)/2 analytically.
    FirstComponent,
}

/// The λ–ω normal-form oscillator x′ = x − y − x(x²+y²), y′ = x + y − y(x²+y²).
///
/// Its limit cycle is the unit circle traversed with period 2π, and the
/// normalized adjoint is the unit tangent (−sin t, cos t); every reduction
/// quantity is known in closed form, which makes it the primary oracle for
/// the phase-reduction pipeline.
#[derive(Debug, Clone, Copy)]
pub struct StuartLandau {
    pub coupling: StuartLandauCoupling,
}

impl StuartLandau {
    pub fn new(coupling: StuartLandauCoupling) -> Self {
        Self { coupling }
    }
}

impl OscillatorSystem for StuartLandau {
    fn dim(&self) -> usize {
        2
    }

    fn rhs(&self, x: &[f64], dxdt: &mut [f64]) {
        let r2 = x[0] * x[0] + x[1] * x[1];
        dxdt[0] = x[0] - x[1] - x[0] * r2;
        dxdt[1] = x[0] + x[1] - x[1] * r2;
    }

    fn jacobian(&self, x: &[f64], out: &mut DMatrix<f64>) {
        let (a, b) = (x[0], x[1]);
        out[(0, 0)] = 1.0 - 3.0 * a * a - b * b;
        out[(0, 1)] = -1.0 - 2.0 * a * b;
        out[(1, 0)] = 1.0 - 2.0 * a * b;
        out[(1, 1)] = 1.0 - a * a - 3.0 * b * b;
    }

    fn coupling(&self, _x_self: &[f64], x_other: &[f64], out: &mut [f64]) {
        match self.coupling {
            StuartLandauCoupling::None => {
                out[0] = 0.0;
                out[1] = 0.0;
            }
            StuartLandauCoupling::FirstComponent => {
                out[0] = x_other[0];
                out[1] = 0.0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::finite_difference_jacobian;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check_jacobian<S: OscillatorSystem>(sys: &S, states: &[Vec<f64>], tol: f64) {
        let dim = sys.dim();
        let mut analytic = DMatrix::zeros(dim, dim);
        for x in states {
            sys.jacobian(x, &mut analytic);
            let fd = finite_difference_jacobian(|y, out| sys.rhs(y, out), x, 1e-6);
            let scale = analytic.amax().max(1.0);
            let err = (&analytic - &fd).amax() / scale;
            assert!(err < tol, "relative Jacobian error {err:.3e} at {x:?}");
        }
    }

    #[test]
    fn morris_lecar_jacobian_matches_finite_differences() {
        let sys = MorrisLecar::new(MorrisLecarParams::default(), 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let states: Vec<Vec<f64>> = (0..20)
            .map(|_| vec![rng.gen_range(-0.6..0.6), rng.gen_range(0.0..0.6)])
            .collect();
        check_jacobian(&sys, &states, 1e-5);
    }

    #[test]
    fn stuart_landau_jacobian_matches_finite_differences() {
        let sys = StuartLandau::new(StuartLandauCoupling::None);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let states: Vec<Vec<f64>> = (0..20)
            .map(|_| vec![rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)])
            .collect();
        check_jacobian(&sys, &states, 1e-5);
    }

    #[test]
    fn synaptic_gate_saturates() {
        assert!(synaptic_gate(1.0) > 0.999);
        assert!(synaptic_gate(-1.0) < 0.001);
        assert!((synaptic_gate(0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn morris_lecar_rest_state_has_inward_flow_at_large_v() {
        // Sanity: the vector field pulls back from v far above the spike range.
        let sys = MorrisLecar::new(MorrisLecarParams::default(), 0.5);
        let mut dxdt = [0.0; 2];
        sys.rhs(&[2.0, 0.5], &mut dxdt);
        assert!(dxdt[0] < 0.0);
    }
}
