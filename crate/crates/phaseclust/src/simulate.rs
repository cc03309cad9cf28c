//! Direct integration of the delay-coupled Morris–Lecar network and the
//! spike-train analysis used to compare simulations against phase-model
//! predictions.
//!
//! The network is
//!
//!   v̇_i = f_v(v_i, w_i) − ε Σ_j W_ij s(v_j(t − τ_ij))(v_i − E_rev) + I_pulse,
//!   ẇ_i = f_w(v_i, w_i),
//!
//! integrated by the method of steps with a fixed-step classical RK4. With a
//! uniform delay the step divides τ exactly, so delayed lookups hit stored
//! nodes (plus one cubic Hermite half-step value); with per-edge delays each
//! lookup is a cubic Hermite interpolation at a general fraction of a node
//! interval. Both keep the scheme fourth order; the derivative jump where
//! the prescribed history meets the coupled flow at t = 0 is handled by
//! keeping both one-sided derivatives.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::catalog::{AlternatingVariant, ClusterSolution};
use crate::error::{Error, Result};
use crate::oscillator::{synaptic_gate, MorrisLecar};
use crate::reduction::LimitCycle;
use crate::topology::CouplingTopology;

/// Upward crossing of this membrane level counts as a spike…
const SPIKE_LEVEL: f64 = 0.0;
/// …but only after the membrane has retreated below this level.
const ARM_LEVEL: f64 = -0.1;

/// Relative inter-spike-interval spread beyond which no network period is
/// assigned.
const REL_SPREAD_LIMIT: f64 = 0.05;

/// Default tolerance (fraction of a period) when grouping oscillators into
/// clusters or matching a measured pattern against a catalog pattern.
pub const DEFAULT_PATTERN_TOL: f64 = 0.02;

/// Transmission delays: one value for every connection, or a dense matrix
/// with τ_ij = delay from oscillator j to oscillator i.
#[derive(Debug, Clone)]
pub enum Delay {
    Uniform(f64),
    PerEdge(DMatrix<f64>),
}

impl Delay {
    /// Largest delay on any edge carrying weight; `None` if no edge does.
    pub fn max_over_edges(&self, weights: &DMatrix<f64>) -> Option<f64> {
        match self {
            Delay::Uniform(tau) => Some(*tau),
            Delay::PerEdge(d) => {
                let mut max: Option<f64> = None;
                for i in 0..weights.nrows() {
                    for j in 0..weights.ncols() {
                        if weights[(i, j)] != 0.0 {
                            let t = d[(i, j)];
                            max = Some(max.map_or(t, |m: f64| m.max(t)));
                        }
                    }
                }
                max
            }
        }
    }
}

/// The delay-coupled network: cell model, who-couples-to-whom, strength,
/// and transmission delays.
#[derive(Debug, Clone)]
pub struct NetworkSpec {
    pub oscillator: MorrisLecar,
    pub topology: CouplingTopology,
    /// Dense weight override for perturbed (non-circulant) networks; the
    /// topology's circulant matrix applies when absent.
    pub weights: Option<DMatrix<f64>>,
    /// Per-edge coupling strength ε multiplying W_ij.
    pub epsilon: f64,
    pub delay: Delay,
}

impl NetworkSpec {
    /// Circulant network with a single delay on every connection.
    pub fn uniform(
        oscillator: MorrisLecar,
        topology: CouplingTopology,
        epsilon: f64,
        delay: f64,
    ) -> Self {
        Self {
            oscillator,
            topology,
            weights: None,
            epsilon,
            delay: Delay::Uniform(delay),
        }
    }

    /// The weight matrix actually integrated.
    pub fn effective_weights(&self) -> DMatrix<f64> {
        self.weights
            .clone()
            .unwrap_or_else(|| self.topology.matrix())
    }
}

/// N×N matrix of independent uniform [0, 1) entries from a seeded generator.
pub fn random_unit_matrix(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DMatrix::from_fn(n, n, |_, _| rng.gen_range(0.0..1.0))
}

/// Break the network's circulant symmetry: with entry matrices M and S,
/// weights become w_ij(1 + ε m_ij) and delays τ_ij = τ(1 + ε σ_ij), where ε
/// is the spec's coupling strength and τ its uniform delay. Entries are
/// expected O(1) (the source experiments draw them uniformly from [0, 1)).
/// Passing `None` for a matrix leaves that aspect unperturbed.
pub fn apply_symmetry_breaking(
    spec: &NetworkSpec,
    weight_entries: Option<&DMatrix<f64>>,
    delay_entries: Option<&DMatrix<f64>>,
) -> Result<NetworkSpec> {
    let n = spec.topology.n_osc();
    for m in [weight_entries, delay_entries].into_iter().flatten() {
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.nrows().max(m.ncols()),
            });
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "perturbation entries must be finite".into(),
            ));
        }
    }
    let eps = spec.epsilon;
    let mut out = spec.clone();
    if let Some(m) = weight_entries {
        let base = spec.effective_weights();
        out.weights = Some(DMatrix::from_fn(n, n, |i, j| {
            base[(i, j)] * (1.0 + eps * m[(i, j)])
        }));
    }
    if let Some(s) = delay_entries {
        let tau = match spec.delay {
            Delay::Uniform(tau) => tau,
            Delay::PerEdge(_) => {
                return Err(Error::InvalidParameter(
                    "delay perturbation needs a uniform base delay".into(),
                ))
            }
        };
        out.delay = Delay::PerEdge(DMatrix::from_fn(n, n, |i, j| {
            tau * (1.0 + eps * s[(i, j)])
        }));
    }
    Ok(out)
}

/// A square current pulse injected into selected oscillators.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Pulse {
    /// 1-based oscillator ids.
    pub targets: Vec<usize>,
    pub t_start: f64,
    pub t_end: f64,
    /// Added to v̇ while active.
    pub amplitude: f64,
}

/// Prescribed network state on [−τ, 0].
#[derive(Debug, Clone)]
pub enum InitialHistory {
    /// Each oscillator travels the uncoupled cycle, leading by its phase
    /// offset: X_i(t) = X̂(t + θ_i/Ω).
    CyclePhases {
        cycle: LimitCycle,
        offsets: Vec<f64>,
    },
    /// Each oscillator frozen at a state.
    Constant { states: Vec<Vec<f64>> },
}

impl InitialHistory {
    /// History that starts the network exactly on a twist cluster state.
    pub fn from_solution(cycle: LimitCycle, sol: &ClusterSolution) -> Self {
        let offsets = sol.phase_offsets();
        InitialHistory::CyclePhases { cycle, offsets }
    }

    pub fn from_offsets(cycle: LimitCycle, offsets: Vec<f64>) -> Self {
        InitialHistory::CyclePhases { cycle, offsets }
    }

    fn n_osc(&self) -> usize {
        match self {
            InitialHistory::CyclePhases { offsets, .. } => offsets.len(),
            InitialHistory::Constant { states } => states.len(),
        }
    }

    fn state(&self, i: usize, t: f64, out: &mut [f64]) {
        match self {
            InitialHistory::CyclePhases { cycle, offsets } => {
                cycle.state_at(t + offsets[i] / cycle.omega(), out);
            }
            InitialHistory::Constant { states } => out.copy_from_slice(&states[i]),
        }
    }

    fn deriv(&self, i: usize, t: f64, out: &mut [f64]) {
        match self {
            InitialHistory::CyclePhases { cycle, offsets } => {
                cycle.deriv_at(t + offsets[i] / cycle.omega(), out);
            }
            InitialHistory::Constant { .. } => out.fill(0.0),
        }
    }
}

/// Add independent uniform jitter of the given magnitude (radians) to phase
/// offsets, seeded for reproducibility. Used to nudge an exactly symmetric
/// initial state off its invariant manifold so instabilities can grow.
pub fn jitter_offsets(offsets: &mut [f64], magnitude: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for o in offsets.iter_mut() {
        *o += rng.gen_range(-magnitude..magnitude);
    }
}

/// Controls for one integration run.
#[derive(Debug, Clone)]
pub struct IntegrationOptions {
    /// Target step; rounded so the delay is an exact multiple.
    pub step: f64,
    /// Total integration time.
    pub duration: f64,
    /// Force the delay to be exactly this many steps (overrides `step`).
    pub substeps: Option<usize>,
    /// Record every k-th node into the trajectory; 0 disables recording.
    pub record_stride: usize,
    pub pulses: Vec<Pulse>,
}

impl IntegrationOptions {
    pub fn for_duration(duration: f64) -> Self {
        Self {
            step: 1e-2,
            duration,
            substeps: None,
            record_stride: 0,
            pulses: Vec::new(),
        }
    }
}

/// Recorded state snapshots (flattened (v, w) pairs per oscillator).
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct SimulationResult {
    /// Step actually used.
    pub step: f64,
    pub n_steps: usize,
    /// Spike times per oscillator (upward crossings of v through 0).
    pub spikes: Vec<Vec<f64>>,
    pub trajectory: Option<Trajectory>,
    /// Flattened network state at the final node.
    pub final_state: Vec<f64>,
}

/// Ring buffer of node states and derivatives, addressed by absolute node
/// index.
struct NodeRing {
    cap: usize,
    width: usize,
    states: Vec<f64>,
    derivs: Vec<f64>,
}

impl NodeRing {
    fn new(cap: usize, width: usize) -> Self {
        Self {
            cap,
            width,
            states: vec![0.0; cap * width],
            derivs: vec![0.0; cap * width],
        }
    }

    fn state(&self, node: usize) -> &[f64] {
        let s = (node % self.cap) * self.width;
        &self.states[s..s + self.width]
    }

    fn deriv(&self, node: usize) -> &[f64] {
        let s = (node % self.cap) * self.width;
        &self.derivs[s..s + self.width]
    }

    fn set_state(&mut self, node: usize, value: &[f64]) {
        let s = (node % self.cap) * self.width;
        self.states[s..s + self.width].copy_from_slice(value);
    }

    fn set_deriv(&mut self, node: usize, value: &[f64]) {
        let s = (node % self.cap) * self.width;
        self.derivs[s..s + self.width].copy_from_slice(value);
    }
}

/// Integrate the network. The initial history provides states on [−τ, 0];
/// integration runs from 0 to at least `opts.duration`.
pub fn integrate(
    spec: &NetworkSpec,
    history: &InitialHistory,
    opts: &IntegrationOptions,
) -> Result<SimulationResult> {
    let n = spec.topology.n_osc();
    if history.n_osc() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: history.n_osc(),
        });
    }
    if !spec.epsilon.is_finite() {
        return Err(Error::InvalidParameter("epsilon must be finite".into()));
    }
    if !(opts.step > 0.0) || !(opts.duration > 0.0) {
        return Err(Error::InvalidParameter(
            "step and duration must be positive".into(),
        ));
    }
    for p in &opts.pulses {
        if p.targets.iter().any(|&t| t == 0 || t > n) {
            return Err(Error::InvalidParameter(format!(
                "pulse targets must be 1-based ids within 1..={n}"
            )));
        }
    }

    // Dense weight matrix (possibly a perturbed override).
    let w = spec.effective_weights();
    if w.nrows() != n || w.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: w.nrows().max(w.ncols()),
        });
    }

    // Steps spanning the history (0 for an undelayed network), the step, and
    // the per-edge delay table in step units when delays differ.
    let (m, h, delay_steps) = match &spec.delay {
        Delay::Uniform(tau) => {
            let tau = *tau;
            if !tau.is_finite() || tau < 0.0 {
                return Err(Error::InvalidParameter(
                    "delay must be finite and non-negative".into(),
                ));
            }
            let (m, h) = if let Some(sub) = opts.substeps {
                if tau == 0.0 || sub == 0 {
                    return Err(Error::InvalidParameter(
                        "substeps requires a positive delay".into(),
                    ));
                }
                (sub, tau / sub as f64)
            } else if tau == 0.0 {
                (0, opts.step)
            } else {
                if tau < 0.1 * opts.step {
                    return Err(Error::DelayTooSmall {
                        tau,
                        step: opts.step,
                    });
                }
                let sub = (tau / opts.step).round().max(1.0) as usize;
                (sub, tau / sub as f64)
            };
            (m, h, None)
        }
        Delay::PerEdge(d) => {
            if opts.substeps.is_some() {
                return Err(Error::InvalidParameter(
                    "substeps requires a scalar delay".into(),
                ));
            }
            if d.nrows() != n || d.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: d.nrows().max(d.ncols()),
                });
            }
            let h = opts.step;
            let mut steps = DMatrix::zeros(n, n);
            let mut m = 0usize;
            for i in 0..n {
                for j in 0..n {
                    if w[(i, j)] == 0.0 {
                        continue;
                    }
                    let tau = d[(i, j)];
                    // Delays shorter than one step would need values from the
                    // interval currently being computed.
                    if !tau.is_finite() || tau < h {
                        return Err(Error::DelayTooSmall { tau, step: h });
                    }
                    steps[(i, j)] = tau / h;
                    m = m.max((tau / h).ceil() as usize);
                }
            }
            (m, h, Some(steps))
        }
    };

    let width = 2 * n;
    let n_steps = (opts.duration / h).ceil() as usize;
    let cap = m + 2;
    let mut ring = NodeRing::new(cap, width);

    let params = spec.oscillator.params;
    let e_rev = spec.oscillator.e_rev;
    let eps = spec.epsilon;

    // Populate history nodes 0..=m (times −mh..0). Node indices are offset
    // so that node a sits at t = (a − m)·h.
    let mut buf = vec![0.0; 2];
    let mut flat = vec![0.0; width];
    let mut dflat = vec![0.0; width];
    for a in 0..=m {
        let t = (a as f64 - m as f64) * h;
        for i in 0..n {
            history.state(i, t, &mut buf);
            flat[2 * i] = buf[0];
            flat[2 * i + 1] = buf[1];
            history.deriv(i, t, &mut buf);
            dflat[2 * i] = buf[0];
            dflat[2 * i + 1] = buf[1];
        }
        ring.set_state(a, &flat);
        ring.set_deriv(a, &dflat);
    }
    // One-sided history derivative at t = 0; node m's stored derivative is
    // replaced by the coupled one when step 0 runs.
    let hist_zero_deriv = ring.deriv(m).to_vec();

    // Network right-hand side given the per-receiver synaptic drive
    // Σ_j W_ij s(v_j(t − τ_ij)).
    let eval_rhs = |t: f64, x: &[f64], drive: &[f64], pulses: &[Pulse], out: &mut [f64]| {
        for i in 0..n {
            let (v, wv) = (x[2 * i], x[2 * i + 1]);
            let mut extra = 0.0;
            for p in pulses {
                if t >= p.t_start && t < p.t_end && p.targets.contains(&(i + 1)) {
                    extra += p.amplitude;
                }
            }
            out[2 * i] = params.i_app
                - params.g_ca * params.m_inf(v) * (v - params.v_ca)
                - params.g_k * wv * (v - params.v_k)
                - params.g_l * (v - params.v_l)
                - eps * drive[i] * (v - e_rev)
                + extra;
            out[2 * i + 1] = params.phi * params.lambda(v) * (params.w_inf(v) - wv);
        }
    };
    // Drive from a full delayed snapshot (membrane components at 2j).
    let snapshot_drive = |snap: &[f64], gate: &mut [f64], out: &mut [f64]| {
        for (j, g) in gate.iter_mut().enumerate() {
            *g = synaptic_gate(snap[2 * j]);
        }
        for (i, d) in out.iter_mut().enumerate() {
            *d = gate.iter().enumerate().map(|(j, g)| w[(i, j)] * g).sum();
        }
    };

    let mut spikes: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut armed = vec![false; n];
    let mut trajectory = if opts.record_stride > 0 {
        Some(Trajectory {
            times: Vec::new(),
            states: Vec::new(),
        })
    } else {
        None
    };

    let mut cur = ring.state(m).to_vec();
    let (mut d1, mut d2, mut d3, mut d4) = (
        vec![0.0; width],
        vec![0.0; width],
        vec![0.0; width],
        vec![0.0; width],
    );
    let (mut y2, mut y3, mut y4) = (vec![0.0; width], vec![0.0; width], vec![0.0; width]);
    let mut mid = vec![0.0; width];
    let mut next = vec![0.0; width];
    let mut gate = vec![0.0; n];
    let (mut drv1, mut drv23, mut drv4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);

    // Membrane value of source j at node coordinate u (node index plus
    // fraction), cubic Hermite on the enclosing interval. The stored
    // derivative at the t = 0 node is the coupled one once step 0 has run;
    // intervals ending there take the history-side derivative instead.
    let membrane_at = |ring: &NodeRing, u: f64, j: usize| -> f64 {
        let f = u.floor().max(0.0);
        let idx = f as usize;
        let th = u - f;
        let c = 2 * j;
        if th < 1e-12 {
            return ring.state(idx)[c];
        }
        let sa = ring.state(idx)[c];
        let sb = ring.state(idx + 1)[c];
        let da = ring.deriv(idx)[c];
        let db = if idx + 1 == m {
            hist_zero_deriv[c]
        } else {
            ring.deriv(idx + 1)[c]
        };
        let t2 = th * th;
        let t3 = t2 * th;
        (2.0 * t3 - 3.0 * t2 + 1.0) * sa
            + (t3 - 2.0 * t2 + th) * h * da
            + (-2.0 * t3 + 3.0 * t2) * sb
            + (t3 - t2) * h * db
    };
    // Per-receiver drive at node coordinate u_base with per-edge lags.
    let edge_drive = |ring: &NodeRing, steps: &DMatrix<f64>, u_base: f64, out: &mut [f64]| {
        for (i, d) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in 0..n {
                let wij = w[(i, j)];
                if wij != 0.0 {
                    acc += wij * synaptic_gate(membrane_at(ring, u_base - steps[(i, j)], j));
                }
            }
            *d = acc;
        }
    };

    for k in 0..n_steps {
        let t = k as f64 * h;
        let a = m + k;

        if let Some(steps) = delay_steps.as_ref() {
            // Per-edge delays: every delayed value is a general-fraction
            // Hermite lookup. τ ≥ h guarantees the first stage never reads
            // past node a−1, so the stage-1 slope can be stored before the
            // half- and full-step lookups (which may reach into (a−1, a]).
            let u_now = (m + k) as f64;
            edge_drive(&ring, steps, u_now, &mut drv1);
            eval_rhs(t, &cur, &drv1, &opts.pulses, &mut d1);
            ring.set_deriv(a, &d1);
            edge_drive(&ring, steps, u_now + 0.5, &mut drv23);
            for c in 0..width {
                y2[c] = cur[c] + 0.5 * h * d1[c];
            }
            eval_rhs(t + 0.5 * h, &y2, &drv23, &opts.pulses, &mut d2);
            for c in 0..width {
                y3[c] = cur[c] + 0.5 * h * d2[c];
            }
            eval_rhs(t + 0.5 * h, &y3, &drv23, &opts.pulses, &mut d3);
            edge_drive(&ring, steps, u_now + 1.0, &mut drv4);
            for c in 0..width {
                y4[c] = cur[c] + h * d3[c];
            }
            eval_rhs(t + h, &y4, &drv4, &opts.pulses, &mut d4);
        } else if m > 0 {
            // Uniform delay: nodes a−m and a−m+1 are exact; the half point
            // is cubic Hermite. The left node of the half interval is a−m;
            // when its right endpoint is the t = 0 node, the history side of
            // the two-sided derivative applies.
            let (d_left, d_right) = {
                let left = a - m;
                let right = left + 1;
                let dl = ring.deriv(left).to_vec();
                let dr = if right == m {
                    hist_zero_deriv.clone()
                } else {
                    ring.deriv(right).to_vec()
                };
                (dl, dr)
            };
            {
                let s_left = ring.state(a - m);
                let s_right = ring.state(a - m + 1);
                for c in 0..width {
                    mid[c] = 0.5 * (s_left[c] + s_right[c])
                        + 0.125 * h * (d_left[c] - d_right[c]);
                }
            }

            snapshot_drive(ring.state(a - m), &mut gate, &mut drv1);
            eval_rhs(t, &cur, &drv1, &opts.pulses, &mut d1);
            ring.set_deriv(a, &d1);
            snapshot_drive(&mid, &mut gate, &mut drv23);
            for c in 0..width {
                y2[c] = cur[c] + 0.5 * h * d1[c];
            }
            eval_rhs(t + 0.5 * h, &y2, &drv23, &opts.pulses, &mut d2);
            for c in 0..width {
                y3[c] = cur[c] + 0.5 * h * d2[c];
            }
            eval_rhs(t + 0.5 * h, &y3, &drv23, &opts.pulses, &mut d3);
            snapshot_drive(ring.state(a - m + 1), &mut gate, &mut drv4);
            for c in 0..width {
                y4[c] = cur[c] + h * d3[c];
            }
            eval_rhs(t + h, &y4, &drv4, &opts.pulses, &mut d4);
        } else {
            // No delay: the coupling sees the stage states themselves and
            // the scheme is classical RK4 on the coupled ODE.
            snapshot_drive(&cur, &mut gate, &mut drv1);
            eval_rhs(t, &cur, &drv1, &opts.pulses, &mut d1);
            for c in 0..width {
                y2[c] = cur[c] + 0.5 * h * d1[c];
            }
            snapshot_drive(&y2, &mut gate, &mut drv23);
            eval_rhs(t + 0.5 * h, &y2, &drv23, &opts.pulses, &mut d2);
            for c in 0..width {
                y3[c] = cur[c] + 0.5 * h * d2[c];
            }
            snapshot_drive(&y3, &mut gate, &mut drv23);
            eval_rhs(t + 0.5 * h, &y3, &drv23, &opts.pulses, &mut d3);
            for c in 0..width {
                y4[c] = cur[c] + h * d3[c];
            }
            snapshot_drive(&y4, &mut gate, &mut drv4);
            eval_rhs(t + h, &y4, &drv4, &opts.pulses, &mut d4);
        }

        for c in 0..width {
            next[c] = cur[c] + h / 6.0 * (d1[c] + 2.0 * d2[c] + 2.0 * d3[c] + d4[c]);
        }

        // Spike bookkeeping on the membrane components.
        for i in 0..n {
            let (v_prev, v_new) = (cur[2 * i], next[2 * i]);
            if !armed[i] && v_new < ARM_LEVEL {
                armed[i] = true;
            }
            if armed[i] && v_prev < SPIKE_LEVEL && v_new >= SPIKE_LEVEL {
                let frac = (SPIKE_LEVEL - v_prev) / (v_new - v_prev);
                spikes[i].push(t + frac * h);
                armed[i] = false;
            }
        }

        ring.set_state(a + 1, &next);
        cur.copy_from_slice(&next);

        if k % 64 == 0 && !cur.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteState { t: t + h });
        }
        if let Some(traj) = trajectory.as_mut() {
            if (k + 1) % opts.record_stride == 0 {
                traj.times.push(t + h);
                traj.states.push(cur.clone());
            }
        }
    }

    if !cur.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFiniteState {
            t: n_steps as f64 * h,
        });
    }

    Ok(SimulationResult {
        step: h,
        n_steps,
        spikes,
        trajectory,
        final_state: cur,
    })
}

/// Circular distance between two period fractions, in [0, 0.5].
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// A cluster pattern measured from spike trains.
#[derive(Debug, Clone, Serialize)]
pub struct MeasuredPattern {
    /// Mean network period from oscillator 1's inter-spike intervals.
    pub period: f64,
    /// Firing fraction of each oscillator relative to oscillator 1.
    pub fractions: Vec<f64>,
    /// Oscillators grouped by common fraction (1-based ids), ordered by
    /// increasing fraction starting from oscillator 1's group.
    pub clusters: Vec<Vec<usize>>,
}

/// Extract the cluster pattern expressed in a window of the spike trains.
///
/// Each oscillator's spikes are paired with the preceding oscillator-1 spike
/// and averaged circularly; oscillators closer than `tol` (fraction of a
/// period) share a cluster.
pub fn classify_clusters(
    spikes: &[Vec<f64>],
    window: (f64, f64),
    tol: f64,
) -> Result<MeasuredPattern> {
    let n = spikes.len();
    if n == 0 {
        return Err(Error::InvalidNetworkSize(0));
    }
    let in_window = |t: &&f64| **t >= window.0 && **t < window.1;
    let refs: Vec<f64> = spikes[0].iter().filter(in_window).copied().collect();
    if refs.len() < 3 {
        return Err(Error::TooFewSpikes {
            oscillator: 1,
            count: refs.len(),
            need: 3,
        });
    }
    let isis: Vec<f64> = refs.windows(2).map(|p| p[1] - p[0]).collect();
    let period = isis.iter().sum::<f64>() / isis.len() as f64;
    let spread = isis
        .iter()
        .map(|d| (d - period).abs())
        .fold(0.0f64, f64::max)
        / period;
    if spread > REL_SPREAD_LIMIT {
        return Err(Error::NoStablePeriod {
            rel_spread: spread,
            limit: REL_SPREAD_LIMIT,
        });
    }

    let mut fractions = vec![0.0; n];
    for (i, train) in spikes.iter().enumerate() {
        if i == 0 {
            continue;
        }
        let (mut sx, mut sy) = (0.0, 0.0);
        let mut count = 0usize;
        for &t in train.iter().filter(in_window) {
            // Preceding reference spike.
            let Some(&r) = refs.iter().rev().find(|&&r| r <= t) else {
                continue;
            };
            if t - r >= 2.0 * period {
                continue;
            }
            let frac = ((t - r) / period).rem_euclid(1.0);
            sx += (2.0 * PI * frac).cos();
            sy += (2.0 * PI * frac).sin();
            count += 1;
        }
        if count < 2 {
            return Err(Error::TooFewSpikes {
                oscillator: i + 1,
                count,
                need: 2,
            });
        }
        fractions[i] = (sy.atan2(sx) / (2.0 * PI)).rem_euclid(1.0);
    }

    // Group by fraction, circularly.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| fractions[a].total_cmp(&fractions[b]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last_mut() {
            Some(g)
                if circular_distance(fractions[i], fractions[*g.last().unwrap()]) <= tol
                    && circular_distance(fractions[i], fractions[g[0]]) <= 2.0 * tol =>
            {
                g.push(i)
            }
            _ => groups.push(vec![i]),
        }
    }
    // The first and last group may wrap around 1 → 0.
    if groups.len() > 1 {
        let first = groups.first().unwrap();
        let last = groups.last().unwrap();
        if circular_distance(fractions[*last.last().unwrap()], fractions[first[0]]) <= tol {
            let mut last = groups.pop().unwrap();
            last.extend(groups[0].iter().copied());
            groups[0] = last;
        }
    }
    // Start at oscillator 1's group, ids 1-based and sorted.
    let start = groups
        .iter()
        .position(|g| g.contains(&0))
        .expect("oscillator 1 must appear in a group");
    groups.rotate_left(start);
    let clusters: Vec<Vec<usize>> = groups
        .into_iter()
        .map(|mut g| {
            g.sort_unstable();
            g.iter().map(|i| i + 1).collect()
        })
        .collect();

    Ok(MeasuredPattern {
        period,
        fractions,
        clusters,
    })
}

/// Worst circular deviation between measured and predicted fractions.
pub fn pattern_residual(measured: &[f64], predicted: &[f64]) -> Result<f64> {
    if measured.len() != predicted.len() {
        return Err(Error::DimensionMismatch {
            expected: predicted.len(),
            got: measured.len(),
        });
    }
    Ok(measured
        .iter()
        .zip(predicted)
        .map(|(&m, &p)| circular_distance(m, p))
        .fold(0.0, f64::max))
}

/// Per-period deviation of the spike pattern from a predicted pattern.
///
/// For every consecutive pair of oscillator-1 spikes, each oscillator's
/// spike inside that span yields a fraction; the entry is the worst circular
/// deviation from the prediction, or 0.5 (the maximum) if an oscillator
/// failed to spike in the span.
pub fn residual_timeline(
    spikes: &[Vec<f64>],
    predicted: &[f64],
    window: (f64, f64),
) -> Result<Vec<(f64, f64)>> {
    let n = spikes.len();
    if predicted.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: predicted.len(),
        });
    }
    let refs: Vec<f64> = spikes[0]
        .iter()
        .filter(|&&t| t >= window.0 && t < window.1)
        .copied()
        .collect();
    let mut out = Vec::new();
    for pair in refs.windows(2) {
        let (r0, r1) = (pair[0], pair[1]);
        let span = r1 - r0;
        let mut worst = 0.0f64;
        for (i, train) in spikes.iter().enumerate().skip(1) {
            let hit = train.iter().find(|&&t| t >= r0 && t < r1);
            match hit {
                Some(&t) => {
                    let frac = ((t - r0) / span).rem_euclid(1.0);
                    worst = worst.max(circular_distance(frac, predicted[i]));
                }
                None => worst = 0.5,
            }
        }
        out.push((0.5 * (r0 + r1), worst));
    }
    Ok(out)
}

/// A catalog pattern a measured state can be identified with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PatternId {
    Twist { q: usize },
    Alternating { variant: AlternatingVariant },
}

/// Best-matching catalog pattern for a vector of measured fractions.
#[derive(Debug, Clone, Serialize)]
pub struct PatternMatch {
    pub pattern: PatternId,
    pub residual: f64,
    pub n_clusters: usize,
    pub label: String,
}

/// Match measured firing fractions against every twist pattern (and, when N
/// is divisible by 4, the alternating patterns). Returns the best match
/// whose residual is at most `tol`, or None ("no clustering").
pub fn identify_pattern(fractions: &[f64], tol: f64) -> Option<PatternMatch> {
    let n = fractions.len();
    if n < 2 {
        return None;
    }
    let mut best: Option<PatternMatch> = None;
    let mut consider = |pattern: PatternId, predicted: Vec<f64>, n_clusters: usize, label: String| {
        let residual = pattern_residual(fractions, &predicted).unwrap();
        if residual <= tol && best.as_ref().map_or(true, |b| residual < b.residual) {
            best = Some(PatternMatch {
                pattern,
                residual,
                n_clusters,
                label,
            });
        }
    };
    for q in 0..n {
        let sol = crate::catalog::twist_solution(n, q).unwrap();
        consider(
            PatternId::Twist { q },
            sol.firing_fractions(),
            sol.n_clusters(),
            sol.label(),
        );
    }
    if n % 4 == 0 {
        for variant in [AlternatingVariant::Aabb, AlternatingVariant::Abba] {
            let fractions_alt: Vec<f64> = (0..n)
                .map(|i| {
                    let flipped = match variant {
                        AlternatingVariant::Aabb => matches!(i % 4, 2 | 3),
                        AlternatingVariant::Abba => matches!(i % 4, 1 | 2),
                    };
                    if flipped {
                        0.5
                    } else {
                        0.0
                    }
                })
                .collect();
            consider(
                PatternId::Alternating { variant },
                fractions_alt,
                2,
                "2C-alt".into(),
            );
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::MorrisLecarParams;
    use crate::reduction::{find_limit_cycle, CycleOptions};

    fn ml_cycle() -> (MorrisLecar, LimitCycle) {
        let sys = MorrisLecar::new(MorrisLecarParams::default(), 0.5);
        let cycle = find_limit_cycle(
            &sys,
            &MorrisLecar::default_initial_state(),
            &CycleOptions {
                sample_count: 1024,
                ..CycleOptions::default()
            },
        )
        .unwrap();
        (sys, cycle)
    }

    #[test]
    fn uncoupled_delayed_network_follows_the_cycle() {
        let (sys, cycle) = ml_cycle();
        let t_per = cycle.period();
        let spec = NetworkSpec::uniform(sys, CouplingTopology::global(2).unwrap(), 0.0, 2.0);
        let offsets = vec![0.0, 1.0];
        let history = InitialHistory::from_offsets(cycle.clone(), offsets.clone());
        let opts = IntegrationOptions::for_duration(3.0 * t_per);
        let res = integrate(&spec, &history, &opts).unwrap();

        let t_end = res.n_steps as f64 * res.step;
        let mut expect = vec![0.0; 2];
        for i in 0..2 {
            cycle.state_at(t_end + offsets[i] / cycle.omega(), &mut expect);
            for c in 0..2 {
                let got = res.final_state[2 * i + c];
                assert!(
                    (got - expect[c]).abs() < 1e-5,
                    "oscillator {i} component {c}: {got} vs {}",
                    expect[c]
                );
            }
        }
        // One spike per period per oscillator.
        for train in &res.spikes {
            assert!((train.len() as i64 - 3).abs() <= 1, "{} spikes", train.len());
        }
    }

    #[test]
    fn integration_is_deterministic() {
        let (sys, cycle) = ml_cycle();
        let spec = NetworkSpec::uniform(
            sys,
            CouplingTopology::distance_weighted(4).unwrap(),
            0.01,
            1.5,
        );
        let sol = crate::catalog::twist_solution(4, 1).unwrap();
        let history = InitialHistory::from_solution(cycle, &sol);
        let opts = IntegrationOptions::for_duration(30.0);
        let a = integrate(&spec, &history, &opts).unwrap();
        let b = integrate(&spec, &history, &opts).unwrap();
        assert_eq!(a.final_state, b.final_state);
        assert_eq!(a.spikes, b.spikes);
    }

    #[test]
    fn zero_amplitude_pulse_changes_nothing() {
        let (sys, cycle) = ml_cycle();
        let spec = NetworkSpec::uniform(sys, CouplingTopology::global(3).unwrap(), 0.005, 1.0);
        let sol = crate::catalog::twist_solution(3, 1).unwrap();
        let history = InitialHistory::from_solution(cycle, &sol);
        let mut opts = IntegrationOptions::for_duration(25.0);
        let base = integrate(&spec, &history, &opts).unwrap();
        opts.pulses.push(Pulse {
            targets: vec![1, 3],
            t_start: 5.0,
            t_end: 10.0,
            amplitude: 0.0,
        });
        let pulsed = integrate(&spec, &history, &opts).unwrap();
        assert_eq!(base.final_state, pulsed.final_state);
    }

    #[test]
    fn classify_recovers_a_synthetic_three_cluster_pattern() {
        // Six oscillators, period 10, fractions (0, 1/3, 2/3, 0, 1/3, 2/3).
        let fractions = [0.0, 1.0 / 3.0, 2.0 / 3.0, 0.0, 1.0 / 3.0, 2.0 / 3.0];
        let period = 10.0;
        let spikes: Vec<Vec<f64>> = fractions
            .iter()
            .enumerate()
            .map(|(i, f)| {
                (0..12)
                    .map(|k| k as f64 * period + f * period + 1e-4 * (i as f64))
                    .collect()
            })
            .collect();
        let measured = classify_clusters(&spikes, (0.0, 120.0), DEFAULT_PATTERN_TOL).unwrap();
        assert!((measured.period - period).abs() < 1e-9);
        assert_eq!(measured.clusters.len(), 3);
        assert_eq!(measured.clusters[0], vec![1, 4]);
        assert_eq!(measured.clusters[1], vec![2, 5]);
        assert_eq!(measured.clusters[2], vec![3, 6]);

        let id = identify_pattern(&measured.fractions, DEFAULT_PATTERN_TOL).unwrap();
        assert_eq!(id.pattern, PatternId::Twist { q: 4 });
        assert_eq!(id.n_clusters, 3);
        assert_eq!(id.label, "3C");
    }

    #[test]
    fn classification_rejects_irregular_trains() {
        // Oscillator 1 fires erratically: no period can be assigned.
        let spikes = vec![
            vec![0.0, 7.0, 30.0, 31.0, 55.0],
            vec![1.0, 8.0, 31.0, 32.0, 56.0],
        ];
        assert!(matches!(
            classify_clusters(&spikes, (0.0, 60.0), 0.02),
            Err(Error::NoStablePeriod { .. })
        ));
    }

    #[test]
    fn circular_tools_wrap_correctly() {
        assert!((circular_distance(0.98, 0.02) - 0.04).abs() < 1e-12);
        assert!((circular_distance(0.25, 0.75) - 0.5).abs() < 1e-12);
        assert!((pattern_residual(&[0.0, 0.99], &[0.0, 0.01]).unwrap() - 0.02).abs() < 1e-12);
    }

    #[test]
    fn symmetry_breaking_is_seeded_and_bounded() {
        let mut a = vec![0.0; 8];
        let mut b = vec![0.0; 8];
        jitter_offsets(&mut a, 0.01, 7);
        jitter_offsets(&mut b, 0.01, 7);
        assert_eq!(a, b);
        assert!(a.iter().any(|&x| x != 0.0));
        assert!(a.iter().all(|&x| x.abs() < 0.01));
        let mut c = vec![0.0; 8];
        jitter_offsets(&mut c, 0.01, 8);
        assert_ne!(a, c);
    }

    #[test]
    fn equal_per_edge_delays_match_the_uniform_path() {
        let (sys, cycle) = ml_cycle();
        let top = CouplingTopology::global(3).unwrap();
        let tau = 2.0;
        let uniform = NetworkSpec::uniform(sys, top, 0.01, tau);
        let per_edge = NetworkSpec {
            delay: Delay::PerEdge(DMatrix::from_element(3, 3, tau)),
            ..uniform.clone()
        };
        let sol = crate::catalog::twist_solution(3, 1).unwrap();
        let history = InitialHistory::from_solution(cycle, &sol);
        // Step dividing τ exactly so both paths share the node grid.
        let opts = IntegrationOptions {
            step: tau / 200.0,
            ..IntegrationOptions::for_duration(50.0)
        };
        let a = integrate(&uniform, &history, &opts).unwrap();
        let b = integrate(&per_edge, &history, &opts).unwrap();
        assert_eq!(a.step, b.step);
        for (x, y) in a.final_state.iter().zip(&b.final_state) {
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }

    #[test]
    fn slightly_heterogeneous_delays_stay_close_to_uniform() {
        let (sys, cycle) = ml_cycle();
        let top = CouplingTopology::global(3).unwrap();
        let spec = NetworkSpec::uniform(sys, top, 0.01, 2.0);
        let s_entries = random_unit_matrix(3, 11);
        let perturbed = apply_symmetry_breaking(&spec, None, Some(&s_entries)).unwrap();
        match &perturbed.delay {
            Delay::PerEdge(d) => {
                assert!(d.iter().all(|&t| (2.0..2.0 * 1.011).contains(&t)));
            }
            Delay::Uniform(_) => panic!("expected per-edge delays"),
        }
        let sol = crate::catalog::twist_solution(3, 1).unwrap();
        let history = InitialHistory::from_solution(cycle, &sol);
        let opts = IntegrationOptions::for_duration(50.0);
        let a = integrate(&spec, &history, &opts).unwrap();
        let b = integrate(&perturbed, &history, &opts).unwrap();
        let diff = a
            .final_state
            .iter()
            .zip(&b.final_state)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        assert!(diff > 0.0, "perturbation must have an effect");
        assert!(diff < 0.05, "tiny delay heterogeneity must stay small: {diff}");
    }

    #[test]
    fn symmetry_breaking_scales_weights_and_delays() {
        let (sys, _) = ml_cycle();
        let top = CouplingTopology::distance_weighted(4).unwrap();
        let spec = NetworkSpec::uniform(sys, top.clone(), 0.5, 3.0);
        let zeros = DMatrix::zeros(4, 4);
        let same = apply_symmetry_breaking(&spec, Some(&zeros), Some(&zeros)).unwrap();
        assert_eq!(same.effective_weights(), top.matrix());
        match same.delay {
            Delay::PerEdge(d) => assert!(d.iter().all(|&t| t == 3.0)),
            Delay::Uniform(_) => panic!("expected per-edge delays"),
        }

        let m_entries = DMatrix::from_element(4, 4, 1.0);
        let scaled = apply_symmetry_breaking(&spec, Some(&m_entries), None).unwrap();
        let expect = top.matrix() * 1.5;
        assert!((scaled.effective_weights() - expect).abs().max() < 1e-12);
        // Zero weights stay zero, so the structure is preserved.
        assert_eq!(scaled.effective_weights()[(0, 0)], 0.0);
    }

    #[test]
    fn per_edge_delay_below_step_is_rejected() {
        let (sys, cycle) = ml_cycle();
        let top = CouplingTopology::global(2).unwrap();
        let mut d = DMatrix::from_element(2, 2, 1.0);
        d[(0, 1)] = 1e-3;
        let spec = NetworkSpec {
            oscillator: sys,
            topology: top,
            weights: None,
            epsilon: 0.01,
            delay: Delay::PerEdge(d),
        };
        let sol = crate::catalog::twist_solution(2, 0).unwrap();
        let history = InitialHistory::from_solution(cycle, &sol);
        let opts = IntegrationOptions::for_duration(10.0);
        assert!(matches!(
            integrate(&spec, &history, &opts),
            Err(Error::DelayTooSmall { .. })
        ));
    }

    #[test]
    fn random_unit_matrix_is_seeded_and_in_range() {
        let a = random_unit_matrix(5, 3);
        let b = random_unit_matrix(5, 3);
        assert_eq!(a, b);
        assert!(a.iter().all(|&x| (0.0..1.0).contains(&x)));
        assert_ne!(a, random_unit_matrix(5, 4));
    }

    #[test]
    fn residual_timeline_flags_a_missing_spike() {
        let predicted = [0.0, 0.5];
        let spikes = vec![vec![0.0, 10.0, 20.0, 30.0], vec![5.0, 15.1, 28.0]];
        let tl = residual_timeline(&spikes, &predicted, (0.0, 40.0)).unwrap();
        assert_eq!(tl.len(), 3);
        assert!(tl[0].1 < 1e-9);
        assert!((tl[1].1 - 0.01).abs() < 1e-9);
        // Third span [20, 30) has the oscillator-2 spike at 28 → fraction
        // 0.8, deviation 0.3.
        assert!((tl[2].1 - 0.3).abs() < 1e-9);
    }
}
