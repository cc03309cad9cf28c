//! Python bindings for the phaseclust library.
//!
//! The module exposes the interaction function (published coefficients or
//! the full reduction pipeline), the cluster-state catalog, delay sweeps,
//! and a seeded DDE run, mirroring the Rust API closely enough that the
//! two can be cross-checked from Python.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use phaseclust::catalog::{enumerate_symmetric, twist_solution};
use phaseclust::oscillator::{MorrisLecar, MorrisLecarParams};
use phaseclust::reduction::{find_limit_cycle, reduce, CycleOptions, ReductionOptions};
use phaseclust::reference;
use phaseclust::simulate::{
    classify_clusters, identify_pattern, integrate, jitter_offsets, Delay, InitialHistory,
    IntegrationOptions, NetworkSpec,
};
use phaseclust::stability::{
    sweep_homogeneous, sweep_twist, EpsilonSign, SweepOptions, DEFAULT_MARGIN,
};
use phaseclust::topology::CouplingTopology;
use phaseclust::FourierSeries;

fn value_err(e: phaseclust::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_sign(sign: &str) -> PyResult<EpsilonSign> {
    match sign {
        "negative" => Ok(EpsilonSign::Negative),
        "positive" => Ok(EpsilonSign::Positive),
        other => Err(PyValueError::new_err(format!(
            "sign must be \"negative\" or \"positive\", not {other:?}"
        ))),
    }
}

fn build_topology(n_osc: usize, kind: &str, weights: Option<Vec<f64>>) -> PyResult<CouplingTopology> {
    match (kind, weights) {
        ("distance-weighted", None) => CouplingTopology::distance_weighted(n_osc).map_err(value_err),
        ("global", None) => CouplingTopology::global(n_osc).map_err(value_err),
        ("circulant", Some(w)) => CouplingTopology::from_circulant(n_osc, &w).map_err(value_err),
        ("circulant", None) => Err(PyValueError::new_err(
            "circulant topologies need a weights list of length n_osc - 1",
        )),
        (other, _) => Err(PyValueError::new_err(format!(
            "topology must be \"distance-weighted\", \"global\", or \"circulant\", not {other:?}"
        ))),
    }
}

/// The interaction function h of the phase model, with the frequency of
/// the oscillation it was derived from.
#[pyclass]
struct Interaction {
    series: FourierSeries,
    omega: f64,
    period: f64,
}

#[pymethods]
impl Interaction {
    /// The published ninth-order Fourier coefficients.
    #[staticmethod]
    fn published() -> Self {
        Interaction {
            series: reference::reference_interaction(),
            omega: reference::REFERENCE_OMEGA,
            period: reference::REFERENCE_PERIOD,
        }
    }

    /// Run the full reduction pipeline on the reference cell.
    #[staticmethod]
    #[pyo3(signature = (fit_order = 20, resolution = 256))]
    fn compute(fit_order: usize, resolution: usize) -> PyResult<Self> {
        let sys = MorrisLecar::new(MorrisLecarParams::default(), 0.0);
        let opts = ReductionOptions {
            h_resolution: resolution,
            fit_order,
            ..ReductionOptions::default()
        };
        let red = reduce(&sys, &MorrisLecar::default_initial_state(), &opts).map_err(value_err)?;
        Ok(Interaction {
            omega: red.cycle.omega(),
            period: red.cycle.period(),
            series: red.h_fit.series,
        })
    }

    /// Build from explicit coefficients (e.g. loaded from an h_fit.json).
    #[new]
    fn new(a0: f64, a: Vec<f64>, b: Vec<f64>, omega: f64) -> PyResult<Self> {
        if !(omega > 0.0) {
            return Err(PyValueError::new_err("omega must be positive"));
        }
        let series = FourierSeries::new(a0, a, b).map_err(value_err)?;
        Ok(Interaction {
            series,
            omega,
            period: std::f64::consts::TAU / omega,
        })
    }

    #[getter]
    fn omega(&self) -> f64 {
        self.omega
    }

    #[getter]
    fn period(&self) -> f64 {
        self.period
    }

    #[getter]
    fn order(&self) -> usize {
        self.series.order()
    }

    /// Coefficients as (a0, a, b).
    fn coefficients(&self) -> (f64, Vec<f64>, Vec<f64>) {
        (
            self.series.a0(),
            self.series.a().to_vec(),
            self.series.b().to_vec(),
        )
    }

    fn eval(&self, theta: f64) -> f64 {
        self.series.eval(theta)
    }

    fn derivative(&self, theta: f64) -> f64 {
        self.series.eval_derivative(theta)
    }

    fn __repr__(&self) -> String {
        format!(
            "Interaction(order={}, omega={:.6}, period={:.4})",
            self.series.order(),
            self.omega,
            self.period
        )
    }
}

/// The symmetric cluster states of an N-oscillator ring, as dicts.
#[pyfunction]
fn catalog(py: Python<'_>, n_osc: usize) -> PyResult<Vec<Py<PyDict>>> {
    let states = enumerate_symmetric(n_osc).map_err(value_err)?;
    let mut out = Vec::with_capacity(states.len());
    for sol in states {
        let d = PyDict::new(py);
        d.set_item("q", sol.q())?;
        d.set_item("label", sol.label())?;
        d.set_item("n_clusters", sol.n_clusters())?;
        d.set_item("psi", sol.psi().radians())?;
        d.set_item("phase_offsets", sol.phase_offsets())?;
        d.set_item("firing_fractions", sol.firing_fractions())?;
        d.set_item("clusters", sol.clusters().to_vec())?;
        d.set_item("ordering", sol.ordering().to_vec())?;
        out.push(d.into());
    }
    Ok(out)
}

fn sweep_opts(tau_max: f64, grid: usize) -> SweepOptions {
    SweepOptions {
        tau_min: 0.0,
        tau_max,
        grid,
        bisection_tol: 1e-4,
        max_bisections: 60,
        margin: DEFAULT_MARGIN,
    }
}

/// Delay intervals on which the twist state q is stable.
#[pyfunction]
#[pyo3(signature = (h, n_osc, q, topology = "distance-weighted", weights = None,
                    tau_max = None, grid = 400, sign = "negative"))]
#[allow(clippy::too_many_arguments)]
fn twist_intervals(
    h: &Interaction,
    n_osc: usize,
    q: usize,
    topology: &str,
    weights: Option<Vec<f64>>,
    tau_max: Option<f64>,
    grid: usize,
    sign: &str,
) -> PyResult<Vec<(f64, f64)>> {
    let top = build_topology(n_osc, topology, weights)?;
    let sol = twist_solution(n_osc, q).map_err(value_err)?;
    let opts = sweep_opts(tau_max.unwrap_or(h.period), grid);
    let res = sweep_twist(&top, &h.series, &sol, h.omega, parse_sign(sign)?, &opts)
        .map_err(value_err)?;
    Ok(res.intervals.iter().map(|iv| (iv.start, iv.end)).collect())
}

/// Delay intervals on which the n-cluster state of the homogeneous network
/// is stable.
#[pyfunction]
#[pyo3(signature = (h, n_osc, n_clusters, tau_max = None, grid = 400, sign = "negative"))]
fn homogeneous_intervals(
    h: &Interaction,
    n_osc: usize,
    n_clusters: usize,
    tau_max: Option<f64>,
    grid: usize,
    sign: &str,
) -> PyResult<Vec<(f64, f64)>> {
    let opts = sweep_opts(tau_max.unwrap_or(h.period), grid);
    let res = sweep_homogeneous(
        n_osc,
        n_clusters,
        &h.series,
        h.omega,
        parse_sign(sign)?,
        &opts,
    )
    .map_err(value_err)?;
    Ok(res.intervals.iter().map(|iv| (iv.start, iv.end)).collect())
}

/// Integrate the delay-coupled network from a (jittered) twist state and
/// classify the trailing window of the spike trains.
#[pyfunction]
#[pyo3(signature = (n_osc, tau, q = 0, epsilon = 0.001, duration_periods = 50.0,
                    jitter = 0.0, seed = 0, topology = "distance-weighted", weights = None,
                    tol = 0.05))]
#[allow(clippy::too_many_arguments)]
fn simulate_clusters(
    py: Python<'_>,
    n_osc: usize,
    tau: f64,
    q: usize,
    epsilon: f64,
    duration_periods: f64,
    jitter: f64,
    seed: u64,
    topology: &str,
    weights: Option<Vec<f64>>,
    tol: f64,
) -> PyResult<Py<PyDict>> {
    let top = build_topology(n_osc, topology, weights)?;
    let sys = MorrisLecar::new(MorrisLecarParams::default(), 0.0);
    let cycle = find_limit_cycle(
        &sys,
        &MorrisLecar::default_initial_state(),
        &CycleOptions::default(),
    )
    .map_err(value_err)?;
    let period = cycle.period();

    let sol = twist_solution(n_osc, q).map_err(value_err)?;
    let mut offsets = sol.phase_offsets();
    if jitter > 0.0 {
        jitter_offsets(&mut offsets, jitter, seed);
    }

    let spec = NetworkSpec {
        oscillator: sys,
        topology: top,
        weights: None,
        epsilon,
        delay: Delay::Uniform(tau),
    };
    let history = InitialHistory::from_offsets(cycle, offsets);
    let duration = duration_periods * period;
    let opts = IntegrationOptions::for_duration(duration);
    let result = integrate(&spec, &history, &opts).map_err(value_err)?;

    let window = (0.6 * duration, duration);
    let measured = classify_clusters(&result.spikes, window, tol).map_err(value_err)?;
    let identified = identify_pattern(&measured.fractions, tol);

    let d = PyDict::new(py);
    d.set_item("period", measured.period)?;
    d.set_item("fractions", measured.fractions.clone())?;
    d.set_item("clusters", measured.clusters.clone())?;
    match identified {
        Some(m) => {
            d.set_item("label", m.label)?;
            d.set_item("n_clusters", m.n_clusters)?;
            d.set_item("residual", m.residual)?;
        }
        None => d.set_item("label", py.None())?,
    }
    Ok(d.into())
}

#[pymodule]
fn phaseclust_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Interaction>()?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(twist_intervals, m)?)?;
    m.add_function(wrap_pyfunction!(homogeneous_intervals, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_clusters, m)?)?;
    m.add("REFERENCE_PERIOD", reference::REFERENCE_PERIOD)?;
    m.add("REFERENCE_OMEGA", reference::REFERENCE_OMEGA)?;
    Ok(())
}
