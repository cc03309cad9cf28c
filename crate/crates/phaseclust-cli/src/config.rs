//! Strict experiment configuration.
//!
//! Experiments are described by a TOML file with a fixed schema: unknown
//! keys are rejected at every level, and every invariant violation names
//! the offending field. Command-line flags override file values after
//! parsing; validation runs on the merged result.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use phaseclust::oscillator::MorrisLecarParams;
use phaseclust::stability::EpsilonSign;

use crate::error::{schema, Result};

/// Which subcommand a configuration drives. A file's `command` must match
/// the subcommand it is passed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Reduce,
    Catalog,
    Stability,
    Sweep,
    Simulate,
    Perturb,
    ReproduceTable,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Reduce => "reduce",
            CommandKind::Catalog => "catalog",
            CommandKind::Stability => "stability",
            CommandKind::Sweep => "sweep",
            CommandKind::Simulate => "simulate",
            CommandKind::Perturb => "perturb",
            CommandKind::ReproduceTable => "reproduce-table",
        }
    }
}

/// Sign of the global coupling strength ε.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SignKind {
    Positive,
    #[default]
    Negative,
}

impl SignKind {
    pub fn to_sign(self) -> EpsilonSign {
        match self {
            SignKind::Positive => EpsilonSign::Positive,
            SignKind::Negative => EpsilonSign::Negative,
        }
    }
}

/// Coupling graph family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum TopologyKind {
    Global,
    #[default]
    DistanceWeighted,
    Circulant,
}

impl TopologyKind {
    pub fn name(&self) -> &'static str {
        match self {
            TopologyKind::Global => "global",
            TopologyKind::DistanceWeighted => "distance-weighted",
            TopologyKind::Circulant => "circulant",
        }
    }
}

/// Published table identifiers for `reproduce-table`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableId {
    W1,
    W2,
    N140W1,
    N140W2,
}

impl TableId {
    pub fn name(&self) -> &'static str {
        match self {
            TableId::W1 => "w1",
            TableId::W2 => "w2",
            TableId::N140W1 => "n140-w1",
            TableId::N140W2 => "n140-w2",
        }
    }

    /// Parse an identifier as given on the command line. A leading
    /// `table-` prefix and any ASCII case are accepted.
    pub fn parse(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase();
        let norm = norm.strip_prefix("table-").unwrap_or(&norm);
        match norm {
            "w1" => Ok(TableId::W1),
            "w2" => Ok(TableId::W2),
            "n140-w1" => Ok(TableId::N140W1),
            "n140-w2" => Ok(TableId::N140W2),
            _ => Err(schema(format!(
                "table id `{s}` unknown; expected w1, w2, n140-w1, or n140-w2"
            ))),
        }
    }
}

/// Membrane model parameters; defaults are the reference cell.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OscillatorConfig {
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
    /// Synaptic reversal potential.
    pub e_rev: f64,
}

impl Default for OscillatorConfig {
    fn default() -> Self {
        let p = MorrisLecarParams::default();
        Self {
            v_ca: p.v_ca,
            v_k: p.v_k,
            v_l: p.v_l,
            g_ca: p.g_ca,
            g_k: p.g_k,
            g_l: p.g_l,
            phi: p.phi,
            nu1: p.nu1,
            nu2: p.nu2,
            nu3: p.nu3,
            nu4: p.nu4,
            i_app: p.i_app,
            e_rev: 0.0,
        }
    }
}

impl OscillatorConfig {
    pub fn params(&self) -> MorrisLecarParams {
        MorrisLecarParams {
            v_ca: self.v_ca,
            v_k: self.v_k,
            v_l: self.v_l,
            g_ca: self.g_ca,
            g_k: self.g_k,
            g_l: self.g_l,
            phi: self.phi,
            nu1: self.nu1,
            nu2: self.nu2,
            nu3: self.nu3,
            nu4: self.nu4,
            i_app: self.i_app,
        }
    }
}

/// Coupling graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TopologyConfig {
    pub kind: TopologyKind,
    /// Network size N.
    pub n: usize,
    /// First row (w_1 … w_{N−1}) of a circulant weight matrix; required
    /// when `kind = "circulant"`.
    pub weights: Option<Vec<f64>>,
}

impl Default for TopologyConfig {
    fn default() -> Self {
        Self {
            kind: TopologyKind::DistanceWeighted,
            n: 6,
            weights: None,
        }
    }
}

/// Where the interaction function h comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InteractionConfig {
    /// `"compute"` to run the reduction pipeline, or the path of an
    /// `h_fit.json` written by `reduce`.
    pub source: String,
    /// Fourier truncation order when computing.
    pub fit_order: usize,
    /// Interaction-function grid size when computing.
    pub resolution: usize,
}

impl Default for InteractionConfig {
    fn default() -> Self {
        Self {
            source: "compute".to_string(),
            fit_order: 20,
            resolution: 256,
        }
    }
}

impl InteractionConfig {
    pub fn is_computed(&self) -> bool {
        self.source == "compute"
    }
}

/// Transmission delays.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct DelayConfig {
    /// Sweep range start; defaults to 0.
    pub tau_min: f64,
    /// Sweep range end; defaults to one oscillation period.
    pub tau_max: Option<f64>,
    /// Sweep grid cells; defaults to 400 (4096 for `reproduce-table`).
    pub grid: Option<usize>,
    /// Explicit delays for `stability`, `simulate`, and `perturb`.
    pub taus: Option<Vec<f64>>,
}

/// Coupling strength.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CouplingConfig {
    pub epsilon: f64,
    /// Optional strength fan-out for `simulate`.
    pub epsilons: Option<Vec<f64>>,
    pub sign: SignKind,
}

impl Default for CouplingConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.001,
            epsilons: None,
            sign: SignKind::Negative,
        }
    }
}

/// DDE run controls.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationConfig {
    /// Twist index of the state under study. `simulate` and `perturb`
    /// default to q = 0; `stability` and `sweep` default to every state.
    pub q: Option<usize>,
    /// Study an alternating state (`"aabb"` or `"abba"`) instead.
    pub alternating: Option<String>,
    pub duration_periods: f64,
    pub step: f64,
    /// Uniform phase jitter (radians) applied to the initial offsets.
    pub jitter: f64,
    /// Cluster tolerance (fraction of a period) for classification.
    pub classify_tol: f64,
    /// Trailing fraction of the run used for classification.
    pub window_fraction: f64,
    /// Record every k-th integration node into a trajectory CSV; 0 skips.
    pub record_stride: usize,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            q: None,
            alternating: None,
            duration_periods: 100.0,
            step: 1e-2,
            jitter: 0.0,
            classify_tol: 0.05,
            window_fraction: 0.4,
            record_stride: 0,
        }
    }
}

/// Square current pulse for `perturb` (times in periods).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseConfig {
    /// 1-based oscillator ids.
    pub targets: Vec<usize>,
    pub amplitude: f64,
    pub start_periods: f64,
    pub length_periods: f64,
}

/// Table selection for `reproduce-table`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableConfig {
    pub id: TableId,
    /// Restrict to rows with n_min ≤ N ≤ n_max.
    pub n_min: Option<u32>,
    pub n_max: Option<u32>,
}

/// A full experiment description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    #[serde(default)]
    pub seed: u64,
    /// Output directory for artifacts and the run manifest. Not serialized
    /// back into the manifest: the manifest sits inside this directory, and
    /// identical experiments should yield identical manifests wherever they
    /// are written.
    #[serde(default = "default_output", skip_serializing)]
    pub output: PathBuf,
    #[serde(default)]
    pub oscillator: OscillatorConfig,
    #[serde(default)]
    pub topology: TopologyConfig,
    #[serde(default)]
    pub interaction: InteractionConfig,
    #[serde(default)]
    pub delays: DelayConfig,
    #[serde(default)]
    pub coupling: CouplingConfig,
    #[serde(default)]
    pub simulation: SimulationConfig,
    pub pulse: Option<PulseConfig>,
    pub table: Option<TableConfig>,
}

fn default_output() -> PathBuf {
    PathBuf::from("artifacts")
}

impl ExperimentConfig {
    /// Defaults for a flag-only invocation of the given subcommand.
    pub fn defaults(command: CommandKind) -> Self {
        Self {
            command,
            seed: 0,
            output: default_output(),
            oscillator: OscillatorConfig::default(),
            topology: TopologyConfig::default(),
            interaction: InteractionConfig::default(),
            delays: DelayConfig::default(),
            coupling: CouplingConfig::default(),
            simulation: SimulationConfig::default(),
            pulse: None,
            table: None,
        }
    }

    /// Parse a configuration file. Unknown keys and type errors are schema
    /// violations; the TOML error text names the offending field.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| schema(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| schema(format!("{}: {e}", path.display())))
    }

    /// Check every schema invariant that TOML parsing cannot express.
    pub fn validate(&self) -> Result<()> {
        let n = self.topology.n;
        if n < 2 {
            return Err(schema(format!("topology.n = {n}: need at least 2 oscillators")));
        }
        match self.topology.kind {
            TopologyKind::Circulant => match &self.topology.weights {
                None => {
                    return Err(schema(
                        "topology.kind = \"circulant\" requires topology.weights",
                    ))
                }
                Some(w) => {
                    if w.len() != n - 1 {
                        return Err(schema(format!(
                            "topology.weights has {} entries; a circulant row over N = {n} needs {}",
                            w.len(),
                            n - 1
                        )));
                    }
                    if let Some(bad) = w.iter().find(|x| !x.is_finite()) {
                        return Err(schema(format!("topology.weights contains {bad}")));
                    }
                }
            },
            _ => {
                if self.topology.weights.is_some() {
                    return Err(schema(
                        "topology.weights is only meaningful with topology.kind = \"circulant\"",
                    ));
                }
            }
        }

        if !self.interaction.is_computed() {
            let path = Path::new(&self.interaction.source);
            if !path.exists() {
                return Err(schema(format!(
                    "interaction.source file {} does not exist",
                    path.display()
                )));
            }
        }
        if self.interaction.fit_order == 0 {
            return Err(schema("interaction.fit_order must be at least 1"));
        }
        if self.interaction.resolution < 4 * (self.interaction.fit_order + 1) {
            return Err(schema(format!(
                "interaction.resolution = {} too small for fit_order = {}",
                self.interaction.resolution, self.interaction.fit_order
            )));
        }

        if !self.delays.tau_min.is_finite() || self.delays.tau_min < 0.0 {
            return Err(schema(format!(
                "delays.tau_min = {} must be finite and non-negative",
                self.delays.tau_min
            )));
        }
        if let Some(tau_max) = self.delays.tau_max {
            if !(tau_max > self.delays.tau_min) {
                return Err(schema(format!(
                    "delays.tau_max = {tau_max} must exceed delays.tau_min = {}",
                    self.delays.tau_min
                )));
            }
        }
        if let Some(grid) = self.delays.grid {
            if grid < 2 {
                return Err(schema(format!("delays.grid = {grid}: need at least 2 cells")));
            }
        }
        if let Some(taus) = &self.delays.taus {
            if taus.is_empty() {
                return Err(schema("delays.taus is empty"));
            }
            if let Some(bad) = taus.iter().find(|t| !t.is_finite() || **t < 0.0) {
                return Err(schema(format!("delays.taus contains {bad}")));
            }
        }

        if !self.coupling.epsilon.is_finite() || self.coupling.epsilon <= 0.0 {
            return Err(schema(format!(
                "coupling.epsilon = {} must be finite and positive",
                self.coupling.epsilon
            )));
        }
        if let Some(eps) = &self.coupling.epsilons {
            if eps.is_empty() {
                return Err(schema("coupling.epsilons is empty"));
            }
            if let Some(bad) = eps.iter().find(|e| !e.is_finite() || **e <= 0.0) {
                return Err(schema(format!("coupling.epsilons contains {bad}")));
            }
        }

        if let Some(q) = self.simulation.q {
            if q >= n {
                return Err(schema(format!(
                    "simulation.q = {q} out of range for N = {n} (need 0 ≤ q < N)"
                )));
            }
            if self.simulation.alternating.is_some() {
                return Err(schema(
                    "simulation.q and simulation.alternating are mutually exclusive",
                ));
            }
        }
        if let Some(v) = &self.simulation.alternating {
            if v != "aabb" && v != "abba" {
                return Err(schema(format!(
                    "simulation.alternating = \"{v}\": expected \"aabb\" or \"abba\""
                )));
            }
        }
        if !(self.simulation.duration_periods > 0.0) {
            return Err(schema(format!(
                "simulation.duration_periods = {} must be positive",
                self.simulation.duration_periods
            )));
        }
        if !(self.simulation.step > 0.0) {
            return Err(schema(format!(
                "simulation.step = {} must be positive",
                self.simulation.step
            )));
        }
        if self.simulation.jitter < 0.0 {
            return Err(schema(format!(
                "simulation.jitter = {} must be non-negative",
                self.simulation.jitter
            )));
        }
        if !(self.simulation.classify_tol > 0.0 && self.simulation.classify_tol < 0.5) {
            return Err(schema(format!(
                "simulation.classify_tol = {} must lie in (0, 0.5)",
                self.simulation.classify_tol
            )));
        }
        if !(self.simulation.window_fraction > 0.0 && self.simulation.window_fraction < 1.0) {
            return Err(schema(format!(
                "simulation.window_fraction = {} must lie in (0, 1)",
                self.simulation.window_fraction
            )));
        }

        if let Some(p) = &self.pulse {
            if p.targets.is_empty() {
                return Err(schema("pulse.targets is empty"));
            }
            if let Some(bad) = p.targets.iter().find(|t| **t < 1 || **t > n) {
                return Err(schema(format!(
                    "pulse.targets contains {bad}; ids are 1-based and bounded by N = {n}"
                )));
            }
            if !p.amplitude.is_finite() {
                return Err(schema(format!("pulse.amplitude = {} must be finite", p.amplitude)));
            }
            if !(p.start_periods >= 0.0) {
                return Err(schema(format!(
                    "pulse.start_periods = {} must be non-negative",
                    p.start_periods
                )));
            }
            if !(p.length_periods > 0.0) {
                return Err(schema(format!(
                    "pulse.length_periods = {} must be positive",
                    p.length_periods
                )));
            }
            if p.start_periods + p.length_periods >= self.simulation.duration_periods {
                return Err(schema(format!(
                    "pulse.start_periods + pulse.length_periods = {} reaches past \
                     simulation.duration_periods = {}",
                    p.start_periods + p.length_periods,
                    self.simulation.duration_periods
                )));
            }
        }

        if let Some(t) = &self.table {
            if let (Some(lo), Some(hi)) = (t.n_min, t.n_max) {
                if lo > hi {
                    return Err(schema(format!(
                        "table.n_min = {lo} exceeds table.n_max = {hi}"
                    )));
                }
            }
        }

        Ok(())
    }
}
