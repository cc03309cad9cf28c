//! Existence and stability of symmetric cluster states in delay-coupled
//! oscillator networks.
//!
//! The crate reduces a network of identical limit-cycle oscillators with
//! delayed, weak pairwise coupling to a phase model on the torus: each
//! oscillator carries a phase, interactions enter through a single 2π-periodic
//! interaction function H evaluated at phase differences shifted by the delay
//! phase lag η = Ωτ, and symmetric cluster states become fixed points of the
//! phase-difference dynamics. The pipeline is
//!
//! 1. [`reduction`] — find the limit cycle of the uncoupled oscillator,
//!    solve the adjoint problem for its phase response, and compute H;
//! 2. [`catalog`] — enumerate the symmetric (rotating-block) cluster states a
//!    coupling topology supports, including alternating states that exist
//!    only for special weight patterns;
//! 3. [`stability`] — evaluate the phase-model Jacobian spectrum of each
//!    state via circulant closed forms (or dense assembly for arbitrary
//!    weights) and sweep the delay to find stability windows;
//! 4. [`simulate`] — integrate the full delay-differential network to
//!    confirm phase-model predictions and run perturbation experiments.
//!
//! [`fourier`] and [`numerics`] provide the underlying series arithmetic and
//! integration kernels, [`oscillator`] the concrete single-cell models, and
//! [`reference`] published interaction-function coefficients and stability
//! intervals used as regression anchors.

pub mod catalog;
pub mod error;
pub mod fourier;
pub mod numerics;
pub mod oscillator;
pub mod reduction;
pub mod reference;
pub mod simulate;
pub mod stability;
pub mod topology;

pub use error::{Error, Result};
pub use fourier::{FourierFit, FourierSeries};
pub use oscillator::{MorrisLecar, MorrisLecarParams, OscillatorSystem};
