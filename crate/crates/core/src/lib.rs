//! Discrete-modulated CV-QKD workbench.
//!
//! Simulates and verifies a probabilistically shaped 16QAM coherent-state
//! protocol with a local local oscillator end to end: source shaping,
//! trusted-noise heterodyne channel at symbol and waveform fidelity, the
//! offline DSP recovery chain, channel parameter estimation, and an
//! SDP-based asymptotic secret-key-rate computation with post-selection.
//!
//! Layout follows the processing chain:
//!
//! - [`constellation`] — shaped 16QAM ensemble construction and sampling
//! - [`fock`] — truncated Fock-basis operators: coherent states, the noisy
//!   heterodyne POVM, key-map region operators, quadrature observables
//! - [`channel`] — symbol-level AWGN heterodyne model and waveform-level
//!   transceiver (pulse shaping, frames, frequency offset, phase noise)
//! - [`dsp`] — offline recovery: offset estimation, carrier recovery,
//!   matched filtering, training superposition, variable-step LMS equalizer
//! - [`estimation`] — shot-noise calibration, T/ξ estimators, SDP constraint
//!   statistics under the Gaussian-channel assumption and in general
//! - [`keyrate`] — Frank-Wolfe minimization of the relative-entropy
//!   objective over the constraint set with a certified lower bound,
//!   error-correction leakage, and rate/sweep drivers
//! - [`oracle`] — independent brute-force reference implementations used by
//!   the verification suite

pub mod channel;
pub mod constellation;
pub mod dsp;
pub mod error;
pub mod estimation;
pub mod fock;
pub mod io;
pub mod keyrate;
pub mod linalg;
pub mod oracle;

pub use error::{Error, Result};
