//! Quantum channel and receiver models at two fidelities.
//!
//! The symbol-level path applies the additive-Gaussian heterodyne model
//! directly: per quadrature (SNU)
//!
//! ```text
//! y = √(0.5 η_d T) x + δ,   Var δ = T η_d ξ/2 + 1 + ν_el
//! ```
//!
//! The waveform path ([`waveform`]) synthesizes pulse-shaped frames with
//! interleaved training, frequency offset and laser phase noise, so the DSP
//! chain can be exercised end to end. Receiver noise is injected after link
//! loss by [`waveform::detect`], keeping the loss/noise composition
//! physical.

pub mod waveform;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};

use crate::constellation::LabeledSymbols;
use crate::error::{Error, Result};
use crate::fock::DetectorParams;

pub use waveform::{FrameConfig, WaveformBlock};

/// Fiber/channel description. `transmittance` is always kept consistent
/// with `10^(−fiber_loss_db_per_km · length_km / 10)` when built from a
/// length.
#[derive(Debug, Clone, Copy)]
pub struct ChannelParams {
    pub transmittance: f64,
    /// Excess noise ξ, channel-input referred, SNU.
    pub xi: f64,
    pub fiber_loss_db_per_km: f64,
    pub length_km: f64,
    /// Static residual polarization/IQ gain applied by [`apply_link`];
    /// identity when 1 + 0i.
    pub residual_rotation: Complex64,
}

impl ChannelParams {
    /// Channel from fiber length and loss coefficient (dB/km).
    pub fn from_length(fiber_loss_db_per_km: f64, length_km: f64, xi: f64) -> Result<Self> {
        if length_km < 0.0 || fiber_loss_db_per_km < 0.0 {
            return Err(Error::invalid("fiber length and loss must be >= 0"));
        }
        if xi < 0.0 {
            return Err(Error::invalid(format!("xi must be >= 0, got {xi}")));
        }
        let transmittance = 10f64.powf(-fiber_loss_db_per_km * length_km / 10.0);
        Ok(Self {
            transmittance,
            xi,
            fiber_loss_db_per_km,
            length_km,
            residual_rotation: Complex64::new(1.0, 0.0),
        })
    }

    /// Channel from an explicit transmittance; length is back-filled from
    /// the loss coefficient so the invariant T = 10^(−αL/10) holds.
    pub fn from_transmittance(transmittance: f64, fiber_loss_db_per_km: f64, xi: f64) -> Result<Self> {
        if !(transmittance > 0.0 && transmittance <= 1.0) {
            return Err(Error::invalid(format!(
                "transmittance must be in (0,1], got {transmittance}"
            )));
        }
        if xi < 0.0 {
            return Err(Error::invalid(format!("xi must be >= 0, got {xi}")));
        }
        let length_km = if fiber_loss_db_per_km > 0.0 {
            -10.0 * transmittance.log10() / fiber_loss_db_per_km
        } else {
            0.0
        };
        Ok(Self {
            transmittance,
            xi,
            fiber_loss_db_per_km,
            length_km,
            residual_rotation: Complex64::new(1.0, 0.0),
        })
    }

    pub fn with_residual_rotation(mut self, r: Complex64) -> Self {
        self.residual_rotation = r;
        self
    }

    /// Per-quadrature noise variance at the receiver output (SNU).
    pub fn output_noise_variance(&self, det: &DetectorParams) -> f64 {
        self.transmittance * det.eta_d * self.xi / 2.0 + 1.0 + det.nu_el
    }
}

/// Heterodyne outcomes for a symbol string, one complex sample per symbol.
///
/// The output is in SNU: `Re` carries the Q quadrature, `Im` the P
/// quadrature, with mean `√(2 η_d T)·α` and per-quadrature noise variance
/// `1 + ν_el + T η_d ξ/2`. Deterministic for a fixed seed.
pub fn transmit_symbols(
    x: &LabeledSymbols,
    ch: &ChannelParams,
    det: &DetectorParams,
    seed: u64,
) -> Vec<Complex64> {
    let gain = (2.0 * det.eta_d * ch.transmittance).sqrt();
    let sigma = ch.output_noise_variance(det).sqrt();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    x.values
        .iter()
        .map(|alpha| {
            let nq: f64 = normal.sample(&mut rng);
            let np: f64 = normal.sample(&mut rng);
            Complex64::new(
                gain * alpha.re + sigma * nq,
                gain * alpha.im + sigma * np,
            )
        })
        .collect()
}

/// SNU outcome → natural-units point on Bob's phase plane (key-map input).
pub fn snu_to_nu(y: Complex64) -> Complex64 {
    y / std::f64::consts::SQRT_2
}
