//! Probabilistically shaped 16QAM coherent-state ensemble.
//!
//! Sixteen amplitudes on the square grid `scale·{±1, ±3} × {±1, ±3}` carry
//! Maxwell-Boltzmann weights `p_k ∝ exp(−ν|α_k|²)`. The amplitude scale is
//! chosen so the per-quadrature modulation variance `V_A = 2·Σ p_k |α_k|²`
//! (shot-noise units) hits a requested target; because the weights depend on
//! the scaled amplitudes, scale and probabilities are solved jointly.
//!
//! Index convention (fixed here, used everywhere downstream including the
//! key map): `k = 4·row + col` with `Re(α̃_k) = {+3,+1,−1,−3}[col]` and
//! `Im(α̃_k) = {+3,+1,−1,−3}[row]`.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};

/// Per-axis coordinates of the unit grid, in label order.
pub const GRID_COORDS: [f64; 4] = [3.0, 1.0, -1.0, -3.0];

/// Number of constellation points.
pub const NUM_STATES: usize = 16;

const VA_TOL: f64 = 1e-10;
const MAX_BISECT: usize = 200;

/// Unit-grid amplitude for label `k`.
pub fn unit_amplitude(k: usize) -> Complex64 {
    Complex64::new(GRID_COORDS[k % 4], GRID_COORDS[k / 4])
}

/// The prepared ensemble: amplitudes in natural units plus their weights.
#[derive(Debug, Clone)]
pub struct Constellation {
    amplitudes: Vec<Complex64>,
    probabilities: Vec<f64>,
    nu: f64,
    scale: f64,
}

/// Alice's sampled transmit string with ground-truth labels.
#[derive(Debug, Clone)]
pub struct LabeledSymbols {
    pub labels: Vec<u8>,
    pub values: Vec<Complex64>,
    pub seed: u64,
}

fn mb_probabilities(nu: f64, scale: f64) -> Vec<f64> {
    let weights: Vec<f64> = (0..NUM_STATES)
        .map(|k| (-nu * scale * scale * unit_amplitude(k).norm_sqr()).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / z).collect()
}

fn va_at_scale(nu: f64, scale: f64) -> f64 {
    let p = mb_probabilities(nu, scale);
    2.0 * scale
        * scale
        * p.iter()
            .enumerate()
            .map(|(k, pk)| pk * unit_amplitude(k).norm_sqr())
            .sum::<f64>()
}

impl Constellation {
    /// Builds the shaped ensemble with `V_A = va_target` (SNU).
    ///
    /// Bisects on the amplitude scale, refreshing the scale-dependent
    /// Maxwell-Boltzmann weights at every trial point, until
    /// `|V_A − target| < 1e-10`.
    pub fn build(nu: f64, va_target: f64) -> Result<Self> {
        if nu < 0.0 || !nu.is_finite() {
            return Err(Error::invalid(format!("nu must be >= 0, got {nu}")));
        }
        if va_target <= 0.0 || !va_target.is_finite() {
            return Err(Error::invalid(format!(
                "va_target must be > 0, got {va_target}"
            )));
        }

        let mut lo = 0.0f64;
        let mut hi = (va_target / 4.0).sqrt().max(1e-3);
        let mut grow = 0;
        while va_at_scale(nu, hi) < va_target {
            hi *= 2.0;
            grow += 1;
            if grow > 200 {
                return Err(Error::numerics(
                    "constellation scale",
                    "failed to bracket the target modulation variance",
                ));
            }
        }

        let mut scale = 0.5 * (lo + hi);
        let mut converged = false;
        for _ in 0..MAX_BISECT {
            scale = 0.5 * (lo + hi);
            let va = va_at_scale(nu, scale);
            if (va - va_target).abs() < VA_TOL {
                converged = true;
                break;
            }
            if va < va_target {
                lo = scale;
            } else {
                hi = scale;
            }
        }
        if !converged {
            let residual = (va_at_scale(nu, scale) - va_target).abs();
            return Err(Error::numerics(
                "constellation scale",
                format!("fixed point not converged after {MAX_BISECT} iterations, residual {residual:.3e}"),
            ));
        }

        Ok(Self::with_scale(nu, scale))
    }

    /// Ensemble at an explicit scale with the matching Maxwell-Boltzmann
    /// weights (no variance targeting).
    pub fn with_scale(nu: f64, scale: f64) -> Self {
        let probabilities = mb_probabilities(nu, scale);
        let amplitudes = (0..NUM_STATES)
            .map(|k| unit_amplitude(k) * scale)
            .collect();
        Self {
            amplitudes,
            probabilities,
            nu,
            scale,
        }
    }

    /// Ensemble with caller-supplied weights on the scaled grid. Weights
    /// must sum to one; intended for tests and degenerate configurations.
    pub fn with_probabilities(nu: f64, scale: f64, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.len() != NUM_STATES {
            return Err(Error::invalid("expected 16 probabilities"));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "probabilities sum to {sum}, expected 1 within 1e-12"
            )));
        }
        if probabilities.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::invalid("probabilities must lie in [0, 1]"));
        }
        let amplitudes = (0..NUM_STATES)
            .map(|k| unit_amplitude(k) * scale)
            .collect();
        Ok(Self {
            amplitudes,
            probabilities,
            nu,
            scale,
        })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Per-quadrature modulation variance `V_A = 2·Σ p_k |α_k|²` in SNU.
    pub fn modulation_variance(&self) -> f64 {
        2.0 * self
            .probabilities
            .iter()
            .zip(&self.amplitudes)
            .map(|(p, a)| p * a.norm_sqr())
            .sum::<f64>()
    }

    /// Mean photon number `Σ p_k |α_k|²` of the prepared ensemble.
    pub fn mean_photon_number(&self) -> f64 {
        0.5 * self.modulation_variance()
    }

    /// Draws `n` i.i.d. labels from the shaping distribution.
    /// Deterministic for a fixed seed.
    pub fn sample_symbols(&self, n: usize, seed: u64) -> LabeledSymbols {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut cdf = [0.0f64; NUM_STATES];
        let mut acc = 0.0;
        for (k, p) in self.probabilities.iter().enumerate() {
            acc += p;
            cdf[k] = acc;
        }
        cdf[NUM_STATES - 1] = 1.0;

        let mut labels = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            let u: f64 = rng.random();
            let k = cdf.iter().position(|&c| u < c).unwrap_or(NUM_STATES - 1);
            labels.push(k as u8);
            values.push(self.amplitudes[k]);
        }
        LabeledSymbols {
            labels,
            values,
            seed,
        }
    }

    /// Structured-text record (nu, scale, probabilities) for config echo.
    pub fn to_record(&self) -> String {
        let mut s = format!("nu = {:.17e}\nscale = {:.17e}\n", self.nu, self.scale);
        s.push_str("probabilities = [\n");
        for p in &self.probabilities {
            s.push_str(&format!("  {:.17e},\n", p));
        }
        s.push_str("]\n");
        s
    }
}
