//! Truncated Fock-basis numerics for the noisy heterodyne receiver.
//!
//! The detector with efficiency `η_d` and electronic noise `ν_el` is the
//! POVM density
//!
//! ```text
//! G_ζ = (1/(η_d π)) D(ζ/√η_d) ρ_th(n̄_d) D†(ζ/√η_d),   n̄_d = (1−η_d+ν_el)/η_d
//! ```
//!
//! Region operators integrate `G_ζ` over key-map rectangles. In the photon
//! number basis each entry reduces to a finite sum over separable Gaussian
//! moment integrals (binomial expansion of `(x−iy)^{m−n}` and of the
//! generalized Laguerre polynomial), which this module evaluates in closed
//! form; every entry is exact to machine rounding. An independent quadrature
//! oracle lives in [`crate::oracle`].

use num_complex::Complex64;
use statrs::function::erf::erf;

use crate::error::{Error, Result};
use crate::linalg::{hermitize, identity, CMat, CVec};

/// Trusted receiver parameters and the Fock cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorParams {
    /// Detection efficiency η_d ∈ (0, 1].
    pub eta_d: f64,
    /// Electronic noise ν_el ≥ 0 (SNU).
    pub nu_el: f64,
    /// Photon-number cutoff N_c; operators act on N_c + 1 Fock levels.
    pub n_cutoff: usize,
}

impl DetectorParams {
    pub fn new(eta_d: f64, nu_el: f64, n_cutoff: usize) -> Result<Self> {
        if !(eta_d > 0.0 && eta_d <= 1.0) {
            return Err(Error::invalid(format!("eta_d must be in (0,1], got {eta_d}")));
        }
        if nu_el < 0.0 || !nu_el.is_finite() {
            return Err(Error::invalid(format!("nu_el must be >= 0, got {nu_el}")));
        }
        if n_cutoff < 1 {
            return Err(Error::invalid("n_cutoff must be >= 1"));
        }
        Ok(Self {
            eta_d,
            nu_el,
            n_cutoff,
        })
    }

    /// Hilbert-space dimension N_c + 1.
    pub fn dim(&self) -> usize {
        self.n_cutoff + 1
    }

    /// Mean thermal photon number of the detector noise mode.
    pub fn nbar_d(&self) -> f64 {
        (1.0 - self.eta_d + self.nu_el) / self.eta_d
    }
}

fn ln_factorial(n: usize) -> f64 {
    statrs::function::gamma::ln_gamma(n as f64 + 1.0)
}

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp()
}

/// Generalized Laguerre polynomial L_n^{(k)}(x) by the three-term recurrence.
pub fn laguerre(n: usize, k: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut lm1 = 1.0;
    let mut l = 1.0 + k - x;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + k - x) * l - (jf + k) * lm1) / (jf + 1.0);
        lm1 = l;
        l = next;
    }
    l
}

/// Coherent state |α⟩ truncated to `dim` Fock levels.
pub fn coherent_state(alpha: Complex64, dim: usize) -> CVec {
    let mut v = CVec::zeros(dim);
    if alpha.norm() == 0.0 {
        v[0] = Complex64::new(1.0, 0.0);
        return v;
    }
    let log_norm = -0.5 * alpha.norm_sqr();
    let ln_r = alpha.norm().ln();
    let theta = alpha.arg();
    for n in 0..dim {
        let mag = (log_norm + n as f64 * ln_r - 0.5 * ln_factorial(n)).exp();
        v[n] = Complex64::from_polar(mag, theta * n as f64);
    }
    v
}

/// Norm lost to the cutoff: `1 − ⟨α|α⟩_truncated`.
pub fn coherent_truncation_deficit(alpha: Complex64, dim: usize) -> f64 {
    let v = coherent_state(alpha, dim);
    (1.0 - v.iter().map(|z| z.norm_sqr()).sum::<f64>()).max(0.0)
}

/// Closed-form overlap ⟨β|α⟩ = exp(−|α|²/2 − |β|²/2 + β̄α).
pub fn coherent_overlap(beta: Complex64, alpha: Complex64) -> Complex64 {
    (-0.5 * alpha.norm_sqr() - 0.5 * beta.norm_sqr() + beta.conj() * alpha).exp()
}

/// Thermal state with mean photon number `nbar`, truncated.
pub fn thermal_state(nbar: f64, dim: usize) -> CMat {
    let mut m = CMat::zeros((dim, dim));
    if nbar <= 0.0 {
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        return m;
    }
    let ratio = nbar / (1.0 + nbar);
    let mut w = 1.0 / (1.0 + nbar);
    for n in 0..dim {
        m[(n, n)] = Complex64::new(w, 0.0);
        w *= ratio;
    }
    m
}

/// Displacement operator matrix ⟨m|D(γ)|n⟩ (closed Laguerre form).
pub fn displacement_matrix(gamma: Complex64, dim: usize) -> CMat {
    let mut d = CMat::zeros((dim, dim));
    let g2 = gamma.norm_sqr();
    let pref = (-0.5 * g2).exp();
    for m in 0..dim {
        for n in 0..dim {
            let entry = if m >= n {
                let k = m - n;
                let amp = (0.5 * (ln_factorial(n) - ln_factorial(m))).exp();
                gamma.powu(k as u32) * amp * pref * laguerre(n, k as f64, g2)
            } else {
                let k = n - m;
                let amp = (0.5 * (ln_factorial(m) - ln_factorial(n))).exp();
                (-gamma.conj()).powu(k as u32) * amp * pref * laguerre(m, k as f64, g2)
            };
            d[(m, n)] = entry;
        }
    }
    d
}

/// Displaced thermal state D(γ) ρ_th(n̄) D†(γ) in the number basis.
pub fn displaced_thermal(gamma: Complex64, nbar: f64, dim: usize) -> CMat {
    let mut m = CMat::zeros((dim, dim));
    if nbar < 1e-14 {
        // Coherent-state projector limit.
        let v = coherent_state(gamma, dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        return m;
    }
    let g2 = gamma.norm_sqr();
    let lag_arg = -g2 / (nbar * (1.0 + nbar));
    let pref = (-g2 / (1.0 + nbar)).exp();
    for n in 0..dim {
        let diag = pref * (n as f64 * (nbar / (1.0 + nbar)).ln() - (1.0 + nbar).ln()).exp();
        for mm in n..dim {
            let d = mm - n;
            let amp = (0.5 * (ln_factorial(n) - ln_factorial(mm))).exp();
            let off = (gamma.conj() / (1.0 + nbar)).powu(d as u32);
            let val = off * diag * amp * laguerre(n, d as f64, lag_arg);
            m[(n, mm)] = val;
            m[(mm, n)] = val.conj();
        }
    }
    m
}

/// Noisy heterodyne POVM density G_ζ at outcome ζ (natural units).
pub fn povm_density(zeta: Complex64, det: &DetectorParams) -> CMat {
    let scale = 1.0 / (det.eta_d * std::f64::consts::PI);
    let mut g = displaced_thermal(zeta / det.eta_d.sqrt(), det.nbar_d(), det.dim());
    g.mapv_inplace(|z| z * scale);
    g
}

/// Gaussian moment integrals `I_p = ∫_lo^hi x^p e^{−a x²} dx` for p = 0..=pmax.
/// Endpoints may be ±∞.
pub(crate) fn gauss_moments(a: f64, lo: f64, hi: f64, pmax: usize) -> Vec<f64> {
    let boundary = |x: f64, q: i32| -> f64 {
        if !x.is_finite() {
            0.0
        } else if q == 0 {
            (-a * x * x).exp()
        } else {
            x.powi(q) * (-a * x * x).exp()
        }
    };
    let sq = a.sqrt();
    let erf_at = |x: f64| -> f64 {
        if x == f64::INFINITY {
            1.0
        } else if x == f64::NEG_INFINITY {
            -1.0
        } else {
            erf(sq * x)
        }
    };
    let mut out = Vec::with_capacity(pmax + 1);
    let i0 = 0.5 * (std::f64::consts::PI / a).sqrt() * (erf_at(hi) - erf_at(lo));
    out.push(i0);
    if pmax >= 1 {
        out.push((boundary(lo, 0) - boundary(hi, 0)) / (2.0 * a));
    }
    for p in 2..=pmax {
        let b = boundary(lo, p as i32 - 1) - boundary(hi, p as i32 - 1);
        let val = (b + (p as f64 - 1.0) * out[p - 2]) / (2.0 * a);
        out.push(val);
    }
    out
}

/// Region operator `R = ∫∫ G_{x+iy} dy dx` over the rectangle
/// `[xlow, xup] × [ylow, yup]` (bounds may be infinite).
///
/// Entries follow the photon-number-basis expansion: for n ≤ m, with
/// `a = 1/(η_d(1+n̄_d))` and `b = η_d n̄_d (1+n̄_d)`,
///
/// ```text
/// ⟨n|R|m⟩ = C_{n,m} ∬ e^{−a(x²+y²)} (x−iy)^{m−n} L_n^{m−n}(−(x²+y²)/b) dy dx
/// C_{n,m} = (1/(π η_d^{(m−n)/2+1})) √(n!/m!) n̄_d^n / (1+n̄_d)^{m+1}
/// ```
///
/// and the polynomial factors expand into separable 1-D Gaussian moments.
pub fn region_operator(
    xlow: f64,
    xup: f64,
    ylow: f64,
    yup: f64,
    det: &DetectorParams,
) -> Result<CMat> {
    if !(xlow < xup) || !(ylow < yup) {
        return Err(Error::invalid(format!(
            "degenerate rectangle [{xlow}, {xup}] x [{ylow}, {yup}]"
        )));
    }
    let dim = det.dim();
    let nc = det.n_cutoff;
    let nbar = det.nbar_d();
    let mut r = CMat::zeros((dim, dim));

    if nbar < 1e-14 {
        // Ideal heterodyne (η_d = 1, ν_el = 0): G_ζ = |ζ⟩⟨ζ|/π with
        // ⟨n|ζ⟩⟨ζ|m⟩ ∝ (x+iy)^n (x−iy)^m e^{−(x²+y²)}.
        let ix = gauss_moments(1.0, xlow, xup, 2 * nc);
        let iy = gauss_moments(1.0, ylow, yup, 2 * nc);
        for n in 0..dim {
            for m in n..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for u in 0..=n {
                    for v in 0..=m {
                        let phase =
                            Complex64::i().powu(u as u32) * (-Complex64::i()).powu(v as u32);
                        acc +=
                            phase * binom(n, u) * binom(m, v) * ix[n - u + m - v] * iy[u + v];
                    }
                }
                let c =
                    (0.5 * (-ln_factorial(n) - ln_factorial(m))).exp() / std::f64::consts::PI;
                r[(n, m)] = acc * c;
                r[(m, n)] = r[(n, m)].conj();
            }
        }
        return Ok(r);
    }

    let a = 1.0 / (det.eta_d * (1.0 + nbar));
    let b = det.eta_d * nbar * (1.0 + nbar);
    let ix = gauss_moments(a, xlow, xup, 2 * nc);
    let iy = gauss_moments(a, ylow, yup, 2 * nc);

    for n in 0..dim {
        for m in n..dim {
            let d = m - n;
            // L_n^d(−v/b) = Σ_j binom(n+d, n−j) v^j / (j! b^j) with v = x²+y²,
            // all coefficients positive.
            let mut acc = Complex64::new(0.0, 0.0);
            let mut bj = 1.0; // 1/(j! b^j)
            for j in 0..=n {
                if j > 0 {
                    bj /= j as f64 * b;
                }
                let lag = binom(n + d, n - j) * bj;
                for t in 0..=j {
                    let bt = binom(j, t);
                    for rr in 0..=d {
                        let phase = (-Complex64::i()).powu(rr as u32);
                        acc += phase
                            * (lag * bt * binom(d, rr))
                            * ix[d - rr + 2 * t]
                            * iy[rr + 2 * (j - t)];
                    }
                }
            }
            let c = (0.5 * (ln_factorial(n) - ln_factorial(m))).exp()
                * (n as f64 * nbar.ln() - (m as f64 + 1.0) * (1.0 + nbar).ln()).exp()
                / (std::f64::consts::PI * det.eta_d.powf(d as f64 / 2.0 + 1.0));
            r[(n, m)] = acc * c;
            r[(m, n)] = r[(n, m)].conj();
        }
    }
    Ok(r)
}

/// Key-map geometry on Bob's outcome plane (natural units).
///
/// Grid lines sit at ±2α₀; post-selection removes strips of half-width Δ
/// around both axes. `α₀ = √(η_d T)·scale` places the sixteen mean outcomes
/// at `{±α₀, ±3α₀}²`, centered in their cells.
#[derive(Debug, Clone, Copy)]
pub struct KeyMapGeometry {
    pub alpha0: f64,
    pub delta: f64,
    /// Outcomes beyond this coordinate per axis are discarded; ∞ disables it.
    pub detection_limit: f64,
}

impl KeyMapGeometry {
    pub fn new(alpha0: f64, delta: f64) -> Result<Self> {
        Self::with_detection_limit(alpha0, delta, f64::INFINITY)
    }

    pub fn with_detection_limit(alpha0: f64, delta: f64, detection_limit: f64) -> Result<Self> {
        if !(alpha0 > 0.0) {
            return Err(Error::invalid(format!("alpha0 must be > 0, got {alpha0}")));
        }
        if delta < 0.0 {
            return Err(Error::invalid(format!("delta must be >= 0, got {delta}")));
        }
        if delta >= 2.0 * alpha0 {
            return Err(Error::invalid(format!(
                "delta = {delta} must be < 2*alpha0 = {}",
                2.0 * alpha0
            )));
        }
        if detection_limit <= 2.0 * alpha0 {
            return Err(Error::invalid(
                "detection_limit must exceed the outer grid line 2*alpha0",
            ));
        }
        Ok(Self {
            alpha0,
            delta,
            detection_limit,
        })
    }

    /// Integration rectangle for key-map symbol `z` (z = 4·row + col, column
    /// index running over Re from +3 to −3, row index over Im likewise).
    pub fn region_bounds(&self, z: usize) -> (f64, f64, f64, f64) {
        assert!(z < 16);
        let a2 = 2.0 * self.alpha0;
        let d = self.delta;
        let lim = self.detection_limit;
        let lows = [a2, d, -a2, -lim];
        let highs = [lim, a2, -d, -a2];
        let col = z % 4;
        let row = z / 4;
        (lows[col], highs[col], lows[row], highs[row])
    }
}

/// The sixteen key-map region operators plus the discard complement.
#[derive(Debug, Clone)]
pub struct RegionSet {
    pub regions: Vec<CMat>,
    pub discard: CMat,
}

/// Builds R_0..R_15 over the key-map rectangles and R_⊥ = I − Σ_z R_z.
pub fn key_map_regions(geom: &KeyMapGeometry, det: &DetectorParams) -> Result<RegionSet> {
    let dim = det.dim();
    let mut regions = Vec::with_capacity(16);
    let mut total = CMat::zeros((dim, dim));
    for z in 0..16 {
        let (xl, xu, yl, yu) = geom.region_bounds(z);
        let r = region_operator(xl, xu, yl, yu, det)?;
        total += &r;
        regions.push(r);
    }
    let mut discard = identity(dim) - total;
    hermitize(&mut discard);
    Ok(RegionSet { regions, discard })
}

/// Bob's first- and second-moment observables, SNU calibrated:
/// on a coherent input |β⟩, ⟨F_Q⟩ = √(2η_d) Re β and
/// ⟨S_Q⟩ = 2η_d (Re β)² + 1 + ν_el.
#[derive(Debug, Clone)]
pub struct Observables {
    pub fq: CMat,
    pub fp: CMat,
    pub sq: CMat,
    pub sp: CMat,
}

/// Closed ladder-operator forms of the heterodyne moment observables:
///
/// ```text
/// F_Q = √(η_d/2) (a + a†)                F_P = √(η_d/2) i(a† − a)
/// S_Q = (η_d/2) q̂² + (1 + ν_el − η_d/2)  S_P analogously with p̂²
/// ```
///
/// These are the full-plane moment integrals `∬ √2·x G_ζ`, `∬ 2x² G_ζ` etc.
/// in closed form; the quadrature route is exercised against them in the
/// test suite.
pub fn observable_operators(det: &DetectorParams) -> Observables {
    let dim = det.dim();
    let half_eta = det.eta_d / 2.0;
    let coupling = half_eta.sqrt();
    let offset = 1.0 + det.nu_el - half_eta;

    let mut fq = CMat::zeros((dim, dim));
    let mut fp = CMat::zeros((dim, dim));
    let mut sq = CMat::zeros((dim, dim));
    let mut sp = CMat::zeros((dim, dim));

    for n in 0..dim {
        sq[(n, n)] = Complex64::new(half_eta * (2.0 * n as f64 + 1.0) + offset, 0.0);
        sp[(n, n)] = sq[(n, n)];
        if n + 1 < dim {
            let root = ((n + 1) as f64).sqrt();
            fq[(n, n + 1)] = Complex64::new(coupling * root, 0.0);
            fq[(n + 1, n)] = fq[(n, n + 1)];
            // p̂ = i(a† − a): ⟨n+1|p̂|n⟩ = i√(n+1)
            fp[(n + 1, n)] = Complex64::new(0.0, coupling * root);
            fp[(n, n + 1)] = fp[(n + 1, n)].conj();
        }
        if n + 2 < dim {
            let root = (((n + 1) * (n + 2)) as f64).sqrt();
            sq[(n, n + 2)] = Complex64::new(half_eta * root, 0.0);
            sq[(n + 2, n)] = sq[(n, n + 2)];
            sp[(n, n + 2)] = Complex64::new(-half_eta * root, 0.0);
            sp[(n + 2, n)] = sp[(n, n + 2)];
        }
    }

    Observables { fq, fp, sq, sp }
}

/// Fock parity operator diag((−1)^n); conjugation by it implements the
/// point reflection (x, y) → (−x, −y) on region operators.
pub fn parity_operator(dim: usize) -> CMat {
    let mut p = CMat::zeros((dim, dim));
    for n in 0..dim {
        p[(n, n)] = Complex64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigvalsh, max_abs_entry, trace_product};
    use approx::assert_relative_eq;
    use ndarray::Array2;

    fn table1_detector(nc: usize) -> DetectorParams {
        DetectorParams::new(0.714, 0.064, nc).unwrap()
    }

    fn vacuum(dim: usize) -> CMat {
        let mut m = Array2::zeros((dim, dim));
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m
    }

    #[test]
    fn vacuum_coherent_state() {
        let v = coherent_state(Complex64::new(0.0, 0.0), 8);
        assert_eq!(v[0], Complex64::new(1.0, 0.0));
        assert!(v.iter().skip(1).all(|z| z.norm() == 0.0));
    }

    #[test]
    fn coherent_overlaps_match_closed_form() {
        let dim = 21;
        let cases = [
            (Complex64::new(0.3, -0.4), Complex64::new(-0.7, 0.2)),
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)),
            (Complex64::new(0.9, 0.35), Complex64::new(0.9, 0.35)),
        ];
        for (a, b) in cases {
            let va = coherent_state(a, dim);
            let vb = coherent_state(b, dim);
            let dot: Complex64 = vb.iter().zip(va.iter()).map(|(x, y)| x.conj() * y).sum();
            let closed = coherent_overlap(b, a);
            assert!(
                (dot - closed).norm() < 1e-8,
                "overlap mismatch: {dot} vs {closed}"
            );
        }
    }

    #[test]
    fn coherent_norm_converges_with_cutoff() {
        let alpha = Complex64::new(1.1, -0.6);
        let d1 = coherent_truncation_deficit(alpha, 8);
        let d2 = coherent_truncation_deficit(alpha, 16);
        let d3 = coherent_truncation_deficit(alpha, 32);
        assert!(d1 > d2 && d2 > d3);
        assert!(d3 < 1e-12);
    }

    #[test]
    fn displaced_thermal_trace_and_vacuum_element() {
        let gamma = Complex64::new(0.4, 0.3);
        let nbar = 0.49;
        let m = displaced_thermal(gamma, nbar, 40);
        let tr: f64 = (0..40).map(|i| m[(i, i)].re).sum();
        assert_relative_eq!(tr, 1.0, epsilon = 1e-10);
        let q00 = (-gamma.norm_sqr() / (1.0 + nbar)).exp() / (1.0 + nbar);
        assert_relative_eq!(m[(0, 0)].re, q00, epsilon = 1e-12);
    }

    #[test]
    fn displacement_matrix_is_unitary_enough() {
        // Truncation spoils unitarity only near the cutoff corner.
        let d = displacement_matrix(Complex64::new(0.3, -0.2), 24);
        let dd = d.t().mapv(|z| z.conj()).dot(&d);
        for i in 0..12 {
            for j in 0..12 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dd[(i, j)].re - want).abs() < 1e-9);
                assert!(dd[(i, j)].im.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn povm_density_matches_displacement_product_route() {
        // Same matrix through D ρ_th D† products as through the closed form.
        let det = table1_detector(10);
        let zeta = Complex64::new(0.45, -0.15);
        let g = povm_density(zeta, &det);
        let dmat = displacement_matrix(zeta / det.eta_d.sqrt(), 30);
        let th = thermal_state(det.nbar_d(), 30);
        let prod = dmat.dot(&th).dot(&dmat.t().mapv(|z| z.conj()));
        for n in 0..det.dim() {
            for m in 0..det.dim() {
                let want = prod[(n, m)] / (det.eta_d * std::f64::consts::PI);
                assert!(
                    (g[(n, m)] - want).norm() < 1e-9,
                    "entry ({n},{m}): {} vs {}",
                    g[(n, m)],
                    want
                );
            }
        }
    }

    #[test]
    fn full_plane_region_is_identity() {
        let det = table1_detector(10);
        let r = region_operator(
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            &det,
        )
        .unwrap();
        let dev = max_abs_entry(&(&r - &identity(det.dim())));
        assert!(dev < 1e-6, "completeness deviation {dev:.3e}");
    }

    #[test]
    fn ideal_half_plane_vacuum_element() {
        let det = DetectorParams::new(1.0, 0.0, 10).unwrap();
        let r =
            region_operator(0.0, f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, &det).unwrap();
        assert_relative_eq!(r[(0, 0)].re, 0.5, epsilon = 1e-12);
        assert!(r[(0, 0)].im.abs() < 1e-14);
    }

    #[test]
    fn degenerate_rectangle_rejected() {
        let det = table1_detector(4);
        assert!(region_operator(1.0, 1.0, 0.0, 1.0, &det).is_err());
        assert!(region_operator(0.0, 1.0, 2.0, 1.0, &det).is_err());
    }

    #[test]
    fn key_map_completeness_without_postselection() {
        // Δ = 0: the sixteen rectangles tile the plane.
        let det = table1_detector(10);
        let geom = KeyMapGeometry::new(0.8, 0.0).unwrap();
        let set = key_map_regions(&geom, &det).unwrap();
        let dev = max_abs_entry(&set.discard);
        assert!(dev < 1e-6, "tiling defect {dev:.3e}");
    }

    #[test]
    fn discard_probability_positive_and_monotone_in_delta() {
        let det = table1_detector(10);
        let vac = vacuum(det.dim());
        let mut last = 0.0;
        for &delta in &[0.05, 0.1, 0.2] {
            let geom = KeyMapGeometry::new(0.8, delta).unwrap();
            let set = key_map_regions(&geom, &det).unwrap();
            let p = trace_product(vac.view(), set.discard.view()).re;
            assert!(p > last, "discard probability not increasing: {p} <= {last}");
            last = p;
        }
    }

    #[test]
    fn vacuum_discard_matches_erf_oracle_at_operating_point() {
        // Vacuum heterodyne outcomes are CN(0, 1+ν_el); the kept mass is a
        // product of per-axis Gaussian strip integrals.
        let det = table1_detector(12);
        let t = 0.009f64;
        let scale = 0.3f64;
        let alpha0 = (det.eta_d * t).sqrt() * scale;
        let delta0 = 0.035f64;
        let delta = (t * det.eta_d).sqrt() * delta0;
        let geom = KeyMapGeometry::new(alpha0, delta).unwrap();
        let set = key_map_regions(&geom, &det).unwrap();
        let p_disc = trace_product(vacuum(det.dim()).view(), set.discard.view()).re;
        let var_axis = (1.0 + det.nu_el) / 2.0;
        let axis_keep = 1.0 - erf(delta / (2.0 * var_axis).sqrt());
        let oracle = 1.0 - axis_keep * axis_keep;
        assert_relative_eq!(p_disc, oracle, epsilon = 1e-6);
    }

    #[test]
    fn region_operators_hermitian_psd() {
        let det = table1_detector(8);
        let geom = KeyMapGeometry::new(0.5, 0.05).unwrap();
        let set = key_map_regions(&geom, &det).unwrap();
        for r in set.regions.iter().chain(std::iter::once(&set.discard)) {
            assert!(crate::linalg::hermiticity_defect(r) < 1e-12);
            let vals = eigvalsh(r).unwrap();
            assert!(vals.iter().all(|&l| l > -1e-9), "negative eigenvalue {vals:?}");
            assert!(vals.iter().all(|&l| l < 1.0 + 1e-9));
        }
    }

    #[test]
    fn regions_respect_point_reflection() {
        // Region 15−z is the point reflection of region z, so
        // R_{15−z} = Π R_z Π with Π the Fock parity.
        let det = table1_detector(8);
        let geom = KeyMapGeometry::new(0.6, 0.1).unwrap();
        let set = key_map_regions(&geom, &det).unwrap();
        let par = parity_operator(det.dim());
        for z in 0..16 {
            let reflected = par.dot(&set.regions[z]).dot(&par);
            let dev = max_abs_entry(&(&reflected - &set.regions[15 - z]));
            assert!(dev < 1e-10, "parity mismatch at z={z}: {dev:.3e}");
        }
    }

    #[test]
    fn observables_on_coherent_states() {
        let det = table1_detector(14);
        let t = 0.25f64;
        let alpha = Complex64::new(0.7, -0.4);
        let beta = alpha * t.sqrt();
        let v = coherent_state(beta, det.dim());
        let mut rho = CMat::zeros((det.dim(), det.dim()));
        for i in 0..det.dim() {
            for j in 0..det.dim() {
                rho[(i, j)] = v[i] * v[j].conj();
            }
        }
        let obs = observable_operators(&det);
        let fq = trace_product(rho.view(), obs.fq.view()).re;
        let fp = trace_product(rho.view(), obs.fp.view()).re;
        let sq = trace_product(rho.view(), obs.sq.view()).re;
        let sp = trace_product(rho.view(), obs.sp.view()).re;
        let want_fq = (2.0 * det.eta_d * t).sqrt() * alpha.re;
        let want_fp = (2.0 * det.eta_d * t).sqrt() * alpha.im;
        let want_sq = 2.0 * det.eta_d * t * alpha.re * alpha.re + 1.0 + det.nu_el;
        let want_sp = 2.0 * det.eta_d * t * alpha.im * alpha.im + 1.0 + det.nu_el;
        assert_relative_eq!(fq, want_fq, epsilon = 1e-8);
        assert_relative_eq!(fp, want_fp, epsilon = 1e-8);
        assert_relative_eq!(sq, want_sq, epsilon = 1e-8);
        assert_relative_eq!(sp, want_sp, epsilon = 1e-8);
    }

    #[test]
    fn observables_on_vacuum() {
        let det = table1_detector(10);
        let obs = observable_operators(&det);
        assert_relative_eq!(obs.sq[(0, 0)].re, 1.0 + det.nu_el, epsilon = 1e-12);
        assert_relative_eq!(obs.sp[(0, 0)].re, 1.0 + det.nu_el, epsilon = 1e-12);
        assert_eq!(obs.fq[(0, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn completeness_error_shrinks_with_cutoff() {
        let geom = KeyMapGeometry::new(0.7, 0.08).unwrap();
        let mut last = f64::INFINITY;
        for nc in [8, 10, 12] {
            let det = table1_detector(nc);
            let set = key_map_regions(&geom, &det).unwrap();
            let dim = det.dim();
            let total = set
                .regions
                .iter()
                .fold(CMat::zeros((dim, dim)), |acc, r| acc + r)
                + &set.discard;
            let dev = max_abs_entry(&(&total - &identity(dim)));
            assert!(dev <= last + 1e-15);
            last = dev;
        }
        assert!(last < 1e-8);
    }
}
