//! Sampled-plus-spectral representation of synthesized functions.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Uniform grid of 2^m points over [-L, L); x_k = -L + k * dx, x_{n/2} = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub log2_points: u32,
    pub half_length: f64,
}

impl Grid {
    pub fn new(log2_points: u32, half_length: f64) -> Self {
        assert!((4..=26).contains(&log2_points));
        assert!(half_length > 0.0);
        Grid { log2_points, half_length }
    }

    pub fn len(&self) -> usize {
        1usize << self.log2_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_length / self.len() as f64
    }

    pub fn x(&self, k: usize) -> f64 {
        -self.half_length + k as f64 * self.dx()
    }

    /// Index of x = 0.
    pub fn zero_index(&self) -> usize {
        self.len() / 2
    }

    /// Signed frequency of DFT bin f.
    pub fn signed_freq(&self, f: usize) -> i64 {
        let n = self.len();
        if f < n / 2 {
            f as i64
        } else {
            f as i64 - n as i64
        }
    }

    /// Angular frequency omega_f = pi * fs / L of DFT bin f.
    pub fn omega(&self, f: usize) -> f64 {
        std::f64::consts::PI * self.signed_freq(f) as f64 / self.half_length
    }
}

/// Analytic factor t^degree / scale applied in the spatial domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonomialFactor {
    pub degree: usize,
    pub scale: f64,
}

/// A smooth function on the grid: exact cofactor samples, their DFT, and the
/// monomial factor (if any). Full samples are cofactor * factor, stored too.
///
/// `data_floor` is a per-bin amplitude below which spectrum entries are
/// treated as sampling noise (median amplitude of the top frequency band).
/// Derivative evaluations skip sub-floor bins: on oversampled grids the
/// omega^order weight would otherwise amplify the noise past the signal.
/// Closed-form spectra have floor 0 and are used in full.
#[derive(Clone)]
pub struct FunctionRep {
    pub grid: Grid,
    cofactor: Vec<Complex64>,
    spectrum: Vec<Complex64>,
    samples: Vec<Complex64>,
    pub factors: Vec<MonomialFactor>,
    pub provenance: String,
    /// Declared support radius; |f| vanishes outside (snapped exactly).
    pub support_radius: Option<f64>,
    data_floor: f64,
    /// Largest |omega| carrying definite signal (above 64x the floor), with
    /// margin; bins beyond are excluded from derivative evaluations.
    omega_signal: f64,
}

impl std::fmt::Debug for FunctionRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FunctionRep")
            .field("grid", &self.grid)
            .field("factors", &self.factors)
            .field("provenance", &self.provenance)
            .field("support_radius", &self.support_radius)
            .finish()
    }
}

pub(crate) fn fft_forward(data: &mut [Complex64]) {
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(data.len()).process(data);
}

pub(crate) fn fft_inverse_normalized(data: &mut [Complex64]) {
    let n = data.len();
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(n).process(data);
    let scale = 1.0 / n as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

impl FunctionRep {
    /// Wrap exact cofactor samples; computes the spectrum and the full
    /// samples (cofactor times factors).
    pub fn from_cofactor(
        grid: Grid,
        cofactor: Vec<Complex64>,
        factors: Vec<MonomialFactor>,
        provenance: impl Into<String>,
        support_radius: Option<f64>,
    ) -> Self {
        let mut spectrum = cofactor.clone();
        fft_forward(&mut spectrum);
        Self::assemble(grid, cofactor, spectrum, factors, provenance, support_radius)
    }

    /// Wrap snapped cofactor samples together with an externally supplied
    /// (typically closed-form) spectrum: finite differences see the snapped
    /// data (exact plateaus), spectral operations see the analytic
    /// coefficients. The two must agree to the snap tolerance, preserving
    /// the round-trip invariant.
    pub fn from_parts(
        grid: Grid,
        cofactor: Vec<Complex64>,
        spectrum: Vec<Complex64>,
        factors: Vec<MonomialFactor>,
        provenance: impl Into<String>,
        support_radius: Option<f64>,
    ) -> Self {
        Self::assemble(grid, cofactor, spectrum, factors, provenance, support_radius)
    }

    fn assemble(
        grid: Grid,
        cofactor: Vec<Complex64>,
        spectrum: Vec<Complex64>,
        factors: Vec<MonomialFactor>,
        provenance: impl Into<String>,
        support_radius: Option<f64>,
    ) -> Self {
        assert_eq!(cofactor.len(), grid.len());
        assert_eq!(spectrum.len(), grid.len());
        let samples = if factors.is_empty() {
            cofactor.clone()
        } else {
            let (degree, scale) = combine_factors(&factors);
            cofactor
                .iter()
                .enumerate()
                .map(|(k, &v)| v * (grid.x(k).powi(degree as i32) / scale))
                .collect()
        };
        // Median amplitude over the top frequency band |fs| >= 3n/8.
        let n = grid.len();
        let mut top: Vec<f64> = (0..n)
            .filter(|&f| grid.signed_freq(f).unsigned_abs() as usize >= 3 * n / 8)
            .map(|f| spectrum[f].norm())
            .collect();
        top.sort_by(f64::total_cmp);
        let data_floor = if top.is_empty() { 0.0 } else { top[top.len() / 2] };
        // Signal band: largest |omega| with amplitude clearly above the
        // floor, widened by 1.5 for marginal content.
        let mut omega_signal = 0.0f64;
        for (f, s) in spectrum.iter().enumerate() {
            if s.norm() > 64.0 * data_floor {
                omega_signal = omega_signal.max(grid.omega(f).abs());
            }
        }
        omega_signal = if data_floor == 0.0 {
            f64::INFINITY
        } else {
            1.5 * omega_signal
        };
        FunctionRep {
            grid,
            cofactor,
            spectrum,
            samples,
            factors,
            provenance: provenance.into(),
            support_radius,
            data_floor,
            omega_signal,
        }
    }

    /// Per-bin spectrum noise estimate (0 for closed-form spectra).
    pub fn data_floor(&self) -> f64 {
        self.data_floor
    }

    /// Bins at or below this amplitude are treated as noise.
    fn cut_threshold(&self) -> f64 {
        8.0 * self.data_floor
    }

    /// True when the bin should be excluded from derivative evaluations.
    fn is_noise_bin(&self, f: usize, amplitude: f64) -> bool {
        (self.data_floor > 0.0 && amplitude <= self.cut_threshold())
            || self.grid.omega(f).abs() > self.omega_signal
    }

    /// Wrap raw samples with no factor (cofactor = samples).
    pub fn from_samples(
        grid: Grid,
        samples: Vec<Complex64>,
        provenance: impl Into<String>,
        support_radius: Option<f64>,
    ) -> Self {
        Self::from_cofactor(grid, samples, Vec::new(), provenance, support_radius)
    }

    /// Same cofactor and spectrum with different analytic factors.
    pub fn with_factors(&self, factors: Vec<MonomialFactor>, provenance: impl Into<String>) -> Self {
        let samples = if factors.is_empty() {
            self.cofactor.clone()
        } else {
            let (degree, scale) = combine_factors(&factors);
            self.cofactor
                .iter()
                .enumerate()
                .map(|(k, &v)| v * (self.grid.x(k).powi(degree as i32) / scale))
                .collect()
        };
        FunctionRep {
            grid: self.grid,
            cofactor: self.cofactor.clone(),
            spectrum: self.spectrum.clone(),
            samples,
            factors,
            provenance: provenance.into(),
            support_radius: self.support_radius,
            data_floor: self.data_floor,
            omega_signal: self.omega_signal,
        }
    }

    pub fn cofactor(&self) -> &[Complex64] {
        &self.cofactor
    }

    pub fn spectrum(&self) -> &[Complex64] {
        &self.spectrum
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Combined monomial factor (degree, scale); (0, 1) when none.
    pub fn combined_factor(&self) -> (usize, f64) {
        combine_factors(&self.factors)
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Samples-vs-spectrum consistency: max |IFFT(spectrum) - cofactor|.
    pub fn round_trip_error(&self) -> f64 {
        let mut back = self.spectrum.clone();
        fft_inverse_normalized(&mut back);
        back.iter()
            .zip(&self.cofactor)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest |f| sample strictly outside [-radius, radius].
    pub fn max_abs_outside(&self, radius: f64) -> f64 {
        self.samples
            .iter()
            .enumerate()
            .filter(|(k, _)| self.grid.x(*k).abs() > radius)
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }

    /// Spectral derivative samples of the *cofactor*: IFFT(spectrum *
    /// (i omega)^order) with sub-floor bins excluded and the Nyquist bin
    /// zeroed for odd orders.
    pub fn cofactor_derivative_samples(&self, order: usize) -> Vec<Complex64> {
        let n = self.grid.len();
        let mut buf = self.spectrum.clone();
        for (f, v) in buf.iter_mut().enumerate() {
            let fs = self.grid.signed_freq(f);
            if (order % 2 == 1 && fs == -((n / 2) as i64)) || self.is_noise_bin(f, v.norm()) {
                *v = Complex64::new(0.0, 0.0);
                continue;
            }
            let iw = Complex64::new(0.0, self.grid.omega(f));
            *v *= iw.powi(order as i32);
        }
        fft_inverse_normalized(&mut buf);
        buf
    }

    /// Derivative samples of the full function via the Leibniz rule against
    /// the monomial factor.
    pub fn derivative_samples(&self, order: usize) -> Vec<Complex64> {
        let (degree, scale) = self.combined_factor();
        if degree == 0 {
            let mut out = self.cofactor_derivative_samples(order);
            if scale != 1.0 {
                for v in out.iter_mut() {
                    *v /= scale;
                }
            }
            return out;
        }
        let n = self.grid.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        // f^(o) = sum_i C(o,i) q^(i) cof^(o-i), q = t^degree / scale.
        for i in 0..=order.min(degree) {
            let coeff = binomial(order, i) * falling_factorial(degree, i) / scale;
            let cof = self.cofactor_derivative_samples(order - i);
            let power = (degree - i) as i32;
            for (k, v) in out.iter_mut().enumerate() {
                *v += cof[k] * (coeff * self.grid.x(k).powi(power));
            }
        }
        out
    }

    /// Spectral evaluation of cofactor^(order)(0) together with its noise
    /// floor: rounding of the weighted sum plus the excluded-noise budget of
    /// the bins that were kept.
    pub fn spectral_cofactor_deriv_at_zero(&self, order: usize) -> (Complex64, f64) {
        let n = self.grid.len();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mag = 0.0f64;
        let mut noise_sq = 0.0f64;
        for (f, &s) in self.spectrum.iter().enumerate() {
            let fs = self.grid.signed_freq(f);
            if (order % 2 == 1 && fs == -((n / 2) as i64)) || self.is_noise_bin(f, s.norm()) {
                continue;
            }
            let w_pow = self.grid.omega(f).abs().powi(order as i32);
            let iw = Complex64::new(0.0, self.grid.omega(f));
            let term = s * iw.powi(order as i32);
            // Bin f contributes e^{2 pi i k f / n} at sample k; k = n/2
            // gives (-1)^f.
            let sign = if f % 2 == 0 { 1.0 } else { -1.0 };
            acc += term * sign;
            mag += term.norm();
            noise_sq += (self.data_floor * w_pow).powi(2);
        }
        let scale = 1.0 / n as f64;
        let noise = 32.0 * f64::EPSILON * mag * scale + noise_sq.sqrt() * scale;
        (acc * scale, noise)
    }

    /// Require a width to span at least `min_steps` grid cells.
    pub fn check_resolution(grid: &Grid, width: f64, min_steps: usize) -> Result<()> {
        let steps = width / grid.dx();
        if steps < min_steps as f64 {
            Err(Error::GridTooCoarse { width, steps, min_steps })
        } else {
            Ok(())
        }
    }
}

pub(crate) fn combine_factors(factors: &[MonomialFactor]) -> (usize, f64) {
    factors
        .iter()
        .fold((0usize, 1.0f64), |(d, s), f| (d + f.degree, s * f.scale))
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut out = 1.0f64;
    for i in 0..k {
        out = out * (n - i) as f64 / (i + 1) as f64;
    }
    out
}

/// degree!/(degree-i)! as f64.
pub(crate) fn falling_factorial(degree: usize, i: usize) -> f64 {
    let mut out = 1.0f64;
    for j in 0..i {
        out *= (degree - j) as f64;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_rep(grid: Grid, sigma: f64) -> FunctionRep {
        let samples: Vec<Complex64> = (0..grid.len())
            .map(|k| {
                let x = grid.x(k);
                Complex64::new((-x * x / (2.0 * sigma * sigma)).exp(), 0.0)
            })
            .collect();
        FunctionRep::from_samples(grid, samples, "gaussian", None)
    }

    #[test]
    fn round_trip_is_tight() {
        let grid = Grid::new(12, 8.0);
        let rep = gaussian_rep(grid, 0.7);
        assert!(rep.round_trip_error() <= 1e-12 * rep.max_abs());
    }

    #[test]
    fn spectral_derivative_matches_analytic_gaussian() {
        let grid = Grid::new(14, 10.0);
        let sigma = 0.9f64;
        let rep = gaussian_rep(grid, sigma);
        // f'(x) = -x/sigma^2 f(x); check at a few points.
        let d1 = rep.cofactor_derivative_samples(1);
        for k in [grid.len() / 2 - 500, grid.len() / 2 + 123, grid.len() / 2 + 2000] {
            let x = grid.x(k);
            let want = -x / (sigma * sigma) * (-x * x / (2.0 * sigma * sigma)).exp();
            assert!((d1[k].re - want).abs() < 1e-9, "at x = {x}");
        }
        // Second derivative at 0: -1/sigma^2.
        let (v, noise) = rep.spectral_cofactor_deriv_at_zero(2);
        let want = -1.0 / (sigma * sigma);
        assert!((v.re - want).abs() < 1e-9 + noise);
    }

    #[test]
    fn monomial_factor_derivative_leibniz() {
        // f = g(x) * x^3 / 6 with g a gaussian: check f' against finite
        // differences of the stored samples.
        let grid = Grid::new(14, 10.0);
        let sigma = 1.1f64;
        let cof: Vec<Complex64> = (0..grid.len())
            .map(|k| {
                let x = grid.x(k);
                Complex64::new((-x * x / (2.0 * sigma * sigma)).exp(), 0.0)
            })
            .collect();
        let rep = FunctionRep::from_cofactor(
            grid,
            cof,
            vec![MonomialFactor { degree: 3, scale: 6.0 }],
            "g * t^3/6",
            None,
        );
        let d1 = rep.derivative_samples(1);
        let s = rep.samples();
        let h = grid.dx();
        for k in [grid.len() / 2 + 37, grid.len() / 2 - 1234] {
            let fd = (s[k + 1] - s[k - 1]).re / (2.0 * h);
            assert!(
                (d1[k].re - fd).abs() <= 1e-6 * d1[k].re.abs().max(1.0),
                "k={k}: {} vs {}",
                d1[k].re,
                fd
            );
        }
    }

    #[test]
    fn binomial_and_falling() {
        assert_eq!(binomial(8, 4), 70.0);
        assert_eq!(binomial(5, 0), 1.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(falling_factorial(5, 2), 20.0);
        assert_eq!(falling_factorial(4, 0), 1.0);
    }
}
