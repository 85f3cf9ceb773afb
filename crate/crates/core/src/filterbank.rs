//! Log-Gabor filter bank built directly in the Fourier domain.
//!
//! Every kernel is the product of a radial log-Gaussian band-pass (multiplied by
//! a Butterworth low-pass that kills the Fourier corners) and an angular
//! profile centred on one of `O` orientations spread over a half turn. Kernels
//! are real and non-negative; because the angular profile only covers one
//! half-plane of frequencies, the inverse transform of a filtered spectrum is
//! complex and its modulus acts as a local energy measure.
//!
//! Kernels are stored factored (`S` radial arrays and `O` angular arrays); the
//! full `S x O` kernels are materialised on demand with [`FilterBank::kernel`].

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Normalised frequency coordinates of every sample of an unshifted 2-D DFT.
///
/// Samples are stored row-major (`index = y * width + x`). Index 0 is the DC
/// term; along each axis frequencies follow the usual DFT order
/// `0, 1/n, .., then -1/2 (even n), .., -1/n`, so every axis spans `[-0.5, 0.5)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    width: usize,
    height: usize,
    eta: Vec<f64>,
    alpha: Vec<f64>,
}

/// Signed normalised frequency of DFT bin `k` out of `n`.
pub fn dft_frequency(k: usize, n: usize) -> f64 {
    if k < n.div_ceil(2) {
        k as f64 / n as f64
    } else {
        (k as f64 - n as f64) / n as f64
    }
}

impl FrequencyGrid {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::InvalidSize {
                width,
                height,
                min: 2,
            });
        }
        let fx: Vec<f64> = (0..width).map(|x| dft_frequency(x, width)).collect();
        let mut eta = Vec::with_capacity(width * height);
        let mut alpha = Vec::with_capacity(width * height);
        for y in 0..height {
            let fy = dft_frequency(y, height);
            for &fx in &fx {
                eta.push(fx.hypot(fy));
                alpha.push(fy.atan2(fx));
            }
        }
        Ok(Self {
            width,
            height,
            eta,
            alpha,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta.is_empty()
    }

    /// Radial frequency per sample, in `[0, ~0.7071]`.
    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    /// Angle per sample, in `(-pi, pi]`.
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }
}

/// Builds the frequency grid matching the FFT sample layout.
pub fn build_frequency_grid(width: usize, height: usize) -> Result<FrequencyGrid> {
    FrequencyGrid::new(width, height)
}

/// Low-pass Butterworth profile `1 / sqrt(1 + (eta / cutoff)^(2 order))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Butterworth {
    pub cutoff: f64,
    pub order: u32,
}

impl Default for Butterworth {
    fn default() -> Self {
        Self {
            cutoff: 0.45,
            order: 15,
        }
    }
}

impl Butterworth {
    pub fn new(cutoff: f64, order: u32) -> Result<Self> {
        if !(cutoff > 0.0) {
            return Err(Error::param("butterworth_cutoff", "must be > 0"));
        }
        if order < 1 {
            return Err(Error::param("butterworth_order", "must be >= 1"));
        }
        Ok(Self { cutoff, order })
    }

    #[inline]
    pub fn response(&self, eta: f64) -> f64 {
        let ratio = eta / self.cutoff;
        1.0 / (1.0 + ratio.powi(2 * self.order as i32)).sqrt()
    }
}

/// Evaluates the Butterworth profile over every grid sample.
pub fn butterworth(grid: &FrequencyGrid, filter: Butterworth) -> Vec<f64> {
    grid.eta.iter().map(|&eta| filter.response(eta)).collect()
}

/// Log-Gaussian radial profile without the Butterworth factor. Zero at DC.
#[inline]
pub fn log_gaussian(eta: f64, eta_s: f64, sigma_eta: f64) -> f64 {
    if eta <= 0.0 {
        return 0.0;
    }
    let num = (eta / eta_s).ln();
    let den = sigma_eta.ln();
    (-(num * num) / (2.0 * den * den)).exp()
}

/// Radial band-pass centred on `eta_s`, multiplied by the Butterworth low-pass.
pub fn radial_component(
    grid: &FrequencyGrid,
    eta_s: f64,
    sigma_eta: f64,
    lowpass: Butterworth,
) -> Result<Vec<f64>> {
    if !(eta_s > 0.0 && eta_s < 0.5) {
        return Err(Error::param(
            "eta_s",
            format!("centre frequency {eta_s} outside (0, 0.5)"),
        ));
    }
    if !(sigma_eta > 0.0 && sigma_eta < 1.0) {
        return Err(Error::param("sigma_eta", "must lie in (0, 1)"));
    }
    Ok(grid
        .eta
        .iter()
        .map(|&eta| log_gaussian(eta, eta_s, sigma_eta) * lowpass.response(eta))
        .collect())
}

/// Shape of the angular fall-off.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngularExponent {
    /// `exp(-|d| / (2 sigma^2))`, linear in the wrapped angular distance.
    #[default]
    Linear,
    /// `exp(-d^2 / (2 sigma^2))`, the usual Gaussian spread.
    Squared,
}

impl std::str::FromStr for AngularExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Self::Linear),
            "squared" => Ok(Self::Squared),
            other => Err(Error::param(
                "angular_exponent",
                format!("`{other}` is neither `linear` nor `squared`"),
            )),
        }
    }
}

/// Wrapped angular distance `atan2(sin d, cos d)`, in `(-pi, pi]`.
#[inline]
pub fn wrapped_angle(d: f64) -> f64 {
    d.sin().atan2(d.cos())
}

#[inline]
pub fn angular_value(alpha: f64, alpha_o: f64, sigma_alpha: f64, exponent: AngularExponent) -> f64 {
    let d = wrapped_angle(alpha - alpha_o).abs();
    let spread = 2.0 * sigma_alpha * sigma_alpha;
    match exponent {
        AngularExponent::Linear => (-d / spread).exp(),
        AngularExponent::Squared => (-(d * d) / spread).exp(),
    }
}

/// Angular profile centred on `alpha_o` over every grid sample.
pub fn angular_component(
    grid: &FrequencyGrid,
    alpha_o: f64,
    sigma_alpha: f64,
    exponent: AngularExponent,
) -> Result<Vec<f64>> {
    if !(sigma_alpha > 0.0) {
        return Err(Error::param("sigma_alpha", "must be > 0"));
    }
    Ok(grid
        .alpha
        .iter()
        .map(|&alpha| angular_value(alpha, alpha_o, sigma_alpha, exponent))
        .collect())
}

/// Construction parameters of a [`FilterBank`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterBankParams {
    pub scales: usize,
    pub orientations: usize,
    pub sigma_eta: f64,
    pub sigma_alpha: f64,
    /// Wavelength of the finest scale, in pixels.
    pub min_wavelength: f64,
    /// Ratio between the wavelengths of consecutive scales.
    pub scale_multiplier: f64,
    pub angular_exponent: AngularExponent,
    pub lowpass: Butterworth,
}

impl Default for FilterBankParams {
    fn default() -> Self {
        Self {
            scales: 12,
            orientations: 32,
            sigma_eta: 0.55,
            sigma_alpha: 0.2,
            min_wavelength: 3.0,
            scale_multiplier: 1.45,
            angular_exponent: AngularExponent::Linear,
            lowpass: Butterworth::default(),
        }
    }
}

impl FilterBankParams {
    pub fn validate(&self) -> Result<()> {
        if self.scales < 1 {
            return Err(Error::param("scales", "must be >= 1"));
        }
        if self.orientations < 1 {
            return Err(Error::param("orientations", "must be >= 1"));
        }
        if !(self.min_wavelength >= 2.0) {
            return Err(Error::param("min_wavelength", "must be >= 2 pixels"));
        }
        if !(self.scale_multiplier > 1.0) {
            return Err(Error::param("scale_multiplier", "must be > 1"));
        }
        if !(self.sigma_eta > 0.0 && self.sigma_eta < 1.0) {
            return Err(Error::param("sigma_eta", "must lie in (0, 1)"));
        }
        if !(self.sigma_alpha > 0.0) {
            return Err(Error::param("sigma_alpha", "must be > 0"));
        }
        Butterworth::new(self.lowpass.cutoff, self.lowpass.order)?;
        for eta in self.scale_centres() {
            if eta >= 0.5 {
                return Err(Error::param(
                    "min_wavelength",
                    format!("scale centre {eta} aliases (>= 0.5)"),
                ));
            }
        }
        Ok(())
    }

    /// Geometric centre frequencies, finest scale first.
    pub fn scale_centres(&self) -> Vec<f64> {
        (0..self.scales)
            .map(|s| self.scale_multiplier.powi(-(s as i32)) / self.min_wavelength)
            .collect()
    }

    /// Orientation centres `z pi / O`.
    pub fn orientation_centres(&self) -> Vec<f64> {
        (0..self.orientations)
            .map(|z| z as f64 * PI / self.orientations as f64)
            .collect()
    }
}

/// `S x O` Log-Gabor kernels on a fixed frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank {
    grid: FrequencyGrid,
    params: FilterBankParams,
    scale_centres: Vec<f64>,
    orientation_centres: Vec<f64>,
    radial: Vec<Vec<f64>>,
    angular: Vec<Vec<f64>>,
}

impl FilterBank {
    pub fn new(width: usize, height: usize, params: FilterBankParams) -> Result<Self> {
        params.validate()?;
        let grid = FrequencyGrid::new(width, height)?;
        let scale_centres = params.scale_centres();
        let orientation_centres = params.orientation_centres();
        let radial = scale_centres
            .par_iter()
            .map(|&eta_s| radial_component(&grid, eta_s, params.sigma_eta, params.lowpass))
            .collect::<Result<Vec<_>>>()?;
        let angular = orientation_centres
            .par_iter()
            .map(|&alpha_o| angular_component(&grid, alpha_o, params.sigma_alpha, params.angular_exponent))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid,
            params,
            scale_centres,
            orientation_centres,
            radial,
            angular,
        })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn params(&self) -> &FilterBankParams {
        &self.params
    }

    pub fn width(&self) -> usize {
        self.grid.width
    }

    pub fn height(&self) -> usize {
        self.grid.height
    }

    pub fn scales(&self) -> usize {
        self.params.scales
    }

    pub fn orientations(&self) -> usize {
        self.params.orientations
    }

    pub fn len(&self) -> usize {
        self.scales() * self.orientations()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn scale_centres(&self) -> &[f64] {
        &self.scale_centres
    }

    pub fn orientation_centres(&self) -> &[f64] {
        &self.orientation_centres
    }

    /// Radial factor (band-pass times low-pass) of scale `s`.
    pub fn radial(&self, s: usize) -> &[f64] {
        &self.radial[s]
    }

    /// Angular factor of orientation `o`.
    pub fn angular(&self, o: usize) -> &[f64] {
        &self.angular[o]
    }

    /// Materialises kernel `(s, o)`; both indices are zero-based.
    pub fn kernel(&self, s: usize, o: usize) -> Vec<f64> {
        self.radial[s]
            .iter()
            .zip(&self.angular[o])
            .map(|(r, a)| r * a)
            .collect()
    }

    /// All kernels in `(s, o)` lexicographic order.
    pub fn kernels(&self) -> impl Iterator<Item = ((usize, usize), Vec<f64>)> + '_ {
        (0..self.scales())
            .flat_map(move |s| (0..self.orientations()).map(move |o| ((s, o), self.kernel(s, o))))
    }
}

/// Builds a bank for a `width x height` image.
pub fn build_filter_bank(width: usize, height: usize, params: FilterBankParams) -> Result<FilterBank> {
    FilterBank::new(width, height, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    #[test]
    fn grid_dc_and_nyquist() {
        let grid = build_frequency_grid(4, 4).unwrap();
        assert_eq!(grid.eta()[0], 0.0);
        let nyq = grid.index(2, 2);
        assert!((grid.eta()[nyq] - 0.5f64.hypot(0.5)).abs() < EPS);
        assert!((grid.eta()[nyq] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6);
    }

    #[test]
    fn grid_positive_x_axis_angle() {
        let grid = build_frequency_grid(8, 6).unwrap();
        assert_eq!(grid.alpha()[grid.index(1, 0)], 0.0);
        assert_eq!(grid.alpha()[grid.index(3, 0)], 0.0);
    }

    #[test]
    fn grid_rejects_tiny() {
        assert!(matches!(
            build_frequency_grid(1, 8),
            Err(Error::InvalidSize { .. })
        ));
        assert!(build_frequency_grid(8, 1).is_err());
    }

    #[test]
    fn grid_axes_span_half_open_interval() {
        let freqs: Vec<f64> = (0..6).map(|k| dft_frequency(k, 6)).collect();
        assert_eq!(
            freqs,
            vec![0.0, 1.0 / 6.0, 2.0 / 6.0, -0.5, -2.0 / 6.0, -1.0 / 6.0]
        );
        let odd: Vec<f64> = (0..5).map(|k| dft_frequency(k, 5)).collect();
        assert_eq!(odd, vec![0.0, 0.2, 0.4, -0.4, -0.2]);
    }

    #[test]
    fn butterworth_values() {
        let b = Butterworth::default();
        assert_eq!(b.response(0.0), 1.0);
        assert!((b.response(0.45) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        let expected = 1.0 / (1.0 + 2f64.powi(30)).sqrt();
        assert!((b.response(0.9) - expected).abs() < 1e-18);
        assert!((b.response(0.9) - 3.05e-5).abs() < 1e-7);
        assert!(Butterworth::new(0.0, 3).is_err());
        assert!(Butterworth::new(0.3, 0).is_err());
    }

    #[test]
    fn radial_peak_and_dc() {
        let b = Butterworth::default();
        assert_eq!(log_gaussian(0.0, 0.1, 0.55) * b.response(0.0), 0.0);
        let at_centre = log_gaussian(0.1, 0.1, 0.55) * b.response(0.1);
        assert!((at_centre - b.response(0.1)).abs() < EPS);
        assert!((at_centre - 1.0).abs() < 1e-9);
        let at_cutoff = log_gaussian(0.45, 0.45, 0.55) * b.response(0.45);
        assert!((at_cutoff - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6);
    }

    #[test]
    fn radial_rejects_out_of_band_centre() {
        let grid = build_frequency_grid(8, 8).unwrap();
        let b = Butterworth::default();
        assert!(radial_component(&grid, 0.5, 0.55, b).is_err());
        assert!(radial_component(&grid, 0.0, 0.55, b).is_err());
        let r = radial_component(&grid, 0.2, 0.55, b).unwrap();
        assert_eq!(r[0], 0.0);
    }

    #[test]
    fn angular_values() {
        let e = AngularExponent::Linear;
        assert_eq!(angular_value(0.3, 0.3, 0.2, e), 1.0);
        let opposite = angular_value(PI, 0.0, 0.2, e);
        let expected = (-PI / 0.08f64).exp();
        assert!((opposite - expected).abs() < 1e-30);
        assert!((opposite - 9.0e-18).abs() < 1e-18);
        let a = angular_value(1.5 * PI, 0.0, 0.2, e);
        let b = angular_value(0.5 * PI, 0.0, 0.2, e);
        assert!((a - b).abs() < 1e-15);
        let sq = angular_value(0.1, 0.0, 0.2, AngularExponent::Squared);
        assert!((sq - (-0.01f64 / 0.08).exp()).abs() < 1e-15);
    }

    #[test]
    fn single_kernel_peaks_on_zero_ridge() {
        let params = FilterBankParams {
            scales: 1,
            orientations: 1,
            min_wavelength: 4.0,
            ..Default::default()
        };
        let bank = build_filter_bank(64, 64, params).unwrap();
        let k = bank.kernel(0, 0);
        let (idx, _) = k
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        assert_eq!(bank.grid().alpha()[idx], 0.0);
        assert!((bank.grid().eta()[idx] - 0.25).abs() <= 1.0 / 64.0);
    }

    #[test]
    fn bank_rejects_aliasing_scale() {
        let params = FilterBankParams {
            min_wavelength: 2.0,
            ..Default::default()
        };
        assert!(build_filter_bank(16, 16, params).is_err());
        let params = FilterBankParams {
            scale_multiplier: 1.0,
            ..Default::default()
        };
        assert!(build_filter_bank(16, 16, params).is_err());
    }

    #[test]
    fn orientation_centres_cover_half_turn() {
        let p = FilterBankParams::default();
        let c = p.orientation_centres();
        assert_eq!(c.len(), 32);
        assert_eq!(c[0], 0.0);
        assert!((c[16] - PI / 2.0).abs() < EPS);
    }
}
