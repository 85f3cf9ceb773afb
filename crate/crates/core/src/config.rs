//! Pipeline configuration: a flat TOML table whose keys mirror the module
//! parameters. Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filterbank::{AngularExponent, Butterworth, FilterBankParams};
use crate::histograms::{ColorLayout, TextureReversal};
use crate::voting::NmsWindow;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "MIRROR_AXIS_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub scales: usize,
    pub orientations: usize,
    pub sigma_eta: f64,
    pub sigma_alpha: f64,
    /// Wavelength of the finest scale, in pixels.
    pub min_wavelength: f64,
    pub scale_multiplier: f64,
    pub angular_exponent: AngularExponent,
    pub butterworth_cutoff: f64,
    pub butterworth_order: u32,
    pub texture_bins: usize,
    /// Hue, saturation and value bin counts.
    pub color_layout: [usize; 3],
    pub texture_reversal: TextureReversal,
    /// Cell side is `max(W, H) / cell_divisor`, rounded, at least 2.
    pub cell_divisor: f64,
    /// Fixed cell side in pixels; 0 derives it from `cell_divisor`.
    pub cell_size: usize,
    pub homogeneity_threshold: f64,
    /// Color window half-side as a multiple of the cell side.
    pub color_window_factor: f64,
    /// Below this mean saturation the luminance histogram replaces color.
    pub grayscale_saturation_threshold: f64,
    /// `[rho, theta]` in bins.
    pub smoothing_sigma: [f64; 2],
    /// `[rho, theta]` full window extent in bins.
    pub nms_window: [usize; 2],
    pub max_peaks: usize,
    /// Keep only the strongest features when set; 0 disables the cap.
    pub max_features: usize,
    /// Single-threaded, reproducible execution.
    pub deterministic: bool,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            scales: 12,
            orientations: 32,
            sigma_eta: 0.55,
            sigma_alpha: 0.2,
            min_wavelength: 3.0,
            scale_multiplier: 1.45,
            angular_exponent: AngularExponent::Linear,
            butterworth_cutoff: 0.45,
            butterworth_order: 15,
            texture_bins: 32,
            color_layout: [8, 2, 2],
            texture_reversal: TextureReversal::Anchored,
            cell_divisor: 64.0,
            cell_size: 0,
            homogeneity_threshold: 0.05,
            color_window_factor: 1.0,
            grayscale_saturation_threshold: 0.05,
            smoothing_sigma: [2.0, 2.0],
            nms_window: [11, 11],
            max_peaks: 10,
            max_features: 0,
            deterministic: false,
        }
    }
}

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config always serialises")
    }

    /// Applies a `key=value` override; `value` uses TOML syntax, bare words
    /// are taken as strings.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{assignment}` is not key=value")))?;
        let (key, value) = (key.trim(), value.trim());
        let parsed: toml::Value = match toml::from_str::<toml::Table>(&format!("v = {value}")) {
            Ok(mut t) => t.remove("v").expect("key present"),
            Err(_) => toml::Value::String(value.to_string()),
        };
        let mut table = toml::Table::try_from(&*self).map_err(|e| Error::Config(e.to_string()))?;
        if !table.contains_key(key) {
            return Err(Error::Config(format!("unknown key `{key}`")));
        }
        table.insert(key.to_string(), parsed);
        let updated: Config = table
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        updated.validate()?;
        *self = updated;
        Ok(())
    }

    pub fn filter_bank_params(&self) -> FilterBankParams {
        FilterBankParams {
            scales: self.scales,
            orientations: self.orientations,
            sigma_eta: self.sigma_eta,
            sigma_alpha: self.sigma_alpha,
            min_wavelength: self.min_wavelength,
            scale_multiplier: self.scale_multiplier,
            angular_exponent: self.angular_exponent,
            lowpass: Butterworth {
                cutoff: self.butterworth_cutoff,
                order: self.butterworth_order,
            },
        }
    }

    pub fn color_layout(&self) -> ColorLayout {
        ColorLayout {
            hue: self.color_layout[0],
            saturation: self.color_layout[1],
            value: self.color_layout[2],
        }
    }

    pub fn nms(&self) -> NmsWindow {
        NmsWindow {
            rho: self.nms_window[0],
            theta: self.nms_window[1],
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.filter_bank_params().validate()?;
        self.color_layout().validate()?;
        if self.texture_bins < 2 {
            return Err(Error::param("texture_bins", "must be >= 2"));
        }
        if self.color_layout().len() < 2 {
            return Err(Error::param("color_layout", "needs at least 2 bins in total"));
        }
        if !(self.cell_divisor > 0.0) {
            return Err(Error::param("cell_divisor", "must be > 0"));
        }
        if self.cell_size == 1 {
            return Err(Error::param("cell_size", "must be 0 (derived) or >= 2"));
        }
        if !(0.0..1.0).contains(&self.homogeneity_threshold) {
            return Err(Error::param("homogeneity_threshold", "must lie in [0, 1)"));
        }
        if !(self.color_window_factor >= 0.0) {
            return Err(Error::param("color_window_factor", "must be >= 0"));
        }
        if !(self.smoothing_sigma[0] > 0.0 && self.smoothing_sigma[1] > 0.0) {
            return Err(Error::param("smoothing_sigma", "both sigmas must be > 0"));
        }
        if self.nms_window[0] < 1 || self.nms_window[1] < 1 {
            return Err(Error::param("nms_window", "both extents must be >= 1"));
        }
        if self.max_peaks < 1 {
            return Err(Error::param("max_peaks", "must be >= 1"));
        }
        Ok(())
    }
}
