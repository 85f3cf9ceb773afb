//! Textural (edge orientation) and color histograms attached to each feature,
//! plus the intersection and reversal primitives used by the pair weights.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::color::{HsvImage, Plane};
use crate::error::{Error, Result};
use crate::features::Cell;

/// Nudges values sitting on a bin's lower edge into that bin despite rounding.
const BIN_EPS: f64 = 1e-9;

/// Amplitude-weighted orientation histogram, circularly shifted so the bin of
/// the anchor orientation comes first.
#[derive(Debug, Clone, PartialEq)]
pub struct TexturalHistogram {
    pub bins: Vec<f64>,
    pub anchor: f64,
}

/// Color (or contrast) histogram over a window around a feature.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorHistogram {
    pub bins: Vec<f64>,
    /// `None` for the luminance fallback.
    pub layout: Option<ColorLayout>,
}

/// Hue, saturation and value bin counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorLayout {
    pub hue: usize,
    pub saturation: usize,
    pub value: usize,
}

impl Default for ColorLayout {
    fn default() -> Self {
        Self {
            hue: 8,
            saturation: 2,
            value: 2,
        }
    }
}

impl ColorLayout {
    pub fn len(&self) -> usize {
        self.hue * self.saturation * self.value
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        if self.hue < 1 || self.saturation < 1 || self.value < 1 {
            return Err(Error::param("color_layout", "every component must be >= 1"));
        }
        Ok(())
    }

    /// Flat bin index `c_hu * C_sa * C_va + c_sa * C_va + c_va`.
    pub fn flat_index(&self, c_hu: usize, c_sa: usize, c_va: usize) -> usize {
        c_hu * self.saturation * self.value + c_sa * self.value + c_va
    }
}

/// How the second histogram of a pair is mirrored before intersection.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TextureReversal {
    /// `n -> (N - n) mod N`: mirror about the anchor bin, which stays at 0.
    #[default]
    Anchored,
    /// `n -> N - 1 - n`: plain index mirror.
    Index,
}

impl std::str::FromStr for TextureReversal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "anchored" => Ok(Self::Anchored),
            "index" => Ok(Self::Index),
            other => Err(Error::param(
                "texture_reversal",
                format!("`{other}` is neither `anchored` nor `index`"),
            )),
        }
    }
}

/// Scales `bins` to unit L1 norm; all-zero input stays zero.
pub fn l1_normalize(bins: &mut [f64]) {
    let total: f64 = bins.iter().sum();
    if total > 0.0 {
        bins.iter_mut().for_each(|b| *b /= total);
    }
}

/// Bin of an edge orientation (any real angle, taken modulo pi) among `n`
/// uniform bins over `[0, pi)`.
pub fn orientation_bin(phi: f64, n: usize) -> usize {
    let u = phi.rem_euclid(PI);
    let b = (u / (PI / n as f64) + BIN_EPS).floor() as usize;
    b % n
}

pub fn textural_histogram(
    cell: &Cell,
    amplitude: &Plane,
    orientation: &Plane,
    bins: usize,
    anchor: f64,
) -> Result<TexturalHistogram> {
    if bins < 2 {
        return Err(Error::param("texture_bins", "must be >= 2"));
    }
    let mut raw = vec![0.0; bins];
    for (x, y) in cell.pixels() {
        raw[orientation_bin(orientation.get(x, y), bins)] += amplitude.get(x, y);
    }
    l1_normalize(&mut raw);
    let shift = orientation_bin(anchor, bins);
    let shifted = (0..bins).map(|n| raw[(n + shift) % bins]).collect();
    Ok(TexturalHistogram {
        bins: shifted,
        anchor,
    })
}

/// Uniform bin of `value` in `[0, 1]` with the last interval closed.
#[inline]
fn unit_bin(value: f64, count: usize) -> usize {
    ((value.clamp(0.0, 1.0) * count as f64) as usize).min(count - 1)
}

#[inline]
fn hue_bin(hue: f64, count: usize) -> usize {
    ((hue.rem_euclid(TAU) / TAU * count as f64) as usize).min(count - 1)
}

pub fn color_histogram(window: &Cell, hsv: &HsvImage, layout: ColorLayout) -> Result<ColorHistogram> {
    layout.validate()?;
    let mut bins = vec![0.0; layout.len()];
    for (x, y) in window.pixels() {
        let p = hsv.get(x, y);
        let c = layout.flat_index(
            hue_bin(p.h, layout.hue),
            unit_bin(p.s, layout.saturation),
            unit_bin(p.v, layout.value),
        );
        bins[c] += 1.0;
    }
    l1_normalize(&mut bins);
    Ok(ColorHistogram {
        bins,
        layout: Some(layout),
    })
}

/// Luminance histogram standing in for color on gray or near-gray input.
pub fn grayscale_color_histogram(window: &Cell, gray: &Plane, bins: usize) -> Result<ColorHistogram> {
    if bins < 2 {
        return Err(Error::param("color_bins", "must be >= 2"));
    }
    let mut out = vec![0.0; bins];
    for (x, y) in window.pixels() {
        out[unit_bin(gray.get(x, y), bins)] += 1.0;
    }
    l1_normalize(&mut out);
    Ok(ColorHistogram {
        bins: out,
        layout: None,
    })
}

/// Square window of side `2 * radius + 1` centred on `(x, y)`, clipped to the image.
pub fn centred_window(x: usize, y: usize, radius: usize, width: usize, height: usize) -> Cell {
    Cell {
        x0: x.saturating_sub(radius),
        y0: y.saturating_sub(radius),
        x1: (x + radius + 1).min(width),
        y1: (y + radius + 1).min(height),
    }
}

/// Plain index mirror: bin `n` takes bin `N - 1 - n`.
pub fn reverse(h: &TexturalHistogram) -> TexturalHistogram {
    TexturalHistogram {
        bins: h.bins.iter().rev().copied().collect(),
        anchor: h.anchor,
    }
}

/// Mirror about bin 0: bin `n` takes bin `(N - n) mod N`.
pub fn reverse_about_anchor(h: &TexturalHistogram) -> TexturalHistogram {
    let n = h.bins.len();
    TexturalHistogram {
        bins: (0..n).map(|i| h.bins[(n - i) % n]).collect(),
        anchor: h.anchor,
    }
}

/// Histogram intersection `sum_n min(a_n, b_n)`.
pub fn intersection(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok(a.iter().zip(b).map(|(x, y)| x.min(*y)).sum())
}

/// Intersection of `a` with the mirrored `b`, without allocating.
pub fn mirrored_intersection(a: &[f64], b: &[f64], reversal: TextureReversal) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len();
    match reversal {
        TextureReversal::Index => a.iter().zip(b.iter().rev()).map(|(x, y)| x.min(*y)).sum(),
        TextureReversal::Anchored => (0..n).map(|i| a[i].min(b[(n - i) % n])).sum(),
    }
}
