//! Raster planes, luminance and HSV conversion.

use std::f64::consts::TAU;

use image::RgbImage;

/// Row-major `f64` raster.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl Plane {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), width * height, "plane data does not match its size");
        Self { width, height, data }
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self::new(width, height, vec![0.0; width * height])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Hexcone HSV triple. Hue in radians `[0, 2pi)`, saturation and value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Hsv {
    pub h: f64,
    pub s: f64,
    pub v: f64,
}

/// Row-major HSV raster.
#[derive(Debug, Clone, PartialEq)]
pub struct HsvImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<Hsv>,
}

impl HsvImage {
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Hsv {
        self.pixels[y * self.width + x]
    }

    pub fn mean_saturation(&self) -> f64 {
        if self.pixels.is_empty() {
            return 0.0;
        }
        self.pixels.iter().map(|p| p.s).sum::<f64>() / self.pixels.len() as f64
    }
}

/// Converts an RGB triple in `[0, 1]` to HSV. Achromatic pixels get hue 0.
pub fn rgb_to_hsv(r: f64, g: f64, b: f64) -> Hsv {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    let v = max;
    let s = if max > 0.0 { delta / max } else { 0.0 };
    if delta <= 0.0 {
        return Hsv { h: 0.0, s, v };
    }
    // sextant in [0, 6)
    let sextant = if max == r {
        (g - b) / delta
    } else if max == g {
        (b - r) / delta + 2.0
    } else {
        (r - g) / delta + 4.0
    };
    let mut h = sextant * TAU / 6.0;
    if h < 0.0 {
        h += TAU;
    }
    if h >= TAU {
        h -= TAU;
    }
    Hsv { h, s, v }
}

pub fn to_hsv(image: &RgbImage) -> HsvImage {
    let (w, h) = image.dimensions();
    let pixels = image
        .pixels()
        .map(|p| rgb_to_hsv(p[0] as f64 / 255.0, p[1] as f64 / 255.0, p[2] as f64 / 255.0))
        .collect();
    HsvImage {
        width: w as usize,
        height: h as usize,
        pixels,
    }
}

/// Rec. 601 luma of an RGB triple in `[0, 1]`.
#[inline]
pub fn luminance(r: f64, g: f64, b: f64) -> f64 {
    0.299 * r + 0.587 * g + 0.114 * b
}

/// Luminance plane scaled to `[0, 1]`.
pub fn to_grayscale(image: &RgbImage) -> Plane {
    let (w, h) = image.dimensions();
    let data = image
        .pixels()
        .map(|p| luminance(p[0] as f64 / 255.0, p[1] as f64 / 255.0, p[2] as f64 / 255.0))
        .collect();
    Plane::new(w as usize, h as usize, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use image::Rgb;

    #[test]
    fn grayscale_coefficients() {
        let mut img = RgbImage::new(3, 1);
        img.put_pixel(0, 0, Rgb([255, 255, 255]));
        img.put_pixel(1, 0, Rgb([0, 0, 0]));
        img.put_pixel(2, 0, Rgb([255, 0, 0]));
        let g = to_grayscale(&img);
        assert!((g.get(0, 0) - 1.0).abs() < 1e-12);
        assert_eq!(g.get(1, 0), 0.0);
        assert!((g.get(2, 0) - 0.299).abs() < 1e-12);
    }

    #[test]
    fn hsv_primaries() {
        let red = rgb_to_hsv(1.0, 0.0, 0.0);
        assert_eq!((red.h, red.s, red.v), (0.0, 1.0, 1.0));
        let green = rgb_to_hsv(0.0, 1.0, 0.0);
        assert!((green.h - TAU / 3.0).abs() < 1e-12);
        let blue = rgb_to_hsv(0.0, 0.0, 1.0);
        assert!((blue.h - 2.0 * TAU / 3.0).abs() < 1e-12);
        let magenta = rgb_to_hsv(1.0, 0.0, 1.0);
        assert!((magenta.h - 5.0 * TAU / 6.0).abs() < 1e-12);
        let grey = rgb_to_hsv(0.5, 0.5, 0.5);
        assert_eq!((grey.h, grey.s, grey.v), (0.0, 0.0, 0.5));
        let black = rgb_to_hsv(0.0, 0.0, 0.0);
        assert_eq!((black.h, black.s, black.v), (0.0, 0.0, 0.0));
    }

    #[test]
    fn hue_stays_below_full_turn() {
        // r max, b slightly above g: hue just under 2pi
        let hsv = rgb_to_hsv(1.0, 0.0, 1e-17);
        assert!(hsv.h >= 0.0 && hsv.h < TAU);
    }
}
