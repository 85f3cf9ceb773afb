//! Wavelet responses, amplitude/orientation maps and grid feature sampling.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::color::{Hsv, HsvImage, Plane};
use crate::error::{Error, Result};
use crate::filterbank::FilterBank;
use crate::fourier::Fft2d;

/// Raw amplitudes at or below this level are treated as numerical noise.
pub const DEGENERATE_FLOOR: f64 = 1e-10;

/// Modulus of the complex wavelet coefficients for every `(s, o)` kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseStack {
    pub width: usize,
    pub height: usize,
    pub scales: usize,
    pub orientations: usize,
    /// Indexed by `s * orientations + o`.
    pub responses: Vec<Vec<f64>>,
}

impl ResponseStack {
    pub fn get(&self, s: usize, o: usize) -> &[f64] {
        &self.responses[s * self.orientations + o]
    }
}

fn check_dims(gray: &Plane, bank: &FilterBank) -> Result<()> {
    if gray.dimensions() != (bank.width(), bank.height()) {
        return Err(Error::DimensionMismatch {
            expected: (bank.width(), bank.height()),
            actual: gray.dimensions(),
        });
    }
    Ok(())
}

fn filtered_modulus(spectrum: &[Complex64], kernel: &[f64], fft: &Fft2d) -> Vec<f64> {
    let mut buf: Vec<Complex64> = spectrum.iter().zip(kernel).map(|(f, k)| f * k).collect();
    fft.inverse(&mut buf);
    buf.iter().map(|c| c.norm()).collect()
}

/// Filters `gray` with every kernel of the bank and keeps the modulus.
///
/// This materialises `S * O` full-size planes; [`compute_edge_maps`] streams
/// the same computation without holding the stack.
pub fn apply_filter_bank(gray: &Plane, bank: &FilterBank) -> Result<ResponseStack> {
    check_dims(gray, bank)?;
    let fft = Fft2d::new(gray.width, gray.height);
    let spectrum = fft.forward_real(&gray.data);
    let indices: Vec<(usize, usize)> = (0..bank.scales())
        .flat_map(|s| (0..bank.orientations()).map(move |o| (s, o)))
        .collect();
    let responses = indices
        .par_iter()
        .map(|&(s, o)| filtered_modulus(&spectrum, &bank.kernel(s, o), &fft))
        .collect();
    Ok(ResponseStack {
        width: gray.width,
        height: gray.height,
        scales: bank.scales(),
        orientations: bank.orientations(),
        responses,
    })
}

/// Maps a filter orientation in `[0, pi)` into `[-pi/2, pi/2)`.
#[inline]
pub fn fold_orientation(alpha: f64) -> f64 {
    let a = alpha.rem_euclid(PI);
    if a >= FRAC_PI_2 {
        a - PI
    } else {
        a
    }
}

/// Amplitude map `J` (globally max-normalised) and orientation map `phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMaps {
    pub amplitude: Plane,
    pub orientation: Plane,
    /// Flat kernel index `s * O + o` of the per-pixel argmax.
    pub kernel_index: Vec<u32>,
    /// Largest raw response before normalisation.
    pub raw_max: f64,
    /// Set when no pixel responded above [`DEGENERATE_FLOOR`].
    pub degenerate: bool,
}

impl EdgeMaps {
    pub fn width(&self) -> usize {
        self.amplitude.width
    }

    pub fn height(&self) -> usize {
        self.amplitude.height
    }
}

#[derive(Clone)]
struct ArgMax {
    value: Vec<f64>,
    index: Vec<u32>,
}

impl ArgMax {
    fn new(len: usize) -> Self {
        Self {
            value: vec![f64::NEG_INFINITY; len],
            index: vec![u32::MAX; len],
        }
    }

    /// Ties go to the lowest kernel index, so merge order never matters.
    fn offer(&mut self, kernel: u32, response: &[f64]) {
        for ((best, idx), &v) in self.value.iter_mut().zip(&mut self.index).zip(response) {
            if v > *best || (v == *best && kernel < *idx) {
                *best = v;
                *idx = kernel;
            }
        }
    }

    fn merge(mut self, other: ArgMax) -> ArgMax {
        for i in 0..self.value.len() {
            let (v, k) = (other.value[i], other.index[i]);
            if v > self.value[i] || (v == self.value[i] && k < self.index[i]) {
                self.value[i] = v;
                self.index[i] = k;
            }
        }
        self
    }
}

fn finish_maps(width: usize, height: usize, argmax: ArgMax, bank: &FilterBank) -> EdgeMaps {
    let o_count = bank.orientations();
    let centres = bank.orientation_centres();
    let raw_max = argmax.value.iter().copied().fold(0.0, f64::max);
    let degenerate = raw_max <= DEGENERATE_FLOOR;
    let (amplitude, orientation) = if degenerate {
        (vec![0.0; width * height], vec![0.0; width * height])
    } else {
        let amp = argmax.value.iter().map(|&v| v / raw_max).collect();
        let phi = argmax
            .index
            .iter()
            .map(|&k| fold_orientation(centres[k as usize % o_count]))
            .collect();
        (amp, phi)
    };
    EdgeMaps {
        amplitude: Plane::new(width, height, amplitude),
        orientation: Plane::new(width, height, orientation),
        kernel_index: argmax.index,
        raw_max,
        degenerate,
    }
}

/// Per-pixel maximum over all kernels and the orientation of the winner.
pub fn edge_maps(stack: &ResponseStack, bank: &FilterBank) -> Result<EdgeMaps> {
    if stack.responses.is_empty() {
        return Err(Error::param("stack", "response stack is empty"));
    }
    if (stack.scales, stack.orientations) != (bank.scales(), bank.orientations()) {
        return Err(Error::DimensionMismatch {
            expected: (bank.scales(), bank.orientations()),
            actual: (stack.scales, stack.orientations),
        });
    }
    let mut argmax = ArgMax::new(stack.width * stack.height);
    for (k, r) in stack.responses.iter().enumerate() {
        argmax.offer(k as u32, r);
    }
    Ok(finish_maps(stack.width, stack.height, argmax, bank))
}

/// Fused `apply_filter_bank` + `edge_maps` that never holds the full stack.
///
/// Results are identical to the two-step path; `parallel` only changes how
/// kernels are scheduled.
pub fn compute_edge_maps(gray: &Plane, bank: &FilterBank, parallel: bool) -> Result<EdgeMaps> {
    check_dims(gray, bank)?;
    let (w, h) = gray.dimensions();
    let fft = Fft2d::new(w, h);
    let spectrum = fft.forward_real(&gray.data);
    let o_count = bank.orientations();
    let total = bank.len();
    let respond = |k: usize| filtered_modulus(&spectrum, &bank.kernel(k / o_count, k % o_count), &fft);
    let argmax = if parallel {
        (0..total)
            .into_par_iter()
            .fold(
                || ArgMax::new(w * h),
                |mut acc, k| {
                    acc.offer(k as u32, &respond(k));
                    acc
                },
            )
            .reduce(|| ArgMax::new(w * h), ArgMax::merge)
    } else {
        let mut acc = ArgMax::new(w * h);
        for k in 0..total {
            acc.offer(k as u32, &respond(k));
        }
        acc
    };
    Ok(finish_maps(w, h, argmax, bank))
}

/// Axis-aligned cell `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl Cell {
    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x0 && x < self.x1 && y >= self.y0 && y < self.y1
    }

    pub fn pixels(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (self.y0..self.y1).flat_map(move |y| (self.x0..self.x1).map(move |x| (x, y)))
    }
}

/// Edge feature sampled from one non-homogeneous grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeaturePoint {
    pub x: usize,
    pub y: usize,
    /// Normalised amplitude `J` at the point; the maximum over its cell.
    pub amplitude: f64,
    /// Edge orientation in `[-pi/2, pi/2)`.
    pub orientation: f64,
    pub color: Hsv,
    pub cell_id: usize,
    pub cell: Cell,
}

impl FeaturePoint {
    pub fn position(&self) -> (f64, f64) {
        (self.x as f64, self.y as f64)
    }
}

/// Cell side used when none is configured: `max(2, round(max(W, H) / divisor))`.
pub fn default_cell_size(width: usize, height: usize, divisor: f64) -> usize {
    ((width.max(height) as f64 / divisor).round() as usize).max(2)
}

/// Tiles the image into `cell_size` cells and keeps the argmax of `J` in every
/// cell whose maximum exceeds `homogeneity_threshold`.
///
/// Border cells may be partial. Ties inside a cell go to the first pixel in
/// row-major order.
pub fn sample_feature_points(
    maps: &EdgeMaps,
    hsv: &HsvImage,
    cell_size: usize,
    homogeneity_threshold: f64,
) -> Result<Vec<FeaturePoint>> {
    if cell_size < 2 {
        return Err(Error::param("cell_size", "must be >= 2"));
    }
    let (w, h) = (maps.width(), maps.height());
    if (hsv.width, hsv.height) != (w, h) {
        return Err(Error::DimensionMismatch {
            expected: (w, h),
            actual: (hsv.width, hsv.height),
        });
    }
    let cells_x = w.div_ceil(cell_size);
    let cells_y = h.div_ceil(cell_size);
    let mut out = Vec::new();
    for cy in 0..cells_y {
        for cx in 0..cells_x {
            let cell = Cell {
                x0: cx * cell_size,
                y0: cy * cell_size,
                x1: ((cx + 1) * cell_size).min(w),
                y1: ((cy + 1) * cell_size).min(h),
            };
            let mut best = (cell.x0, cell.y0, f64::NEG_INFINITY);
            for (x, y) in cell.pixels() {
                let j = maps.amplitude.get(x, y);
                if j > best.2 {
                    best = (x, y, j);
                }
            }
            let (x, y, amplitude) = best;
            if amplitude > homogeneity_threshold {
                out.push(FeaturePoint {
                    x,
                    y,
                    amplitude,
                    orientation: maps.orientation.get(x, y),
                    color: hsv.get(x, y),
                    cell_id: cy * cells_x + cx,
                    cell,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filterbank::{build_filter_bank, FilterBankParams};

    fn small_bank(w: usize, h: usize) -> FilterBank {
        build_filter_bank(
            w,
            h,
            FilterBankParams {
                scales: 3,
                orientations: 8,
                ..Default::default()
            },
        )
        .unwrap()
    }

    fn hsv_of(w: usize, h: usize) -> HsvImage {
        HsvImage {
            width: w,
            height: h,
            pixels: vec![Hsv::default(); w * h],
        }
    }

    fn maps_from(amplitude: Plane) -> EdgeMaps {
        let (w, h) = amplitude.dimensions();
        EdgeMaps {
            amplitude,
            orientation: Plane::zeros(w, h),
            kernel_index: vec![0; w * h],
            raw_max: 1.0,
            degenerate: false,
        }
    }

    #[test]
    fn fold_orientation_range() {
        assert_eq!(fold_orientation(0.0), 0.0);
        assert!((fold_orientation(FRAC_PI_2) + FRAC_PI_2).abs() < 1e-15);
        assert!((fold_orientation(3.0 * PI / 4.0) + PI / 4.0).abs() < 1e-15);
        assert!((fold_orientation(PI / 8.0) - PI / 8.0).abs() < 1e-15);
    }

    #[test]
    fn constant_image_has_no_response() {
        let bank = small_bank(32, 24);
        let gray = Plane::new(32, 24, vec![0.37; 32 * 24]);
        let stack = apply_filter_bank(&gray, &bank).unwrap();
        for r in &stack.responses {
            assert!(r.iter().all(|&v| v <= 1e-10));
        }
        let maps = edge_maps(&stack, &bank).unwrap();
        assert!(maps.degenerate);
        assert!(maps.amplitude.data.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let bank = small_bank(16, 16);
        let gray = Plane::zeros(16, 12);
        assert!(matches!(
            apply_filter_bank(&gray, &bank),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn single_response_normalises_to_one() {
        let bank = small_bank(4, 4);
        let mut responses = vec![vec![0.0; 16]; bank.len()];
        let k = 2 * bank.orientations() + 5;
        responses[k][6] = 0.3;
        let stack = ResponseStack {
            width: 4,
            height: 4,
            scales: bank.scales(),
            orientations: bank.orientations(),
            responses,
        };
        let maps = edge_maps(&stack, &bank).unwrap();
        assert!(!maps.degenerate);
        assert_eq!(maps.amplitude.data[6], 1.0);
        assert_eq!(maps.amplitude.data.iter().filter(|&&v| v != 0.0).count(), 1);
        assert_eq!(maps.kernel_index[6], k as u32);
        let expected = fold_orientation(5.0 * PI / 8.0);
        assert_eq!(maps.orientation.data[6], expected);
        assert!((expected + 3.0 * PI / 8.0).abs() < 1e-15);
    }

    #[test]
    fn fused_path_matches_stack_path() {
        let (w, h) = (24, 20);
        let bank = small_bank(w, h);
        let gray = Plane::from_fn(w, h, |x, y| ((x * 3 + y * 5) % 7) as f64 / 7.0);
        let stack = apply_filter_bank(&gray, &bank).unwrap();
        let two_step = edge_maps(&stack, &bank).unwrap();
        assert_eq!(compute_edge_maps(&gray, &bank, false).unwrap(), two_step);
        assert_eq!(compute_edge_maps(&gray, &bank, true).unwrap(), two_step);
    }

    #[test]
    fn black_image_yields_no_features() {
        let maps = maps_from(Plane::zeros(32, 32));
        let pts = sample_feature_points(&maps, &hsv_of(32, 32), 8, 0.05).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn single_dot_yields_single_feature() {
        let amp = Plane::from_fn(32, 32, |x, y| if (x, y) == (10, 10) { 1.0 } else { 0.0 });
        let pts = sample_feature_points(&maps_from(amp), &hsv_of(32, 32), 8, 0.05).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!((pts[0].x, pts[0].y), (10, 10));
        assert_eq!(pts[0].cell_id, 5);
        assert!(pts[0].cell.contains(10, 10));
    }

    #[test]
    fn feature_count_bounded_by_cells() {
        let size = 256;
        let cell = default_cell_size(size, size, 64.0);
        assert_eq!(cell, 4);
        let amp = Plane::from_fn(size, size, |x, y| ((x * 31 + y * 17) % 97) as f64 / 96.0);
        let pts = sample_feature_points(&maps_from(amp), &hsv_of(size, size), cell, 0.05).unwrap();
        assert!(pts.len() <= 64 * 64);
        let mut ids: Vec<usize> = pts.iter().map(|p| p.cell_id).collect();
        ids.dedup();
        assert_eq!(ids.len(), pts.len());
    }

    #[test]
    fn partial_border_cells_are_sampled() {
        let amp = Plane::from_fn(10, 10, |x, y| if (x, y) == (9, 9) { 1.0 } else { 0.0 });
        let pts = sample_feature_points(&maps_from(amp), &hsv_of(10, 10), 4, 0.05).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(
            pts[0].cell,
            Cell {
                x0: 8,
                y0: 8,
                x1: 10,
                y1: 10
            }
        );
    }

    #[test]
    fn small_cells_rejected() {
        let maps = maps_from(Plane::zeros(8, 8));
        assert!(sample_feature_points(&maps, &hsv_of(8, 8), 1, 0.05).is_err());
    }

    #[test]
    fn default_cell_size_has_floor() {
        assert_eq!(default_cell_size(40, 30, 64.0), 2);
        assert_eq!(default_cell_size(1024, 768, 64.0), 16);
    }
}
