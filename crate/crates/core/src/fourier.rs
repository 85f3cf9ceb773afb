//! Row-column 2-D FFT on row-major buffers, backed by `rustfft`.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Planned forward and inverse 2-D transforms for a fixed image size.
///
/// Output spectra use the natural (unshifted) DFT layout, matching
/// [`crate::filterbank::FrequencyGrid`]. The inverse is normalised by
/// `1 / (width * height)` so `inverse(forward(x)) == x`.
#[derive(Clone)]
pub struct Fft2d {
    width: usize,
    height: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Fft2d {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft2d")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish()
    }
}

impl Fft2d {
    pub fn new(width: usize, height: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            width,
            height,
            row_fwd: planner.plan_fft_forward(width),
            col_fwd: planner.plan_fft_forward(height),
            row_inv: planner.plan_fft_inverse(width),
            col_inv: planner.plan_fft_inverse(height),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn forward(&self, buffer: &mut [Complex64]) {
        self.process(buffer, &*self.row_fwd, &*self.col_fwd);
    }

    pub fn inverse(&self, buffer: &mut [Complex64]) {
        self.process(buffer, &*self.row_inv, &*self.col_inv);
        let scale = 1.0 / (self.width * self.height) as f64;
        buffer.iter_mut().for_each(|v| *v *= scale);
    }

    /// Forward transform of a real image.
    pub fn forward_real(&self, image: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = image.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward(&mut buf);
        buf
    }

    fn process(&self, buffer: &mut [Complex64], rows: &dyn Fft<f64>, cols: &dyn Fft<f64>) {
        let (w, h) = (self.width, self.height);
        assert_eq!(buffer.len(), w * h, "buffer does not match the planned size");
        let scratch_len = rows.get_inplace_scratch_len().max(cols.get_inplace_scratch_len());
        let mut scratch = vec![Complex64::default(); scratch_len];
        for row in buffer.chunks_exact_mut(w) {
            rows.process_with_scratch(row, &mut scratch);
        }
        let mut transposed = vec![Complex64::default(); w * h];
        transpose(buffer, &mut transposed, w, h);
        for col in transposed.chunks_exact_mut(h) {
            cols.process_with_scratch(col, &mut scratch);
        }
        transpose(&transposed, buffer, h, w);
    }
}

/// `src` is `rows x cols` row-major (`cols` wide); `dst` receives `cols x rows`.
fn transpose(src: &[Complex64], dst: &mut [Complex64], cols: usize, rows: usize) {
    const BLOCK: usize = 16;
    for rb in (0..rows).step_by(BLOCK) {
        for cb in (0..cols).step_by(BLOCK) {
            for r in rb..(rb + BLOCK).min(rows) {
                for c in cb..(cb + BLOCK).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}
