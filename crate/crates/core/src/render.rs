//! Raster artifacts: axis overlays and accumulator heatmaps.

use image::{GrayImage, Luma, Rgb, RgbImage};

use crate::eval::AxisSegment;
use crate::voting::VoteGrid;

/// Rank colors: red, yellow, green, blue, magenta, then repeating.
pub const RANK_COLORS: [[u8; 3]; 5] = [
    [255, 0, 0],
    [255, 255, 0],
    [0, 255, 0],
    [0, 0, 255],
    [255, 0, 255],
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlayStyle {
    /// Line thickness in pixels.
    pub thickness: u32,
    /// Side of the square endpoint markers.
    pub marker: u32,
}

impl Default for OverlayStyle {
    fn default() -> Self {
        Self {
            thickness: 2,
            marker: 7,
        }
    }
}

fn fill_square(img: &mut RgbImage, cx: f64, cy: f64, side: u32, color: Rgb<u8>) {
    let half = side as f64 / 2.0;
    let (x0, x1) = ((cx - half).round() as i64, (cx + half).round() as i64);
    let (y0, y1) = ((cy - half).round() as i64, (cy + half).round() as i64);
    for y in y0.max(0)..y1.min(img.height() as i64) {
        for x in x0.max(0)..x1.min(img.width() as i64) {
            img.put_pixel(x as u32, y as u32, color);
        }
    }
}

fn draw_segment(img: &mut RgbImage, seg: &AxisSegment, style: OverlayStyle, color: Rgb<u8>) {
    let (a, b) = (seg.a, seg.b);
    let steps = (b.0 - a.0).abs().max((b.1 - a.1).abs()).ceil().max(1.0) as usize * 2;
    for k in 0..=steps {
        let u = k as f64 / steps as f64;
        let (x, y) = (a.0 + u * (b.0 - a.0), a.1 + u * (b.1 - a.1));
        fill_square(img, x, y, style.thickness, color);
    }
    fill_square(img, a.0, a.1, style.marker, color);
    fill_square(img, b.0, b.1, style.marker, color);
}

/// Draws the first `top_k` axes onto a copy of `image`, strongest last so it
/// stays on top.
pub fn render_overlay(image: &RgbImage, axes: &[AxisSegment], top_k: usize, style: OverlayStyle) -> RgbImage {
    let mut out = image.clone();
    let shown = &axes[..top_k.min(axes.len())];
    for (rank, seg) in shown.iter().enumerate().rev() {
        draw_segment(&mut out, seg, style, Rgb(RANK_COLORS[rank % RANK_COLORS.len()]));
    }
    out
}

/// Grayscale heatmap of a `(rho, theta)` grid: `rho` along x, `theta` along y,
/// linearly scaled so the maximum maps to 255 and zero to 0. A grid without
/// positive mass renders black.
pub fn render_heatmap(grid: &VoteGrid) -> GrayImage {
    let max = grid.values.iter().copied().fold(0.0, f64::max);
    GrayImage::from_fn(grid.rho_bins as u32, grid.theta_bins as u32, |r, t| {
        let v = grid.get(r as usize, t as usize);
        let level = if max > 0.0 {
            (v.max(0.0) / max * 255.0).round()
        } else {
            0.0
        };
        Luma([level as u8])
    })
}
