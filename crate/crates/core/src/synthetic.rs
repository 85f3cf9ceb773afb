//! Synthetic images with a known mirror axis, for tests and demos.

use image::{Rgb, RgbImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eval::AxisSegment;

fn random_color(rng: &mut ChaCha8Rng) -> Rgb<u8> {
    Rgb([rng.gen(), rng.gen(), rng.gen()])
}

/// A `size x size` image whose left half is random rectangles and discs and
/// whose right half is its horizontal mirror: pixel `x` equals `size-1-x`.
pub fn mirrored_texture(size: u32, seed: u64) -> RgbImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = size.div_ceil(2);
    let mut img = RgbImage::from_pixel(size, size, random_color(&mut rng));
    let shapes = rng.gen_range(25..40);
    for _ in 0..shapes {
        let color = random_color(&mut rng);
        let cx = rng.gen_range(0.0..half as f64);
        let cy = rng.gen_range(0.0..size as f64);
        let a = rng.gen_range(3.0..size as f64 / 6.0);
        let b = rng.gen_range(3.0..size as f64 / 6.0);
        let disc = rng.gen_bool(0.5);
        for y in 0..size {
            for x in 0..half {
                let (dx, dy) = ((x as f64 - cx) / a, (y as f64 - cy) / b);
                let inside = if disc {
                    dx * dx + dy * dy <= 1.0
                } else {
                    dx.abs() <= 1.0 && dy.abs() <= 1.0
                };
                if inside {
                    img.put_pixel(x, y, color);
                }
            }
        }
    }
    for y in 0..size {
        for x in 0..half {
            let p = *img.get_pixel(x, y);
            img.put_pixel(size - 1 - x, y, p);
        }
    }
    img
}

/// The mirror axis of [`mirrored_texture`], spanning the full height.
pub fn mirrored_texture_axis(size: u32) -> AxisSegment {
    let c = (size as f64 - 1.0) / 2.0;
    AxisSegment::new((c, 0.0), (c, size as f64 - 1.0))
}

/// Side of the largest centred square that stays inside a `size` square
/// after rotating it by `degrees`.
pub fn rotated_crop_side(size: u32, degrees: f64) -> u32 {
    let t = degrees.to_radians();
    (size as f64 / (t.cos().abs() + t.sin().abs())).floor() as u32
}

fn bilinear(img: &RgbImage, x: f64, y: f64) -> Rgb<u8> {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let x = x.clamp(0.0, (w - 1) as f64);
    let y = y.clamp(0.0, (h - 1) as f64);
    let (x0, y0) = (x.floor() as i64, y.floor() as i64);
    let (x1, y1) = ((x0 + 1).min(w - 1), (y0 + 1).min(h - 1));
    let (fx, fy) = (x - x0 as f64, y - y0 as f64);
    let at = |xx: i64, yy: i64, c: usize| img.get_pixel(xx as u32, yy as u32)[c] as f64;
    let mut out = [0u8; 3];
    for (c, o) in out.iter_mut().enumerate() {
        let top = at(x0, y0, c) * (1.0 - fx) + at(x1, y0, c) * fx;
        let bottom = at(x0, y1, c) * (1.0 - fx) + at(x1, y1, c) * fx;
        *o = (top * (1.0 - fy) + bottom * fy).round().clamp(0.0, 255.0) as u8;
    }
    Rgb(out)
}

/// Rotates a square image by `degrees` about its centre (bilinear) and keeps
/// the largest centred square free of padding.
///
/// A source point `p` lands at `c_out + R(degrees) (p - c_src)` with `R` the
/// usual rotation matrix in pixel coordinates (y down).
pub fn rotate_and_crop(img: &RgbImage, degrees: f64) -> RgbImage {
    let side = rotated_crop_side(img.width().min(img.height()), degrees);
    let t = degrees.to_radians();
    let (s, c) = t.sin_cos();
    let cs = (
        (img.width() as f64 - 1.0) / 2.0,
        (img.height() as f64 - 1.0) / 2.0,
    );
    let co = (side as f64 - 1.0) / 2.0;
    RgbImage::from_fn(side, side, |u, v| {
        let (dx, dy) = (u as f64 - co, v as f64 - co);
        // inverse rotation
        let x = cs.0 + c * dx + s * dy;
        let y = cs.1 - s * dx + c * dy;
        bilinear(img, x, y)
    })
}

/// The vertical centre axis of a `size` square after [`rotate_and_crop`],
/// clipped to the cropped image.
pub fn rotated_axis(size: u32, degrees: f64) -> AxisSegment {
    let side = rotated_crop_side(size, degrees);
    let t = degrees.to_radians();
    let dir = (-t.sin(), t.cos());
    let co = (side as f64 - 1.0) / 2.0;
    let limit = |d: f64| {
        if d.abs() < 1e-12 {
            f64::INFINITY
        } else {
            co / d.abs()
        }
    };
    let reach = limit(dir.0).min(limit(dir.1));
    AxisSegment::new(
        (co - reach * dir.0, co - reach * dir.1),
        (co + reach * dir.0, co + reach * dir.1),
    )
}
