//! Amplitude and orientation maps plus the sampled feature points.
//!
//!     cargo run --release --example edge_features -- [image] [out.png]
//!
//! Without an image a synthetic mirrored texture is used. The output shows
//! the normalised amplitude with feature points marked in red.

use mirror_axis::color::{to_grayscale, to_hsv};
use mirror_axis::features::{compute_edge_maps, default_cell_size, sample_feature_points};
use mirror_axis::filterbank::FilterBank;
use mirror_axis::pipeline::load_image;
use mirror_axis::synthetic::mirrored_texture;
use mirror_axis::{Config, Result};

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let rgb = match args.next() {
        Some(path) => load_image(path)?.0,
        None => mirrored_texture(192, 7),
    };
    let out = args.next().unwrap_or_else(|| "edges.png".into());
    let cfg = Config::default();
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);

    let bank = FilterBank::new(w, h, cfg.filter_bank_params())?;
    let edges = compute_edge_maps(&to_grayscale(&rgb), &bank, true)?;
    let cell = default_cell_size(w, h, cfg.cell_divisor);
    let points = sample_feature_points(&edges, &to_hsv(&rgb), cell, cfg.homogeneity_threshold)?;
    println!(
        "{w}x{h}: raw maximum {:.3e}, cell {cell} px, {} feature points",
        edges.raw_max,
        points.len()
    );

    let mut img = image::RgbImage::from_fn(w as u32, h as u32, |x, y| {
        let v = (edges.amplitude.get(x as usize, y as usize) * 255.0).round() as u8;
        image::Rgb([v, v, v])
    });
    for p in &points {
        img.put_pixel(p.x as u32, p.y as u32, image::Rgb([255, 0, 0]));
    }
    mirror_axis::commands::save_png(img, out.as_ref())?;
    println!("written to {out}");
    Ok(())
}
