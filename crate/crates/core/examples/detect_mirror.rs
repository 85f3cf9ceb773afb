//! End-to-end detection with an overlay of the top five axes.
//!
//!     cargo run --release --example detect_mirror -- [image] [overlay.png]

use mirror_axis::eval::AxisSegment;
use mirror_axis::pipeline::load_image;
use mirror_axis::render::{render_overlay, OverlayStyle};
use mirror_axis::synthetic::mirrored_texture;
use mirror_axis::{Config, Detector, Result};

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let (rgb, single) = match args.next() {
        Some(path) => load_image(path)?,
        None => (mirrored_texture(256, 0), false),
    };
    let out = args.next().unwrap_or_else(|| "overlay.png".into());

    let start = std::time::Instant::now();
    let detection = Detector::new(Config::default())?.detect_rgb(&rgb, single)?;
    println!(
        "{} features, {} axes in {:.2}s{}",
        detection.features.len(),
        detection.axes.len(),
        start.elapsed().as_secs_f64(),
        if detection.grayscale {
            " (luminance histograms)"
        } else {
            ""
        }
    );
    for (rank, axis) in detection.axes.iter().enumerate() {
        let [a, b] = axis.endpoints;
        println!(
            "#{} score {:.3}  ({:.1}, {:.1}) - ({:.1}, {:.1})",
            rank + 1,
            axis.score,
            a.0,
            a.1,
            b.0,
            b.1
        );
    }
    let segments: Vec<AxisSegment> = detection
        .axes
        .iter()
        .map(|a| AxisSegment::scored(a.endpoints[0], a.endpoints[1], a.score))
        .collect();
    let img = render_overlay(&rgb, &segments, 5, OverlayStyle::default());
    mirror_axis::commands::save_png(img, out.as_ref())?;
    println!("overlay written to {out}");
    Ok(())
}
