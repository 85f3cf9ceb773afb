//! Detection on mirrored textures rotated by a range of angles.
//!
//!     cargo run --release --example rotated_symmetry -- [seed]

use mirror_axis::eval::{angle_between, AxisSegment};
use mirror_axis::synthetic::{mirrored_texture, rotate_and_crop, rotated_axis};
use mirror_axis::{Config, Detector, Result};

fn main() -> Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let base = mirrored_texture(256, seed);
    let mut detector = Detector::new(Config::default())?;
    for degrees in [0.0, 15.0, 30.0, 45.0, 60.0, 90.0] {
        let img = rotate_and_crop(&base, degrees);
        let gt = rotated_axis(256, degrees);
        let detection = detector.detect_rgb(&img, false)?;
        let top = detection.axes[0];
        let found = AxisSegment::new(top.endpoints[0], top.endpoints[1]);
        println!(
            "rotated {degrees:4.1}: crop {}x{}, axis normal {:6.2} deg, error {:.2} deg",
            img.width(),
            img.height(),
            top.theta,
            angle_between(&found, &gt)?
        );
    }
    Ok(())
}
