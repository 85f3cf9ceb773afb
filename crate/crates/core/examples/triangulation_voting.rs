//! Pair voting on its own: hand-placed features, the smoothed accumulator as
//! a heatmap, and the peaks with their extents.
//!
//!     cargo run --example triangulation_voting -- [heatmap.png]

use std::f64::consts::FRAC_PI_4;

use mirror_axis::histograms::{ColorHistogram, TexturalHistogram, TextureReversal};
use mirror_axis::render::render_heatmap;
use mirror_axis::voting::{
    accumulate, axis_endpoints, find_peaks, smooth, AccumulateOptions, NmsWindow, SymmetryFeature,
};
use mirror_axis::Result;

fn feature(x: f64, y: f64, orientation: f64) -> SymmetryFeature {
    SymmetryFeature {
        position: (x, y),
        orientation,
        amplitude: 1.0,
        texture: TexturalHistogram {
            bins: vec![0.7, 0.2, 0.0, 0.1],
            anchor: orientation,
        },
        color: ColorHistogram {
            bins: vec![0.5, 0.5],
            layout: None,
        },
    }
}

fn main() -> Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "votes.png".into());
    // a "V" of edges mirrored about x = 50
    let mut features = Vec::new();
    for k in 0..8 {
        let d = 5.0 + 4.0 * k as f64;
        let y = 20.0 + 7.0 * k as f64;
        features.push(feature(50.0 - d, y, FRAC_PI_4));
        features.push(feature(50.0 + d, y, -FRAC_PI_4));
    }
    let (w, h) = (100, 90);
    let votes = accumulate(
        &features,
        AccumulateOptions {
            width: w,
            height: h,
            reversal: TextureReversal::Anchored,
            parallel: false,
        },
    )?;
    println!(
        "{} pairs, {} with non-zero weight",
        votes.pair_count,
        votes.voter_count()
    );

    let smoothed = smooth(&votes.grid, 2.0, 2.0)?;
    let window = NmsWindow::default();
    for peak in find_peaks(&smoothed, 3, window)? {
        let axis = axis_endpoints(&peak, &votes, &features, window)?;
        println!(
            "rho {:6.2}  theta {:6.2}  score {:.3}  from ({:.1}, {:.1}) to ({:.1}, {:.1})",
            axis.rho,
            axis.theta,
            axis.score,
            axis.endpoints[0].0,
            axis.endpoints[0].1,
            axis.endpoints[1].0,
            axis.endpoints[1].1
        );
    }
    mirror_axis::commands::save_png(render_heatmap(&smoothed), out.as_ref())?;
    println!("heatmap written to {out}");
    Ok(())
}
