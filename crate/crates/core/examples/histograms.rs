//! Texture and color descriptors of mirrored feature pairs.
//!
//! On a mirrored image the feature at `x` has a partner at `W - 1 - x`. Their
//! textural histograms agree once one is mirrored, and their color histograms
//! agree as they are.

use mirror_axis::color::{to_grayscale, to_hsv};
use mirror_axis::features::{compute_edge_maps, sample_feature_points};
use mirror_axis::filterbank::FilterBank;
use mirror_axis::histograms::{intersection, mirrored_intersection, TextureReversal};
use mirror_axis::pipeline::describe;
use mirror_axis::synthetic::mirrored_texture;
use mirror_axis::{Config, Result};

fn main() -> Result<()> {
    let size = 128;
    let rgb = mirrored_texture(size, 3);
    let cfg = Config::default();
    let n = size as usize;
    let gray = to_grayscale(&rgb);
    let hsv = to_hsv(&rgb);
    let bank = FilterBank::new(n, n, cfg.filter_bank_params())?;
    let edges = compute_edge_maps(&gray, &bank, true)?;
    let cell = 8;
    let points = sample_feature_points(&edges, &hsv, cell, cfg.homogeneity_threshold)?;
    let features = describe(&points, &edges, &hsv, &gray, cell, false, &cfg)?;

    let mut shown = 0;
    for (i, p) in points.iter().enumerate().step_by(5) {
        let Some(j) = points
            .iter()
            .position(|q| q.x == n - 1 - p.x && q.y == p.y && q.x > p.x)
        else {
            continue;
        };
        let (a, b) = (&features[i], &features[j]);
        println!(
            "({:3},{:3}) <-> ({:3},{:3})  texture {:.3} (unmirrored {:.3})  color {:.3}",
            p.x,
            p.y,
            points[j].x,
            points[j].y,
            mirrored_intersection(&a.texture.bins, &b.texture.bins, TextureReversal::Anchored),
            intersection(&a.texture.bins, &b.texture.bins)?,
            intersection(&a.color.bins, &b.color.bins)?,
        );
        shown += 1;
        if shown == 8 {
            break;
        }
    }
    Ok(())
}
