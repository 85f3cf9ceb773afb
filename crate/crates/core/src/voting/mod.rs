//! Triangulation voting: every feature pair proposes the perpendicular
//! bisector of its segment as a mirror axis, weighted by how well the two
//! features mirror each other in orientation, texture and color.
//!
//! The weighted proposals fill a `(rho, theta)` histogram (1 px by 1 degree
//! bins, `rho >= 0`, `theta` the normal direction in `[0, 360)`), which is
//! smoothed and reduced to peaks by non-maximal suppression. The spatial
//! extent of each peak's axis comes from the convex hull of the features that
//! voted near it.

mod accumulator;
mod endpoints;
pub mod geometry;
mod peaks;

pub use accumulator::{accumulate, smooth, AccumulateOptions, VoteGrid, VoteHistogram, THETA_BINS};
pub use endpoints::{axis_endpoints, convex_hull, SymmetryAxis};
pub use geometry::{mirror_term, pair_axis_params, reflection_matrix, AxisParams};
pub use peaks::{find_peaks, NmsWindow, Peak};

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::histograms::{
    intersection, mirrored_intersection, ColorHistogram, TexturalHistogram, TextureReversal,
};

/// A feature point together with the histograms used for pair weighting.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryFeature {
    pub position: (f64, f64),
    /// Edge orientation in radians.
    pub orientation: f64,
    pub amplitude: f64,
    pub texture: TexturalHistogram,
    pub color: ColorHistogram,
}

/// The three factors of a pair weight and their product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairWeight {
    pub mirror: f64,
    pub texture: f64,
    pub color: f64,
    pub weight: f64,
}

/// A pair's axis parameters and un-normalised weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairVote {
    pub i: usize,
    pub j: usize,
    pub rho: f64,
    pub theta: f64,
    pub weight: f64,
}

/// `m * t * q` for one pair of features.
pub fn symmetry_weight(
    f_i: &SymmetryFeature,
    f_j: &SymmetryFeature,
    reversal: TextureReversal,
) -> Result<PairWeight> {
    let axis = pair_axis_params(f_i.position, f_j.position)?;
    let gamma = axis.theta.to_radians() + FRAC_PI_2;
    let mirror = mirror_term(f_i.orientation, f_j.orientation, gamma);
    if f_i.texture.bins.len() != f_j.texture.bins.len() {
        return Err(Error::LengthMismatch(
            f_i.texture.bins.len(),
            f_j.texture.bins.len(),
        ));
    }
    let texture = mirrored_intersection(&f_i.texture.bins, &f_j.texture.bins, reversal).min(1.0);
    let color = intersection(&f_i.color.bins, &f_j.color.bins)?.min(1.0);
    Ok(PairWeight {
        mirror,
        texture,
        color,
        weight: mirror * texture * color,
    })
}

/// Every `i < j` pair with its axis and weight, in enumeration order.
pub fn pair_votes(features: &[SymmetryFeature], reversal: TextureReversal) -> Result<Vec<PairVote>> {
    let mut out = Vec::with_capacity(features.len() * features.len().saturating_sub(1) / 2);
    for i in 0..features.len() {
        for j in i + 1..features.len() {
            let axis = pair_axis_params(features[i].position, features[j].position)?;
            let w = symmetry_weight(&features[i], &features[j], reversal)?;
            out.push(PairVote {
                i,
                j,
                rho: axis.rho,
                theta: axis.theta,
                weight: w.weight,
            });
        }
    }
    Ok(out)
}
