//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use mirror_axis::histograms::{ColorHistogram, TexturalHistogram, TextureReversal};
use mirror_axis::voting::SymmetryFeature;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// One pair as computed from first principles.
#[derive(Debug, Clone, Copy)]
pub struct OraclePair {
    pub i: usize,
    pub j: usize,
    pub rho: f64,
    pub theta: f64,
    pub m: f64,
    pub t: f64,
    pub q: f64,
}

impl OraclePair {
    pub fn weight(&self) -> f64 {
        self.m * self.t * self.q
    }
}

/// Bisector in normal form via atan2 of the pair direction, then flipped to
/// non-negative distance.
pub fn oracle_axis(p: (f64, f64), q: (f64, f64)) -> (f64, f64) {
    let mut theta = (q.1 - p.1).atan2(q.0 - p.0);
    let mid = ((p.0 + q.0) / 2.0, (p.1 + q.1) / 2.0);
    let mut rho = mid.0 * theta.cos() + mid.1 * theta.sin();
    if rho < 0.0 {
        rho = -rho;
        theta += PI;
    }
    let mut deg = theta.to_degrees() % 360.0;
    if deg < 0.0 {
        deg += 360.0;
    }
    if deg >= 360.0 {
        deg -= 360.0;
    }
    (rho, deg)
}

/// `|tau_i . R tau_j|` with `R` built from the axis direction angle.
pub fn oracle_mirror(phi_i: f64, phi_j: f64, theta_deg: f64) -> f64 {
    let gamma = theta_deg.to_radians() + PI / 2.0;
    let r = [
        [(2.0 * gamma).cos(), (2.0 * gamma).sin()],
        [(2.0 * gamma).sin(), -(2.0 * gamma).cos()],
    ];
    let tj = [phi_j.cos(), phi_j.sin()];
    let rt = [
        r[0][0] * tj[0] + r[0][1] * tj[1],
        r[1][0] * tj[0] + r[1][1] * tj[1],
    ];
    (phi_i.cos() * rt[0] + phi_i.sin() * rt[1]).abs()
}

pub fn oracle_reverse(bins: &[f64], reversal: TextureReversal) -> Vec<f64> {
    let n = bins.len();
    match reversal {
        TextureReversal::Index => (0..n).map(|k| bins[n - 1 - k]).collect(),
        TextureReversal::Anchored => (0..n).map(|k| bins[(n - k) % n]).collect(),
    }
}

pub fn oracle_intersection(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 0..a.len() {
        s += if a[k] < b[k] { a[k] } else { b[k] };
    }
    s
}

pub fn oracle_pairs(features: &[SymmetryFeature], reversal: TextureReversal) -> Vec<OraclePair> {
    let mut out = Vec::new();
    for i in 0..features.len() {
        for j in i + 1..features.len() {
            let (fi, fj) = (&features[i], &features[j]);
            let (rho, theta) = oracle_axis(fi.position, fj.position);
            out.push(OraclePair {
                i,
                j,
                rho,
                theta,
                m: oracle_mirror(fi.orientation, fj.orientation, theta),
                t: oracle_intersection(&fi.texture.bins, &oracle_reverse(&fj.texture.bins, reversal)),
                q: oracle_intersection(&fi.color.bins, &fj.color.bins),
            });
        }
    }
    out
}

/// Dense theta-major accumulator of L1-normalised pair weights.
pub fn oracle_histogram(
    features: &[SymmetryFeature],
    width: usize,
    height: usize,
    reversal: TextureReversal,
) -> (usize, Vec<f64>) {
    let rho_bins = ((width * width + height * height) as f64).sqrt().ceil() as usize;
    let pairs = oracle_pairs(features, reversal);
    let total: f64 = pairs.iter().map(OraclePair::weight).sum();
    let mut grid = vec![0.0; rho_bins * 360];
    for p in &pairs {
        let r = (p.rho.floor() as usize).min(rho_bins - 1);
        let t = (p.theta.floor() as usize).min(359);
        grid[t * rho_bins + r] += p.weight() / total;
    }
    (rho_bins, grid)
}

/// Random L1-normalised histogram; roughly a third of the bins are zero.
pub fn random_histogram(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|_| if rng.gen_bool(0.35) { 0.0 } else { rng.gen::<f64>() })
        .collect();
    if v.iter().all(|&x| x == 0.0) {
        v[rng.gen_range(0..n)] = 1.0;
    }
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

pub fn random_features(
    rng: &mut ChaCha8Rng,
    count: usize,
    width: usize,
    height: usize,
    texture_bins: usize,
    color_bins: usize,
) -> Vec<SymmetryFeature> {
    (0..count)
        .map(|_| {
            let anchor = rng.gen_range(-PI / 2.0..PI / 2.0);
            SymmetryFeature {
                position: (
                    rng.gen_range(0.0..width as f64),
                    rng.gen_range(0.0..height as f64),
                ),
                orientation: anchor,
                amplitude: rng.gen_range(0.05..1.0),
                texture: TexturalHistogram {
                    bins: random_histogram(rng, texture_bins),
                    anchor,
                },
                color: ColorHistogram {
                    bins: random_histogram(rng, color_bins),
                    layout: None,
                },
            }
        })
        .collect()
}

/// Whether two `(rho, theta)` pairs describe the same line, allowing the
/// `(-rho, theta + 180)` alias.
pub fn same_line(a: (f64, f64), b: (f64, f64), tol: f64) -> bool {
    let ang = |x: f64, y: f64| {
        let d = (x - y).rem_euclid(360.0);
        d.min(360.0 - d)
    };
    ((a.0 - b.0).abs() < tol && ang(a.1, b.1) < tol)
        || ((a.0 + b.0).abs() < tol && ang(a.1, b.1 + 180.0) < tol)
}
