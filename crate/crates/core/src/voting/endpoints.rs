use super::accumulator::VoteHistogram;
use super::peaks::{NmsWindow, Peak};
use super::SymmetryFeature;
use crate::error::{Error, Result};

/// A scored mirror axis with its visible extent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryAxis {
    pub rho: f64,
    /// Normal direction in degrees.
    pub theta: f64,
    pub score: f64,
    pub endpoints: [(f64, f64); 2],
}

type Point = (f64, f64);

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain. Counter-clockwise in a y-up frame, no repeated
/// or collinear vertices.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Parameter interval of the line `rho * n + t * d` inside a convex polygon.
fn clip_line(hull: &[Point], rho: f64, n: Point, d: Point) -> Option<(f64, f64)> {
    let dist = |p: Point| p.0 * n.0 + p.1 * n.1 - rho;
    let along = |p: Point| p.0 * d.0 + p.1 * d.1;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..hull.len() {
        let a = hull[k];
        let b = hull[(k + 1) % hull.len()];
        let (sa, sb) = (dist(a), dist(b));
        let mut push = |t: f64| {
            lo = lo.min(t);
            hi = hi.max(t);
        };
        if sa == 0.0 {
            push(along(a));
        }
        if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
            let u = sa / (sa - sb);
            push(along((a.0 + u * (b.0 - a.0), a.1 + u * (b.1 - a.1))));
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Extent of the axis of `peak`: the chord cut by the axis line through the
/// convex hull of every feature whose pair voted inside the peak's window.
///
/// When the hull is degenerate or the line misses it, the extent is the range
/// of the voter midpoints projected onto the axis.
pub fn axis_endpoints(
    peak: &Peak,
    hist: &VoteHistogram,
    features: &[SymmetryFeature],
    window: NmsWindow,
) -> Result<SymmetryAxis> {
    let (nr, nt) = (hist.rho_bins(), hist.theta_bins());
    let (hr, ht) = ((window.rho / 2) as i64, (window.theta / 2) as i64);
    let mut points = Vec::new();
    let mut midpoints = Vec::new();
    for dt in -ht..=ht {
        let t = (peak.theta_bin as i64 + dt).rem_euclid(nt as i64) as usize;
        for dr in -hr..=hr {
            let r = peak.rho_bin as i64 + dr;
            if r < 0 || r >= nr as i64 {
                continue;
            }
            for &[i, j] in hist.voters(r as usize, t) {
                let (a, b) = (features[i as usize].position, features[j as usize].position);
                points.push(a);
                points.push(b);
                midpoints.push(((a.0 + b.0) * 0.5, (a.1 + b.1) * 0.5));
            }
        }
    }
    if midpoints.is_empty() {
        return Err(Error::NoVoters);
    }
    let theta = peak.theta.to_radians();
    let n = (theta.cos(), theta.sin());
    let d = (-n.1, n.0);
    let hull = convex_hull(&points);
    let span = if hull.len() >= 3 {
        clip_line(&hull, peak.rho, n, d)
    } else {
        None
    };
    let (lo, hi) = span.unwrap_or_else(|| {
        midpoints
            .iter()
            .map(|m| m.0 * d.0 + m.1 * d.1)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| {
                (lo.min(t), hi.max(t))
            })
    });
    let at = |t: f64| (peak.rho * n.0 + t * d.0, peak.rho * n.1 + t * d.1);
    Ok(SymmetryAxis {
        rho: peak.rho,
        theta: peak.theta,
        score: peak.score,
        endpoints: [at(lo), at(hi)],
    })
}
