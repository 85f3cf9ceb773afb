use rayon::prelude::*;

use super::geometry::{direction, mirror_term_from_normal, pair_axis_params};
use super::SymmetryFeature;
use crate::error::{Error, Result};
use crate::histograms::{intersection, mirrored_intersection, TextureReversal};

/// One bin per degree of normal direction.
pub const THETA_BINS: usize = 360;

/// Rows of the pair triangle computed per parallel block. The merge runs in
/// row order, so the threaded and single-threaded paths sum identically.
const ROW_BLOCK: usize = 64;

/// Dense `(rho, theta)` array, stored theta-major: `values[theta * rho_bins + rho]`.
#[derive(Debug, Clone, PartialEq)]
pub struct VoteGrid {
    pub rho_bins: usize,
    pub theta_bins: usize,
    pub values: Vec<f64>,
}

impl VoteGrid {
    pub fn zeros(rho_bins: usize, theta_bins: usize) -> Self {
        Self {
            rho_bins,
            theta_bins,
            values: vec![0.0; rho_bins * theta_bins],
        }
    }

    #[inline]
    pub fn index(&self, rho: usize, theta: usize) -> usize {
        theta * self.rho_bins + rho
    }

    #[inline]
    pub fn get(&self, rho: usize, theta: usize) -> f64 {
        self.values[self.index(rho, theta)]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Normalised vote accumulator with the pairs that landed in each bin.
#[derive(Debug, Clone, PartialEq)]
pub struct VoteHistogram {
    pub grid: VoteGrid,
    /// Sum of the raw pair weights before L1 normalisation.
    pub raw_total: f64,
    /// Number of pairs considered.
    pub pair_count: usize,
    voter_offsets: Vec<usize>,
    voter_pairs: Vec<[u32; 2]>,
}

impl VoteHistogram {
    pub fn rho_bins(&self) -> usize {
        self.grid.rho_bins
    }

    pub fn theta_bins(&self) -> usize {
        self.grid.theta_bins
    }

    /// Feature index pairs `(i, j)`, `i < j`, that voted into a bin with
    /// non-zero weight.
    pub fn voters(&self, rho: usize, theta: usize) -> &[[u32; 2]] {
        let b = self.grid.index(rho, theta);
        &self.voter_pairs[self.voter_offsets[b]..self.voter_offsets[b + 1]]
    }

    pub fn voter_count(&self) -> usize {
        self.voter_pairs.len()
    }
}

/// Number of `rho` bins for an image: `ceil(sqrt(W^2 + H^2))`.
pub fn rho_bin_count(width: usize, height: usize) -> usize {
    ((width as f64).hypot(height as f64).ceil() as usize).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccumulateOptions {
    pub width: usize,
    pub height: usize,
    pub reversal: TextureReversal,
    /// Spread pair-weight computation over the rayon pool.
    pub parallel: bool,
}

#[inline]
fn bin_of(rho: f64, theta: f64, rho_bins: usize) -> usize {
    let r = (rho.floor() as usize).min(rho_bins - 1);
    let t = (theta.floor() as usize).min(THETA_BINS - 1);
    t * rho_bins + r
}

/// Bin and weight of every pair `(i, j > i)` in one row.
fn row_votes(
    features: &[SymmetryFeature],
    taus: &[(f64, f64)],
    i: usize,
    rho_bins: usize,
    reversal: TextureReversal,
) -> Result<Vec<(u32, f64)>> {
    let fi = &features[i];
    let mut out = Vec::with_capacity(features.len() - i - 1);
    for j in i + 1..features.len() {
        let fj = &features[j];
        let axis = pair_axis_params(fi.position, fj.position)?;
        let m = mirror_term_from_normal(taus[i], taus[j], axis.normal);
        let mut w = 0.0;
        if m > 0.0 {
            let q = intersection(&fi.color.bins, &fj.color.bins)?.min(1.0);
            if q > 0.0 {
                let t = mirrored_intersection(&fi.texture.bins, &fj.texture.bins, reversal).min(1.0);
                w = m * t * q;
            }
        }
        out.push((bin_of(axis.rho, axis.theta, rho_bins) as u32, w));
    }
    Ok(out)
}

/// Accumulates the L1-normalised weights of all `i < j` pairs.
///
/// Pairs with zero weight add nothing and are not listed as voters. Fails
/// with [`Error::NoSymmetryEvidence`] when the total weight is zero.
pub fn accumulate(features: &[SymmetryFeature], opts: AccumulateOptions) -> Result<VoteHistogram> {
    if let Some(f) = features.first() {
        let (nt, nc) = (f.texture.bins.len(), f.color.bins.len());
        for g in features {
            if g.texture.bins.len() != nt {
                return Err(Error::LengthMismatch(nt, g.texture.bins.len()));
            }
            if g.color.bins.len() != nc {
                return Err(Error::LengthMismatch(nc, g.color.bins.len()));
            }
        }
    }
    let rho_bins = rho_bin_count(opts.width, opts.height);
    let mut grid = VoteGrid::zeros(rho_bins, THETA_BINS);
    let taus: Vec<(f64, f64)> = features.iter().map(|f| direction(f.orientation)).collect();
    let n = features.len();
    let pair_count = n * n.saturating_sub(1) / 2;

    // bin per pair in enumeration order; u32::MAX marks zero weight
    let mut pair_bins: Vec<u32> = Vec::with_capacity(pair_count);
    let mut counts = vec![0usize; grid.values.len()];
    let mut raw_total = 0.0;
    for start in (0..n).step_by(ROW_BLOCK) {
        let rows: Vec<usize> = (start..(start + ROW_BLOCK).min(n)).collect();
        let votes: Vec<Vec<(u32, f64)>> = if opts.parallel {
            rows.par_iter()
                .map(|&i| row_votes(features, &taus, i, rho_bins, opts.reversal))
                .collect::<Result<_>>()?
        } else {
            rows.iter()
                .map(|&i| row_votes(features, &taus, i, rho_bins, opts.reversal))
                .collect::<Result<_>>()?
        };
        for row in votes {
            for (bin, w) in row {
                if w > 0.0 {
                    grid.values[bin as usize] += w;
                    counts[bin as usize] += 1;
                    raw_total += w;
                    pair_bins.push(bin);
                } else {
                    pair_bins.push(u32::MAX);
                }
            }
        }
    }
    if !(raw_total > 0.0) {
        return Err(Error::NoSymmetryEvidence);
    }
    grid.values.iter_mut().for_each(|v| *v /= raw_total);

    let mut voter_offsets = Vec::with_capacity(counts.len() + 1);
    let mut acc = 0;
    voter_offsets.push(0);
    for c in &counts {
        acc += c;
        voter_offsets.push(acc);
    }
    let mut cursor = voter_offsets[..counts.len()].to_vec();
    let mut voter_pairs = vec![[0u32; 2]; acc];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let bin = pair_bins[k];
            k += 1;
            if bin != u32::MAX {
                let slot = &mut cursor[bin as usize];
                voter_pairs[*slot] = [i as u32, j as u32];
                *slot += 1;
            }
        }
    }

    Ok(VoteHistogram {
        grid,
        raw_total,
        pair_count,
        voter_offsets,
        voter_pairs,
    })
}

/// Normalised 1-D Gaussian taps truncated at `3 sigma`.
fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as i64;
    let mut taps: Vec<f64> = (-radius..=radius)
        .map(|k| (-(k * k) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= total);
    taps
}

/// Separable Gaussian smoothing: circular along `theta`, zero-padded along `rho`.
pub fn smooth(grid: &VoteGrid, sigma_rho: f64, sigma_theta: f64) -> Result<VoteGrid> {
    if !(sigma_rho > 0.0) || !(sigma_theta > 0.0) {
        return Err(Error::param("smoothing_sigma", "both sigmas must be > 0"));
    }
    let (nr, nt) = (grid.rho_bins, grid.theta_bins);
    let kr = gaussian_kernel(sigma_rho);
    let kt = gaussian_kernel(sigma_theta);
    let (hr, ht) = ((kr.len() / 2) as i64, (kt.len() / 2) as i64);

    let mut along_rho = VoteGrid::zeros(nr, nt);
    for t in 0..nt {
        let row = &grid.values[t * nr..(t + 1) * nr];
        let out = &mut along_rho.values[t * nr..(t + 1) * nr];
        for (r, v) in row.iter().enumerate() {
            if *v == 0.0 {
                continue;
            }
            for (k, w) in kr.iter().enumerate() {
                let dst = r as i64 + k as i64 - hr;
                if dst >= 0 && (dst as usize) < nr {
                    out[dst as usize] += v * w;
                }
            }
        }
    }
    let mut out = VoteGrid::zeros(nr, nt);
    for t in 0..nt {
        for (k, w) in kt.iter().enumerate() {
            let src = (t as i64 + k as i64 - ht).rem_euclid(nt as i64) as usize;
            let src_row = &along_rho.values[src * nr..(src + 1) * nr];
            let dst_row = &mut out.values[t * nr..(t + 1) * nr];
            for (d, s) in dst_row.iter_mut().zip(src_row) {
                *d += w * s;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::histograms::{ColorHistogram, TexturalHistogram};

    fn feature(x: f64, y: f64) -> SymmetryFeature {
        SymmetryFeature {
            position: (x, y),
            orientation: 0.0,
            amplitude: 1.0,
            texture: TexturalHistogram {
                bins: vec![1.0, 0.0],
                anchor: 0.0,
            },
            color: ColorHistogram {
                bins: vec![1.0],
                layout: None,
            },
        }
    }

    fn opts(parallel: bool) -> AccumulateOptions {
        AccumulateOptions {
            width: 40,
            height: 30,
            reversal: TextureReversal::Anchored,
            parallel,
        }
    }

    #[test]
    fn single_pair_fills_one_bin() {
        let h = accumulate(&[feature(10.0, 5.0), feature(30.0, 5.0)], opts(false)).unwrap();
        assert_eq!(h.rho_bins(), 50);
        assert_eq!(h.grid.get(20, 0), 1.0);
        assert_eq!(h.grid.total(), 1.0);
        assert_eq!(h.voters(20, 0), &[[0, 1]]);
        assert_eq!(h.pair_count, 1);
    }

    #[test]
    fn two_pairs_share_a_bin() {
        let fs = [
            feature(10.0, 5.0),
            feature(30.0, 5.0),
            feature(10.0, 25.0),
            feature(30.0, 25.0),
        ];
        let h = accumulate(&fs, opts(false)).unwrap();
        assert!((h.grid.get(20, 0) - 0.5).abs() < 1e-15);
        assert_eq!(h.voters(20, 0).len(), 2);
        assert!((h.grid.total() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_weight_is_no_evidence() {
        let mut a = feature(0.0, 0.0);
        let mut b = feature(5.0, 0.0);
        a.color.bins = vec![1.0, 0.0];
        b.color.bins = vec![0.0, 1.0];
        assert!(matches!(
            accumulate(&[a, b], opts(false)),
            Err(Error::NoSymmetryEvidence)
        ));
        assert!(matches!(
            accumulate(&[feature(1.0, 1.0)], opts(false)),
            Err(Error::NoSymmetryEvidence)
        ));
    }

    #[test]
    fn parallel_matches_sequential() {
        let fs: Vec<SymmetryFeature> = (0..150)
            .map(|k| {
                let mut f = feature((k % 15 * 3) as f64, (k / 15 * 3) as f64 + 0.25 * (k % 3) as f64);
                f.orientation = k as f64 * 0.37;
                f.texture.bins = vec![0.3 + 0.001 * k as f64, 0.7 - 0.001 * k as f64];
                f
            })
            .collect();
        let a = accumulate(&fs, opts(false)).unwrap();
        let b = accumulate(&fs, opts(true)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn smoothing_impulse_response() {
        let mut g = VoteGrid::zeros(50, THETA_BINS);
        let i = g.index(25, 100);
        g.values[i] = 1.0;
        let s = smooth(&g, 2.0, 2.0).unwrap();
        let k = gaussian_kernel(2.0);
        let centre = k[k.len() / 2];
        assert!((s.get(25, 100) - centre * centre).abs() < 1e-15);
        let (peak, _) = s
            .values
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |a, (i, &v)| if v > a.1 { (i, v) } else { a });
        assert_eq!(peak, i);
        assert!((s.total() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn smoothing_wraps_theta() {
        let mut g = VoteGrid::zeros(20, THETA_BINS);
        let i = g.index(10, 359);
        g.values[i] = 1.0;
        let s = smooth(&g, 2.0, 2.0).unwrap();
        assert!(s.get(10, 0) > 0.0);
        assert!(s.get(10, 2) > 0.0);
        assert!((s.total() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn smoothing_loses_mass_at_rho_border() {
        let mut g = VoteGrid::zeros(20, THETA_BINS);
        let i = g.index(0, 10);
        g.values[i] = 1.0;
        let s = smooth(&g, 2.0, 2.0).unwrap();
        assert!(s.total() < 1.0);
        assert!(smooth(&g, 0.0, 1.0).is_err());
    }

    #[test]
    fn kernel_is_truncated_at_three_sigma() {
        assert_eq!(gaussian_kernel(2.0).len(), 13);
        assert_eq!(gaussian_kernel(0.5).len(), 5);
    }
}
