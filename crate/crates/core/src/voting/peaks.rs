use super::accumulator::VoteGrid;
use crate::error::{Error, Result};

/// Full extent, in bins, of the suppression neighbourhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct NmsWindow {
    pub rho: usize,
    pub theta: usize,
}

impl Default for NmsWindow {
    fn default() -> Self {
        Self { rho: 11, theta: 11 }
    }
}

impl NmsWindow {
    fn half(&self) -> (i64, i64) {
        ((self.rho / 2) as i64, (self.theta / 2) as i64)
    }

    /// Whether bin `(r, t)` lies inside the window centred on `(r0, t0)`;
    /// `theta` distance is circular over `theta_bins`.
    pub fn contains(&self, r0: usize, t0: usize, r: usize, t: usize, theta_bins: usize) -> bool {
        let (hr, ht) = self.half();
        let dr = (r as i64 - r0 as i64).abs();
        let dt = (t as i64 - t0 as i64).rem_euclid(theta_bins as i64);
        let dt = dt.min(theta_bins as i64 - dt);
        dr <= hr && dt <= ht
    }
}

/// A local maximum of the smoothed accumulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub rho_bin: usize,
    pub theta_bin: usize,
    /// Sub-bin refined distance, in pixels.
    pub rho: f64,
    /// Sub-bin refined normal direction, in degrees `[0, 360)`.
    pub theta: f64,
    pub value: f64,
    /// `value` divided by the strongest peak's value.
    pub score: f64,
}

/// Vertex offset of a parabola through three samples, clamped to half a bin.
fn parabolic_offset(left: f64, centre: f64, right: f64) -> f64 {
    let den = left - 2.0 * centre + right;
    if den < 0.0 {
        (0.5 * (left - right) / den).clamp(-0.5, 0.5)
    } else {
        0.0
    }
}

/// Non-maximal suppression over the smoothed `(rho, theta)` grid.
///
/// A bin is a peak when it is strictly greater than every other bin in the
/// window centred on it. Peaks are returned strongest first (ties by bin
/// index) and scored relative to the first.
pub fn find_peaks(smoothed: &VoteGrid, max_peaks: usize, window: NmsWindow) -> Result<Vec<Peak>> {
    if max_peaks < 1 {
        return Err(Error::param("max_peaks", "must be >= 1"));
    }
    let (nr, nt) = (smoothed.rho_bins, smoothed.theta_bins);
    let (hr, ht) = window.half();
    let mut peaks = Vec::new();
    for t in 0..nt {
        'bins: for r in 0..nr {
            let v = smoothed.get(r, t);
            if !(v > 0.0) {
                continue;
            }
            for dt in -ht..=ht {
                let tt = (t as i64 + dt).rem_euclid(nt as i64) as usize;
                for dr in -hr..=hr {
                    let rr = r as i64 + dr;
                    if rr < 0 || rr >= nr as i64 || (dr == 0 && tt == t) {
                        continue;
                    }
                    if smoothed.get(rr as usize, tt) >= v {
                        continue 'bins;
                    }
                }
            }
            let dr = if r > 0 && r + 1 < nr {
                parabolic_offset(smoothed.get(r - 1, t), v, smoothed.get(r + 1, t))
            } else {
                0.0
            };
            let dt = parabolic_offset(
                smoothed.get(r, (t + nt - 1) % nt),
                v,
                smoothed.get(r, (t + 1) % nt),
            );
            peaks.push(Peak {
                rho_bin: r,
                theta_bin: t,
                rho: (r as f64 + 0.5 + dr).max(0.0),
                theta: (t as f64 + 0.5 + dt).rem_euclid(nt as f64) * 360.0 / nt as f64,
                value: v,
                score: 0.0,
            });
        }
    }
    peaks.sort_by(|a, b| {
        b.value
            .total_cmp(&a.value)
            .then((a.theta_bin, a.rho_bin).cmp(&(b.theta_bin, b.rho_bin)))
    });
    peaks.truncate(max_peaks);
    if let Some(top) = peaks.first().map(|p| p.value) {
        for p in &mut peaks {
            p.score = p.value / top;
        }
    }
    Ok(peaks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::voting::accumulator::{smooth, THETA_BINS};

    fn bumps(spec: &[(usize, usize, f64)]) -> VoteGrid {
        let mut g = VoteGrid::zeros(100, THETA_BINS);
        for &(r, t, v) in spec {
            let i = g.index(r, t);
            g.values[i] = v;
        }
        smooth(&g, 2.0, 2.0).unwrap()
    }

    #[test]
    fn single_bump() {
        let peaks = find_peaks(&bumps(&[(40, 120, 1.0)]), 10, NmsWindow::default()).unwrap();
        assert_eq!(peaks.len(), 1);
        assert_eq!((peaks[0].rho_bin, peaks[0].theta_bin), (40, 120));
        assert!((peaks[0].rho - 40.5).abs() < 1e-9);
        assert!((peaks[0].theta - 120.5).abs() < 1e-9);
        assert_eq!(peaks[0].score, 1.0);
    }

    #[test]
    fn two_equal_bumps() {
        let g = bumps(&[(20, 30, 1.0), (70, 250, 1.0)]);
        let peaks = find_peaks(&g, 2, NmsWindow::default()).unwrap();
        assert_eq!(peaks.len(), 2);
        assert_eq!(peaks[0].score, 1.0);
        assert_eq!(peaks[1].score, 1.0);
    }

    #[test]
    fn scores_relative_to_top() {
        let g = bumps(&[(20, 30, 1.0), (70, 250, 0.4)]);
        let peaks = find_peaks(&g, 10, NmsWindow::default()).unwrap();
        assert_eq!(peaks.len(), 2);
        assert_eq!(peaks[0].rho_bin, 20);
        assert!((peaks[1].score - 0.4).abs() < 1e-12);
    }

    #[test]
    fn max_peaks_truncates() {
        let g = bumps(&[(20, 30, 1.0), (70, 250, 0.4), (50, 100, 0.7)]);
        let peaks = find_peaks(&g, 2, NmsWindow::default()).unwrap();
        assert_eq!(peaks.len(), 2);
        assert!((peaks[1].score - 0.7).abs() < 1e-12);
        assert!(find_peaks(&g, 0, NmsWindow::default()).is_err());
    }

    #[test]
    fn suppression_wraps_theta() {
        let g = bumps(&[(50, 357, 1.0), (50, 2, 0.5)]);
        let peaks = find_peaks(&g, 10, NmsWindow::default()).unwrap();
        assert_eq!(peaks.len(), 1);
        assert!((355..360).contains(&peaks[0].theta_bin));
    }

    #[test]
    fn plateau_and_empty_have_no_peaks() {
        let flat = VoteGrid {
            rho_bins: 10,
            theta_bins: THETA_BINS,
            values: vec![0.5; 10 * THETA_BINS],
        };
        assert!(find_peaks(&flat, 5, NmsWindow::default()).unwrap().is_empty());
        let empty = VoteGrid::zeros(10, THETA_BINS);
        assert!(find_peaks(&empty, 5, NmsWindow::default()).unwrap().is_empty());
    }

    #[test]
    fn window_membership() {
        let w = NmsWindow::default();
        assert!(w.contains(10, 0, 15, 355, 360));
        assert!(!w.contains(10, 0, 16, 0, 360));
        assert!(!w.contains(10, 0, 10, 354, 360));
    }
}
