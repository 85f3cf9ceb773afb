//! Detection scoring against groundtruth axes: true-positive tests under the
//! three competition threshold regimes, greedy one-to-one matching,
//! precision/recall curves and maximum F1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A line segment between two endpoints, optionally scored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSegment {
    pub a: (f64, f64),
    pub b: (f64, f64),
    pub score: Option<f64>,
}

impl AxisSegment {
    pub fn new(a: (f64, f64), b: (f64, f64)) -> Self {
        Self { a, b, score: None }
    }

    pub fn scored(a: (f64, f64), b: (f64, f64), score: f64) -> Self {
        Self {
            a,
            b,
            score: Some(score),
        }
    }

    pub fn vector(&self) -> (f64, f64) {
        (self.a.0 - self.b.0, self.a.1 - self.b.1)
    }

    pub fn midpoint(&self) -> (f64, f64) {
        ((self.a.0 + self.b.0) * 0.5, (self.a.1 + self.b.1) * 0.5)
    }

    pub fn length(&self) -> f64 {
        let (x, y) = self.vector();
        x.hypot(y)
    }

    pub fn is_degenerate(&self) -> bool {
        !(self.length() > 0.0)
    }
}

/// Threshold regime of a symmetry competition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ThresholdRegime {
    /// 10 degrees; midpoints within 20% of the groundtruth length.
    #[serde(rename = "CVPR2011")]
    Cvpr2011,
    /// 10 degrees; midpoints within 20% of the shorter of detection and
    /// groundtruth. The original table's "MT" is read as the matched detection.
    #[serde(rename = "CVPR2013")]
    Cvpr2013,
    /// 3 degrees; midpoints within 2.5% of the smaller image dimension.
    #[serde(rename = "ICCV2017")]
    Iccv2017,
}

impl ThresholdRegime {
    pub const ALL: [ThresholdRegime; 3] = [Self::Cvpr2011, Self::Cvpr2013, Self::Iccv2017];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Cvpr2011 => "CVPR2011",
            Self::Cvpr2013 => "CVPR2013",
            Self::Iccv2017 => "ICCV2017",
        }
    }

    /// Angular tolerance `gamma` in degrees.
    pub fn gamma(&self) -> f64 {
        match self {
            Self::Cvpr2011 | Self::Cvpr2013 => 10.0,
            Self::Iccv2017 => 3.0,
        }
    }

    /// Midpoint distance tolerance `zeta` in pixels.
    pub fn zeta(&self, sc: &AxisSegment, gt: &AxisSegment, image: (usize, usize)) -> f64 {
        match self {
            Self::Cvpr2011 => 0.2 * gt.length(),
            Self::Cvpr2013 => 0.2 * sc.length().min(gt.length()),
            Self::Iccv2017 => 0.025 * image.0.min(image.1) as f64,
        }
    }
}

impl std::str::FromStr for ThresholdRegime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "CVPR2011" => Ok(Self::Cvpr2011),
            "CVPR2013" => Ok(Self::Cvpr2013),
            "ICCV2017" => Ok(Self::Iccv2017),
            _ => Err(Error::UnknownRegime(s.to_string())),
        }
    }
}

impl std::fmt::Display for ThresholdRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Unsigned angle between two segments' directions, folded into `[0, 90]` degrees.
pub fn angle_between(sc: &AxisSegment, gt: &AxisSegment) -> Result<f64> {
    if sc.is_degenerate() || gt.is_degenerate() {
        return Err(Error::DegenerateSegment);
    }
    let (sx, sy) = sc.vector();
    let (gx, gy) = gt.vector();
    let cross = (sx * gy - sy * gx).abs();
    let dot = sx * gx + sy * gy;
    let gamma = cross.atan2(dot).to_degrees();
    Ok(if gamma > 90.0 { 180.0 - gamma } else { gamma })
}

/// Joint angular and midpoint-distance test; both inequalities are strict.
pub fn is_true_positive(
    sc: &AxisSegment,
    gt: &AxisSegment,
    regime: ThresholdRegime,
    image: (usize, usize),
) -> Result<bool> {
    let angle = angle_between(sc, gt)?;
    let (ms, mg) = (sc.midpoint(), gt.midpoint());
    let dist = (ms.0 - mg.0).hypot(ms.1 - mg.1);
    Ok(angle < regime.gamma() && dist < regime.zeta(sc, gt, image))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatchResult {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    /// `(detection index, groundtruth index)` in input numbering.
    pub pairs: Vec<(usize, usize)>,
}

/// Detection indices sorted by descending score; stable for equal scores.
fn score_order(detections: &[AxisSegment]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..detections.len()).collect();
    order.sort_by(|&a, &b| {
        let sa = detections[a].score.unwrap_or(0.0);
        let sb = detections[b].score.unwrap_or(0.0);
        sb.total_cmp(&sa)
    });
    order
}

/// Greedy one-to-one matching: detections claim, in descending score order,
/// the first unmatched groundtruth they satisfy. Degenerate detections never
/// match.
pub fn match_detections(
    detections: &[AxisSegment],
    gts: &[AxisSegment],
    regime: ThresholdRegime,
    image: (usize, usize),
) -> Result<MatchResult> {
    let mut taken = vec![false; gts.len()];
    let mut pairs = Vec::new();
    for d in score_order(detections) {
        let det = &detections[d];
        if det.is_degenerate() {
            continue;
        }
        for (g, gt) in gts.iter().enumerate() {
            if !taken[g] && is_true_positive(det, gt, regime, image)? {
                taken[g] = true;
                pairs.push((d, g));
                break;
            }
        }
    }
    let tp = pairs.len();
    Ok(MatchResult {
        tp,
        fp: detections.len() - tp,
        fn_: gts.len() - tp,
        pairs,
    })
}

/// One sample of a precision/recall curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrPoint {
    pub threshold: f64,
    pub precision: f64,
    pub recall: f64,
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl PrPoint {
    fn from_counts(threshold: f64, tp: usize, fp: usize, fn_: usize) -> Self {
        let precision = if tp + fp == 0 {
            1.0
        } else {
            tp as f64 / (tp + fp) as f64
        };
        let recall = if tp + fn_ == 0 {
            0.0
        } else {
            tp as f64 / (tp + fn_) as f64
        };
        Self {
            threshold,
            precision,
            recall,
            tp,
            fp,
            fn_,
        }
    }

    pub fn f1(&self) -> f64 {
        let s = self.precision + self.recall;
        if s > 0.0 {
            2.0 * self.precision * self.recall / s
        } else {
            0.0
        }
    }
}

/// Distinct detection scores, descending.
fn thresholds<'a>(detections: impl Iterator<Item = &'a AxisSegment>) -> Vec<f64> {
    let mut t: Vec<f64> = detections.filter_map(|d| d.score).collect();
    t.sort_by(|a, b| b.total_cmp(a));
    t.dedup();
    t
}

fn above(detections: &[AxisSegment], tau: f64) -> Vec<AxisSegment> {
    detections
        .iter()
        .filter(|d| d.score.unwrap_or(0.0) >= tau)
        .copied()
        .collect()
}

/// Precision and recall at every distinct detection score, highest first.
///
/// With no detections the curve is the single point `(1, PR = 1, RC = 0)`.
pub fn pr_curve(
    detections: &[AxisSegment],
    gts: &[AxisSegment],
    regime: ThresholdRegime,
    image: (usize, usize),
) -> Result<Vec<PrPoint>> {
    if gts.is_empty() {
        return Err(Error::EmptyGroundTruth);
    }
    let taus = thresholds(detections.iter());
    if taus.is_empty() {
        return Ok(vec![PrPoint::from_counts(1.0, 0, 0, gts.len())]);
    }
    taus.into_iter()
        .map(|tau| {
            let m = match_detections(&above(detections, tau), gts, regime, image)?;
            Ok(PrPoint::from_counts(tau, m.tp, m.fp, m.fn_))
        })
        .collect()
}

/// Largest harmonic mean of precision and recall over the curve.
pub fn max_f1(curve: &[PrPoint]) -> f64 {
    curve.iter().map(PrPoint::f1).fold(0.0, f64::max)
}

/// Detections and groundtruth of one image.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageCase {
    pub image_id: String,
    pub size: (usize, usize),
    pub detections: Vec<AxisSegment>,
    pub groundtruth: Vec<AxisSegment>,
}

/// Dataset-level scores for one regime.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub regime: ThresholdRegime,
    pub images: usize,
    pub groundtruth: usize,
    /// Counts at the threshold achieving `max_f1`.
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    /// Images whose highest-scored detection is a true positive.
    pub top1_tp: usize,
    pub curve: Vec<PrPoint>,
    pub max_f1: f64,
}

/// Sweeps the union of all detection scores and pools counts across images.
pub fn evaluate_dataset(cases: &[ImageCase], regime: ThresholdRegime) -> Result<EvalReport> {
    let groundtruth: usize = cases.iter().map(|c| c.groundtruth.len()).sum();
    if groundtruth == 0 {
        return Err(Error::EmptyGroundTruth);
    }
    let mut top1_tp = 0;
    for c in cases {
        if let Some(&best) = score_order(&c.detections).first() {
            let m = match_detections(&c.detections[best..=best], &c.groundtruth, regime, c.size)?;
            top1_tp += m.tp;
        }
    }
    let taus = thresholds(cases.iter().flat_map(|c| c.detections.iter()));
    let curve: Vec<PrPoint> = if taus.is_empty() {
        vec![PrPoint::from_counts(1.0, 0, 0, groundtruth)]
    } else {
        taus.into_iter()
            .map(|tau| {
                let (mut tp, mut fp, mut fn_) = (0, 0, 0);
                for c in cases {
                    let m = match_detections(&above(&c.detections, tau), &c.groundtruth, regime, c.size)?;
                    tp += m.tp;
                    fp += m.fp;
                    fn_ += m.fn_;
                }
                Ok(PrPoint::from_counts(tau, tp, fp, fn_))
            })
            .collect::<Result<_>>()?
    };
    let best = curve
        .iter()
        .fold(None::<&PrPoint>, |acc, p| match acc {
            Some(a) if a.f1() >= p.f1() => Some(a),
            _ => Some(p),
        })
        .copied()
        .expect("curve is never empty");
    Ok(EvalReport {
        regime,
        images: cases.len(),
        groundtruth,
        tp: best.tp,
        fp: best.fp,
        fn_: best.fn_,
        top1_tp,
        max_f1: max_f1(&curve),
        curve,
    })
}
