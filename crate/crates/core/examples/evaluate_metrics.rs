//! Scoring detections against groundtruth under the three threshold regimes.

use mirror_axis::eval::{evaluate_dataset, pr_curve, AxisSegment, ImageCase, ThresholdRegime};
use mirror_axis::Result;

fn main() -> Result<()> {
    let gt = vec![
        AxisSegment::new((100.0, 10.0), (100.0, 190.0)),
        AxisSegment::new((20.0, 100.0), (180.0, 100.0)),
    ];
    let detections = vec![
        AxisSegment::scored((101.0, 15.0), (99.0, 185.0), 1.0),
        AxisSegment::scored((30.0, 60.0), (170.0, 140.0), 0.7),
        AxisSegment::scored((20.0, 107.0), (180.0, 105.0), 0.4),
    ];
    for regime in ThresholdRegime::ALL {
        println!(
            "{regime} (gamma {} deg, zeta {:.1} px for the first pair)",
            regime.gamma(),
            regime.zeta(&detections[0], &gt[0], (200, 200))
        );
        for p in pr_curve(&detections, &gt, regime, (200, 200))? {
            println!(
                "  score >= {:.1}: precision {:.3} recall {:.3} F1 {:.3}",
                p.threshold,
                p.precision,
                p.recall,
                p.f1()
            );
        }
    }

    let cases = vec![
        ImageCase {
            image_id: "one".into(),
            size: (200, 200),
            detections: detections.clone(),
            groundtruth: gt.clone(),
        },
        ImageCase {
            image_id: "two".into(),
            size: (200, 200),
            detections: Vec::new(),
            groundtruth: vec![gt[0]],
        },
    ];
    for regime in ThresholdRegime::ALL {
        let r = evaluate_dataset(&cases, regime)?;
        println!(
            "dataset {regime}: max F1 {:.3} (tp {} fp {} fn {}), top-1 hits {}/{}",
            r.max_f1, r.tp, r.fp, r.fn_, r.top1_tp, r.images
        );
    }
    Ok(())
}
