//! Writes a small synthetic dataset, runs batch detection over it and
//! evaluates the result, leaving every artifact in the output directory.
//!
//!     cargo run --release --example batch_dataset -- [out_dir]

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use mirror_axis::commands::{format_report, run_batch, run_evaluate, EvaluateArgs};
use mirror_axis::synthetic::{mirrored_texture, mirrored_texture_axis};
use mirror_axis::{Config, Dialect, Result, ThresholdRegime};

fn main() -> Result<()> {
    let root = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "mirror_dataset".into()));
    let images = root.join("images");
    std::fs::create_dir_all(&images).map_err(|e| mirror_axis::Error::Io {
        path: images.clone(),
        source: e,
    })?;

    let size = 160;
    let mut gt = String::new();
    let mut sizes = BTreeMap::new();
    for seed in 0..6 {
        let id = format!("synthetic_{seed:02}");
        mirror_axis::commands::save_png(mirrored_texture(size, seed), &images.join(format!("{id}.png")))?;
        let axis = mirrored_texture_axis(size);
        writeln!(gt, "{id} {} {} {} {}", axis.a.0, axis.a.1, axis.b.0, axis.b.1).unwrap();
        sizes.insert(id, (size as usize, size as usize));
    }
    let gt_path = root.join("groundtruth.txt");
    mirror_axis::records::write_atomic(&gt_path, gt.as_bytes())?;

    let out = root.join("detections");
    let summary = run_batch(&images, &out, &Config::default(), true, 5)?;
    println!("detected {} images into {}", summary.records.len(), out.display());

    let reports = run_evaluate(&EvaluateArgs {
        detections: &out.join("detections.txt"),
        groundtruth: &gt_path,
        dialect: Dialect::Generic,
        sizes: Some(&out.join("sizes.txt")),
        regimes: ThresholdRegime::ALL.to_vec(),
        out_dir: Some(&root),
    })?;
    for r in &reports {
        print!(
            "{}",
            format_report(r)
                .lines()
                .take(8)
                .map(|l| format!("{l}\n"))
                .collect::<String>()
        );
        println!();
    }
    Ok(())
}
