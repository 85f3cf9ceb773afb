//! File-level operations behind the command-line verbs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Cursor;
use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageFormat};
use rayon::prelude::*;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::eval::{evaluate_dataset, EvalReport, ImageCase, ThresholdRegime};
use crate::pipeline::{load_image, Detection, Detector};
use crate::records::{
    read_detections, read_groundtruth, read_image_sizes, write_atomic, write_detections, write_image_sizes,
    DetectionRecord, Dialect,
};
use crate::render::{render_heatmap, render_overlay, OverlayStyle};

/// Process exit status for an error.
///
/// | code | meaning                                             |
/// |------|-----------------------------------------------------|
/// | 0    | success                                             |
/// | 1    | internal failure                                    |
/// | 2    | invalid input: config, arguments, malformed records |
/// | 3    | unreadable or unwritable file, undecodable image    |
/// | 4    | no edge features in the image                       |
/// | 5    | features found but no symmetry evidence            |
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } | Error::Image { .. } => 3,
        Error::NoFeatures => 4,
        Error::NoSymmetryEvidence => 5,
        Error::InvalidSize { .. }
        | Error::InvalidParameter { .. }
        | Error::Parse { .. }
        | Error::Config(_)
        | Error::UnknownRegime(_)
        | Error::UnknownDialect(_)
        | Error::MissingGroundTruth(_)
        | Error::MissingImageSize(_)
        | Error::EmptyGroundTruth
        | Error::DegenerateSegment => 2,
        _ => 1,
    }
}

/// Image id of a file: its name without extension.
pub fn image_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().replace(char::is_whitespace, "_"))
        .unwrap_or_else(|| "image".to_string())
}

pub fn encode_png(img: impl Into<DynamicImage>, path: &Path) -> Result<Vec<u8>> {
    let mut buf = Cursor::new(Vec::new());
    img.into()
        .write_to(&mut buf, ImageFormat::Png)
        .map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })?;
    Ok(buf.into_inner())
}

pub fn save_png(img: impl Into<DynamicImage>, path: &Path) -> Result<()> {
    write_atomic(path, &encode_png(img, path)?)
}

#[derive(Debug, Clone, Default)]
pub struct DetectOutputs {
    pub detections: Option<PathBuf>,
    pub overlay: Option<PathBuf>,
    pub heatmap: Option<PathBuf>,
    pub top_k: usize,
}

/// Detects axes in one image and writes whichever outputs are requested.
pub fn run_detect(
    image: &Path,
    id: Option<&str>,
    config: &Config,
    outputs: &DetectOutputs,
) -> Result<(DetectionRecord, Detection)> {
    let (rgb, single) = load_image(image)?;
    let detection = Detector::new(config.clone())?.detect_rgb(&rgb, single)?;
    let id = id.map(str::to_string).unwrap_or_else(|| image_id(image));
    let record = DetectionRecord::from_axes(id, &detection.axes);
    if let Some(path) = &outputs.detections {
        write_atomic(path, write_detections(std::slice::from_ref(&record)).as_bytes())?;
    }
    if let Some(path) = &outputs.overlay {
        save_png(
            render_overlay(&rgb, &record.axes, outputs.top_k, OverlayStyle::default()),
            path,
        )?;
    }
    if let Some(path) = &outputs.heatmap {
        save_png(render_heatmap(&detection.smoothed), path)?;
    }
    Ok((record, detection))
}

/// Draws stored detections for `id` (default: the image's file stem).
pub fn run_overlay(
    image: &Path,
    detections: &Path,
    id: Option<&str>,
    top_k: usize,
    out: &Path,
) -> Result<()> {
    let (rgb, _) = load_image(image)?;
    let id = id.map(str::to_string).unwrap_or_else(|| image_id(image));
    let records = read_detections(detections)?;
    let axes = records
        .into_iter()
        .find(|r| r.image_id == id)
        .map(|r| r.axes)
        .unwrap_or_default();
    save_png(render_overlay(&rgb, &axes, top_k, OverlayStyle::default()), out)
}

pub fn run_heatmap(image: &Path, config: &Config, out: &Path) -> Result<()> {
    let detection = Detector::new(config.clone())?.detect_path(image)?;
    save_png(render_heatmap(&detection.smoothed), out)
}

/// Plain-text report: summary lines, then one PR sample per line.
pub fn format_report(report: &EvalReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "regime {}", report.regime);
    let _ = writeln!(s, "images {}", report.images);
    let _ = writeln!(s, "groundtruth {}", report.groundtruth);
    let _ = writeln!(s, "max_f1 {:.6}", report.max_f1);
    let _ = writeln!(s, "tp {}", report.tp);
    let _ = writeln!(s, "fp {}", report.fp);
    let _ = writeln!(s, "fn {}", report.fn_);
    let _ = writeln!(s, "top1_tp {}", report.top1_tp);
    let _ = writeln!(s, "# threshold precision recall tp fp fn");
    for p in &report.curve {
        let _ = writeln!(
            s,
            "{:.6} {:.6} {:.6} {} {} {}",
            p.threshold, p.precision, p.recall, p.tp, p.fp, p.fn_
        );
    }
    s
}

#[derive(Debug, Clone)]
pub struct EvaluateArgs<'a> {
    pub detections: &'a Path,
    pub groundtruth: &'a Path,
    pub dialect: Dialect,
    /// Required for the ICCV2017 regime, whose tolerance scales with image size.
    pub sizes: Option<&'a Path>,
    pub regimes: Vec<ThresholdRegime>,
    /// Writes `report_<REGIME>.txt` per regime when set.
    pub out_dir: Option<&'a Path>,
}

/// Pairs detections with groundtruth by image id. Every groundtruth image is
/// scored; a detection id without groundtruth is an error.
pub fn build_cases(
    detections: Vec<DetectionRecord>,
    groundtruth: Vec<crate::records::GroundTruthRecord>,
    sizes: &BTreeMap<String, (usize, usize)>,
    need_sizes: bool,
) -> Result<Vec<ImageCase>> {
    let mut dets: BTreeMap<String, DetectionRecord> = BTreeMap::new();
    for d in detections {
        dets.entry(d.image_id.clone())
            .and_modify(|e| e.axes.extend(d.axes.iter().copied()))
            .or_insert(d);
    }
    let mut gts: BTreeMap<String, Vec<crate::eval::AxisSegment>> = BTreeMap::new();
    for g in groundtruth {
        gts.entry(g.image_id).or_default().extend(g.axes);
    }
    if let Some(id) = dets.keys().find(|id| !gts.contains_key(*id)) {
        return Err(Error::MissingGroundTruth(id.clone()));
    }
    gts.into_iter()
        .map(|(id, groundtruth)| {
            let size = match sizes.get(&id) {
                Some(&s) => s,
                None if need_sizes => return Err(Error::MissingImageSize(id)),
                None => (0, 0),
            };
            let detections = dets.remove(&id).map(|d| d.axes).unwrap_or_default();
            Ok(ImageCase {
                image_id: id,
                size,
                detections,
                groundtruth,
            })
        })
        .collect()
}

pub fn run_evaluate(args: &EvaluateArgs<'_>) -> Result<Vec<EvalReport>> {
    let detections = read_detections(args.detections)?;
    let groundtruth = read_groundtruth(args.groundtruth, args.dialect)?;
    let sizes = match args.sizes {
        Some(p) => read_image_sizes(p)?,
        None => BTreeMap::new(),
    };
    let need_sizes = args.regimes.contains(&ThresholdRegime::Iccv2017);
    let cases = build_cases(detections, groundtruth, &sizes, need_sizes)?;
    let reports = args
        .regimes
        .iter()
        .map(|&r| evaluate_dataset(&cases, r))
        .collect::<Result<Vec<_>>>()?;
    if let Some(dir) = args.out_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for r in &reports {
            let path = dir.join(format!("report_{}.txt", r.regime));
            write_atomic(&path, format_report(r).as_bytes())?;
        }
    }
    Ok(reports)
}

/// PNG and JPEG files directly inside `dir`, sorted by path.
pub fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut out = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let ext = path
            .extension()
            .map(|e| e.to_string_lossy().to_ascii_lowercase())
            .unwrap_or_default();
        if path.is_file() && matches!(ext.as_str(), "png" | "jpg" | "jpeg") {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, Default)]
pub struct BatchSummary {
    pub records: Vec<DetectionRecord>,
    pub sizes: BTreeMap<String, (usize, usize)>,
    /// Images that yielded no axes, with the reason.
    pub skipped: Vec<(String, String)>,
}

/// Detects every image in `input`, writing `<id>.txt` per image plus the
/// combined `detections.txt` and `sizes.txt` into `out_dir`.
///
/// Images without features or symmetry evidence are recorded with no axes;
/// any other failure aborts the run.
pub fn run_batch(
    input: &Path,
    out_dir: &Path,
    config: &Config,
    overlays: bool,
    top_k: usize,
) -> Result<BatchSummary> {
    let images = list_images(input)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let ids: Vec<String> = images.iter().map(|p| image_id(p)).collect();
    let mut seen = std::collections::BTreeSet::new();
    for id in &ids {
        if !seen.insert(id) {
            return Err(Error::Config(format!("two images share the id `{id}`")));
        }
    }
    let one = |(path, id): (&PathBuf, &String)| -> Result<(DetectionRecord, (usize, usize), Option<String>)> {
        let (rgb, single) = load_image(path)?;
        let size = (rgb.width() as usize, rgb.height() as usize);
        let (record, note) = match Detector::new(config.clone())?.detect_rgb(&rgb, single) {
            Ok(d) => (DetectionRecord::from_axes(id.clone(), &d.axes), None),
            Err(e @ (Error::NoFeatures | Error::NoSymmetryEvidence)) => (
                DetectionRecord {
                    image_id: id.clone(),
                    axes: Vec::new(),
                },
                Some(e.to_string()),
            ),
            Err(e) => return Err(e),
        };
        write_atomic(
            out_dir.join(format!("{id}.txt")),
            write_detections(std::slice::from_ref(&record)).as_bytes(),
        )?;
        if overlays {
            let path = out_dir.join(format!("{id}_overlay.png"));
            save_png(
                render_overlay(&rgb, &record.axes, top_k, OverlayStyle::default()),
                &path,
            )?;
        }
        Ok((record, size, note))
    };
    let results: Vec<_> = if config.deterministic {
        images.iter().zip(&ids).map(one).collect::<Result<_>>()?
    } else {
        images
            .par_iter()
            .zip(ids.par_iter())
            .map(one)
            .collect::<Result<_>>()?
    };
    let mut summary = BatchSummary::default();
    for (record, size, note) in results {
        summary.sizes.insert(record.image_id.clone(), size);
        if let Some(n) = note {
            summary.skipped.push((record.image_id.clone(), n));
        }
        summary.records.push(record);
    }
    write_atomic(
        out_dir.join("detections.txt"),
        write_detections(&summary.records).as_bytes(),
    )?;
    write_atomic(
        out_dir.join("sizes.txt"),
        write_image_sizes(&summary.sizes).as_bytes(),
    )?;
    Ok(summary)
}
