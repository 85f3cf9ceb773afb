use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mirror_axis::records::read_detections;
use mirror_axis::synthetic::mirrored_texture;
use mirror_axis::CONFIG_ENV;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mirror-axis"));
    cmd.env_remove(CONFIG_ENV);
    cmd
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn sample(dir: &Path, name: &str, seed: u64) -> PathBuf {
    let path = dir.join(name);
    mirrored_texture(64, seed).save(&path).unwrap();
    path
}

#[test]
fn detect_prints_scored_axes() {
    let dir = tempfile::tempdir().unwrap();
    let img = sample(dir.path(), "leaf.png", 1);
    let out = run(bin().arg("detect").arg(&img).arg("--deterministic"));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let first = text.lines().next().unwrap();
    let fields: Vec<&str> = first.split(' ').collect();
    assert_eq!(fields.len(), 6);
    assert_eq!(fields[0], "leaf");
    assert_eq!(fields[5], "1");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let black = dir.path().join("black.png");
    image::RgbImage::new(32, 32).save(&black).unwrap();
    assert_eq!(run(bin().arg("detect").arg(&black)).status.code(), Some(4));
    assert_eq!(
        run(bin().arg("detect").arg(dir.path().join("missing.png")))
            .status
            .code(),
        Some(3)
    );
    let img = sample(dir.path(), "a.png", 2);
    assert_eq!(
        run(bin().arg("detect").arg(&img).args(["--set", "max_peaks=0"]))
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(bin().arg("detect").arg(&img).args(["--set", "no_such_key=1"]))
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn config_path_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let img = sample(dir.path(), "a.png", 3);
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, "max_peaks = 1\ndeterministic = true\n").unwrap();
    let out = run(bin().arg("detect").arg(&img).env(CONFIG_ENV, &cfg));
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);

    std::fs::write(&cfg, "max_peaks = \"lots\"\n").unwrap();
    let out = run(bin().arg("detect").arg(&img).env(CONFIG_ENV, &cfg));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn overlay_and_heatmap_files() {
    let dir = tempfile::tempdir().unwrap();
    let img = sample(dir.path(), "a.png", 4);
    let det = dir.path().join("a.txt");
    let heat = dir.path().join("heat.png");
    let over = dir.path().join("over.png");
    let out = run(bin()
        .arg("detect")
        .arg(&img)
        .arg("--deterministic")
        .arg("-o")
        .arg(&det)
        .arg("--heatmap")
        .arg(&heat));
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let heatmap = image::open(&heat).unwrap();
    assert_eq!((heatmap.width(), heatmap.height()), (91, 360));

    let out = run(bin()
        .arg("overlay")
        .arg(&img)
        .arg("--detections")
        .arg(&det)
        .arg("-o")
        .arg(&over));
    assert!(out.status.success());
    let drawn = image::open(&over).unwrap().to_rgb8();
    let original = image::open(&img).unwrap().to_rgb8();
    assert_eq!(drawn.dimensions(), original.dimensions());
    assert_ne!(drawn, original);
    assert!(drawn.pixels().any(|p| p.0 == [255, 0, 0]));

    let direct = dir.path().join("heat2.png");
    let out = run(bin()
        .arg("heatmap")
        .arg(&img)
        .arg("--deterministic")
        .arg("-o")
        .arg(&direct));
    assert!(out.status.success());
    assert_eq!(std::fs::read(&heat).unwrap(), std::fs::read(&direct).unwrap());
}

#[test]
fn evaluate_verbatim_groundtruth() {
    let dir = tempfile::tempdir().unwrap();
    let gt = dir.path().join("gt.txt");
    let det = dir.path().join("det.txt");
    let sizes = dir.path().join("sizes.txt");
    std::fs::write(&gt, "a 10 0 10 50\nb 0 20 40 20\n").unwrap();
    std::fs::write(&det, "a 10 0 10 50 1\nb 0 20 40 20 1\n").unwrap();
    std::fs::write(&sizes, "a 50 50\nb 60 40\n").unwrap();
    let reports = dir.path().join("reports");
    let out = run(bin()
        .arg("evaluate")
        .arg("--detections")
        .arg(&det)
        .arg("--groundtruth")
        .arg(&gt)
        .arg("--sizes")
        .arg(&sizes)
        .arg("--out-dir")
        .arg(&reports));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for regime in ["CVPR2011", "CVPR2013", "ICCV2017"] {
        let text = std::fs::read_to_string(reports.join(format!("report_{regime}.txt"))).unwrap();
        assert!(text.contains("max_f1 1.000000"), "{text}");
    }

    std::fs::write(&det, "").unwrap();
    let out = run(bin()
        .arg("evaluate")
        .arg("--detections")
        .arg(&det)
        .arg("--groundtruth")
        .arg(&gt)
        .args(["--regime", "cvpr2013"])
        .arg("--out-dir")
        .arg(&reports));
    assert!(out.status.success());
    let text = std::fs::read_to_string(reports.join("report_CVPR2013.txt")).unwrap();
    assert!(text.contains("max_f1 0.000000"));
}

#[test]
fn evaluate_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let gt = dir.path().join("gt.txt");
    let det = dir.path().join("det.txt");
    std::fs::write(&gt, "a 10 0 10 50\n").unwrap();
    std::fs::write(&det, "z 10 0 10 50 1\n").unwrap();
    let base = |extra: &[&str]| {
        run(bin()
            .arg("evaluate")
            .arg("--detections")
            .arg(&det)
            .arg("--groundtruth")
            .arg(&gt)
            .args(extra))
        .status
        .code()
    };
    assert_eq!(base(&["--regime", "cvpr2011"]), Some(2));
    std::fs::write(&det, "a 10 0 10 50 1\n").unwrap();
    assert_eq!(base(&["--regime", "eccv2020"]), Some(2));
    assert_eq!(base(&["--regime", "cvpr2011", "--dialect", "voc"]), Some(2));
    assert_eq!(base(&["--regime", "iccv2017"]), Some(2));
    std::fs::write(&gt, "a 10 0 10\n").unwrap();
    assert_eq!(base(&["--regime", "cvpr2011"]), Some(2));
}

#[test]
fn batch_then_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("images");
    std::fs::create_dir(&input).unwrap();
    sample(&input, "b.png", 6);
    sample(&input, "a.png", 5);
    image::RgbImage::new(32, 32).save(input.join("c.png")).unwrap();
    std::fs::write(input.join("notes.txt"), "ignored").unwrap();
    let out_dir = dir.path().join("out");
    let out = run(bin()
        .arg("batch")
        .arg(&input)
        .arg("--out-dir")
        .arg(&out_dir)
        .arg("--overlays")
        .arg("--deterministic"));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let records = read_detections(out_dir.join("detections.txt")).unwrap();
    let ids: Vec<&str> = records.iter().map(|r| r.image_id.as_str()).collect();
    assert_eq!(ids, ["a", "b"]);
    assert!(out_dir.join("a_overlay.png").exists());
    assert_eq!(std::fs::read_to_string(out_dir.join("c.txt")).unwrap(), "");
    assert_eq!(
        std::fs::read_to_string(out_dir.join("sizes.txt")).unwrap(),
        "a 64 64\nb 64 64\nc 32 32\n"
    );

    let gt = dir.path().join("gt.txt");
    std::fs::write(&gt, "a 31.5 0 31.5 63\nb 31.5 0 31.5 63\nc 15.5 0 15.5 31\n").unwrap();
    let out = run(bin()
        .arg("evaluate")
        .arg("--detections")
        .arg(out_dir.join("detections.txt"))
        .arg("--groundtruth")
        .arg(&gt)
        .arg("--sizes")
        .arg(out_dir.join("sizes.txt")));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 3);
    assert!(stdout.contains("top1_tp 2/3"), "{stdout}");
}
