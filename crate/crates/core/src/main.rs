use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mirror_axis::commands::{self, DetectOutputs, EvaluateArgs};
use mirror_axis::records::write_detections;
use mirror_axis::{Config, Dialect, Error, ThresholdRegime, CONFIG_ENV};

/// Reflection symmetry axis detection and evaluation.
#[derive(Parser)]
#[command(name = "mirror-axis", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// TOML config file; keys as in `Config`.
    #[arg(long, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. `--set scales=8`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Single-threaded, byte-reproducible run.
    #[arg(long)]
    deterministic: bool,
}

impl ConfigArgs {
    fn load(&self) -> Result<Config, Error> {
        let mut cfg = match &self.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        for o in &self.overrides {
            cfg.set(o)?;
        }
        if self.deterministic {
            cfg.deterministic = true;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Detect mirror axes in one image.
    Detect {
        image: PathBuf,
        /// Detection file to write; printed to stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Image id in the output; defaults to the file stem.
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        overlay: Option<PathBuf>,
        #[arg(long)]
        heatmap: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        top_k: usize,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Score detections against groundtruth.
    Evaluate {
        #[arg(long)]
        detections: PathBuf,
        #[arg(long)]
        groundtruth: PathBuf,
        /// generic, psu, ava, ny or iccv2017.
        #[arg(long, default_value = "generic")]
        dialect: String,
        /// `image_id width height` per line; needed for ICCV2017.
        #[arg(long)]
        sizes: Option<PathBuf>,
        /// CVPR2011, CVPR2013, ICCV2017 or all. Repeatable.
        #[arg(long, default_value = "all")]
        regime: Vec<String>,
        /// Directory for `report_<REGIME>.txt` files.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Draw stored detections onto an image.
    Overlay {
        image: PathBuf,
        #[arg(long)]
        detections: PathBuf,
        #[arg(long)]
        id: Option<String>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 5)]
        top_k: usize,
    },
    /// Export the smoothed voting histogram as a grayscale PNG.
    Heatmap {
        image: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Detect every PNG/JPEG in a directory.
    Batch {
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        overlays: bool,
        #[arg(long, default_value_t = 5)]
        top_k: usize,
        #[command(flatten)]
        config: ConfigArgs,
    },
}

fn parse_regimes(names: &[String]) -> Result<Vec<ThresholdRegime>, Error> {
    let mut out = Vec::new();
    for n in names {
        if n.eq_ignore_ascii_case("all") {
            out.extend(ThresholdRegime::ALL);
        } else {
            out.push(n.parse()?);
        }
    }
    out.dedup();
    Ok(out)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Detect {
            image,
            output,
            id,
            overlay,
            heatmap,
            top_k,
            config,
        } => {
            let cfg = config.load()?;
            let outputs = DetectOutputs {
                detections: output.clone(),
                overlay,
                heatmap,
                top_k,
            };
            let (record, _) = commands::run_detect(&image, id.as_deref(), &cfg, &outputs)?;
            if output.is_none() {
                print!("{}", write_detections(&[record]));
            }
        }
        Command::Evaluate {
            detections,
            groundtruth,
            dialect,
            sizes,
            regime,
            out_dir,
        } => {
            let dialect: Dialect = dialect.parse()?;
            let reports = commands::run_evaluate(&EvaluateArgs {
                detections: &detections,
                groundtruth: &groundtruth,
                dialect,
                sizes: sizes.as_deref(),
                regimes: parse_regimes(&regime)?,
                out_dir: out_dir.as_deref(),
            })?;
            for r in reports {
                println!(
                    "{} max_f1 {:.4} tp {} fp {} fn {} top1_tp {}/{}",
                    r.regime, r.max_f1, r.tp, r.fp, r.fn_, r.top1_tp, r.images
                );
            }
        }
        Command::Overlay {
            image,
            detections,
            id,
            output,
            top_k,
        } => commands::run_overlay(&image, &detections, id.as_deref(), top_k, &output)?,
        Command::Heatmap {
            image,
            output,
            config,
        } => commands::run_heatmap(&image, &config.load()?, &output)?,
        Command::Batch {
            input,
            out_dir,
            overlays,
            top_k,
            config,
        } => {
            let summary = commands::run_batch(&input, &out_dir, &config.load()?, overlays, top_k)?;
            for (id, why) in &summary.skipped {
                eprintln!("{id}: {why}");
            }
            println!(
                "{} images, {} without axes",
                summary.records.len(),
                summary.skipped.len()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e) as u8)
        }
    }
}
