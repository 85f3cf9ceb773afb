//! Reflection symmetry axis detection.
//!
//! Edges come from a multi-scale, multi-orientation Log-Gabor filter bank
//! applied in the Fourier domain. One feature point is sampled per grid cell
//! and described by an orientation histogram of its cell and a color
//! histogram of its surroundings. Every pair of features then votes for its
//! perpendicular bisector in a `(rho, theta)` accumulator, weighted by how
//! well the pair mirrors in orientation, texture and color. Peaks of the
//! smoothed accumulator are the detected axes.
//!
//! ```no_run
//! use mirror_axis::{Config, Detector};
//!
//! let mut detector = Detector::new(Config::default())?;
//! let detection = detector.detect_path("butterfly.png")?;
//! for axis in &detection.axes {
//!     println!("{:?} score {:.3}", axis.endpoints, axis.score);
//! }
//! # Ok::<(), mirror_axis::Error>(())
//! ```
//!
//! The [`eval`] module scores detections against groundtruth with the usual
//! competition criteria, and [`records`] reads and writes the text formats.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod color;
pub mod commands;
pub mod config;
pub mod error;
pub mod eval;
pub mod features;
pub mod filterbank;
pub mod fourier;
pub mod histograms;
pub mod pipeline;
pub mod records;
pub mod render;
pub mod synthetic;
pub mod voting;

pub use config::{Config, CONFIG_ENV};
pub use error::{Error, Result};
pub use eval::{AxisSegment, EvalReport, ThresholdRegime};
pub use pipeline::{Detection, Detector};
pub use records::{DetectionRecord, Dialect, GroundTruthRecord};
pub use voting::SymmetryAxis;
