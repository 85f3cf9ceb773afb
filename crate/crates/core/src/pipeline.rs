//! End-to-end detection: image → edge maps → feature points → histograms →
//! weighted votes → peaks → axes.

use std::path::Path;

use image::{DynamicImage, RgbImage};

use crate::color::{to_grayscale, to_hsv, HsvImage, Plane};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::features::{compute_edge_maps, default_cell_size, sample_feature_points, EdgeMaps, FeaturePoint};
use crate::filterbank::FilterBank;
use crate::histograms::{centred_window, color_histogram, grayscale_color_histogram, textural_histogram};
use crate::voting::{
    accumulate, axis_endpoints, find_peaks, smooth, AccumulateOptions, Peak, SymmetryAxis, SymmetryFeature,
    VoteGrid, VoteHistogram,
};

/// Everything produced for one image.
#[derive(Debug, Clone)]
pub struct Detection {
    pub width: usize,
    pub height: usize,
    pub cell_size: usize,
    /// Whether the luminance histogram replaced color.
    pub grayscale: bool,
    pub edges: EdgeMaps,
    pub points: Vec<FeaturePoint>,
    pub features: Vec<SymmetryFeature>,
    pub votes: VoteHistogram,
    pub smoothed: VoteGrid,
    pub peaks: Vec<Peak>,
    /// Strongest first; the first has score 1.
    pub axes: Vec<SymmetryAxis>,
}

/// Reusable detector. The filter bank is cached for the last image size.
#[derive(Debug, Clone)]
pub struct Detector {
    config: Config,
    bank: Option<FilterBank>,
}

/// Reads a PNG or JPEG. The flag reports single-channel input.
pub fn load_image(path: impl AsRef<Path>) -> Result<(RgbImage, bool)> {
    let path = path.as_ref();
    let img = image::open(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(split_channels(img))
}

pub fn split_channels(img: DynamicImage) -> (RgbImage, bool) {
    let single = img.color().channel_count() <= 2;
    (img.to_rgb8(), single)
}

impl Detector {
    pub fn new(config: Config) -> Result<Self> {
        config.validate()?;
        Ok(Self { config, bank: None })
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    fn bank(&mut self, width: usize, height: usize) -> Result<&FilterBank> {
        let stale = self
            .bank
            .as_ref()
            .is_none_or(|b| (b.width(), b.height()) != (width, height));
        if stale {
            self.bank = Some(FilterBank::new(width, height, self.config.filter_bank_params())?);
        }
        Ok(self.bank.as_ref().expect("bank just built"))
    }

    pub fn detect_path(&mut self, path: impl AsRef<Path>) -> Result<Detection> {
        let (rgb, single) = load_image(path)?;
        self.detect_rgb(&rgb, single)
    }

    pub fn detect_image(&mut self, img: &DynamicImage) -> Result<Detection> {
        let (rgb, single) = split_channels(img.clone());
        self.detect_rgb(&rgb, single)
    }

    /// Runs the full pipeline on an RGB raster. `single_channel` forces the
    /// luminance color fallback.
    pub fn detect_rgb(&mut self, rgb: &RgbImage, single_channel: bool) -> Result<Detection> {
        let cfg = self.config.clone();
        let parallel = !cfg.deterministic;
        let (w, h) = (rgb.width() as usize, rgb.height() as usize);
        let gray = to_grayscale(rgb);
        let hsv = to_hsv(rgb);
        let edges = compute_edge_maps(&gray, self.bank(w, h)?, parallel)?;
        if edges.degenerate {
            return Err(Error::NoFeatures);
        }
        let cell_size = if cfg.cell_size > 0 {
            cfg.cell_size
        } else {
            default_cell_size(w, h, cfg.cell_divisor)
        };
        let mut points = sample_feature_points(&edges, &hsv, cell_size, cfg.homogeneity_threshold)?;
        if points.is_empty() {
            return Err(Error::NoFeatures);
        }
        if cfg.max_features > 0 && points.len() > cfg.max_features {
            let mut order: Vec<usize> = (0..points.len()).collect();
            order.sort_by(|&a, &b| {
                points[b]
                    .amplitude
                    .total_cmp(&points[a].amplitude)
                    .then(a.cmp(&b))
            });
            order.truncate(cfg.max_features);
            order.sort_unstable();
            points = order.into_iter().map(|i| points[i]).collect();
        }
        let grayscale = single_channel || hsv.mean_saturation() < cfg.grayscale_saturation_threshold;
        let features = describe(&points, &edges, &hsv, &gray, cell_size, grayscale, &cfg)?;

        let votes = accumulate(
            &features,
            AccumulateOptions {
                width: w,
                height: h,
                reversal: cfg.texture_reversal,
                parallel,
            },
        )?;
        let smoothed = smooth(&votes.grid, cfg.smoothing_sigma[0], cfg.smoothing_sigma[1])?;
        let peaks = find_peaks(&smoothed, cfg.max_peaks, cfg.nms())?;
        if peaks.is_empty() {
            return Err(Error::NoSymmetryEvidence);
        }
        let axes = peaks
            .iter()
            .map(|p| axis_endpoints(p, &votes, &features, cfg.nms()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Detection {
            width: w,
            height: h,
            cell_size,
            grayscale,
            edges,
            points,
            features,
            votes,
            smoothed,
            peaks,
            axes,
        })
    }
}

/// Textural and color histograms for every feature point.
pub fn describe(
    points: &[FeaturePoint],
    edges: &EdgeMaps,
    hsv: &HsvImage,
    gray: &Plane,
    cell_size: usize,
    grayscale: bool,
    cfg: &Config,
) -> Result<Vec<SymmetryFeature>> {
    let (w, h) = (edges.width(), edges.height());
    let radius = (cfg.color_window_factor * cell_size as f64).round() as usize;
    let layout = cfg.color_layout();
    points
        .iter()
        .map(|p| {
            let texture = textural_histogram(
                &p.cell,
                &edges.amplitude,
                &edges.orientation,
                cfg.texture_bins,
                p.orientation,
            )?;
            let window = centred_window(p.x, p.y, radius, w, h);
            let color = if grayscale {
                grayscale_color_histogram(&window, gray, layout.len())?
            } else {
                color_histogram(&window, hsv, layout)?
            };
            Ok(SymmetryFeature {
                position: p.position(),
                orientation: p.orientation,
                amplitude: p.amplitude,
                texture,
                color,
            })
        })
        .collect()
}

/// One-shot convenience wrapper around [`Detector`].
pub fn detect(rgb: &RgbImage, config: &Config) -> Result<Detection> {
    Detector::new(config.clone())?.detect_rgb(rgb, false)
}
