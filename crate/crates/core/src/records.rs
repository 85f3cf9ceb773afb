//! Line-oriented interchange files.
//!
//! Detections: `image_id a_x a_y b_x b_y score`, one axis per line,
//! space-separated, LF endings. Groundtruth: one axis per line in one of the
//! [`Dialect`] layouts. Image sizes: `image_id width height`. Blank lines and
//! lines starting with `#` are ignored everywhere.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::eval::AxisSegment;
use crate::voting::SymmetryAxis;

/// Scored axes detected in one image, strongest first.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionRecord {
    pub image_id: String,
    pub axes: Vec<AxisSegment>,
}

impl DetectionRecord {
    pub fn from_axes(image_id: impl Into<String>, axes: &[SymmetryAxis]) -> Self {
        Self {
            image_id: image_id.into(),
            axes: axes
                .iter()
                .map(|a| AxisSegment::scored(a.endpoints[0], a.endpoints[1], a.score))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruthRecord {
    pub image_id: String,
    pub axes: Vec<AxisSegment>,
}

/// Source layout of a groundtruth file.
///
/// These are flattened text exports of each distribution's annotations:
///
/// | dialect    | separator  | columns                 | origin  |
/// |------------|------------|-------------------------|---------|
/// | `generic`  | whitespace | `id ax ay bx by`        | 0-based |
/// | `psu`      | whitespace | `id ax ay bx by`        | 1-based |
/// | `ava`      | whitespace | `id ax ay bx by`        | 1-based |
/// | `ny`       | whitespace | `id ax ay bx by`        | 1-based |
/// | `iccv2017` | comma      | `id,ax,ay,bx,by`        | 0-based |
///
/// 1-based coordinates (MATLAB exports) are shifted to the 0-based pixel
/// grid used everywhere else.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dialect {
    Generic,
    Psu,
    Ava,
    Ny,
    Iccv2017,
}

impl std::str::FromStr for Dialect {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "generic" => Ok(Self::Generic),
            "psu" => Ok(Self::Psu),
            "ava" => Ok(Self::Ava),
            "ny" => Ok(Self::Ny),
            "iccv2017" | "iccv17" => Ok(Self::Iccv2017),
            _ => Err(Error::UnknownDialect(s.to_string())),
        }
    }
}

impl Dialect {
    fn comma_separated(&self) -> bool {
        matches!(self, Self::Iccv2017)
    }

    fn origin_shift(&self) -> f64 {
        match self {
            Self::Psu | Self::Ava | Self::Ny => 1.0,
            Self::Generic | Self::Iccv2017 => 0.0,
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(path: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

fn parse_numbers(fields: &[&str], path: &str, line: usize) -> Result<Vec<f64>> {
    fields
        .iter()
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(path, line, format!("`{f}` is not a finite number")))
        })
        .collect()
}

/// Groups consecutive-or-not lines by image id, keeping first-seen order.
fn group<T>(items: Vec<(String, T)>) -> Vec<(String, Vec<T>)> {
    let mut order: Vec<String> = Vec::new();
    let mut map: BTreeMap<String, Vec<T>> = BTreeMap::new();
    for (id, item) in items {
        if !map.contains_key(&id) {
            order.push(id.clone());
        }
        map.entry(id).or_default().push(item);
    }
    order
        .into_iter()
        .map(|id| {
            let v = map.remove(&id).expect("grouped id");
            (id, v)
        })
        .collect()
}

/// Parses groundtruth text; `path` only labels errors.
pub fn parse_groundtruth(text: &str, dialect: Dialect, path: &str) -> Result<Vec<GroundTruthRecord>> {
    let mut rows = Vec::new();
    for (n, line) in content_lines(text) {
        let has_comma = line.contains(',');
        if has_comma != dialect.comma_separated() {
            return Err(parse_err(
                path,
                n,
                format!("line does not match the {dialect:?} dialect"),
            ));
        }
        let fields: Vec<&str> = if has_comma {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        if fields.len() != 5 {
            return Err(parse_err(
                path,
                n,
                format!("expected 5 fields, found {}", fields.len()),
            ));
        }
        let v = parse_numbers(&fields[1..], path, n)?;
        let s = dialect.origin_shift();
        let seg = AxisSegment::new((v[0] - s, v[1] - s), (v[2] - s, v[3] - s));
        if seg.is_degenerate() {
            return Err(parse_err(path, n, "groundtruth axis has zero length"));
        }
        rows.push((fields[0].to_string(), seg));
    }
    Ok(group(rows)
        .into_iter()
        .map(|(image_id, axes)| GroundTruthRecord { image_id, axes })
        .collect())
}

pub fn read_groundtruth(path: impl AsRef<Path>, dialect: Dialect) -> Result<Vec<GroundTruthRecord>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_groundtruth(&text, dialect, &path.display().to_string())
}

fn check_id(id: &str, path: &str, line: usize) -> Result<()> {
    if id.is_empty() || id.contains(char::is_whitespace) || id.starts_with('#') {
        return Err(parse_err(path, line, format!("invalid image id `{id}`")));
    }
    Ok(())
}

/// Canonical detection text. Numbers use the shortest representation that
/// parses back to the same `f64`, so write/read/write is byte-stable.
pub fn write_detections(records: &[DetectionRecord]) -> String {
    let mut out = String::new();
    for r in records {
        for a in &r.axes {
            writeln!(
                out,
                "{} {} {} {} {} {}",
                r.image_id,
                a.a.0,
                a.a.1,
                a.b.0,
                a.b.1,
                a.score.unwrap_or(0.0)
            )
            .expect("writing to a String");
        }
    }
    out
}

pub fn parse_detections(text: &str, path: &str) -> Result<Vec<DetectionRecord>> {
    let mut rows = Vec::new();
    for (n, line) in content_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(parse_err(
                path,
                n,
                format!("expected 6 fields, found {}", fields.len()),
            ));
        }
        check_id(fields[0], path, n)?;
        let v = parse_numbers(&fields[1..], path, n)?;
        rows.push((
            fields[0].to_string(),
            AxisSegment::scored((v[0], v[1]), (v[2], v[3]), v[4]),
        ));
    }
    Ok(group(rows)
        .into_iter()
        .map(|(image_id, axes)| DetectionRecord { image_id, axes })
        .collect())
}

pub fn read_detections(path: impl AsRef<Path>) -> Result<Vec<DetectionRecord>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_detections(&text, &path.display().to_string())
}

pub fn write_image_sizes(sizes: &BTreeMap<String, (usize, usize)>) -> String {
    let mut out = String::new();
    for (id, (w, h)) in sizes {
        writeln!(out, "{id} {w} {h}").expect("writing to a String");
    }
    out
}

pub fn parse_image_sizes(text: &str, path: &str) -> Result<BTreeMap<String, (usize, usize)>> {
    let mut out = BTreeMap::new();
    for (n, line) in content_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(
                path,
                n,
                format!("expected 3 fields, found {}", fields.len()),
            ));
        }
        check_id(fields[0], path, n)?;
        let dim = |s: &str| {
            s.parse::<usize>()
                .ok()
                .filter(|&d| d > 0)
                .ok_or_else(|| parse_err(path, n, format!("`{s}` is not a positive integer")))
        };
        out.insert(fields[0].to_string(), (dim(fields[1])?, dim(fields[2])?));
    }
    Ok(out)
}

pub fn read_image_sizes(path: impl AsRef<Path>) -> Result<BTreeMap<String, (usize, usize)>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_image_sizes(&text, &path.display().to_string())
}

/// Writes through a temporary sibling file and renames it into place.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}
