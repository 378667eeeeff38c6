//! Plate-image segmentation and morphology table input/output.

mod mask;
mod segment;

pub use mask::BinaryMask;
pub use segment::{
    median_filter, remove_small_components, segment_plate, PlateGeometry, PlateImage, Polarity,
    SegmentationConfig,
};

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::morphometry::{measured_circularity, MorphologyRecord, MorphologySeries};

const REQUIRED_COLUMNS: [&str; 4] = ["sample_id", "time_h", "area_cm2", "perimeter_cm"];

/// Reads an 8-bit grayscale PNG (colour images are converted to luma).
pub fn load_plate_image(path: &Path, cfg: &SegmentationConfig, timestamp_h: f64) -> Result<PlateImage> {
    let img = image::open(path)
        .map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })?
        .to_luma8();
    let (width, height) = (img.width() as usize, img.height() as usize);
    let geometry = cfg.geometry_for(width, height);
    Ok(PlateImage {
        width,
        height,
        pixels: img.into_raw(),
        dpi: cfg.dpi,
        plate_center: (geometry.center_x, geometry.center_y),
        plate_radius: geometry.radius,
        timestamp_h,
    })
}

pub fn save_gray_png(path: &Path, width: usize, height: usize, pixels: Vec<u8>) -> Result<()> {
    let buf = image::GrayImage::from_raw(width as u32, height as u32, pixels)
        .ok_or_else(|| Error::InvalidInput("pixel buffer does not match image size".into()))?;
    buf.save(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })
}

/// Splits `<sample_id>_t<minutes>.png` into the sample id and time in hours.
pub fn parse_image_name(path: &Path) -> Option<(String, f64)> {
    if !path.extension()?.to_str()?.eq_ignore_ascii_case("png") {
        return None;
    }
    let stem = path.file_stem()?.to_str()?;
    let (sample, minutes) = stem.rsplit_once("_t")?;
    let minutes: f64 = minutes.parse().ok()?;
    (!sample.is_empty() && minutes >= 0.0).then(|| (sample.to_string(), minutes / 60.0))
}

/// Image files of a directory grouped by sample and sorted by time.
pub fn scan_image_dir(dir: &Path) -> Result<BTreeMap<String, Vec<(f64, PathBuf)>>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut out: BTreeMap<String, Vec<(f64, PathBuf)>> = BTreeMap::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        match parse_image_name(&path) {
            Some((sample, t)) => out.entry(sample).or_default().push((t, path)),
            None => log::debug!("skipping {}", path.display()),
        }
    }
    for (sample, frames) in out.iter_mut() {
        frames.sort_by(|a, b| a.0.total_cmp(&b.0));
        if frames.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidInput(format!("sample {sample} has two images at the same time")));
        }
    }
    Ok(out)
}

fn parse_optional(field: Option<&str>) -> std::result::Result<Option<f64>, String> {
    match field.map(str::trim) {
        None | Some("") => Ok(None),
        Some(s) if s.eq_ignore_ascii_case("nan") || s.eq_ignore_ascii_case("na") => Ok(None),
        Some(s) => s.parse().map(Some).map_err(|_| format!("cannot parse '{s}' as a number")),
    }
}

/// Loads a morphology table with columns
/// `sample_id,time_h,area_cm2,perimeter_cm[,circularity][,fractal_dim][,group_label]`.
///
/// Rows of one sample must appear in strictly increasing time order; samples
/// may be interleaved. Missing circularities are recomputed from area and
/// perimeter. Series are returned sorted by sample id.
pub fn load_morphology_csv(path: &Path) -> Result<Vec<MorphologySeries>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_morphology_csv(file, path)
}

pub fn read_morphology_csv<R: std::io::Read>(reader: R, origin: &Path) -> Result<Vec<MorphologySeries>> {
    let schema = |line: u64, message: String| Error::Schema {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let mut idx = [0usize; 4];
    for (slot, name) in idx.iter_mut().zip(REQUIRED_COLUMNS) {
        *slot = column(name).ok_or_else(|| schema(1, format!("missing required column '{name}'")))?;
    }
    let circ_col = column("circularity");
    let frac_col = column("fractal_dim");
    let group_col = column("group_label");

    let mut series: BTreeMap<String, MorphologySeries> = BTreeMap::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let text = |i: usize| row.get(i).unwrap_or("");
        let number = |i: usize, name: &str| -> Result<f64> {
            text(i)
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| schema(line, format!("column '{name}': cannot parse '{}'", text(i))))
        };
        let sample_id = text(idx[0]).to_string();
        if sample_id.is_empty() {
            return Err(schema(line, "empty sample_id".into()));
        }
        let time_h = number(idx[1], "time_h")?;
        let area = number(idx[2], "area_cm2")?;
        let perimeter = number(idx[3], "perimeter_cm")?;
        if area < 0.0 || perimeter < 0.0 {
            return Err(schema(line, "area and perimeter must be non-negative".into()));
        }
        let circularity = match circ_col {
            Some(i) => parse_optional(row.get(i)).map_err(|m| schema(line, m))?,
            None => measured_circularity(area, perimeter),
        };
        let fractal_dim = match frac_col {
            Some(i) => parse_optional(row.get(i)).map_err(|m| schema(line, m))?,
            None => None,
        };
        let group_label = group_col.map(|i| text(i).to_string()).filter(|g| !g.is_empty());

        let entry = series.entry(sample_id.clone()).or_insert_with(|| MorphologySeries {
            sample_id: sample_id.clone(),
            group_label: group_label.clone(),
            records: Vec::new(),
        });
        if let Some(last) = entry.records.last() {
            if !(time_h > last.time_h) {
                return Err(schema(
                    line,
                    format!("time {time_h} h of sample {sample_id} does not increase (previous {} h)", last.time_h),
                ));
            }
        }
        if entry.group_label != group_label {
            return Err(schema(line, format!("sample {sample_id} changes group label")));
        }
        entry.records.push(MorphologyRecord {
            time_h,
            area_cm2: area,
            perimeter_cm: perimeter,
            circularity,
            fractal_dim,
        });
    }
    Ok(series.into_values().collect())
}

/// Writes series in the order given. A `group_label` column is added when
/// any series carries one.
pub fn write_morphology_csv<W: Write>(writer: W, series: &[MorphologySeries]) -> Result<()> {
    let with_group = series.iter().any(|s| s.group_label.is_some());
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header = vec!["sample_id", "time_h", "area_cm2", "perimeter_cm", "circularity", "fractal_dim"];
    if with_group {
        header.push("group_label");
    }
    wtr.write_record(&header)?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for s in series {
        for r in &s.records {
            let mut row = vec![
                s.sample_id.clone(),
                r.time_h.to_string(),
                r.area_cm2.to_string(),
                r.perimeter_cm.to_string(),
                opt(r.circularity),
                opt(r.fractal_dim),
            ];
            if with_group {
                row.push(s.group_label.clone().unwrap_or_default());
            }
            wtr.write_record(&row)?;
        }
    }
    wtr.flush().map_err(|e| Error::io(Path::new("<csv>"), e))?;
    Ok(())
}
