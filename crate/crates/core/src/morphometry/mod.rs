//! Area, perimeter, circularity and box-counting dimension of plasmodium
//! masks, plus the normalized change series used to compare circularity
//! with fractal dimension.

mod contour;
mod fractal;

pub use contour::{boundary_length, boundary_length_px};
pub use fractal::{
    box_count_dimension, boundary_pixels, default_box_sizes, mask_fractal_dimension, FractalFit,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::BinaryMask;
use crate::stats::pearson;

/// Measured circularities up to this value are treated as discretization
/// noise on a round shape and clamped to 1.
pub const CIRCULARITY_TOLERANCE: f64 = 1.05;

/// `4π·area/perimeter²`, or `None` when the perimeter is not positive.
pub fn circularity(area: f64, perimeter: f64) -> Option<f64> {
    (perimeter > 0.0).then(|| 4.0 * std::f64::consts::PI * area / (perimeter * perimeter))
}

/// Circularity of a measured outline: values in `(1, 1.05]` are clamped to
/// 1 and anything larger is rejected as a measurement failure.
pub fn measured_circularity(area: f64, perimeter: f64) -> Option<f64> {
    let c = circularity(area, perimeter)?;
    if c > CIRCULARITY_TOLERANCE {
        log::warn!("circularity {c:.4} exceeds {CIRCULARITY_TOLERANCE}; marking it undefined");
        None
    } else if c > 1.0 {
        log::warn!("circularity {c:.4} clamped to 1");
        Some(1.0)
    } else {
        Some(c)
    }
}

/// One time point of a sample. Field names double as the CSV header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorphologyRecord {
    pub time_h: f64,
    pub area_cm2: f64,
    pub perimeter_cm: f64,
    pub circularity: Option<f64>,
    pub fractal_dim: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorphologySeries {
    pub sample_id: String,
    pub group_label: Option<String>,
    pub records: Vec<MorphologyRecord>,
}

impl MorphologySeries {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.time_h).collect()
    }

    pub fn areas(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.area_cm2).collect()
    }

    pub fn perimeters(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.perimeter_cm).collect()
    }

    /// Times and values of the points with a defined circularity.
    pub fn circularities(&self) -> (Vec<f64>, Vec<f64>) {
        self.records
            .iter()
            .filter_map(|r| r.circularity.map(|c| (r.time_h, c)))
            .unzip()
    }

    pub fn group_or_sample(&self) -> &str {
        self.group_label.as_deref().unwrap_or(&self.sample_id)
    }
}

/// Measures one mask. An empty mask has zero area and perimeter and no
/// defined circularity or dimension.
pub fn measure_mask(time_h: f64, mask: &BinaryMask) -> Result<MorphologyRecord> {
    if mask.is_empty() {
        return Ok(MorphologyRecord {
            time_h,
            area_cm2: 0.0,
            perimeter_cm: 0.0,
            circularity: None,
            fractal_dim: None,
        });
    }
    let area = mask.area_cm2();
    let perimeter = boundary_length(mask)?;
    let fractal_dim = match mask_fractal_dimension(mask) {
        Ok(fit) => Some(fit.d_f),
        Err(e @ (Error::Degenerate(_) | Error::InvalidInput(_))) => {
            log::warn!("t = {time_h} h: fractal dimension undefined ({e})");
            None
        }
        Err(e) => return Err(e),
    };
    Ok(MorphologyRecord {
        time_h,
        area_cm2: area,
        perimeter_cm: perimeter,
        circularity: measured_circularity(area, perimeter),
        fractal_dim,
    })
}

/// Measures a time-indexed mask sequence. Masks must share one scale and
/// have strictly increasing times.
pub fn mask_series_to_morphology(
    sample_id: &str,
    group_label: Option<String>,
    masks: &[(f64, BinaryMask)],
) -> Result<MorphologySeries> {
    if let Some((_, first)) = masks.first() {
        if masks.iter().any(|(_, m)| m.scale() != first.scale()) {
            return Err(Error::InvalidInput(format!("masks of sample {sample_id} do not share one scale")));
        }
    }
    if masks.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::InvalidInput(format!("mask times of sample {sample_id} are not strictly increasing")));
    }
    let records = masks
        .par_iter()
        .map(|(t, m)| measure_mask(*t, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(MorphologySeries {
        sample_id: sample_id.to_string(),
        group_label,
        records,
    })
}

/// Max-normalized absolute successive changes of circularity and fractal
/// dimension, and their correlation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaSeries {
    /// End time of each difference interval.
    pub times: Vec<f64>,
    pub abs_dc: Vec<f64>,
    pub abs_ddf: Vec<f64>,
    /// `None` when either normalized series is constant.
    pub pearson_r: Option<f64>,
}

/// Uses only the records where both circularity and dimension are defined.
pub fn delta_series(series: &MorphologySeries) -> Result<DeltaSeries> {
    let (times, (c, d)): (Vec<f64>, (Vec<f64>, Vec<f64>)) = series
        .records
        .iter()
        .filter_map(|r| Some((r.time_h, (r.circularity?, r.fractal_dim?))))
        .unzip();
    delta_from_values(&times, &c, &d)
}

pub fn delta_from_values(times: &[f64], circ: &[f64], frac: &[f64]) -> Result<DeltaSeries> {
    if times.len() != circ.len() || times.len() != frac.len() {
        return Err(Error::InvalidInput("delta series inputs differ in length".into()));
    }
    if times.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "delta series needs at least 3 defined points, got {}",
            times.len()
        )));
    }
    let abs_dc = normalized_abs_diff(circ);
    let abs_ddf = normalized_abs_diff(frac);
    Ok(DeltaSeries {
        times: times[1..].to_vec(),
        pearson_r: pearson(&abs_dc, &abs_ddf),
        abs_dc,
        abs_ddf,
    })
}

fn normalized_abs_diff(v: &[f64]) -> Vec<f64> {
    let diffs: Vec<f64> = v.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let max = diffs.iter().copied().fold(0.0, f64::max);
    if max > 0.0 {
        diffs.iter().map(|d| d / max).collect()
    } else {
        diffs
    }
}
