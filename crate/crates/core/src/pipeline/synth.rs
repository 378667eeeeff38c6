//! Synthetic morphology series (and optionally plate images) drawn from
//! known growth curves, for testing the analysis chain end to end.

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growthfit::{BiSigmoidParams, CircFitParams, DecayPhase, GrowthCurve, SigmoidParams};
use crate::ingest::{save_gray_png, write_morphology_csv};
use crate::morphometry::{MorphologyRecord, MorphologySeries};
use crate::units::cm_per_pixel;

const FOREGROUND: u8 = 220;
const BACKGROUND: u8 = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticSpec {
    pub n_samples: usize,
    pub seed: u64,
    /// Standard deviation of the multiplicative Gaussian noise.
    pub noise_sigma_rel: f64,
    /// Per-sample relative spread of every curve parameter.
    pub param_jitter_rel: f64,
    pub group: String,
    pub sample_prefix: String,
    /// Sampling interval of the generated table, hours.
    pub sample_step_h: f64,
    /// Length of the generated series; the run's `t_end_h` when absent.
    pub t_end_h: Option<f64>,
    pub area: GrowthCurve,
    pub perimeter: GrowthCurve,
    pub circularity: CircFitParams,
    /// `d_f = fractal_base + fractal_gain · (1 − C)`, clamped to `[1, 2]`.
    pub fractal_base: f64,
    pub fractal_gain: f64,
    pub images: Option<ImageSpec>,
}

/// Growing-disk image stack with the disk area following the area curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImageSpec {
    pub dpi: f64,
}

impl Default for ImageSpec {
    fn default() -> Self {
        Self { dpi: 100.0 }
    }
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_samples: 10,
            seed: 42,
            noise_sigma_rel: 0.02,
            param_jitter_rel: 0.0,
            group: "synthetic".into(),
            sample_prefix: "s".into(),
            sample_step_h: 0.5,
            t_end_h: None,
            area: GrowthCurve::Sigmoid(SigmoidParams::new(20.0, 0.5, 10.0)),
            perimeter: GrowthCurve::Sigmoid(SigmoidParams::new(100.0, 0.45, 10.5)),
            circularity: CircFitParams {
                phases: vec![DecayPhase {
                    drop: 0.6,
                    rate: 0.4,
                    midpoint: 8.0,
                }],
            },
            fractal_base: 1.05,
            fractal_gain: 0.4,
            images: None,
        }
    }
}

impl SyntheticSpec {
    /// The default spec with a two-phase area and perimeter, the second
    /// phase starting after the first day.
    pub fn bisigmoid() -> Self {
        Self {
            area: GrowthCurve::BiSigmoid(BiSigmoidParams::ordered(
                SigmoidParams::new(10.0, 0.6, 8.0),
                SigmoidParams::new(15.0, 0.4, 32.0),
            )),
            perimeter: GrowthCurve::BiSigmoid(BiSigmoidParams::ordered(
                SigmoidParams::new(50.0, 0.55, 8.5),
                SigmoidParams::new(60.0, 0.4, 32.5),
            )),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.noise_sigma_rel >= 0.0 && self.param_jitter_rel >= 0.0) {
            return Err(Error::InvalidInput("synthetic noise levels must be non-negative".into()));
        }
        if !(self.sample_step_h > 0.0) {
            return Err(Error::InvalidInput("synthetic sample step must be positive".into()));
        }
        let curves_ok = self.area.phases().iter().chain(&self.perimeter.phases()).all(|p| p.is_valid());
        if !curves_ok {
            return Err(Error::InvalidInput("synthetic curves need positive amplitudes and rates".into()));
        }
        if !(self.circularity.total_drop() < 1.0) {
            return Err(Error::InvalidInput("synthetic circularity drop must stay below 1".into()));
        }
        if let Some(img) = &self.images {
            if !(img.dpi > 0.0) {
                return Err(Error::InvalidInput("image dpi must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn sample_id(&self, index: usize) -> String {
        let width = self.n_samples.max(1).to_string().len().max(2);
        format!("{}{:0width$}", self.sample_prefix, index + 1)
    }
}

fn jitter_curve(curve: &GrowthCurve, rel: f64, rng: &mut ChaCha8Rng) -> GrowthCurve {
    let mut j = |v: f64| {
        let e: f64 = StandardNormal.sample(rng);
        (v * (1.0 + rel * e)).abs()
    };
    let mut phase = |p: &SigmoidParams| SigmoidParams::new(j(p.amplitude), j(p.rate), j(p.inflection));
    match curve {
        GrowthCurve::Sigmoid(p) => GrowthCurve::Sigmoid(phase(p)),
        GrowthCurve::BiSigmoid(b) => GrowthCurve::BiSigmoid(BiSigmoidParams::ordered(phase(&b.phase1), phase(&b.phase2))),
    }
}

/// One generated sample with the curves it was drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSample {
    pub series: MorphologySeries,
    pub area: GrowthCurve,
    pub perimeter: GrowthCurve,
}

/// Draws every sample. Identical specs give identical output.
pub fn generate(spec: &SyntheticSpec, run_t_end_h: f64) -> Result<Vec<SyntheticSample>> {
    spec.validate()?;
    let t_end = spec.t_end_h.unwrap_or(run_t_end_h);
    let n_times = (t_end / spec.sample_step_h + 1e-9).floor() as usize;
    let times: Vec<f64> = (0..=n_times).map(|i| i as f64 * spec.sample_step_h).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.n_samples);
    for index in 0..spec.n_samples {
        let area = jitter_curve(&spec.area, spec.param_jitter_rel, &mut rng);
        let perimeter = jitter_curve(&spec.perimeter, spec.param_jitter_rel, &mut rng);
        let sigma = spec.noise_sigma_rel;
        let mut noisy = |v: f64| {
            let e: f64 = StandardNormal.sample(&mut rng);
            v * (1.0 + sigma * e)
        };
        let records = times
            .iter()
            .map(|&t| {
                let c = noisy(spec.circularity.eval(t)).clamp(1e-3, 1.0);
                let d_f = noisy(spec.fractal_base + spec.fractal_gain * (1.0 - spec.circularity.eval(t))).clamp(1.0, 2.0);
                MorphologyRecord {
                    time_h: t,
                    area_cm2: noisy(area.eval(t)).max(0.0),
                    perimeter_cm: noisy(perimeter.eval(t)).max(0.0),
                    circularity: Some(c),
                    fractal_dim: Some(d_f),
                }
            })
            .collect();
        out.push(SyntheticSample {
            series: MorphologySeries {
                sample_id: spec.sample_id(index),
                group_label: Some(spec.group.clone()),
                records,
            },
            area,
            perimeter,
        });
    }
    Ok(out)
}

/// Writes `morphology.csv` (and `images/` when requested) into `out_dir`.
/// Returns the path of the table.
pub fn cmd_synth(spec: &SyntheticSpec, run_t_end_h: f64, out_dir: &Path) -> Result<PathBuf> {
    let samples = generate(spec, run_t_end_h)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let csv_path = out_dir.join("morphology.csv");
    let series: Vec<MorphologySeries> = samples.iter().map(|s| s.series.clone()).collect();
    let file = std::fs::File::create(&csv_path).map_err(|e| Error::io(&csv_path, e))?;
    write_morphology_csv(std::io::BufWriter::new(file), &series)?;
    if let Some(img) = &spec.images {
        write_disk_images(&series, img, &out_dir.join("images"))?;
    }
    Ok(csv_path)
}

/// Side of the square canvas that holds the largest disk of the set with
/// a margin, in pixels.
fn canvas_size(series: &[MorphologySeries], scale: f64) -> usize {
    let max_area = series
        .iter()
        .flat_map(|s| s.records.iter().map(|r| r.area_cm2))
        .fold(0.0, f64::max);
    let r_px = (max_area / std::f64::consts::PI).sqrt() / scale;
    // Keep the disk within the inner thresholding zone of the plate.
    let side = (2.0 * r_px / 0.8).ceil() as usize + 16;
    side + side % 2
}

pub fn disk_image(area_cm2: f64, side: usize, scale: f64) -> Vec<u8> {
    let r = (area_cm2 / std::f64::consts::PI).sqrt() / scale;
    let c = side as f64 / 2.0;
    (0..side * side)
        .map(|i| {
            let dx = (i % side) as f64 + 0.5 - c;
            let dy = (i / side) as f64 + 0.5 - c;
            if dx * dx + dy * dy <= r * r {
                FOREGROUND
            } else {
                BACKGROUND
            }
        })
        .collect()
}

fn write_disk_images(series: &[MorphologySeries], spec: &ImageSpec, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let scale = cm_per_pixel(spec.dpi);
    let side = canvas_size(series, scale);
    for s in series {
        for r in &s.records {
            let minutes = (r.time_h * 60.0).round() as u64;
            let path = dir.join(format!("{}_t{minutes}.png", s.sample_id));
            save_gray_png(&path, side, side, disk_image(r.area_cm2, side, scale))?;
        }
    }
    Ok(())
}
