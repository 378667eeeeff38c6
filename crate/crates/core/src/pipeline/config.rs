use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::synth::SyntheticSpec;
use crate::bounds::{FWindow, PhysicalConstants};
use crate::error::{Error, Result};
use crate::ingest::SegmentationConfig;
use crate::scaling::Zones;

/// Longest analysis window supported, in hours.
pub const MAX_T_END_H: f64 = 72.0;

/// Settings for a run, normally read from a TOML file.
///
/// ```toml
/// input = "morphology.csv"
/// output_dir = "out"
/// t_end_h = 24.0
///
/// [groups]
/// s01 = "old"
///
/// [constants]
/// rho_m = 1.1
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Morphology CSV or a directory of plate images.
    pub input: Option<PathBuf>,
    pub output_dir: PathBuf,
    /// Bound evaluation grid spacing, hours.
    pub grid_step_h: f64,
    pub t_end_h: f64,
    pub threads: Option<usize>,
    /// Overrides group labels found in the input.
    pub groups: BTreeMap<String, String>,
    pub constants: PhysicalConstants,
    pub segmentation: SegmentationConfig,
    pub analysis: AnalysisOptions,
    pub synth: SyntheticSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            output_dir: PathBuf::from("out"),
            grid_step_h: 0.5,
            t_end_h: 24.0,
            threads: None,
            groups: BTreeMap::new(),
            constants: PhysicalConstants::default(),
            segmentation: SegmentationConfig::default(),
            analysis: AnalysisOptions::default(),
            synth: SyntheticSpec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisOptions {
    /// Window for the advancing-fraction average.
    pub f_window: FWindow,
    /// First time used by the data-driven kinetic bound.
    pub ke_numeric_start_h: f64,
    /// Manual allometry zones applied to every group.
    pub allometry_zones: Option<Zones>,
    /// Write SVG plots next to the reports.
    pub plots: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            f_window: FWindow::default(),
            ke_numeric_start_h: 0.5,
            allometry_zones: None,
            plots: true,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: RunConfig = toml::from_str(&text).map_err(|e| Error::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        cfg.validate().map_err(|e| Error::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.grid_step_h > 0.0 && self.grid_step_h.is_finite()) {
            return Err(Error::InvalidInput(format!("grid step must be positive, got {}", self.grid_step_h)));
        }
        if !(self.t_end_h > 0.0 && self.t_end_h <= MAX_T_END_H) {
            return Err(Error::InvalidInput(format!(
                "t_end must lie in (0, {MAX_T_END_H}] h, got {}",
                self.t_end_h
            )));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidInput("thread count must be at least 1".into()));
        }
        self.constants.validate()?;
        self.segmentation.validate()?;
        self.synth.validate()
    }

    /// `0, Δ, 2Δ, …` up to and including `t_end` (within round-off).
    pub fn time_grid(&self) -> Vec<f64> {
        let n = (self.t_end_h / self.grid_step_h + 1e-9).floor() as usize;
        (0..=n).map(|i| i as f64 * self.grid_step_h).collect()
    }

    pub fn f_window(&self) -> FWindow {
        FWindow {
            start_h: self.analysis.f_window.start_h,
            end_h: self.analysis.f_window.end_h.min(self.t_end_h),
        }
    }
}
