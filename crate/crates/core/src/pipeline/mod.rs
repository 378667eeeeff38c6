//! The `segment`, `analyze`, `synth` and `oscillators` commands.
//!
//! Every command is a plain function of its configuration so that the
//! binary stays a thin argument parser. Per-sample work runs on the rayon
//! pool; results are collected in input order and written from one thread,
//! so the output does not depend on the number of threads.

mod analyze;
mod config;
mod svg;
pub mod synth;

pub use analyze::{
    analyze, analyze_sample, write_outputs, AnalysisOutput, FSource, GroupReport, SampleOutcome, SampleReport,
    TailReport, Target, TargetFit,
};
pub use config::{AnalysisOptions, RunConfig, MAX_T_END_H};
pub use synth::{cmd_synth, generate, ImageSpec, SyntheticSample, SyntheticSpec};

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ingest::{load_morphology_csv, load_plate_image, scan_image_dir, segment_plate, write_morphology_csv};
use crate::morphometry::{mask_series_to_morphology, MorphologySeries};
use crate::oscillators::{
    mean_ratio_enumerate, mean_ratio_formula, ml_min_time, ring_eigenvalues_closed, ring_mode_spectrum,
    slime_scaling, three_coupled_ratio, ModeSpectrum,
};
use crate::units::JOULES_PER_EV;

/// Segments every `<sample>_t<minutes>.png` in `image_dir` and measures
/// the masks. Group labels come from the configuration.
pub fn segment_images(image_dir: &Path, cfg: &RunConfig) -> Result<Vec<MorphologySeries>> {
    let frames = scan_image_dir(image_dir)?;
    if frames.is_empty() {
        return Err(Error::InvalidInput(format!("no <sample>_t<minutes>.png images in {}", image_dir.display())));
    }
    frames
        .iter()
        .map(|(sample, list)| {
            let masks = list
                .par_iter()
                .map(|(t, path)| {
                    let image = load_plate_image(path, &cfg.segmentation, *t)?;
                    Ok((*t, segment_plate(&image, &cfg.segmentation)?))
                })
                .collect::<Result<Vec<_>>>()?;
            mask_series_to_morphology(sample, cfg.groups.get(sample).cloned(), &masks)
        })
        .collect()
}

fn require_input(cfg: &RunConfig) -> Result<&Path> {
    cfg.input
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("no input given (set `input` in the config or pass a path)".into()))
}

fn write_table(path: &Path, series: &[MorphologySeries]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_morphology_csv(std::io::BufWriter::new(file), series)
}

/// Writes `<output_dir>/morphology.csv` from the image directory in
/// `cfg.input` and returns its path.
pub fn cmd_segment(cfg: &RunConfig) -> Result<PathBuf> {
    cfg.validate()?;
    let series = segment_images(require_input(cfg)?, cfg)?;
    std::fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::io(&cfg.output_dir, e))?;
    let path = cfg.output_dir.join("morphology.csv");
    write_table(&path, &series)?;
    Ok(path)
}

/// Loads `cfg.input` (a morphology table, or an image directory that is
/// segmented first), analyzes it and writes the reports to `output_dir`.
pub fn cmd_analyze(cfg: &RunConfig) -> Result<AnalysisOutput> {
    cfg.validate()?;
    let input = require_input(cfg)?;
    let series = if input.is_dir() {
        segment_images(input, cfg)?
    } else {
        load_morphology_csv(input)?
    };
    let out = analyze(&series, cfg)?;
    std::fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::io(&cfg.output_dir, e))?;
    write_outputs(&out, &cfg.output_dir, cfg.analysis.plots)?;
    Ok(out)
}

/// Requests for the `oscillators` command; with nothing set, a default
/// overview is produced.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorArgs {
    /// `(ω̃, β̂)` for the three-coupled ratio.
    pub three_coupled: Option<(f64, f64)>,
    /// `(G, d)` for the asymptotic ratio.
    pub ratio: Option<(usize, usize)>,
    /// `(G, d)` to enumerate exactly at `cutoff`.
    pub enumerate: Option<(usize, usize)>,
    pub cutoff: u64,
    /// Ring size for a normal-mode table.
    pub ring: Option<usize>,
    /// Speed in m/s for the scaling law.
    pub scaling: Option<f64>,
    pub mass_kg: f64,
    pub window_h: f64,
}

impl Default for OscillatorArgs {
    fn default() -> Self {
        Self {
            three_coupled: None,
            ratio: None,
            enumerate: None,
            cutoff: 200,
            ring: None,
            scaling: None,
            mass_kg: 1e-3,
            window_h: 24.0,
        }
    }
}

impl OscillatorArgs {
    fn is_empty(&self) -> bool {
        self.three_coupled.is_none()
            && self.ratio.is_none()
            && self.enumerate.is_none()
            && self.ring.is_none()
            && self.scaling.is_none()
    }
}

fn enumerate_line(out: &mut String, g: usize, d: usize, cutoff: u64) -> Result<()> {
    let formula = mean_ratio_formula(g, d);
    match mean_ratio_enumerate(&ModeSpectrum::isotropic(g, d), cutoff) {
        Ok(r) => {
            let _ = writeln!(out, "enumerate G={g} d={d} cutoff={cutoff}: {r:.6} (formula {formula:.6})");
            Ok(())
        }
        Err(e @ Error::StateSpaceOverflow { .. }) => {
            let _ = writeln!(out, "enumerate G={g} d={d} cutoff={cutoff}: skipped, {e}; formula {formula:.6}");
            Ok(())
        }
        Err(e) => Err(e),
    }
}

fn scaling_lines(out: &mut String, v: f64, mass_kg: f64, window_h: f64) -> Result<()> {
    let law = slime_scaling(v, window_h * 3600.0, mass_kg)?;
    let _ = writeln!(out, "t_slime(v={v:e} m/s) = {:.4e} s", law.t_slime);
    let _ = writeln!(
        out,
        "motional ops (m={mass_kg:e} kg, {window_h} h) = {:.4e}; (t/t_slime)^nu = {:.4e}",
        law.ops_estimate, law.time_ratio_ops
    );
    Ok(())
}

fn ring_lines(out: &mut String, eta: usize) -> Result<()> {
    let spectrum = ring_mode_spectrum(eta, 1.0, 1.0, 1.0)?;
    let mut closed: Vec<f64> = ring_eigenvalues_closed(eta, 1.0, 1.0, 1.0).iter().map(|l| l.sqrt()).collect();
    closed.sort_by(f64::total_cmp);
    closed.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * *b);
    let _ = writeln!(out, "ring eta={eta} (m = omega = k = 1):");
    for (mode, c) in spectrum.modes.iter().zip(&closed) {
        let _ = writeln!(out, "  frequency {:.10} (closed form {c:.10}), degeneracy {}", mode.frequency, mode.degeneracy);
    }
    if let (Some(w), Some(b)) = (spectrum.freq_ratio(), spectrum.cutoff_ratio()) {
        let _ = writeln!(out, "  three-coupled ratio at equal cutoffs: {:.4}", three_coupled_ratio(w, b));
    }
    Ok(())
}

/// Text report of speed-limit quantities.
pub fn cmd_oscillators(args: &OscillatorArgs) -> Result<String> {
    let mut out = String::new();
    if let Some((w, b)) = args.three_coupled {
        if !(w > 0.0 && b > 0.0) {
            return Err(Error::InvalidInput("frequency and cutoff ratios must be positive".into()));
        }
        let _ = writeln!(out, "three_coupled_ratio({w}, {b}) = {:.4}", three_coupled_ratio(w, b));
    }
    if let Some((g, d)) = args.ratio {
        if g == 0 || d == 0 {
            return Err(Error::InvalidInput("G and d must be at least 1".into()));
        }
        let _ = writeln!(out, "Gd/(Gd+1) for G={g}, d={d} = {:.4}", mean_ratio_formula(g, d));
    }
    if let Some((g, d)) = args.enumerate {
        enumerate_line(&mut out, g, d, args.cutoff)?;
    }
    if let Some(eta) = args.ring {
        ring_lines(&mut out, eta)?;
    }
    if let Some(v) = args.scaling {
        scaling_lines(&mut out, v, args.mass_kg, args.window_h)?;
    }
    if args.is_empty() {
        let _ = writeln!(out, "mean-to-maximum energy ratio Gd/(Gd+1):");
        for g in 1..=3 {
            let row: Vec<String> = (1..=3).map(|d| format!("d={d}: {:.4}", mean_ratio_formula(g, d))).collect();
            let _ = writeln!(out, "  G={g}  {}", row.join("  "));
        }
        for d in 1..=3 {
            enumerate_line(&mut out, 1, d, args.cutoff)?;
        }
        enumerate_line(&mut out, 9, 1, 20)?;
        let _ = writeln!(out, "three_coupled_ratio(1, 1) = {:.4}", three_coupled_ratio(1.0, 1.0));
        ring_lines(&mut out, 3)?;
        let _ = writeln!(out, "minimum orthogonalization time at 1 eV: {:.4e} s", ml_min_time(JOULES_PER_EV)?);
        scaling_lines(&mut out, 1e-3, args.mass_kg, args.window_h)?;
        scaling_lines(&mut out, 1e-3 / 3600.0, args.mass_kg, args.window_h)?;
    }
    Ok(out)
}
