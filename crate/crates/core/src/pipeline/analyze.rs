use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::svg;
use crate::bounds::{
    aggregate_group, bound_series, f_avg, f_avg_fit, ke_numeric_series, BoundKind, BoundSeries, GroupAggregate,
    SampleFits,
};
use crate::error::{Error, Result};
use crate::growthfit::{fit_circularity, fit_growth, FitParams, FitResult, GrowthCurve, ModelKind};
use crate::morphometry::{delta_from_values, DeltaSeries, MorphologySeries};
use crate::ness::{detect_ness, intercept_consistency, tail_linear_fit, InterceptCheck, LinearTailFit, NessReport, DEFAULT_GRID_STEP_H};
use crate::scaling::{allometric_fit, mass_series, AllometryReport};
use crate::stats::mean;

const UNGROUPED: &str = "ungrouped";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Area,
    Perimeter,
    Circularity,
}

/// One fitted series, as written to `fits.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TargetFit {
    pub sample_id: String,
    pub target: Target,
    pub model: ModelKind,
    pub params: FitParams,
    pub r2: f64,
    pub rmse: f64,
}

impl TargetFit {
    fn new(sample_id: &str, target: Target, fit: &FitResult) -> Self {
        Self {
            sample_id: sample_id.to_string(),
            target,
            model: fit.model,
            params: fit.params.clone(),
            r2: fit.r_squared,
            rmse: fit.rmse,
        }
    }
}

/// Late-time straight-line fit of a cumulative bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailReport {
    pub kind: BoundKind,
    pub fit: Option<LinearTailFit>,
    pub intercept_check: Option<InterceptCheck>,
    /// Why the fit or the check is missing.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FSource {
    Data,
    Fit,
}

/// Everything computed for one sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleReport {
    pub sample_id: String,
    pub group: String,
    pub fits: Vec<TargetFit>,
    pub area_curve: GrowthCurve,
    pub perimeter_curve: GrowthCurve,
    pub ness_area: Vec<NessReport>,
    pub ness_perimeter: Vec<NessReport>,
    pub f_avg: f64,
    pub f_avg_source: FSource,
    pub t_end_h: f64,
    /// Cumulative operations at `t_end_h` for each bound.
    pub ops_at_t_end: BTreeMap<BoundKind, f64>,
    pub tails: Vec<TailReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct SampleOutcome {
    pub report: SampleReport,
    pub bounds: Vec<BoundSeries>,
    /// Defined `(time, circularity, fractal_dim)` triples of the input.
    morphology: Vec<(f64, f64, f64)>,
    area_grid: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupReport {
    pub group: String,
    pub samples: Vec<String>,
    /// Mean NESS time of each area-growth phase over the group.
    pub t_ness_area: Vec<f64>,
    pub bounds: Vec<GroupAggregate>,
    /// Tail fits of the geometric-mean series.
    pub tails: Vec<TailReport>,
    pub morphology_delta: Option<DeltaSeries>,
}

#[derive(Debug, Clone)]
pub struct AnalysisOutput {
    pub samples: Vec<SampleOutcome>,
    pub groups: Vec<GroupReport>,
    pub allometry: Vec<AllometryReport>,
    /// `(sample_id, error message)` for skipped samples.
    pub failures: Vec<(String, String)>,
}

fn group_of(series: &MorphologySeries, cfg: &RunConfig) -> String {
    cfg.groups
        .get(&series.sample_id)
        .cloned()
        .or_else(|| series.group_label.clone())
        .unwrap_or_else(|| UNGROUPED.to_string())
}

/// Start of the linear tail: the latest transition that still leaves five
/// grid points before `t_end`.
fn tail_start(ness: &[NessReport], cfg: &RunConfig) -> Option<f64> {
    let latest_start = cfg.t_end_h - 4.0 * cfg.grid_step_h;
    ness.iter().map(|r| r.t_ness).rfind(|t| *t <= latest_start + 1e-9)
}

fn tail_report(series: &BoundSeries, curve: &GrowthCurve, ness: &[NessReport], cfg: &RunConfig) -> TailReport {
    let mut report = TailReport {
        kind: series.kind,
        fit: None,
        intercept_check: None,
        note: None,
    };
    let Some(start) = tail_start(ness, cfg) else {
        report.note = Some(format!("no growth transition early enough before {} h", cfg.t_end_h));
        return report;
    };
    match tail_linear_fit(series, start) {
        Ok(fit) => {
            report.fit = Some(fit);
            match intercept_consistency(curve, &fit) {
                Ok(check) => report.intercept_check = Some(check),
                Err(e) => report.note = Some(e.to_string()),
            }
        }
        Err(e) => report.note = Some(e.to_string()),
    }
    report
}

/// Fits, NESS detection, bounds and tail fits for one sample.
pub fn analyze_sample(series: &MorphologySeries, cfg: &RunConfig) -> Result<SampleOutcome> {
    let id = series.sample_id.as_str();
    let times = series.times();
    let areas = series.areas();
    let perimeters = series.perimeters();
    let mut warnings = Vec::new();

    let area_fit = fit_growth(&times, &areas)?;
    let perimeter_fit = fit_growth(&times, &perimeters)?;
    let area_curve = area_fit.growth_curve().expect("growth fit yields a curve");
    let perimeter_curve = perimeter_fit.growth_curve().expect("growth fit yields a curve");
    let mut fits = vec![
        TargetFit::new(id, Target::Area, &area_fit),
        TargetFit::new(id, Target::Perimeter, &perimeter_fit),
    ];

    let (ct, cv) = series.circularities();
    let phases = area_curve.phases().len();
    match fit_circularity(&ct, &cv, phases) {
        Ok(f) => fits.push(TargetFit::new(id, Target::Circularity, &f)),
        Err(e) => warnings.push(format!("circularity fit skipped: {e}")),
    }

    let ness_area = detect_ness(&area_curve, DEFAULT_GRID_STEP_H)?;
    let ness_perimeter = detect_ness(&perimeter_curve, DEFAULT_GRID_STEP_H)?;

    let window = cfg.f_window();
    let (f, f_source) = match f_avg(&times, &areas, &perimeter_curve, window) {
        Ok(f) => (f, FSource::Data),
        Err(e) => {
            warnings.push(format!("advancing fraction taken from the area fit: {e}"));
            (f_avg_fit(&times, &area_curve, &perimeter_curve, window)?, FSource::Fit)
        }
    };

    let grid = cfg.time_grid();
    let c = &cfg.constants;
    let fits_in = SampleFits {
        area: &area_curve,
        perimeter: &perimeter_curve,
        f_avg: f,
    };
    let mut bounds = BoundKind::FROM_FITS
        .iter()
        .map(|&kind| bound_series(kind, fits_in, &grid, c))
        .collect::<Result<Vec<_>>>()?;
    let in_window: Vec<usize> = (0..times.len()).filter(|&i| times[i] <= cfg.t_end_h + 1e-9).collect();
    let tw: Vec<f64> = in_window.iter().map(|&i| times[i]).collect();
    let aw: Vec<f64> = in_window.iter().map(|&i| areas[i]).collect();
    match ke_numeric_series(&tw, &aw, &perimeter_curve, cfg.analysis.ke_numeric_start_h, c) {
        Ok(s) => bounds.push(s),
        Err(e) => warnings.push(format!("numeric kinetic bound skipped: {e}")),
    }

    let tails = bounds
        .iter()
        .filter(|b| b.kind.has_linear_tail())
        .map(|b| match b.kind {
            BoundKind::Hydro => tail_report(b, &perimeter_curve, &ness_perimeter, cfg),
            _ => tail_report(b, &area_curve, &ness_area, cfg),
        })
        .collect();
    let ops_at_t_end = bounds
        .iter()
        .filter_map(|b| b.cumulative_ops.last().map(|v| (b.kind, *v)))
        .collect();
    let morphology = series
        .records
        .iter()
        .filter_map(|r| Some((r.time_h, r.circularity?, r.fractal_dim?)))
        .collect();
    let area_grid = grid.iter().map(|&t| area_curve.eval(t)).collect();

    for w in &warnings {
        log::warn!("{id}: {w}");
    }
    Ok(SampleOutcome {
        report: SampleReport {
            sample_id: id.to_string(),
            group: group_of(series, cfg),
            fits,
            area_curve,
            perimeter_curve,
            ness_area,
            ness_perimeter,
            f_avg: f,
            f_avg_source: f_source,
            t_end_h: cfg.t_end_h,
            ops_at_t_end,
            tails,
            warnings,
        },
        bounds,
        morphology,
        area_grid,
    })
}

fn geo_mean_series(agg: &GroupAggregate) -> BoundSeries {
    let n = agg.times.len();
    BoundSeries {
        kind: agg.kind,
        times: agg.times.clone(),
        cumulative_ops: agg.geo_mean.iter().map(|v| v.unwrap_or(0.0)).collect(),
        rate_ops_per_s: vec![f64::NAN; n],
        energy_j: vec![f64::NAN; n],
    }
}

fn mean_ness(members: &[&SampleOutcome]) -> Vec<f64> {
    let phases = members.iter().map(|m| m.report.ness_area.len()).min().unwrap_or(0);
    (0..phases)
        .map(|p| mean(&members.iter().map(|m| m.report.ness_area[p].t_ness).collect::<Vec<_>>()))
        .collect()
}

/// Mean circularity and dimension per time, over samples sharing a grid.
fn group_delta(members: &[&SampleOutcome]) -> Option<DeltaSeries> {
    let first = &members.first()?.morphology;
    let same = members.iter().all(|m| {
        m.morphology.len() == first.len() && m.morphology.iter().zip(first).all(|(a, b)| (a.0 - b.0).abs() < 1e-9)
    });
    if !same || first.len() < 3 {
        return None;
    }
    let times: Vec<f64> = first.iter().map(|r| r.0).collect();
    let avg = |pick: fn(&(f64, f64, f64)) -> f64| -> Vec<f64> {
        (0..times.len())
            .map(|i| mean(&members.iter().map(|m| pick(&m.morphology[i])).collect::<Vec<_>>()))
            .collect()
    };
    delta_from_values(&times, &avg(|r| r.1), &avg(|r| r.2)).ok()
}

fn group_report(group: &str, members: &[&SampleOutcome], cfg: &RunConfig) -> GroupReport {
    let kinds: Vec<BoundKind> = members[0].bounds.iter().map(|b| b.kind).collect();
    let mut bounds = Vec::new();
    for kind in kinds {
        let series: Option<Vec<BoundSeries>> = members
            .iter()
            .map(|m| m.bounds.iter().find(|b| b.kind == kind).cloned())
            .collect();
        let Some(series) = series else { continue };
        match aggregate_group(&series) {
            Ok(a) => bounds.push(a),
            Err(e) => log::warn!("group {group}: {kind} not aggregated ({e})"),
        }
    }

    // Representative curves for the group-level tail checks: the first
    // member's fits are good enough to classify the regime.
    let rep = &members[0].report;
    let tails = bounds
        .iter()
        .filter(|a| a.kind.has_linear_tail())
        .map(|a| {
            let s = geo_mean_series(a);
            match a.kind {
                BoundKind::Hydro => tail_report(&s, &rep.perimeter_curve, &rep.ness_perimeter, cfg),
                _ => tail_report(&s, &rep.area_curve, &rep.ness_area, cfg),
            }
        })
        .collect();

    GroupReport {
        group: group.to_string(),
        samples: members.iter().map(|m| m.report.sample_id.clone()).collect(),
        t_ness_area: mean_ness(members),
        bounds,
        tails,
        morphology_delta: group_delta(members),
    }
}

fn group_allometry(report: &GroupReport, members: &[&SampleOutcome], cfg: &RunConfig) -> Result<AllometryReport> {
    let chem = report
        .bounds
        .iter()
        .find(|b| b.kind == BoundKind::Chem)
        .ok_or_else(|| Error::InvalidInput("no chemical bound aggregate".into()))?;
    // Geometric mean of the fitted areas on the bound grid.
    let area: Vec<f64> = (0..chem.times.len())
        .map(|i| {
            let logs: Vec<f64> = members.iter().map(|m| m.area_grid[i].max(f64::MIN_POSITIVE).ln()).collect();
            mean(&logs).exp()
        })
        .collect();
    let mass = mass_series(&area, &cfg.constants);
    let mut r = allometric_fit(
        &geo_mean_series(chem),
        &mass,
        cfg.analysis.allometry_zones,
        report.t_ness_area.first().copied(),
    )?;
    r.group = Some(report.group.clone());
    Ok(r)
}

/// Runs the per-sample analysis in parallel, then the group summaries.
///
/// Samples that fail are logged and skipped; the call fails only when no
/// sample succeeds.
pub fn analyze(series: &[MorphologySeries], cfg: &RunConfig) -> Result<AnalysisOutput> {
    cfg.validate()?;
    if series.is_empty() {
        return Err(Error::InvalidInput("input holds no samples".into()));
    }
    let results: Vec<(String, Result<SampleOutcome>)> = series
        .par_iter()
        .map(|s| (s.sample_id.clone(), analyze_sample(s, cfg)))
        .collect();

    let mut samples = Vec::new();
    let mut failures = Vec::new();
    let mut first_error = None;
    for (id, r) in results {
        match r {
            Ok(o) => samples.push(o),
            Err(e) => {
                log::error!("sample {id} skipped: {e}");
                failures.push((id, e.to_string()));
                first_error.get_or_insert(e);
            }
        }
    }
    if samples.is_empty() {
        return Err(first_error.expect("at least one sample failed"));
    }

    let mut by_group: BTreeMap<String, Vec<&SampleOutcome>> = BTreeMap::new();
    for s in &samples {
        by_group.entry(s.report.group.clone()).or_default().push(s);
    }
    let mut groups = Vec::new();
    let mut allometry = Vec::new();
    for (name, members) in &by_group {
        let report = group_report(name, members, cfg);
        match group_allometry(&report, members, cfg) {
            Ok(a) => allometry.push(a),
            Err(e) => log::warn!("group {name}: allometry skipped ({e})"),
        }
        groups.push(report);
    }

    Ok(AnalysisOutput {
        samples,
        groups,
        allometry,
        failures,
    })
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_bounds_csv(path: &Path, samples: &[SampleOutcome]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut wtr = csv::Writer::from_writer(std::io::BufWriter::new(file));
    wtr.write_record(["sample_id", "kind", "time_h", "cum_ops", "rate_ops_s", "energy_J"])?;
    for s in samples {
        for b in &s.bounds {
            for i in 0..b.times.len() {
                wtr.write_record([
                    s.report.sample_id.clone(),
                    b.kind.to_string(),
                    b.times[i].to_string(),
                    format!("{:e}", b.cumulative_ops[i]),
                    format!("{:e}", b.rate_ops_per_s[i]),
                    format!("{:e}", b.energy_j[i]),
                ])?;
            }
        }
    }
    wtr.flush().map_err(|e| Error::io(path, e))
}

/// Writes `fits.json`, `samples/<id>.json`, `bounds.csv`,
/// `group_aggregates.json`, `allometry.json` and, if enabled, `plots/`.
pub fn write_outputs(out: &AnalysisOutput, dir: &Path, plots: bool) -> Result<()> {
    let sample_dir = dir.join("samples");
    std::fs::create_dir_all(&sample_dir).map_err(|e| Error::io(&sample_dir, e))?;
    let fits: Vec<&TargetFit> = out.samples.iter().flat_map(|s| &s.report.fits).collect();
    write_json(&dir.join("fits.json"), &fits)?;
    for s in &out.samples {
        write_json(&sample_dir.join(format!("{}.json", s.report.sample_id)), &s.report)?;
    }
    write_bounds_csv(&dir.join("bounds.csv"), &out.samples)?;
    write_json(&dir.join("group_aggregates.json"), &out.groups)?;
    write_json(&dir.join("allometry.json"), &out.allometry)?;
    if !out.failures.is_empty() {
        let path = dir.join("failures.txt");
        let mut f = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        for (id, msg) in &out.failures {
            writeln!(f, "{id}: {msg}").map_err(|e| Error::io(&path, e))?;
        }
    }
    if plots {
        let plot_dir = dir.join("plots");
        std::fs::create_dir_all(&plot_dir).map_err(|e| Error::io(&plot_dir, e))?;
        for g in &out.groups {
            let path = plot_dir.join(format!("{}_bounds.svg", g.group));
            std::fs::write(&path, svg::bounds_plot(g)).map_err(|e| Error::io(&path, e))?;
        }
        for a in &out.allometry {
            let name = a.group.as_deref().unwrap_or(UNGROUPED);
            let path = plot_dir.join(format!("{name}_allometry.svg"));
            std::fs::write(&path, svg::allometry_plot(a)).map_err(|e| Error::io(&path, e))?;
        }
    }
    Ok(())
}
