//! Non-equilibrium steady state (NESS) detection and late-time tail analysis.
//!
//! The organism is taken to be in its steady state once the fitted growth
//! rate has fallen to 15% of its peak and stays there. For a single logistic
//! phase this happens at `(t − γ)β = ln((1+√0.85)/(1−√0.85)) ≈ 3.2038`,
//! independent of the amplitude.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::bounds::BoundSeries;
use crate::error::{Error, Result};
use crate::growthfit::{GrowthCurve, SigmoidParams};
use crate::stats::ols;

/// Fraction of the peak growth rate that marks the steady state.
pub const RATE_FRACTION: f64 = 0.15;

pub const DEFAULT_GRID_STEP_H: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NessReport {
    /// Zero-based growth phase this transition belongs to.
    pub phase: usize,
    pub t_ness: f64,
    pub threshold: f64,
    pub max_rate: f64,
    pub t_max_rate: f64,
    pub rate_at_cutoff: f64,
    pub second_deriv_at_cutoff: f64,
    pub area_fraction_at_cutoff: f64,
}

/// Locates the steady-state transition(s) of a fitted area curve.
///
/// One report is returned per growth phase that has a resolvable rate peak;
/// each phase is judged against its own peak rate and only up to the rate
/// minimum that separates it from the next phase. Phases whose rate never
/// drops to the threshold before the next phase takes over are skipped with a
/// warning.
pub fn detect_ness(curve: &GrowthCurve, grid_step: f64) -> Result<Vec<NessReport>> {
    if !(grid_step > 0.0 && grid_step.is_finite()) {
        return Err(Error::InvalidInput(format!("grid step must be positive, got {grid_step}")));
    }
    let phases = curve.phases();
    if phases.iter().any(|p| !p.is_valid()) {
        return Err(Error::InvalidInput(format!("invalid growth parameters {phases:?}")));
    }
    let lo = phases
        .iter()
        .map(|p| p.inflection - 20.0 / p.rate)
        .fold(f64::INFINITY, f64::min);
    let hi = phases
        .iter()
        .map(|p| p.inflection + 40.0 / p.rate)
        .fold(f64::NEG_INFINITY, f64::max);
    let n = ((hi - lo) / grid_step).ceil() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| lo + i as f64 * grid_step).collect();
    let rate: Vec<f64> = grid.iter().map(|&t| curve.derivative(t)).collect();
    let global_max = rate.iter().copied().fold(0.0_f64, f64::max);

    let peaks: Vec<usize> = (1..n)
        .filter(|&i| rate[i] > rate[i - 1] && rate[i] >= rate[i + 1] && rate[i] >= 1e-3 * global_max)
        .collect();

    let total = curve.total_amplitude();
    let mut reports = Vec::new();
    for (phase, &peak) in peaks.iter().enumerate() {
        let region_end = match peaks.get(phase + 1) {
            Some(&next) => (peak..=next)
                .min_by(|&a, &b| rate[a].total_cmp(&rate[b]))
                .expect("non-empty range"),
            None => n,
        };
        let t_max_rate = refine_peak(curve, grid[peak] - grid_step, grid[peak] + grid_step);
        let max_rate = curve.derivative(t_max_rate).max(rate[peak]);
        let threshold = RATE_FRACTION * max_rate;

        // Last grid point in the region still above threshold; the crossing
        // is just after it.
        let Some(last_above) = (peak..=region_end).rev().find(|&i| rate[i] > threshold) else {
            continue;
        };
        if last_above >= region_end {
            warn!(
                "growth phase {} never slows below 15% of its peak rate before the next phase; no NESS reported for it",
                phase + 1
            );
            continue;
        }
        let t_ness = bisect(
            |t| curve.derivative(t) - threshold,
            grid[last_above],
            grid[last_above + 1],
        );
        reports.push(NessReport {
            phase,
            t_ness,
            threshold,
            max_rate,
            t_max_rate,
            rate_at_cutoff: curve.derivative(t_ness),
            second_deriv_at_cutoff: curve.second_derivative(t_ness),
            area_fraction_at_cutoff: curve.eval(t_ness) / total,
        });
    }
    Ok(reports)
}

/// Root of the second derivative inside a bracket around a grid maximum.
fn refine_peak(curve: &GrowthCurve, a: f64, b: f64) -> f64 {
    let fa = curve.second_derivative(a);
    let fb = curve.second_derivative(b);
    if fa > 0.0 && fb < 0.0 {
        bisect(|t| curve.second_derivative(t), a, b)
    } else {
        0.5 * (a + b)
    }
}

/// Bisection for `f(a) > 0 ≥ f(b)`; returns the end of the final bracket on
/// the non-positive side.
fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b || b - a < 1e-12 {
            break;
        }
        if f(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    b
}

/// Straight-line fit to the late part of a cumulative bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearTailFit {
    /// Operations per hour.
    pub slope: f64,
    pub intercept: f64,
    /// Hour at which the fitted line crosses zero.
    pub x_intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
}

pub fn tail_linear_fit(bound: &BoundSeries, window_start: f64) -> Result<LinearTailFit> {
    tail_linear_fit_xy(&bound.times, &bound.cumulative_ops, window_start)
}

/// OLS line through the points with `t ≥ window_start`.
pub fn tail_linear_fit_xy(times: &[f64], values: &[f64], window_start: f64) -> Result<LinearTailFit> {
    let (t, v): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(values)
        .filter(|(&t, _)| t >= window_start)
        .map(|(&t, &v)| (t, v))
        .unzip();
    if t.len() < 5 {
        return Err(Error::InvalidInput(format!(
            "tail window from {window_start} h holds {} points; at least 5 needed",
            t.len()
        )));
    }
    let fit = ols(&t, &v).ok_or_else(|| Error::Degenerate("tail window has a single time".into()))?;
    let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let span = t[t.len() - 1] - t[0];
    if !(fit.slope * span > 1e-12 * scale) || fit.slope <= 0.0 {
        return Err(Error::Degenerate("bound tail is flat; no linear regime".into()));
    }
    Ok(LinearTailFit {
        slope: fit.slope,
        intercept: fit.intercept,
        x_intercept: -fit.intercept / fit.slope,
        r_squared: fit.r_squared,
        window: (t[0], t[t.len() - 1]),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailRegime {
    SinglePhase,
    BetweenPhases,
    BeyondAll,
    /// Expected value supplied by the caller.
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterceptCheck {
    pub regime: TailRegime,
    pub expected: f64,
    pub observed: f64,
    pub relative_error: f64,
    pub pass: bool,
}

/// Relative tolerance for an x-intercept to count as consistent.
pub const INTERCEPT_TOLERANCE: f64 = 0.02;

/// Compares a tail intercept with the inflection time it should reproduce.
///
/// A phase counts as finished once the window starts three time constants
/// (`3/β`) past its inflection, and as not yet begun if the window ends three
/// time constants before it. Windows beyond every phase should intercept at
/// the amplitude-weighted mean inflection; windows between two phases at the
/// first inflection.
pub fn intercept_consistency(curve: &GrowthCurve, tail: &LinearTailFit) -> Result<InterceptCheck> {
    if !(tail.slope > 0.0) {
        return Err(Error::Degenerate("flat tail; regime undetermined".into()));
    }
    let mut phases: Vec<SigmoidParams> = curve.phases();
    phases.sort_by(|a, b| a.inflection.total_cmp(&b.inflection));
    let (start, end) = tail.window;
    let finished = |p: &SigmoidParams| start >= p.inflection + 3.0 / p.rate;
    let not_begun = |p: &SigmoidParams| end <= p.inflection - 3.0 / p.rate;

    let (regime, expected) = if phases.iter().all(finished) {
        if phases.len() == 1 {
            (TailRegime::SinglePhase, phases[0].inflection)
        } else {
            let total: f64 = phases.iter().map(|p| p.amplitude).sum();
            let weighted: f64 = phases.iter().map(|p| p.amplitude * p.inflection).sum();
            (TailRegime::BeyondAll, weighted / total)
        }
    } else if phases.len() > 1 && finished(&phases[0]) && phases[1..].iter().all(not_begun) {
        (TailRegime::BetweenPhases, phases[0].inflection)
    } else {
        return Err(Error::Degenerate(format!(
            "tail window [{start}, {end}] h overlaps an active growth phase; regime undetermined"
        )));
    };
    let mut check = check_intercept(tail, expected);
    check.regime = regime;
    Ok(check)
}

/// Compares a tail intercept with an arbitrary expected time.
pub fn check_intercept(tail: &LinearTailFit, expected: f64) -> InterceptCheck {
    let observed = tail.x_intercept;
    let relative_error = if expected != 0.0 {
        ((observed - expected) / expected).abs()
    } else {
        observed.abs()
    };
    InterceptCheck {
        regime: TailRegime::Custom,
        expected,
        observed,
        relative_error,
        pass: relative_error < INTERCEPT_TOLERANCE,
    }
}
