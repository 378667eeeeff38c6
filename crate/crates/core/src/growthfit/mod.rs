//! Logistic and two-phase logistic growth models and their least-squares
//! fits.
//!
//! Area and perimeter are fitted with `Σ αᵢ σ(βᵢ(t − γᵢ))` for one or two
//! phases. Circularity decays from one, so it is fitted as
//! `1 − Σ φᵢ σ(κᵢ(t − ξᵢ))`, which is the same model applied to `1 − C`.
//! Positive parameters are optimised on a log scale so that the optimizer
//! cannot leave the admissible region.

mod curve;
pub mod lm;

pub use curve::{logistic, softplus, BiSigmoidParams, GrowthCurve, SigmoidParams};

use log::debug;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use lm::{LmOutcome, LmSettings};

pub const MIN_POINTS_SINGLE: usize = 5;
pub const MIN_POINTS_DOUBLE: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Sigmoid,
    BiSigmoid,
    Circ1,
    Circ2,
}

/// One decaying phase of the circularity model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayPhase {
    pub drop: f64,
    pub rate: f64,
    pub midpoint: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircFitParams {
    pub phases: Vec<DecayPhase>,
}

impl CircFitParams {
    pub fn eval(&self, t: f64) -> f64 {
        1.0 - self
            .phases
            .iter()
            .map(|p| p.drop * logistic(p.rate * (t - p.midpoint)))
            .sum::<f64>()
    }

    pub fn total_drop(&self) -> f64 {
        self.phases.iter().map(|p| p.drop).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FitParams {
    Sigmoid(SigmoidParams),
    BiSigmoid(BiSigmoidParams),
    Circularity(CircFitParams),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitResult {
    pub model: ModelKind,
    pub params: FitParams,
    pub r_squared: f64,
    pub rmse: f64,
    /// Observed minus fitted, in the units of the target.
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

impl FitResult {
    /// The growth curve for area/perimeter fits; `None` for circularity.
    pub fn growth_curve(&self) -> Option<GrowthCurve> {
        match &self.params {
            FitParams::Sigmoid(p) => Some(GrowthCurve::Sigmoid(*p)),
            FitParams::BiSigmoid(p) => Some(GrowthCurve::BiSigmoid(*p)),
            FitParams::Circularity(_) => None,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.params {
            FitParams::Sigmoid(p) => p.eval(t),
            FitParams::BiSigmoid(p) => GrowthCurve::BiSigmoid(*p).eval(t),
            FitParams::Circularity(c) => c.eval(t),
        }
    }
}

/// Fits a single logistic curve.
pub fn fit_sigmoid(t: &[f64], y: &[f64]) -> Result<FitResult> {
    check_series(t, y, MIN_POINTS_SINGLE)?;
    let (phases, outcome) = fit_logistic_sum(t, y, &single_starts(t, y))?;
    let p = phases[0];
    Ok(finish(t, y, ModelKind::Sigmoid, FitParams::Sigmoid(p), &outcome, |x| p.eval(x)))
}

/// Fits a sum of two logistic phases; the output is ordered by inflection.
pub fn fit_bisigmoid(t: &[f64], y: &[f64]) -> Result<FitResult> {
    check_series(t, y, MIN_POINTS_DOUBLE)?;
    let (phases, outcome) = fit_logistic_sum(t, y, &double_starts(t, y))?;
    let bi = BiSigmoidParams::ordered(phases[0], phases[1]);
    let curve = GrowthCurve::BiSigmoid(bi);
    Ok(finish(t, y, ModelKind::BiSigmoid, FitParams::BiSigmoid(bi), &outcome, |x| curve.eval(x)))
}

/// Fits the decaying circularity model with one or two phases.
pub fn fit_circularity(t: &[f64], c: &[f64], phases: usize) -> Result<FitResult> {
    if !(1..=2).contains(&phases) {
        return Err(Error::InvalidInput(format!("circularity model needs 1 or 2 phases, got {phases}")));
    }
    if let Some(bad) = c.iter().find(|&&v| !(v > 0.0 && v <= 1.05)) {
        return Err(Error::InvalidInput(format!("circularity {bad} outside (0, 1.05]")));
    }
    let min_points = if phases == 1 { MIN_POINTS_SINGLE } else { MIN_POINTS_DOUBLE };
    check_series(t, c, min_points)?;
    let z: Vec<f64> = c.iter().map(|v| 1.0 - v).collect();
    let starts = if phases == 1 { single_starts(t, &z) } else { double_starts(t, &z) };
    let (mut fitted, outcome) = fit_logistic_sum(t, &z, &starts)?;
    fitted.sort_by(|a, b| a.inflection.total_cmp(&b.inflection));
    let params = CircFitParams {
        phases: fitted
            .iter()
            .map(|p| DecayPhase {
                drop: p.amplitude,
                rate: p.rate,
                midpoint: p.inflection,
            })
            .collect(),
    };
    let model = if phases == 1 { ModelKind::Circ1 } else { ModelKind::Circ2 };
    let eval = params.clone();
    Ok(finish(t, c, model, FitParams::Circularity(params), &outcome, |x| eval.eval(x)))
}

/// Chooses between the one- and two-phase fits of the same series.
///
/// The two-phase model wins only if it lowers the RMSE by more than 10% and
/// neither phase carries less than 5% of the total amplitude. A single
/// sigmoid whose RMSE is already at round-off level is never replaced.
pub fn select_model(sigmoid: &FitResult, bisigmoid: Option<&FitResult>) -> ModelKind {
    let Some(bi) = bisigmoid else {
        return ModelKind::Sigmoid;
    };
    let FitParams::BiSigmoid(bp) = &bi.params else {
        return ModelKind::Sigmoid;
    };
    let total = bp.phase1.amplitude + bp.phase2.amplitude;
    let scale = total.abs().max(f64::MIN_POSITIVE);
    if sigmoid.rmse <= 1e-9 * scale {
        return ModelKind::Sigmoid;
    }
    let improves = bi.rmse < 0.9 * sigmoid.rmse;
    let both_present = bp.phase1.amplitude >= 0.05 * total && bp.phase2.amplitude >= 0.05 * total;
    if improves && both_present {
        ModelKind::BiSigmoid
    } else {
        ModelKind::Sigmoid
    }
}

/// Fits both growth models and returns the one [`select_model`] prefers.
pub fn fit_growth(t: &[f64], y: &[f64]) -> Result<FitResult> {
    let single = fit_sigmoid(t, y)?;
    let double = if t.len() >= MIN_POINTS_DOUBLE {
        match fit_bisigmoid(t, y) {
            Ok(f) => Some(f),
            Err(e) => {
                debug!("two-phase fit failed, keeping single sigmoid: {e}");
                None
            }
        }
    } else {
        None
    };
    Ok(match select_model(&single, double.as_ref()) {
        ModelKind::BiSigmoid => double.expect("selected fit exists"),
        _ => single,
    })
}

fn check_series(t: &[f64], y: &[f64], min_points: usize) -> Result<()> {
    if t.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "time and value lengths differ ({} vs {})",
            t.len(),
            y.len()
        )));
    }
    if t.len() < min_points {
        return Err(Error::InvalidInput(format!(
            "need at least {min_points} points, got {}",
            t.len()
        )));
    }
    if t.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite value in series".into()));
    }
    if t.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("times must be strictly increasing".into()));
    }
    let lo = y.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= 1e-12 * hi.abs().max(lo.abs()).max(1e-300) {
        return Err(Error::Degenerate("series is constant".into()));
    }
    Ok(())
}

fn finish<F: Fn(f64) -> f64>(
    t: &[f64],
    y: &[f64],
    model: ModelKind,
    params: FitParams,
    outcome: &LmOutcome,
    f: F,
) -> FitResult {
    let residuals: Vec<f64> = t.iter().zip(y).map(|(&ti, &yi)| yi - f(ti)).collect();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    FitResult {
        model,
        params,
        r_squared: 1.0 - ss_res / ss_tot,
        rmse: (ss_res / y.len() as f64).sqrt(),
        residuals,
        iterations: outcome.iterations,
    }
}

/// Least squares for `Σ αᵢ σ(βᵢ(t − γᵢ))` from several starting points,
/// returning the lowest-cost converged solution.
fn fit_logistic_sum(
    t: &[f64],
    y: &[f64],
    starts: &[Vec<SigmoidParams>],
) -> Result<(Vec<SigmoidParams>, LmOutcome)> {
    let sum_sq: f64 = y.iter().map(|v| v * v).sum();
    let settings = LmSettings {
        cost_floor: 1e-26 * sum_sq,
        ..LmSettings::default()
    };
    let mut best: Option<LmOutcome> = None;
    let mut best_failure: Option<Error> = None;
    for start in starts {
        let x0: Vec<f64> = start
            .iter()
            .flat_map(|p| [p.amplitude.ln(), p.rate.ln(), p.inflection])
            .collect();
        if x0.iter().any(|v| !v.is_finite()) {
            continue;
        }
        match lm::minimize(|x, r, j| logistic_sum_residuals(t, y, x, r, j), &x0, t.len(), settings) {
            Ok(out) => {
                if best.as_ref().is_none_or(|b| out.cost < b.cost) {
                    best = Some(out);
                }
            }
            Err(e @ Error::NonConvergence { .. }) => {
                let cost = |e: &Error| match e {
                    Error::NonConvergence { best_cost, .. } => *best_cost,
                    _ => f64::INFINITY,
                };
                if best_failure.as_ref().is_none_or(|b| cost(&e) < cost(b)) {
                    best_failure = Some(e);
                }
            }
            Err(e) => debug!("start {start:?} rejected: {e}"),
        }
    }
    match best {
        Some(out) => {
            let phases = out
                .params
                .chunks(3)
                .map(|c| SigmoidParams::new(c[0].exp(), c[1].exp(), c[2]))
                .collect();
            Ok((phases, out))
        }
        None => Err(best_failure
            .unwrap_or_else(|| Error::Degenerate("no usable starting point for the fit".into()))),
    }
}

fn logistic_sum_residuals(t: &[f64], y: &[f64], x: &[f64], r: &mut DVector<f64>, j: &mut DMatrix<f64>) {
    for (i, (&ti, &yi)) in t.iter().zip(y).enumerate() {
        let mut model = 0.0;
        for (k, c) in x.chunks(3).enumerate() {
            let (a, b, g) = (c[0].exp(), c[1].exp(), c[2]);
            let s = logistic(b * (ti - g));
            let ds = s * (1.0 - s);
            model += a * s;
            j[(i, 3 * k)] = a * s;
            j[(i, 3 * k + 1)] = a * ds * b * (ti - g);
            j[(i, 3 * k + 2)] = -a * ds * b;
        }
        r[i] = model - yi;
    }
}

/// Heuristic starting point for one logistic phase.
fn initial_guess(t: &[f64], y: &[f64]) -> SigmoidParams {
    let amplitude = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let inflection = t
        .iter()
        .zip(y)
        .find(|(_, &v)| v >= 0.5 * amplitude)
        .map(|(&ti, _)| ti)
        .unwrap_or(t[t.len() / 2]);
    let max_slope = t
        .windows(2)
        .zip(y.windows(2))
        .map(|(tw, yw)| (yw[1] - yw[0]) / (tw[1] - tw[0]))
        .fold(0.0_f64, f64::max);
    let span = t[t.len() - 1] - t[0];
    let mut rate = 4.0 * max_slope / amplitude;
    if !(rate.is_finite() && rate > 0.0) {
        rate = 4.0 / span;
    }
    SigmoidParams::new(amplitude, rate, inflection)
}

fn single_starts(t: &[f64], y: &[f64]) -> Vec<Vec<SigmoidParams>> {
    let base = initial_guess(t, y);
    let t_last = t[t.len() - 1];
    // The second start covers series that are still rising at the end.
    let late = SigmoidParams::new(2.0 * base.amplitude, base.rate, t_last.max(base.inflection));
    vec![vec![base], vec![late]]
}

/// Starting points for the two-phase model, one per candidate split index.
fn double_starts(t: &[f64], y: &[f64]) -> Vec<Vec<SigmoidParams>> {
    let n = t.len();
    let mut splits = Vec::new();
    if let Some(s) = plateau_split(t, y) {
        splits.push(s);
    }
    splits.extend([n / 3, n / 2, 2 * n / 3]);
    splits.retain(|&s| s >= 3 && n - s >= 3);
    splits.dedup();

    let range = y.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - y.iter().copied().fold(f64::INFINITY, f64::min);
    let mut starts = Vec::new();
    for s in splits {
        let p1 = initial_guess(&t[..s], &y[..s]);
        if !p1.is_valid() {
            continue;
        }
        let rest: Vec<f64> = y[s..].iter().map(|v| v - p1.amplitude).collect();
        let mut p2 = initial_guess(&t[s..], &rest);
        if !p2.is_valid() {
            p2 = SigmoidParams::new(0.05 * range, p1.rate, t[(s + n) / 2]);
        }
        starts.push(vec![p1, p2]);
    }
    starts
}

/// Index at the centre of the longest interior run where the smoothed
/// derivative stays below 15% of its maximum.
fn plateau_split(t: &[f64], y: &[f64]) -> Option<usize> {
    let raw: Vec<f64> = t
        .windows(2)
        .zip(y.windows(2))
        .map(|(tw, yw)| (yw[1] - yw[0]) / (tw[1] - tw[0]))
        .collect();
    let m = raw.len();
    let smooth: Vec<f64> = (0..m)
        .map(|i| {
            let lo = i.saturating_sub(1);
            let hi = (i + 1).min(m - 1);
            raw[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect();
    let peak = smooth.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(peak > 0.0) {
        return None;
    }
    let low: Vec<bool> = smooth.iter().map(|&d| d <= 0.15 * peak).collect();
    let mut best: Option<(usize, usize)> = None;
    let mut i = 0;
    while i < m {
        if low[i] {
            let start = i;
            while i < m && low[i] {
                i += 1;
            }
            let interior = start > 0 && i < m;
            let len = i - start;
            if interior && best.is_none_or(|(_, l)| len > l) {
                best = Some((start, len));
            }
        } else {
            i += 1;
        }
    }
    best.map(|(start, len)| start + len / 2 + 1)
}
