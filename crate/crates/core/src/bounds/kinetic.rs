//! Kinetic-energy bound of the advancing front.
//!
//! The front mass is `ρ_m f A ℓ` and its speed the perimeter growth rate, so
//! the operation count is
//!
//! ```text
//! N_KE(t) = ρ_m f ℓ / (2πħ) ∫₀ᵗ A(t′) Ṗ(t′)² dt′.
//! ```
//!
//! For single-phase fits the substitution `z = 1 + e^{-η(t−θ)}` turns the
//! integral into `αηδ² [T_{a,b}(z₀) − T_{a,b}(z_t)]` with `a = β/η`,
//! `b = e^{β(γ−θ)}`, and
//! `T′(z) = (z − 1) / ((1 + b(z − 1)^a) z⁴)`. Only differences of `T` are
//! needed, so it is integrated between the two physical limits and never
//! from its singular formal origin.

use log::warn;
use serde::{Deserialize, Serialize};

use super::PhysicalConstants;
use crate::error::{Error, Result};
use crate::growthfit::{logistic, BiSigmoidParams, GrowthCurve, SigmoidParams};
use crate::quadrature::{cumulative_trapezoid, integrate_with_breaks, trapezoid, Tolerance};
use crate::units::{cm2_to_m2, cm_to_m, hours_to_seconds, per_hour_to_per_second};

/// Beyond this `z` the remaining `T` mass is below 1e-24 and is dropped.
const Z_CAP: f64 = 1e12;

const T_TOLERANCE: Tolerance = Tolerance { abs: 1e-30, rel: 1e-11 };

/// Substitution parameters of the single-phase closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeClosedFormParams {
    /// `β/η`.
    pub a: f64,
    /// `e^{β(γ−θ)}`; may be `inf` for extreme fits, see `ln_b`.
    pub b: f64,
    pub ln_b: f64,
    pub f_avg: f64,
}

impl KeClosedFormParams {
    pub fn from_fits(area: &SigmoidParams, perimeter: &SigmoidParams, f_avg: f64) -> Self {
        let ln_b = area.rate * (area.inflection - perimeter.inflection);
        Self {
            a: area.rate / perimeter.rate,
            b: ln_b.exp(),
            ln_b,
            f_avg,
        }
    }
}

/// `T_{a,b}(z_hi) − T_{a,b}(z_lo)` for `1 ≤ z_lo ≤ z_hi`.
pub fn t_ab_difference(a: f64, b: f64, z_lo: f64, z_hi: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::InvalidInput(format!("b must be positive, got {b}")));
    }
    t_ab_difference_ln(a, b.ln(), z_lo, z_hi)
}

fn t_ab_difference_ln(a: f64, ln_b: f64, z_lo: f64, z_hi: f64) -> Result<f64> {
    if !(a > 0.0) || !ln_b.is_finite() {
        return Err(Error::InvalidInput(format!("invalid T parameters a={a}, ln b={ln_b}")));
    }
    if !(z_lo >= 1.0 && z_hi >= z_lo) {
        return Err(Error::InvalidInput(format!("T limits must satisfy 1 ≤ {z_lo} ≤ {z_hi}")));
    }
    let z_hi = z_hi.min(Z_CAP);
    if z_hi <= z_lo {
        return Ok(0.0);
    }
    // 1/(1 + b(z−1)^a) written as a logistic to survive huge b or z.
    let integrand = |z: f64| {
        let u = z - 1.0;
        if u <= 0.0 {
            return 0.0;
        }
        let damp = logistic(-(ln_b + a * u.ln()));
        u / z.powi(4) * damp
    };
    // The integrand changes fastest near z = 1, so seed the partition with
    // decade breakpoints in z − 1.
    let mut breaks = vec![z_lo];
    let lo_exp = (z_lo - 1.0).max(1e-300).log10().ceil().max(-30.0) as i32;
    let hi_exp = (z_hi - 1.0).log10().floor() as i32;
    for k in lo_exp..=hi_exp {
        let zb = 1.0 + 10f64.powi(k);
        if zb > z_lo && zb < z_hi {
            breaks.push(zb);
        }
    }
    breaks.push(z_hi);
    Ok(integrate_with_breaks(integrand, &breaks, T_TOLERANCE)?.value)
}

/// `ρ_m f ℓ / (2πħ)` in SI units; multiplies `∫ A Ṗ² dt` in m²·(m/s)²·s.
fn ke_prefactor(f: f64, c: &PhysicalConstants) -> f64 {
    c.rho_m_si() * f * cm_to_m(c.thickness_l) / (2.0 * c.pi_hbar())
}

/// Instantaneous kinetic-energy rate (ops/s) for area in cm² and front speed
/// in cm/h.
pub fn ke_rate(area_cm2: f64, speed_cm_per_h: f64, f: f64, c: &PhysicalConstants) -> f64 {
    let v = per_hour_to_per_second(cm_to_m(speed_cm_per_h));
    ke_prefactor(f, c) * cm2_to_m2(area_cm2) * v * v
}

/// Closed-form kinetic bound from time zero to `t` for single-phase fits.
pub fn ke_bound_closed(
    area: &SigmoidParams,
    perimeter: &SigmoidParams,
    f_avg: f64,
    t_hours: f64,
    c: &PhysicalConstants,
) -> Result<f64> {
    if t_hours <= 0.0 {
        return Ok(0.0);
    }
    let p = KeClosedFormParams::from_fits(area, perimeter, f_avg);
    let eta = perimeter.rate;
    let theta = perimeter.inflection;
    let z0 = 1.0 + (eta * theta).exp();
    let zt = 1.0 + (-eta * (t_hours - theta)).exp();
    let diff = t_ab_difference_ln(p.a, p.ln_b, zt, z0)?;
    let eta_si = per_hour_to_per_second(eta);
    let delta_m = cm_to_m(perimeter.amplitude);
    Ok(ke_prefactor(f_avg, c) * cm2_to_m2(area.amplitude) * eta_si * delta_m * delta_m * diff)
}

/// Kinetic bound by adaptive quadrature in the time domain; works for any
/// number of phases.
pub fn ke_bound_quadrature(
    area: &GrowthCurve,
    perimeter: &GrowthCurve,
    f_avg: f64,
    t_hours: f64,
    c: &PhysicalConstants,
) -> Result<f64> {
    if t_hours <= 0.0 {
        return Ok(0.0);
    }
    let mut breaks = vec![0.0, t_hours];
    for p in perimeter.phases().iter().chain(area.phases().iter()) {
        for k in [-6.0, -2.0, 0.0, 2.0, 6.0] {
            let tb = p.inflection + k / p.rate;
            if tb > 0.0 && tb < t_hours {
                breaks.push(tb);
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let integrand = |t: f64| {
        let v = perimeter.derivative(t);
        area.eval(t) * v * v
    };
    // ∫ A Ṗ² dt in cm²·(cm/h)²·h; convert to m²·(m/s)²·s.
    let raw = integrate_with_breaks(integrand, &breaks, Tolerance { abs: 1e-300, rel: 1e-11 })?.value;
    let si = cm2_to_m2(1.0) * cm_to_m(1.0).powi(2) * hours_to_seconds(1.0) / hours_to_seconds(1.0).powi(2);
    Ok(ke_prefactor(f_avg, c) * raw * si)
}

pub fn ke_bound_bisigmoid(
    area: &BiSigmoidParams,
    perimeter: &BiSigmoidParams,
    f_avg: f64,
    t_hours: f64,
    c: &PhysicalConstants,
) -> Result<f64> {
    ke_bound_quadrature(&GrowthCurve::BiSigmoid(*area), &GrowthCurve::BiSigmoid(*perimeter), f_avg, t_hours, c)
}

/// Dispatches to the closed form when both fits are single-phase.
pub fn ke_bound(
    area: &GrowthCurve,
    perimeter: &GrowthCurve,
    f_avg: f64,
    t_hours: f64,
    c: &PhysicalConstants,
) -> Result<f64> {
    match (area, perimeter) {
        (GrowthCurve::Sigmoid(a), GrowthCurve::Sigmoid(p)) => ke_bound_closed(a, p, f_avg, t_hours, c),
        _ => ke_bound_quadrature(area, perimeter, f_avg, t_hours, c),
    }
}

/// Advancing fraction `f(tᵢ) = (A(tᵢ) − A(tᵢ₋₁)) / A(tᵢ)` for `i ≥ 1`.
pub fn advancing_fraction(area: &[f64]) -> Vec<f64> {
    area.windows(2)
        .map(|w| if w[1] > 0.0 { (w[1] - w[0]) / w[1] } else { 0.0 })
        .collect()
}

/// Time window for averaging `f`; the first sample has no `ΔA`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FWindow {
    pub start_h: f64,
    pub end_h: f64,
}

impl Default for FWindow {
    fn default() -> Self {
        Self {
            start_h: 0.5,
            end_h: 24.0,
        }
    }
}

fn weighted_average(t: &[f64], f: &[f64], w: &[f64]) -> Result<f64> {
    if t.len() < 2 {
        return Err(Error::InvalidInput("f_avg window holds fewer than two samples".into()));
    }
    let num: Vec<f64> = f.iter().zip(w).map(|(a, b)| a * b).collect();
    let den = trapezoid(t, w);
    if !(den > 0.0) {
        return Err(Error::Degenerate("f_avg weight integral is zero (flat perimeter)".into()));
    }
    Ok(trapezoid(t, &num) / den)
}

/// Collects `(t, f, A)` for samples inside the window.
fn windowed(times: &[f64], area: &[f64], window: FWindow) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    if times.len() != area.len() {
        return Err(Error::InvalidInput("time and area lengths differ".into()));
    }
    let f = advancing_fraction(area);
    let mut out = (Vec::new(), Vec::new(), Vec::new());
    for i in 1..times.len() {
        let t = times[i];
        if t < window.start_h - 1e-9 || t > window.end_h + 1e-9 {
            continue;
        }
        if !(area[i] > 0.0) {
            return Err(Error::InvalidInput(format!("area must be positive inside the f_avg window (t = {t} h)")));
        }
        out.0.push(t);
        out.1.push(f[i - 1]);
        out.2.push(area[i]);
    }
    Ok(out)
}

/// Kinetically weighted mean of `f`: `f` and `A` from the data, `Ṗ` from the
/// perimeter fit.
pub fn f_avg(times: &[f64], area: &[f64], perimeter_fit: &GrowthCurve, window: FWindow) -> Result<f64> {
    let (t, f, a) = windowed(times, area, window)?;
    let w: Vec<f64> = t
        .iter()
        .zip(&a)
        .map(|(&ti, &ai)| ai * perimeter_fit.derivative(ti).powi(2))
        .collect();
    weighted_average(&t, &f, &w)
}

/// As [`f_avg`] with area and perimeter both taken from their fits.
pub fn f_avg_fit(times: &[f64], area_fit: &GrowthCurve, perimeter_fit: &GrowthCurve, window: FWindow) -> Result<f64> {
    let area: Vec<f64> = times.iter().map(|&t| area_fit.eval(t)).collect();
    f_avg(times, &area, perimeter_fit, window)
}

/// As [`f_avg`] with `Ṗ` from central differences of perimeter data.
pub fn f_avg_data(times: &[f64], area: &[f64], perimeter: &[f64], window: FWindow) -> Result<f64> {
    if perimeter.len() != times.len() {
        return Err(Error::InvalidInput("time and perimeter lengths differ".into()));
    }
    let speed = finite_difference(times, perimeter);
    let (t, f, a) = windowed(times, area, window)?;
    let w: Vec<f64> = t
        .iter()
        .zip(&a)
        .map(|(&ti, &ai)| {
            let i = times.iter().position(|&x| x == ti).expect("window time comes from grid");
            ai * speed[i] * speed[i]
        })
        .collect();
    weighted_average(&t, &f, &w)
}

fn finite_difference(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len();
    (0..n)
        .map(|i| {
            let (lo, hi) = (i.saturating_sub(1), (i + 1).min(n - 1));
            if hi == lo {
                0.0
            } else {
                (y[hi] - y[lo]) / (t[hi] - t[lo])
            }
        })
        .collect()
}

/// Cumulative `ρ_m ℓ/(2πħ) ∫ f A Ṗ² dt` by the trapezoid rule on the given
/// samples, starting from zero at `times[0]`.
pub fn ke_cumulative_trapezoid(
    times: &[f64],
    f: &[f64],
    area: &[f64],
    perimeter_fit: &GrowthCurve,
    c: &PhysicalConstants,
) -> Vec<f64> {
    let integrand: Vec<f64> = times
        .iter()
        .zip(f)
        .zip(area)
        .map(|((&t, &fi), &a)| ke_rate(a, perimeter_fit.derivative(t), fi, c))
        .collect();
    let seconds: Vec<f64> = times.iter().map(|&t| hours_to_seconds(t)).collect();
    cumulative_trapezoid(&seconds, &integrand)
}

/// Data-driven kinetic bound with a time-varying `f(t) = ΔA/A`.
///
/// Returns `(times, cumulative)` from `start_h` onwards. Non-uniform input is
/// linearly resampled onto a uniform grid at the median spacing.
pub fn ke_bound_numeric(
    times: &[f64],
    area: &[f64],
    perimeter_fit: &GrowthCurve,
    start_h: f64,
    c: &PhysicalConstants,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if times.len() != area.len() || times.len() < 3 {
        return Err(Error::InvalidInput("need at least three aligned area samples".into()));
    }
    let (t, a) = uniform(times, area);
    let f = advancing_fraction(&a);
    let keep: Vec<usize> = (1..t.len()).filter(|&i| t[i] >= start_h - 1e-9).collect();
    if keep.is_empty() {
        return Err(Error::InvalidInput(format!("no samples at or after {start_h} h")));
    }
    let tw: Vec<f64> = keep.iter().map(|&i| t[i]).collect();
    let fw: Vec<f64> = keep.iter().map(|&i| f[i - 1]).collect();
    let aw: Vec<f64> = keep.iter().map(|&i| a[i]).collect();
    if aw.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidInput("area must be positive for the numeric kinetic bound".into()));
    }
    let cum = ke_cumulative_trapezoid(&tw, &fw, &aw, perimeter_fit, c);
    Ok((tw, cum))
}

fn uniform(times: &[f64], values: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let steps: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    let mut sorted = steps.clone();
    sorted.sort_by(f64::total_cmp);
    let dt = sorted[sorted.len() / 2];
    if steps.iter().all(|s| (s - dt).abs() <= 1e-6 * dt) {
        return (times.to_vec(), values.to_vec());
    }
    warn!("non-uniform time grid; resampling at {dt} h for the numeric kinetic bound");
    let t0 = times[0];
    let n = ((times[times.len() - 1] - t0) / dt + 1e-9).floor() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| t0 + i as f64 * dt).collect();
    let mut j = 0;
    let resampled = grid
        .iter()
        .map(|&t| {
            while j + 2 < times.len() && times[j + 1] < t {
                j += 1;
            }
            let (x0, x1) = (times[j], times[j + 1]);
            let w = ((t - x0) / (x1 - x0)).clamp(0.0, 1.0);
            values[j] * (1.0 - w) + values[j + 1] * w
        })
        .collect();
    (grid, resampled)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    #[test]
    fn t_ab_unit_parameters() {
        // ∫₁² (z−1)/z⁵ dz = [−z⁻³/3 + z⁻⁴/4]₁²
        let exact = (-1.0 / 24.0 + 1.0 / 64.0) - (-1.0 / 3.0 + 0.25);
        let v = t_ab_difference(1.0, 1.0, 1.0, 2.0).unwrap();
        assert!((v - exact).abs() < 1e-13);
        assert!((v - 0.057_291_7).abs() < 1e-7);
    }

    #[test]
    fn t_ab_rejects_bad_limits() {
        assert!(t_ab_difference(1.0, 1.0, 0.5, 2.0).is_err());
        assert!(t_ab_difference(1.0, 1.0, 2.0, 1.5).is_err());
    }

    #[test]
    fn closed_matches_time_domain() {
        let area = SigmoidParams::new(20.0, 0.5, 10.0);
        let perim = SigmoidParams::new(60.0, 0.5, 10.0);
        let closed = ke_bound_closed(&area, &perim, 0.1, 24.0, &c()).unwrap();
        let quad = ke_bound_quadrature(&area.into(), &perim.into(), 0.1, 24.0, &c()).unwrap();
        assert!(((closed - quad) / quad).abs() < 1e-8, "{closed:e} vs {quad:e}");
        // Independent trapezoid oracle on a fine grid.
        let n = 240_000;
        let t: Vec<f64> = (0..=n).map(|i| i as f64 * 24.0 / n as f64).collect();
        let y: Vec<f64> = t.iter().map(|&x| ke_rate(area.eval(x), perim.derivative(x), 0.1, &c())).collect();
        let secs: Vec<f64> = t.iter().map(|&x| x * 3600.0).collect();
        let trap = trapezoid(&secs, &y);
        assert!(((closed - trap) / trap).abs() < 1e-4);
    }

    #[test]
    fn bisigmoid_reduces_and_is_symmetric() {
        let a1 = SigmoidParams::new(20.0, 0.5, 10.0);
        let p1 = SigmoidParams::new(60.0, 0.4, 9.0);
        let zero = |p: SigmoidParams| SigmoidParams::new(0.0, p.rate, p.inflection + 5.0);
        let area = BiSigmoidParams { phase1: a1, phase2: zero(a1) };
        let perim = BiSigmoidParams { phase1: p1, phase2: zero(p1) };
        let bi = ke_bound_bisigmoid(&area, &perim, 0.2, 24.0, &c()).unwrap();
        let single = ke_bound_closed(&a1, &p1, 0.2, 24.0, &c()).unwrap();
        assert!(((bi - single) / single).abs() < 1e-6);

        let a2 = SigmoidParams::new(8.0, 0.3, 20.0);
        let p2 = SigmoidParams::new(30.0, 0.3, 21.0);
        let fwd = ke_bound_bisigmoid(
            &BiSigmoidParams { phase1: a1, phase2: a2 },
            &BiSigmoidParams { phase1: p1, phase2: p2 },
            0.2,
            30.0,
            &c(),
        )
        .unwrap();
        let rev = ke_bound_bisigmoid(
            &BiSigmoidParams { phase1: a2, phase2: a1 },
            &BiSigmoidParams { phase1: p2, phase2: p1 },
            0.2,
            30.0,
            &c(),
        )
        .unwrap();
        assert!(((fwd - rev) / fwd).abs() < 1e-12);
    }

    #[test]
    fn flat_perimeter_gives_zero() {
        let area = GrowthCurve::Sigmoid(SigmoidParams::new(20.0, 0.5, 10.0));
        let flat = GrowthCurve::Sigmoid(SigmoidParams::new(1e-300, 0.5, 10.0));
        assert!(ke_bound_quadrature(&area, &flat, 0.1, 24.0, &c()).unwrap() < 1e-200);
    }

    #[test]
    fn f_avg_constant_and_exponential() {
        let t: Vec<f64> = (0..=48).map(|i| i as f64 * 0.5).collect();
        let perim = GrowthCurve::Sigmoid(SigmoidParams::new(50.0, 0.4, 12.0));
        let lambda = 0.1;
        let area: Vec<f64> = t.iter().map(|&x| 2.0 * (lambda * x).exp()).collect();
        let got = f_avg(&t, &area, &perim, FWindow::default()).unwrap();
        let expected = 1.0 - (-lambda * 0.5f64).exp();
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn f_avg_weighted_to_first_half() {
        // f = 0.1 until 12 h then 0; perimeter speed concentrated early.
        let t: Vec<f64> = (0..=48).map(|i| i as f64 * 0.5).collect();
        let mut area = vec![1.0];
        for &ti in &t[1..] {
            let prev = *area.last().unwrap();
            area.push(if ti <= 12.0 { prev / 0.9 } else { prev });
        }
        let perim = GrowthCurve::Sigmoid(SigmoidParams::new(50.0, 2.0, 5.0));
        let got = f_avg(&t, &area, &perim, FWindow::default()).unwrap();
        assert!((got - 0.1).abs() < 1e-3, "{got}");
    }

    #[test]
    fn f_avg_flat_perimeter_errors() {
        let t: Vec<f64> = (0..=10).map(f64::from).collect();
        let area = vec![1.0; 11];
        assert!(f_avg_data(&t, &area, &[3.0; 11], FWindow { start_h: 0.5, end_h: 10.0 }).is_err());
    }

    #[test]
    fn numeric_converges_and_matches_closed() {
        let area_fit = SigmoidParams::new(20.0, 0.5, 10.0);
        let perim_fit = SigmoidParams::new(60.0, 0.5, 10.0);
        let perim = GrowthCurve::Sigmoid(perim_fit);
        let run = |dt: f64| {
            let n = (24.0 / dt).round() as usize;
            let t: Vec<f64> = (0..=n).map(|i| i as f64 * dt).collect();
            let a: Vec<f64> = t.iter().map(|&x| area_fit.eval(x)).collect();
            let f = vec![0.1; t.len()];
            let start = t.iter().position(|&x| x >= 0.5 - 1e-9).unwrap();
            let cum = ke_cumulative_trapezoid(&t[start..], &f[start..], &a[start..], &perim, &c());
            *cum.last().unwrap()
        };
        let closed = ke_bound_closed(&area_fit, &perim_fit, 0.1, 24.0, &c()).unwrap();
        let coarse = run(0.5);
        assert!(((coarse - closed) / closed).abs() < 0.02);
        let fine = run(0.25);
        assert!(((coarse - fine) / fine).abs() < 0.005);
    }

    #[test]
    fn numeric_resamples_irregular_grid() {
        let perim = GrowthCurve::Sigmoid(SigmoidParams::new(60.0, 0.5, 10.0));
        let t = [0.0, 0.5, 1.0, 2.0, 2.5, 3.0];
        let a = [1.0, 1.1, 1.2, 1.4, 1.5, 1.6];
        let (tw, cum) = ke_bound_numeric(&t, &a, &perim, 0.5, &c()).unwrap();
        assert_eq!(tw.len(), 6);
        assert!(cum.windows(2).all(|w| w[1] >= w[0]));
    }
}
