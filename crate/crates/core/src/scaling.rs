//! Allometric regression of the chemical bound against normalized body mass.
//!
//! Both axes are base-10 logarithms. The regression uses only the
//! intermediate zone: after the acclimation zone, where the local log-log
//! slope has not yet settled, and before the boundary zone that starts at
//! the area fit's NESS time.

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundSeries, PhysicalConstants};
use crate::error::{Error, Result};
use crate::stats::{median, ols};

/// Minimum number of points in the intermediate zone.
pub const MIN_ZONE_POINTS: usize = 5;
/// Width of the moving window for local slopes.
const LOCAL_WINDOW: usize = 5;
/// The acclimation zone ends where the local slope first comes within this
/// relative distance of its median.
const SLOPE_BAND: f64 = 0.15;

/// Body mass in grams, `ρ_m · A · ℓ` with `A` in cm².
pub fn mass_series(area_cm2: &[f64], c: &PhysicalConstants) -> Vec<f64> {
    area_cm2.iter().map(|a| c.rho_m * a * c.thickness_l).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zones {
    pub acclimation_end_h: f64,
    pub boundary_start_h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllometryReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub slope: f64,
    pub intercept: f64,
    #[serde(rename = "r2")]
    pub r_squared: f64,
    pub zones: Zones,
    #[serde(rename = "m0_g")]
    pub m0: f64,
    /// Times of the points below.
    pub times: Vec<f64>,
    /// `(log10 M/M0, log10 N_chem)` for every usable time point.
    pub points: Vec<(f64, f64)>,
    pub n_fit_points: usize,
}

/// Fits `log10 N_chem` against `log10 M/M0`.
///
/// Points with a non-positive bound or mass (typically the first sample at
/// the start of integration) are left out. `zones` overrides the automatic
/// segmentation; otherwise `t_ness` (or the last time, if absent) starts
/// the boundary zone.
pub fn allometric_fit(
    n_chem: &BoundSeries,
    mass_g: &[f64],
    zones: Option<Zones>,
    t_ness: Option<f64>,
) -> Result<AllometryReport> {
    if n_chem.times.len() != mass_g.len() {
        return Err(Error::InvalidInput(format!(
            "bound has {} points but mass has {}",
            n_chem.times.len(),
            mass_g.len()
        )));
    }
    let usable: Vec<usize> = (0..mass_g.len())
        .filter(|&i| mass_g[i] > 0.0 && n_chem.cumulative_ops[i] > 0.0)
        .collect();
    if usable.len() < MIN_ZONE_POINTS {
        return Err(Error::InvalidInput(format!(
            "allometry needs at least {MIN_ZONE_POINTS} positive points, got {}",
            usable.len()
        )));
    }
    let m0 = usable.iter().map(|&i| mass_g[i]).fold(0.0, f64::max);
    let times: Vec<f64> = usable.iter().map(|&i| n_chem.times[i]).collect();
    let x: Vec<f64> = usable.iter().map(|&i| (mass_g[i] / m0).log10()).collect();
    let y: Vec<f64> = usable.iter().map(|&i| n_chem.cumulative_ops[i].log10()).collect();

    let zones = match zones {
        Some(z) => z,
        None => auto_zones(&times, &x, &y, t_ness.unwrap_or(f64::INFINITY).min(*times.last().unwrap()))?,
    };
    if !(zones.acclimation_end_h < zones.boundary_start_h) {
        return Err(Error::InvalidInput(format!(
            "acclimation zone ends at {} h, not before the boundary zone at {} h",
            zones.acclimation_end_h, zones.boundary_start_h
        )));
    }

    let inside: Vec<usize> = (0..times.len())
        .filter(|&i| times[i] >= zones.acclimation_end_h && times[i] <= zones.boundary_start_h)
        .collect();
    if inside.len() < MIN_ZONE_POINTS {
        return Err(Error::InvalidInput(format!(
            "intermediate zone holds {} points, need {MIN_ZONE_POINTS}",
            inside.len()
        )));
    }
    let xs: Vec<f64> = inside.iter().map(|&i| x[i]).collect();
    let ys: Vec<f64> = inside.iter().map(|&i| y[i]).collect();
    let fit = ols(&xs, &ys).ok_or_else(|| Error::Degenerate("mass does not vary in the intermediate zone".into()))?;

    Ok(AllometryReport {
        group: None,
        slope: fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        zones,
        m0,
        points: x.into_iter().zip(y).collect(),
        times,
        n_fit_points: inside.len(),
    })
}

fn auto_zones(times: &[f64], x: &[f64], y: &[f64], boundary_start: f64) -> Result<Zones> {
    let half = LOCAL_WINDOW / 2;
    let local: Vec<(f64, f64)> = (half..times.len().saturating_sub(half))
        .filter(|&i| times[i] <= boundary_start)
        .filter_map(|i| {
            let range = i - half..=i + half;
            ols(&x[range.clone()], &y[range]).map(|f| (times[i], f.slope))
        })
        .collect();
    let slopes: Vec<f64> = local.iter().map(|p| p.1).collect();
    let med = median(&slopes).ok_or_else(|| Error::Degenerate("mass is constant; no local log-log slope".into()))?;
    let acclimation_end_h = local
        .iter()
        .find(|(_, s)| (s - med).abs() <= SLOPE_BAND * med.abs())
        .map(|p| p.0)
        .ok_or_else(|| Error::Degenerate("local slope never settles".into()))?;
    Ok(Zones {
        acclimation_end_h,
        boundary_start_h: boundary_start,
    })
}
