//! Operation-count bounds derived from the macroscopic speed limit
//! `N = E/(πħ)`.

mod aggregate;
mod closed;
mod constants;
mod kinetic;

pub use aggregate::{aggregate_group, geometric_summary, GroupAggregate};
pub use closed::{
    atp_shape_integral, atp_shape_integral_analytic, chem_bound, chem_energy, chem_rate, hydro_bound,
    hydro_energy, hydro_rate, qo_bound, qo_energy, qo_rate,
};
pub use constants::PhysicalConstants;
pub use kinetic::{
    advancing_fraction, f_avg, f_avg_data, f_avg_fit, ke_bound, ke_bound_bisigmoid, ke_bound_closed,
    ke_bound_numeric, ke_bound_quadrature, ke_cumulative_trapezoid, ke_rate, t_ab_difference, FWindow,
    KeClosedFormParams,
};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::growthfit::GrowthCurve;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Hydro,
    Chem,
    Ke,
    Qo,
    /// Kinetic bound with the time-varying advancing fraction from data.
    #[serde(rename = "ke_num")]
    KeNumeric,
}

impl BoundKind {
    pub const FROM_FITS: [BoundKind; 4] = [BoundKind::Hydro, BoundKind::Chem, BoundKind::Ke, BoundKind::Qo];

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::Hydro => "hydro",
            BoundKind::Chem => "chem",
            BoundKind::Ke => "ke",
            BoundKind::Qo => "qo",
            BoundKind::KeNumeric => "ke_num",
        }
    }

    /// Whether the bound grows linearly once growth saturates.
    pub fn has_linear_tail(&self) -> bool {
        matches!(self, BoundKind::Hydro | BoundKind::Chem | BoundKind::Qo)
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Cumulative operation count of one bound on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSeries {
    pub kind: BoundKind,
    pub times: Vec<f64>,
    pub cumulative_ops: Vec<f64>,
    pub rate_ops_per_s: Vec<f64>,
    /// `πħ · rate`, the accessible energy that sustains the rate.
    pub energy_j: Vec<f64>,
}

/// Inputs shared by every fit-based bound of one sample.
#[derive(Debug, Clone, Copy)]
pub struct SampleFits<'a> {
    pub area: &'a GrowthCurve,
    pub perimeter: &'a GrowthCurve,
    pub f_avg: f64,
}

/// Evaluates one fit-based bound on `times` (hours).
pub fn bound_series(kind: BoundKind, fits: SampleFits<'_>, times: &[f64], c: &PhysicalConstants) -> Result<BoundSeries> {
    let mut cumulative_ops = Vec::with_capacity(times.len());
    let mut rate_ops_per_s = Vec::with_capacity(times.len());
    for &t in times {
        let (cum, rate) = match kind {
            BoundKind::Hydro => (hydro_bound(fits.perimeter, t, c), hydro_rate(fits.perimeter.eval(t), c)),
            BoundKind::Chem => (chem_bound(fits.area, t, c), chem_rate(fits.area.eval(t), c)),
            BoundKind::Qo => (qo_bound(fits.area, t, c), qo_rate(fits.area.eval(t), c)),
            BoundKind::Ke | BoundKind::KeNumeric => (
                ke_bound(fits.area, fits.perimeter, fits.f_avg, t, c)?,
                ke_rate(fits.area.eval(t), fits.perimeter.derivative(t), fits.f_avg, c),
            ),
        };
        cumulative_ops.push(cum);
        rate_ops_per_s.push(rate);
    }
    Ok(from_parts(kind, times.to_vec(), cumulative_ops, rate_ops_per_s, c))
}

/// Data-driven kinetic series with time-varying `f`, from `start_h`.
pub fn ke_numeric_series(
    times: &[f64],
    area: &[f64],
    perimeter_fit: &GrowthCurve,
    start_h: f64,
    c: &PhysicalConstants,
) -> Result<BoundSeries> {
    let (t, cum) = ke_bound_numeric(times, area, perimeter_fit, start_h, c)?;
    let f = advancing_fraction(area);
    let rate = t
        .iter()
        .map(|&ti| {
            let i = times.iter().position(|&x| (x - ti).abs() < 1e-9);
            match i {
                Some(i) if i > 0 => ke_rate(area[i], perimeter_fit.derivative(ti), f[i - 1], c),
                _ => f64::NAN,
            }
        })
        .collect();
    Ok(from_parts(BoundKind::KeNumeric, t, cum, rate, c))
}

fn from_parts(kind: BoundKind, times: Vec<f64>, cumulative_ops: Vec<f64>, rate_ops_per_s: Vec<f64>, c: &PhysicalConstants) -> BoundSeries {
    let energy_j = rate_ops_per_s.iter().map(|r| r * c.pi_hbar()).collect();
    BoundSeries {
        kind,
        times,
        cumulative_ops,
        rate_ops_per_s,
        energy_j,
    }
}
