//! Rates, energies and closed-form cumulative counts for the hydrodynamic,
//! chemical and quantum-optical bounds.
//!
//! All three bounds are proportional to the time integral of a logistic fit,
//! so the cumulative count is a sum of softplus differences. The hour→second
//! factor is applied once, to the integral measure.

use super::PhysicalConstants;
use crate::error::Result;
use crate::growthfit::GrowthCurve;
use crate::quadrature::{integrate, Tolerance};
use crate::units::hours_to_seconds;

/// Operations per second from peristaltic segments along a perimeter in cm.
pub fn hydro_rate(perimeter_cm: f64, c: &PhysicalConstants) -> f64 {
    c.n_hydro_local * perimeter_cm / c.l_d
}

pub fn hydro_energy(perimeter_cm: f64, c: &PhysicalConstants) -> f64 {
    c.pi_hbar() * hydro_rate(perimeter_cm, c)
}

/// Accessible ATP energy (J) in a body of the given area in cm².
pub fn chem_energy(area_cm2: f64, c: &PhysicalConstants) -> f64 {
    c.atp_shape_integral * c.rho0 * area_cm2 * c.thickness_l
}

pub fn chem_rate(area_cm2: f64, c: &PhysicalConstants) -> f64 {
    chem_energy(area_cm2, c) / c.pi_hbar()
}

pub fn qo_rate(area_cm2: f64, c: &PhysicalConstants) -> f64 {
    c.qo_rate_per_cm2() * area_cm2
}

pub fn qo_energy(area_cm2: f64, c: &PhysicalConstants) -> f64 {
    c.pi_hbar() * qo_rate(area_cm2, c)
}

/// `∫₀ᵗ` of the fitted curve from time zero, in value·second.
fn integral_seconds(fit: &GrowthCurve, t_hours: f64) -> f64 {
    hours_to_seconds(fit.integral(0.0, t_hours))
}

/// Cumulative hydrodynamic operations from time zero to `t` (hours).
pub fn hydro_bound(perimeter_fit: &GrowthCurve, t_hours: f64, c: &PhysicalConstants) -> f64 {
    c.n_hydro_local / c.l_d * integral_seconds(perimeter_fit, t_hours)
}

pub fn chem_bound(area_fit: &GrowthCurve, t_hours: f64, c: &PhysicalConstants) -> f64 {
    c.atp_shape_integral * c.rho0 * c.thickness_l / c.pi_hbar() * integral_seconds(area_fit, t_hours)
}

pub fn qo_bound(area_fit: &GrowthCurve, t_hours: f64, c: &PhysicalConstants) -> f64 {
    c.qo_rate_per_cm2() * integral_seconds(area_fit, t_hours)
}

/// `∫₀¹ [tanh(g·x) + offset] dx` by adaptive quadrature.
pub fn atp_shape_integral(profile_gain: f64, offset: f64) -> Result<f64> {
    Ok(integrate(|x| (profile_gain * x).tanh() + offset, 0.0, 1.0, Tolerance { abs: 1e-14, rel: 1e-13 })?.value)
}

/// Closed form `ln(cosh g)/g + offset`; the `g → 0` limit is `offset`.
pub fn atp_shape_integral_analytic(profile_gain: f64, offset: f64) -> f64 {
    if profile_gain.abs() < 1e-8 {
        return offset + 0.5 * profile_gain;
    }
    profile_gain.cosh().ln() / profile_gain + offset
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growthfit::SigmoidParams;
    use crate::units::joules_to_ev;

    fn c() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    #[test]
    fn hydro_spot_values() {
        assert_eq!(hydro_rate(0.0, &c()), 0.0);
        assert!((hydro_rate(100.0, &c()) - 37.777_777_8).abs() < 1e-6);
        assert!((hydro_rate(0.045, &c()) - 0.017).abs() < 1e-15);
        let e = hydro_energy(100.0, &c());
        assert!((e / 1.25e-32 - 1.0).abs() < 0.01);
        assert!((hydro_energy(200.0, &c()) / e - 2.0).abs() < 1e-14);
    }

    #[test]
    fn qo_energy_in_ev() {
        let e = qo_energy(20.0, &c());
        assert!((e / 1.33e-16 - 1.0).abs() < 0.01);
        assert!((joules_to_ev(e) / 827.0 - 1.0).abs() < 0.01);
    }

    #[test]
    fn chem_rate_twenty_cm2() {
        let r = chem_rate(20.0, &c());
        assert!((r / 2.453e31 - 1.0).abs() < 1e-3, "{r:e}");
    }

    #[test]
    fn shape_integral() {
        let n = atp_shape_integral(1.472, 0.1).unwrap();
        assert!((n - 0.664).abs() < 1e-3);
        assert!((n - atp_shape_integral_analytic(1.472, 0.1)).abs() < 1e-9);
        assert!(atp_shape_integral(0.0, 0.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn step_perimeter_constant_rate_limit() {
        // A very steep logistic at t = 0 holds P ≈ 100 cm throughout.
        let fit = GrowthCurve::Sigmoid(SigmoidParams::new(100.0, 200.0, 0.0));
        let n = hydro_bound(&fit, 24.0, &c());
        assert!((n / (37.777_78 * 86_400.0) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn zero_at_time_zero() {
        let fit = GrowthCurve::Sigmoid(SigmoidParams::new(20.0, 0.5, 10.0));
        assert_eq!(chem_bound(&fit, 0.0, &c()), 0.0);
        assert_eq!(qo_bound(&fit, 0.0, &c()), 0.0);
    }
}
