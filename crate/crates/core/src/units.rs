//! Unit conversions.
//!
//! Morphology is stored in centimetres and hours; everything that touches
//! ħ is evaluated in SI. All conversions go through this module so that the
//! hour→second factor lives in exactly one place.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Newtonian gravitational constant, m³ kg⁻¹ s⁻².
pub const GRAVITATIONAL_CONSTANT: f64 = 6.674_30e-11;
/// Elementary charge, J per eV.
pub const JOULES_PER_EV: f64 = 1.602_176_634e-19;
/// Centimetres per inch.
pub const CM_PER_INCH: f64 = 2.54;

pub const SECONDS_PER_HOUR: f64 = 3600.0;
pub const M_PER_CM: f64 = 1e-2;
pub const M2_PER_CM2: f64 = 1e-4;

#[inline]
pub fn hours_to_seconds(h: f64) -> f64 {
    h * SECONDS_PER_HOUR
}

#[inline]
pub fn seconds_to_hours(s: f64) -> f64 {
    s / SECONDS_PER_HOUR
}

/// Converts a rate expressed per hour into a rate per second.
#[inline]
pub fn per_hour_to_per_second(r: f64) -> f64 {
    r / SECONDS_PER_HOUR
}

#[inline]
pub fn cm_to_m(x: f64) -> f64 {
    x * M_PER_CM
}

#[inline]
pub fn cm2_to_m2(x: f64) -> f64 {
    x * M2_PER_CM2
}

#[inline]
pub fn joules_to_ev(j: f64) -> f64 {
    j / JOULES_PER_EV
}

/// Physical size of one pixel edge for a scan at `dpi`.
#[inline]
pub fn cm_per_pixel(dpi: f64) -> f64 {
    CM_PER_INCH / dpi
}

/// πħ, the energy–rate conversion of the macroscopic speed limit.
#[inline]
pub fn pi_hbar() -> f64 {
    std::f64::consts::PI * HBAR
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hour_round_trip() {
        assert_eq!(seconds_to_hours(hours_to_seconds(24.0)), 24.0);
        assert_eq!(hours_to_seconds(24.0), 86_400.0);
    }

    #[test]
    fn pixel_scale() {
        assert!((cm_per_pixel(1600.0) - 0.001_587_5).abs() < 1e-15);
    }
}
