//! Speed-limit machinery: orthogonalisation time, mean-to-maximum energy
//! ratios of harmonic systems, ring normal modes and the characteristic
//! time scale of a moving body.

mod enumerate;
mod ring;

pub use enumerate::{mean_ratio_enumerate, simplex_state_count, MAX_STATES};
pub use ring::{ring_eigenvalues_closed, ring_mode_spectrum, ring_mode_spectrum_dims, ring_stiffness};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{pi_hbar, GRAVITATIONAL_CONSTANT, HBAR};

/// Minimum time `πħ/(2E)` for a state with mean energy `E` (J) to evolve
/// into an orthogonal one.
pub fn ml_min_time(mean_energy: f64) -> Result<f64> {
    if !(mean_energy > 0.0) {
        return Err(Error::InvalidInput(format!("mean energy must be positive, got {mean_energy}")));
    }
    Ok(pi_hbar() / (2.0 * mean_energy))
}

/// Maximum operation rate `E/(πħ)` in ops/s for accessible energy `E` (J).
pub fn ml_max_rate(e_max: f64) -> f64 {
    e_max / pi_hbar()
}

/// Asymptotic `⟨E⟩/E_max = Gd/(Gd + 1)` for `G` degenerate modes per
/// dimension in `d` dimensions.
pub fn mean_ratio_formula(g: usize, d: usize) -> f64 {
    let gd = (g * d) as f64;
    gd / (gd + 1.0)
}

/// Mean-to-maximum energy ratio of three ring-coupled 3D oscillators.
///
/// `freq_ratio` is the non-degenerate over the degenerate normal-mode
/// frequency; `cutoff_ratio` is the degenerate family's level cutoff over
/// the non-degenerate one's.
pub fn three_coupled_ratio(freq_ratio: f64, cutoff_ratio: f64) -> f64 {
    let x = freq_ratio / cutoff_ratio;
    (6.0 / 7.0 + 0.75 * x) / (1.0 + x)
}

/// One normal-mode frequency (rad/s) and how many modes share it per
/// spatial dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub frequency: f64,
    pub degeneracy: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSpectrum {
    pub modes: Vec<Mode>,
    pub dims: usize,
    /// Relative level cutoff of each frequency family; only ratios matter.
    pub cutoffs: Vec<f64>,
}

impl ModeSpectrum {
    /// `g` identical modes per dimension in `d` dimensions.
    pub fn isotropic(g: usize, d: usize) -> Self {
        Self {
            modes: vec![Mode { frequency: 1.0, degeneracy: g }],
            dims: d,
            cutoffs: vec![1.0],
        }
    }

    /// `n` uncoupled identical one-dimensional oscillators.
    pub fn uncoupled(n: usize) -> Self {
        Self::isotropic(n, 1)
    }

    pub fn with_cutoffs(mut self, cutoffs: Vec<f64>) -> Self {
        self.cutoffs = cutoffs;
        self
    }

    /// Largest number of modes per dimension sharing a frequency.
    pub fn max_degeneracy(&self) -> usize {
        self.modes.iter().map(|m| m.degeneracy).max().unwrap_or(0)
    }

    fn two_families(&self) -> Option<(usize, usize)> {
        if self.modes.len() != 2 {
            return None;
        }
        let deg = if self.modes[0].degeneracy > self.modes[1].degeneracy { 0 } else { 1 };
        (self.modes[deg].degeneracy != self.modes[1 - deg].degeneracy).then_some((deg, 1 - deg))
    }

    /// Non-degenerate over degenerate frequency, for two-family spectra.
    pub fn freq_ratio(&self) -> Option<f64> {
        self.two_families()
            .map(|(deg, nondeg)| self.modes[nondeg].frequency / self.modes[deg].frequency)
    }

    /// Degenerate over non-degenerate cutoff, for two-family spectra.
    pub fn cutoff_ratio(&self) -> Option<f64> {
        self.two_families().map(|(deg, nondeg)| self.cutoffs[deg] / self.cutoffs[nondeg])
    }

    /// Integer cutoffs with the largest equal to `max_level`.
    pub fn scaled_cutoffs(&self, max_level: u64) -> Result<Vec<u64>> {
        if self.cutoffs.len() != self.modes.len() || self.modes.is_empty() {
            return Err(Error::InvalidInput("need one cutoff per frequency family".into()));
        }
        if self.dims == 0 || self.modes.iter().any(|m| m.degeneracy == 0 || !(m.frequency > 0.0)) {
            return Err(Error::InvalidInput("frequencies, degeneracies and dims must be positive".into()));
        }
        if self.cutoffs.iter().any(|c| !(*c > 0.0 && c.is_finite())) {
            return Err(Error::InvalidInput("cutoffs must be positive".into()));
        }
        let top = self.cutoffs.iter().copied().fold(0.0, f64::max);
        Ok(self
            .cutoffs
            .iter()
            .map(|c| ((c / top * max_level as f64).round() as u64).max(1))
            .collect())
    }
}

/// `N(t) ∼ (t/t_slime)^ν` together with the motional operation estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingLaw {
    /// m/s.
    pub v_slime: f64,
    /// `√(Għ/v⁵)`, s.
    pub t_slime: f64,
    pub ops_exponent_nu: f64,
    /// s.
    pub t_window: f64,
    /// `(t_window/t_slime)^ν`.
    pub time_ratio_ops: f64,
    /// `(½mv²/πħ)·t_window`.
    pub ops_estimate: f64,
}

pub fn t_slime(v_slime: f64) -> f64 {
    (GRAVITATIONAL_CONSTANT * HBAR / v_slime.powi(5)).sqrt()
}

/// Scaling law with linear time scaling (`ν = 1`).
pub fn slime_scaling(v_slime: f64, t_window: f64, mass_kg: f64) -> Result<ScalingLaw> {
    slime_scaling_with_nu(v_slime, t_window, mass_kg, 1.0)
}

/// `ν` may not exceed 2, the largest dimension a planar boundary can have.
pub fn slime_scaling_with_nu(v_slime: f64, t_window: f64, mass_kg: f64, nu: f64) -> Result<ScalingLaw> {
    if !(v_slime > 0.0) {
        return Err(Error::InvalidInput(format!("speed must be positive, got {v_slime}")));
    }
    if !(t_window >= 0.0 && mass_kg >= 0.0) {
        return Err(Error::InvalidInput("time window and mass must be non-negative".into()));
    }
    if !(nu > 0.0 && nu <= 2.0) {
        return Err(Error::InvalidInput(format!("scaling exponent must lie in (0, 2], got {nu}")));
    }
    let ts = t_slime(v_slime);
    let kinetic = 0.5 * mass_kg * v_slime * v_slime;
    Ok(ScalingLaw {
        v_slime,
        t_slime: ts,
        ops_exponent_nu: nu,
        t_window,
        time_ratio_ops: (t_window / ts).powf(nu),
        ops_estimate: ml_max_rate(kinetic) * t_window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::JOULES_PER_EV;

    #[test]
    fn min_time_values() {
        assert!((ml_min_time(pi_hbar() / 2.0).unwrap() - 1.0).abs() < 1e-15);
        let tau = ml_min_time(JOULES_PER_EV).unwrap();
        assert!((tau / 1.034e-15 - 1.0).abs() < 1e-3);
        assert!((ml_min_time(2.0).unwrap() * 2.0 - ml_min_time(1.0).unwrap()).abs() < 1e-40);
        assert!(ml_min_time(0.0).is_err());
    }

    #[test]
    fn max_rate_values() {
        assert!((ml_max_rate(pi_hbar()) - 1.0).abs() < 1e-15);
        assert_eq!(ml_max_rate(0.0), 0.0);
        assert!((ml_max_rate(1.25e-32) / 37.78 - 1.0).abs() < 0.01);
    }

    #[test]
    fn formula_values() {
        assert_eq!(mean_ratio_formula(1, 1), 0.5);
        assert_eq!(mean_ratio_formula(1, 3), 0.75);
        assert!((mean_ratio_formula(2, 3) - 6.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn three_coupled_values() {
        assert!((three_coupled_ratio(1.0, 1.0) - 45.0 / 56.0).abs() < 1e-15);
        assert!((three_coupled_ratio(2.0, 1.0) - (6.0 / 7.0 + 1.5) / 3.0).abs() < 1e-15);
        assert!((three_coupled_ratio(1e9, 1.0) - 0.75).abs() < 1e-6);
        assert!((three_coupled_ratio(1e-9, 1.0) - 6.0 / 7.0).abs() < 1e-6);
    }

    #[test]
    fn ring_enumeration_matches_three_coupled_formula() {
        let spectrum = ring_mode_spectrum(3, 1.0, 1.0, 1.0).unwrap().with_cutoffs(vec![1.0, 1.0]);
        let w = spectrum.freq_ratio().unwrap();
        let b = spectrum.cutoff_ratio().unwrap();
        let enumerated = mean_ratio_enumerate(&spectrum, 8).unwrap();
        assert!((enumerated - three_coupled_ratio(w, b)).abs() < 1e-12);
    }

    #[test]
    fn slime_time_scales() {
        assert!((t_slime(1e-3) / 2.653e-15 - 1.0).abs() < 1e-3);
        assert!((t_slime(1e-3 / 3600.0) / 2.063e-6 - 1.0).abs() < 1e-3);
        let fast = slime_scaling(1e-3, 86_400.0, 1e-3).unwrap();
        let slow = slime_scaling(1e-3 / 3600.0, 86_400.0, 1e-3).unwrap();
        assert!((fast.ops_estimate / 1.30e29 - 1.0).abs() < 0.01);
        assert!((slow.ops_estimate / 1.006e22 - 1.0).abs() < 0.01);
        assert!(slime_scaling_with_nu(1e-3, 1.0, 1.0, 2.5).is_err());
    }
}
