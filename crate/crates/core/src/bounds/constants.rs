use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{HBAR, JOULES_PER_EV};

/// Physical inputs of the four bounds, in the units noted on each field.
///
/// Every field has a default, so a configuration file may override any
/// subset of them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Operations per second of one peristaltic segment.
    pub n_hydro_local: f64,
    /// Width of one peristaltic segment, cm.
    pub l_d: f64,
    /// Peak ATP energy density, J/cm³.
    pub rho0: f64,
    /// `∫₀¹ [tanh(1.472x) + 0.1] dx`, the normalised ATP profile.
    pub atp_shape_integral: f64,
    /// Effective body thickness, cm.
    pub thickness_l: f64,
    /// Effective mass density, g/cm³.
    pub rho_m: f64,
    /// Actin fibre bundles per cm².
    pub n_actin: f64,
    /// Shortest superradiant lifetime, s.
    pub tau_sr: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: HBAR,
            n_hydro_local: 0.017,
            l_d: 0.045,
            rho0: 0.0612,
            atp_shape_integral: 0.664,
            thickness_l: 0.01,
            rho_m: 1.1,
            n_actin: 2e5,
            tau_sr: 1e-11,
        }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("hbar", self.hbar),
            ("n_hydro_local", self.n_hydro_local),
            ("l_d", self.l_d),
            ("rho0", self.rho0),
            ("atp_shape_integral", self.atp_shape_integral),
            ("thickness_l", self.thickness_l),
            ("rho_m", self.rho_m),
            ("n_actin", self.n_actin),
            ("tau_sr", self.tau_sr),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("constant {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn pi_hbar(&self) -> f64 {
        std::f64::consts::PI * self.hbar
    }

    /// ATP energy density in eV/cm³.
    pub fn rho0_ev_per_cm3(&self) -> f64 {
        self.rho0 / JOULES_PER_EV
    }

    /// Mass density in kg/m³.
    pub fn rho_m_si(&self) -> f64 {
        self.rho_m * 1e3
    }

    /// Superradiant operations per second per cm² of body.
    pub fn qo_rate_per_cm2(&self) -> f64 {
        self.n_actin / self.tau_sr
    }
}
