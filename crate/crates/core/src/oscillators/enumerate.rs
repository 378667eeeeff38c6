//! Exact mean-energy ratios by brute-force enumeration of occupation states.
//!
//! A *family* is a set of `K = degeneracy · dims` one-dimensional modes that
//! share one frequency `Ω`. Each family gets its own level cutoff `N`: its
//! admissible states are the occupation vectors with `Σ nᵢ ≤ N`, energies
//! measured from the ground state. The full state space is the product of
//! the families' spaces, every state weighted equally, and
//! `E_max = Σ_f N_f ħΩ_f`.

use rayon::prelude::*;

use super::ModeSpectrum;
use crate::error::{Error, Result};

/// Refuse to enumerate more states than this.
pub const MAX_STATES: f64 = 1e8;

/// Number of occupation vectors of `k` modes with total level at most `n`,
/// i.e. `C(n + k, k)`.
pub fn simplex_state_count(k: usize, n: u64) -> f64 {
    let mut c = 1.0_f64;
    for i in 1..=k {
        c *= (n as f64 + i as f64) / i as f64;
    }
    c.round()
}

/// `(state count, Σ total level over all states)` for one family.
fn enumerate_family(k: usize, n: u64) -> (u64, u64) {
    if k == 0 {
        return (1, 0);
    }
    // Split on the first mode's occupation so the work spreads over threads.
    (0..=n)
        .into_par_iter()
        .map(|first| {
            let mut count = 0u64;
            let mut level_sum = 0u64;
            walk(k - 1, n - first, first, &mut count, &mut level_sum);
            (count, level_sum)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

/// Visits every occupation of `modes_left` modes within `budget`, adding
/// `used + Σ n` for each complete state.
fn walk(modes_left: usize, budget: u64, used: u64, count: &mut u64, level_sum: &mut u64) {
    if modes_left == 0 {
        *count += 1;
        *level_sum += used;
        return;
    }
    for n in 0..=budget {
        walk(modes_left - 1, budget - n, used + n, count, level_sum);
    }
}

/// `⟨E⟩/E_max` over all states of the spectrum, with the largest family
/// cutoff set to `max_total_level` and the others scaled in proportion.
pub fn mean_ratio_enumerate(spectrum: &ModeSpectrum, max_total_level: u64) -> Result<f64> {
    if max_total_level == 0 {
        return Err(Error::InvalidInput("cutoff level must be at least 1".into()));
    }
    let levels = spectrum.scaled_cutoffs(max_total_level)?;
    let families: Vec<(usize, u64, f64)> = spectrum
        .modes
        .iter()
        .zip(&levels)
        .map(|(m, &n)| (m.degeneracy * spectrum.dims, n, m.frequency))
        .collect();

    let states: f64 = families.iter().map(|&(k, n, _)| simplex_state_count(k, n)).product();
    if states > MAX_STATES {
        return Err(Error::StateSpaceOverflow {
            states,
            limit: MAX_STATES,
        });
    }

    // Families are independent, so the product-space mean energy is the sum
    // of per-family means.
    let mut mean_energy = 0.0;
    let mut e_max = 0.0;
    for &(k, n, omega) in &families {
        let (count, level_sum) = enumerate_family(k, n);
        mean_energy += omega * level_sum as f64 / count as f64;
        e_max += omega * n as f64;
    }
    Ok(mean_energy / e_max)
}
