use nalgebra::DMatrix;

use super::{Mode, ModeSpectrum};
use crate::error::{Error, Result};

/// Relative tolerance for treating two eigen-frequencies as degenerate.
const DEGENERACY_TOL: f64 = 1e-9;

/// Stiffness matrix of `eta` identical oscillators on a ring with
/// nearest-neighbour springs `k`.
pub fn ring_stiffness(eta: usize, m: f64, omega: f64, k: f64) -> DMatrix<f64> {
    let mut kappa = DMatrix::from_diagonal_element(eta, eta, m * omega * omega + 2.0 * k);
    for i in 0..eta {
        let j = (i + 1) % eta;
        kappa[(i, j)] -= k;
        kappa[(j, i)] -= k;
    }
    kappa
}

/// Circulant eigenvalues `mω² + 2k(1 − cos 2πj/η)`, `j = 0..η`.
pub fn ring_eigenvalues_closed(eta: usize, m: f64, omega: f64, k: f64) -> Vec<f64> {
    (0..eta)
        .map(|j| {
            let phase = 2.0 * std::f64::consts::PI * j as f64 / eta as f64;
            m * omega * omega + 2.0 * k * (1.0 - phase.cos())
        })
        .collect()
}

/// Normal modes of the ring in `dims` spatial dimensions (3 by default in
/// [`ring_mode_spectrum`]). Frequencies are sorted ascending; the degeneracy
/// is counted per dimension. All families start with equal cutoffs.
pub fn ring_mode_spectrum_dims(eta: usize, m: f64, omega: f64, k: f64, dims: usize) -> Result<ModeSpectrum> {
    if eta < 2 {
        return Err(Error::InvalidInput(format!("a ring needs at least 2 oscillators, got {eta}")));
    }
    if !(m > 0.0 && omega > 0.0 && k > 0.0) || dims == 0 {
        return Err(Error::InvalidInput("mass, frequency, coupling and dimension must be positive".into()));
    }
    let eigen = ring_stiffness(eta, m, omega, k).symmetric_eigen();
    let mut lambdas: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    if lambdas.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(Error::Eigen(format!("non-positive stiffness eigenvalue in {lambdas:?}")));
    }
    lambdas.sort_by(f64::total_cmp);

    let mut modes: Vec<Mode> = Vec::new();
    for lambda in lambdas {
        let frequency = (lambda / m).sqrt();
        match modes.last_mut() {
            Some(last) if (frequency - last.frequency).abs() <= DEGENERACY_TOL * last.frequency => {
                last.degeneracy += 1;
            }
            _ => modes.push(Mode { frequency, degeneracy: 1 }),
        }
    }
    let cutoffs = vec![1.0; modes.len()];
    Ok(ModeSpectrum { modes, dims, cutoffs })
}

pub fn ring_mode_spectrum(eta: usize, m: f64, omega: f64, k: f64) -> Result<ModeSpectrum> {
    ring_mode_spectrum_dims(eta, m, omega, k, 3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_ring_frequencies() {
        let (m, w, k) = (2.0, 1.5, 0.7);
        let s = ring_mode_spectrum(3, m, w, k).unwrap();
        assert_eq!(s.modes.len(), 2);
        assert!((s.modes[0].frequency - w).abs() < 1e-12);
        assert_eq!(s.modes[0].degeneracy, 1);
        assert!((s.modes[1].frequency - (w * w + 3.0 * k / m).sqrt()).abs() < 1e-12);
        assert_eq!(s.modes[1].degeneracy, 2);
    }

    #[test]
    fn four_ring_pattern() {
        let s = ring_mode_spectrum(4, 1.0, 1.0, 1.0).unwrap();
        let pattern: Vec<usize> = s.modes.iter().map(|m| m.degeneracy).collect();
        assert_eq!(pattern, vec![1, 2, 1]);
    }

    #[test]
    fn matches_closed_form() {
        for eta in 2..=8 {
            let (m, w, k) = (1.3, 0.9, 2.1);
            let mut closed = ring_eigenvalues_closed(eta, m, w, k);
            closed.sort_by(f64::total_cmp);
            let mut numeric: Vec<f64> = ring_stiffness(eta, m, w, k).symmetric_eigen().eigenvalues.iter().copied().collect();
            numeric.sort_by(f64::total_cmp);
            for (a, b) in closed.iter().zip(&numeric) {
                assert!(((a - b) / a).abs() < 1e-10, "eta {eta}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn rejects_small_ring() {
        assert!(ring_mode_spectrum(1, 1.0, 1.0, 1.0).is_err());
        assert!(ring_mode_spectrum(3, 1.0, 1.0, 0.0).is_err());
    }
}
