//! Mean-to-maximum energy ratios of harmonic oscillator systems and the
//! speed-limit scaling law.

use physarum_bounds::oscillators::{
    mean_ratio_enumerate, mean_ratio_formula, ring_mode_spectrum, slime_scaling, three_coupled_ratio, ModeSpectrum,
};

fn main() -> physarum_bounds::Result<()> {
    for d in 1..=3 {
        let exact = mean_ratio_enumerate(&ModeSpectrum::isotropic(1, d), 200)?;
        println!("one oscillator in {d}D: enumerated {exact:.4}, asymptotic {:.4}", mean_ratio_formula(1, d));
    }
    println!("nine uncoupled modes: {:.4}", mean_ratio_enumerate(&ModeSpectrum::uncoupled(9), 20)?);
    println!("three ring-coupled oscillators, equal cutoffs: {:.6} (45/56)", three_coupled_ratio(1.0, 1.0));

    for eta in [3, 4, 5] {
        let s = ring_mode_spectrum(eta, 1.0, 1.0, 0.5)?;
        let modes: Vec<String> = s.modes.iter().map(|m| format!("{:.4}×{}", m.frequency, m.degeneracy)).collect();
        println!("ring of {eta}: {}", modes.join(", "));
    }

    for (label, v) in [("1 mm/s", 1e-3), ("1 mm/h", 1e-3 / 3600.0)] {
        let law = slime_scaling(v, 24.0 * 3600.0, 1e-3)?;
        println!("{label}: t_slime {:.3e} s, motional operations for 1 g over a day {:.3e}", law.t_slime, law.ops_estimate);
    }
    Ok(())
}
