//! Allometric exponent of the chemical bound against body mass.

use physarum_bounds::bounds::{bound_series, BoundKind, PhysicalConstants, SampleFits};
use physarum_bounds::growthfit::{GrowthCurve, SigmoidParams};
use physarum_bounds::ness::detect_ness;
use physarum_bounds::scaling::{allometric_fit, mass_series};

fn main() -> physarum_bounds::Result<()> {
    let c = PhysicalConstants::default();
    let area = GrowthCurve::Sigmoid(SigmoidParams::new(20.0, 0.5, 10.0));
    let grid: Vec<f64> = (0..=48).map(|i| i as f64 * 0.5).collect();
    let chem = bound_series(BoundKind::Chem, SampleFits { area: &area, perimeter: &area, f_avg: 0.1 }, &grid, &c)?;
    let areas: Vec<f64> = grid.iter().map(|&t| area.eval(t)).collect();
    let mass = mass_series(&areas, &c);
    let t_ness = detect_ness(&area, 0.01)?.first().map(|r| r.t_ness);

    let report = allometric_fit(&chem, &mass, None, t_ness)?;
    println!(
        "N_chem ∝ (M/M0)^{:.3} over {:.1}–{:.1} h ({} points, R² {:.4}); M0 = {:.4} g",
        report.slope,
        report.zones.acclimation_end_h,
        report.zones.boundary_start_h,
        report.n_fit_points,
        report.r_squared,
        report.m0
    );
    Ok(())
}
