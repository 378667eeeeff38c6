//! The four fit-based bounds and the data-driven kinetic bound for one
//! growth history.

use physarum_bounds::bounds::{
    bound_series, f_avg_fit, ke_numeric_series, BoundKind, FWindow, PhysicalConstants, SampleFits,
};
use physarum_bounds::growthfit::{GrowthCurve, SigmoidParams};

fn main() -> physarum_bounds::Result<()> {
    let c = PhysicalConstants::default();
    let area = GrowthCurve::Sigmoid(SigmoidParams::new(20.0, 0.5, 10.0));
    let perimeter = GrowthCurve::Sigmoid(SigmoidParams::new(100.0, 0.45, 10.5));
    let grid: Vec<f64> = (0..=48).map(|i| i as f64 * 0.5).collect();
    let f = f_avg_fit(&grid, &area, &perimeter, FWindow::default())?;
    println!("kinetically weighted advancing fraction f_avg = {f:.4}");

    let fits = SampleFits { area: &area, perimeter: &perimeter, f_avg: f };
    for kind in BoundKind::FROM_FITS {
        let s = bound_series(kind, fits, &grid, &c)?;
        let i = s.times.len() - 1;
        println!(
            "{kind:>5}: {:.3e} ops by 24 h; final rate {:.3e} ops/s ({:.3e} J)",
            s.cumulative_ops[i], s.rate_ops_per_s[i], s.energy_j[i]
        );
    }
    let data: Vec<f64> = grid.iter().map(|&t| area.eval(t)).collect();
    let numeric = ke_numeric_series(&grid, &data, &perimeter, 0.5, &c)?;
    println!("ke_num: {:.3e} ops from 0.5 h to 24 h", numeric.cumulative_ops.last().unwrap());
    Ok(())
}
