//! Non-equilibrium steady-state detection and the linear tail of a bound.

use physarum_bounds::bounds::{bound_series, BoundKind, PhysicalConstants, SampleFits};
use physarum_bounds::growthfit::{BiSigmoidParams, GrowthCurve, SigmoidParams};
use physarum_bounds::ness::{detect_ness, intercept_consistency, tail_linear_fit};

fn main() -> physarum_bounds::Result<()> {
    let area = GrowthCurve::BiSigmoid(BiSigmoidParams::ordered(
        SigmoidParams::new(10.0, 0.6, 8.0),
        SigmoidParams::new(15.0, 0.4, 32.0),
    ));
    let reports = detect_ness(&area, 0.01)?;
    for r in &reports {
        println!(
            "phase {}: peak rate {:.3} cm²/h at {:.2} h, steady state from {:.2} h ({:.1}% of final area)",
            r.phase + 1,
            r.max_rate,
            r.t_max_rate,
            r.t_ness,
            100.0 * r.area_fraction_at_cutoff
        );
    }

    let c = PhysicalConstants::default();
    let grid: Vec<f64> = (0..=144).map(|i| i as f64 * 0.5).collect();
    let fits = SampleFits { area: &area, perimeter: &area, f_avg: 0.1 };
    let chem = bound_series(BoundKind::Chem, fits, &grid, &c)?;
    let tail = tail_linear_fit(&chem, reports.last().unwrap().t_ness)?;
    let check = intercept_consistency(&area, &tail)?;
    println!(
        "chemical bound tail: slope {:.3e} ops/h, R² {:.6}, x-intercept {:.2} h (expected {:.2} h, {:?})",
        tail.slope, tail.r_squared, check.observed, check.expected, check.regime
    );
    Ok(())
}
