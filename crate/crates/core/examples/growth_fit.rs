//! Fits single and two-phase logistic curves to noisy growth data.

use physarum_bounds::growthfit::{fit_growth, BiSigmoidParams, GrowthCurve, SigmoidParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> physarum_bounds::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let noise = Normal::new(1.0, 0.02).unwrap();
    let truths = [
        ("single", GrowthCurve::Sigmoid(SigmoidParams::new(20.0, 0.5, 10.0)), 24.0),
        (
            "two-phase",
            GrowthCurve::BiSigmoid(BiSigmoidParams::ordered(
                SigmoidParams::new(10.0, 0.6, 8.0),
                SigmoidParams::new(15.0, 0.4, 32.0),
            )),
            48.0,
        ),
    ];
    for (name, truth, t_end) in truths {
        let t: Vec<f64> = (0..=(t_end * 2.0) as usize).map(|i| i as f64 * 0.5).collect();
        let y: Vec<f64> = t.iter().map(|&ti| truth.eval(ti) * noise.sample(&mut rng)).collect();
        let fit = fit_growth(&t, &y)?;
        println!("{name}: model {:?}, R² {:.4}, RMSE {:.4}", fit.model, fit.r_squared, fit.rmse);
        println!("  true   {:?}", truth.phases());
        println!("  fitted {:?}", fit.growth_curve().unwrap().phases());
    }
    Ok(())
}
