//! Damped Gauss–Newton (Levenberg–Marquardt) on small dense problems.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct LmSettings {
    pub max_iterations: usize,
    /// Stop when an accepted step lowers the cost by less than this fraction.
    pub rel_cost_tol: f64,
    /// Stop once the cost drops below this absolute value.
    pub cost_floor: f64,
}

impl Default for LmSettings {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            rel_cost_tol: 1e-10,
            cost_floor: 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LmOutcome {
    pub params: Vec<f64>,
    /// Half the sum of squared residuals.
    pub cost: f64,
    pub iterations: usize,
}

/// Minimises `½‖r(x)‖²`. `eval` fills the residual vector and the Jacobian
/// `∂r/∂x` (rows = residuals) for the given parameters.
pub fn minimize<F>(eval: F, x0: &[f64], n_residuals: usize, settings: LmSettings) -> Result<LmOutcome>
where
    F: Fn(&[f64], &mut DVector<f64>, &mut DMatrix<f64>),
{
    let n = x0.len();
    let mut x = DVector::from_column_slice(x0);
    let mut r = DVector::zeros(n_residuals);
    let mut jac = DMatrix::zeros(n_residuals, n);
    eval(x.as_slice(), &mut r, &mut jac);
    let mut cost = 0.5 * r.norm_squared();
    if !cost.is_finite() {
        return Err(Error::InvalidInput("initial guess gives non-finite residuals".into()));
    }

    let mut lambda = 1e-3;
    let mut r_try = DVector::zeros(n_residuals);
    let mut jac_try = DMatrix::zeros(n_residuals, n);

    for iteration in 1..=settings.max_iterations {
        if cost <= settings.cost_floor {
            return Ok(done(x, cost, iteration - 1));
        }
        let jt = jac.transpose();
        let h = &jt * &jac;
        let g = &jt * &r;
        let max_diag = (0..n).map(|i| h[(i, i)]).fold(0.0_f64, f64::max);
        let diag_floor = 1e-12 * max_diag.max(f64::MIN_POSITIVE);

        loop {
            let mut a = h.clone();
            for i in 0..n {
                a[(i, i)] += lambda * h[(i, i)].max(diag_floor);
            }
            let step = match a.cholesky() {
                Some(ch) => ch.solve(&(-&g)),
                None => {
                    lambda *= 10.0;
                    if lambda > 1e20 {
                        return Ok(done(x, cost, iteration));
                    }
                    continue;
                }
            };
            let x_try = &x + &step;
            eval(x_try.as_slice(), &mut r_try, &mut jac_try);
            let cost_try = 0.5 * r_try.norm_squared();
            if cost_try.is_finite() && cost_try < cost {
                let decrease = cost - cost_try;
                let tiny_step = step.norm() <= 1e-13 * (x.norm() + 1e-13);
                x = x_try;
                std::mem::swap(&mut r, &mut r_try);
                std::mem::swap(&mut jac, &mut jac_try);
                cost = cost_try;
                lambda = (lambda / 10.0).max(1e-15);
                if decrease <= settings.rel_cost_tol * (cost + decrease) || tiny_step {
                    return Ok(done(x, cost, iteration));
                }
                break;
            }
            lambda *= 10.0;
            if lambda > 1e20 {
                // No descent direction left at machine precision.
                return Ok(done(x, cost, iteration));
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: settings.max_iterations,
        best_cost: cost,
        best_params: x.as_slice().to_vec(),
    })
}

fn done(x: DVector<f64>, cost: f64, iterations: usize) -> LmOutcome {
    LmOutcome {
        params: x.as_slice().to_vec(),
        cost,
        iterations,
    }
}
