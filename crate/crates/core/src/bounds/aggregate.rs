use serde::{Deserialize, Serialize};

use super::{BoundKind, BoundSeries};
use crate::error::{Error, Result};
use crate::stats::{mean, sample_sd};

/// Geometric-mean summary of several samples' bound series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupAggregate {
    pub kind: BoundKind,
    pub times: Vec<f64>,
    /// `exp(mean ln xᵢ)` over the positive values at each time; `None` where
    /// every sample is zero.
    pub geo_mean: Vec<Option<f64>>,
    /// `exp(sd(ln xᵢ)/√n)`, the multiplicative standard error.
    pub mult_se_factor: Vec<Option<f64>>,
    /// Positive samples contributing at each time.
    pub n_per_time: Vec<usize>,
    pub n_samples: usize,
}

/// Geometric mean and multiplicative standard error of the positive values.
///
/// Uses the sample (n − 1) standard deviation of the logs; a single value has
/// factor 1.
pub fn geometric_summary(values: &[f64]) -> Option<(f64, f64, usize)> {
    let logs: Vec<f64> = values.iter().filter(|v| **v > 0.0 && v.is_finite()).map(|v| v.ln()).collect();
    if logs.is_empty() {
        return None;
    }
    let n = logs.len();
    let gm = mean(&logs).exp();
    let se = (sample_sd(&logs) / (n as f64).sqrt()).exp();
    Some((gm, se, n))
}

/// Aggregates same-kind series sampled on a common time grid. Zeros (times
/// before a sample's first non-zero value) are dropped per time point.
pub fn aggregate_group(series: &[BoundSeries]) -> Result<GroupAggregate> {
    let first = series.first().ok_or_else(|| Error::InvalidInput("no series to aggregate".into()))?;
    for s in series {
        if s.kind != first.kind {
            return Err(Error::InvalidInput(format!("cannot aggregate {} with {}", s.kind, first.kind)));
        }
        let same_grid = s.times.len() == first.times.len()
            && s.times.iter().zip(&first.times).all(|(a, b)| (a - b).abs() < 1e-9);
        if !same_grid {
            return Err(Error::InvalidInput("series do not share a time grid".into()));
        }
    }
    let mut geo_mean = Vec::with_capacity(first.times.len());
    let mut mult_se_factor = Vec::with_capacity(first.times.len());
    let mut n_per_time = Vec::with_capacity(first.times.len());
    let mut column = Vec::with_capacity(series.len());
    for i in 0..first.times.len() {
        column.clear();
        column.extend(series.iter().map(|s| s.cumulative_ops[i]));
        match geometric_summary(&column) {
            Some((gm, se, n)) => {
                geo_mean.push(Some(gm));
                mult_se_factor.push(Some(se));
                n_per_time.push(n);
            }
            None => {
                geo_mean.push(None);
                mult_se_factor.push(None);
                n_per_time.push(0);
            }
        }
    }
    Ok(GroupAggregate {
        kind: first.kind,
        times: first.times.clone(),
        geo_mean,
        mult_se_factor,
        n_per_time,
        n_samples: series.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn series(values: &[f64]) -> BoundSeries {
        BoundSeries {
            kind: BoundKind::Chem,
            times: (0..values.len()).map(|i| i as f64).collect(),
            cumulative_ops: values.to_vec(),
            rate_ops_per_s: vec![0.0; values.len()],
            energy_j: vec![0.0; values.len()],
        }
    }

    #[test]
    fn hand_values() {
        let (gm, se, _) = geometric_summary(&[10.0, 1000.0]).unwrap();
        assert!((gm - 100.0).abs() < 1e-9);
        assert!(se > 1.0);
        let (gm, se, _) = geometric_summary(&[E, E.powi(3)]).unwrap();
        assert!((gm - E * E).abs() < 1e-12);
        assert!((se - E).abs() < 1e-12);
        let (gm, se, _) = geometric_summary(&[7.0, 7.0, 7.0]).unwrap();
        assert!((gm - 7.0).abs() < 1e-12);
        assert_eq!(se, 1.0);
    }

    #[test]
    fn zeros_dropped_and_all_zero_flagged() {
        let agg = aggregate_group(&[series(&[0.0, 0.0, 4.0]), series(&[0.0, 2.0, 16.0])]).unwrap();
        assert_eq!(agg.geo_mean[0], None);
        assert_eq!(agg.geo_mean[1], Some(2.0));
        assert_eq!(agg.n_per_time, vec![0, 1, 2]);
        assert!((agg.geo_mean[2].unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_grids_rejected() {
        assert!(aggregate_group(&[series(&[1.0, 2.0]), series(&[1.0, 2.0, 3.0])]).is_err());
        assert!(aggregate_group(&[]).is_err());
    }
}
