use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::BinaryMask;
use crate::stats::ols;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractalFit {
    /// Slope magnitude clamped to `[1, 2]`.
    pub d_f: f64,
    /// Slope magnitude before clamping.
    pub raw_d_f: f64,
    pub clamped: bool,
    /// Natural-log intercept of `ln N(r) = −d_f ln r + ln k`.
    pub log_k: f64,
    pub r_squared: f64,
    pub box_sizes: Vec<usize>,
    pub counts: Vec<usize>,
}

/// Foreground pixels with at least one 4-neighbour in the background
/// (the image border counts as background).
pub fn boundary_pixels(mask: &BinaryMask) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if !mask.get(x, y) {
                continue;
            }
            let (xi, yi) = (x as isize, y as isize);
            let edge = !mask.get_signed(xi - 1, yi)
                || !mask.get_signed(xi + 1, yi)
                || !mask.get_signed(xi, yi - 1)
                || !mask.get_signed(xi, yi + 1);
            if edge {
                out.push((x, y));
            }
        }
    }
    out
}

/// Powers of two from 2 up to a quarter of the shorter image side.
pub fn default_box_sizes(width: usize, height: usize) -> Vec<usize> {
    let limit = width.min(height) / 4;
    std::iter::successors(Some(2usize), |s| Some(s * 2))
        .take_while(|s| *s <= limit)
        .collect()
}

/// Box-counting dimension of a pixel set on grids anchored at the origin.
pub fn box_count_dimension(points: &[(usize, usize)], box_sizes: &[usize]) -> Result<FractalFit> {
    if points.is_empty() {
        return Err(Error::InvalidInput("box counting needs a non-empty boundary".into()));
    }
    let mut sizes: Vec<usize> = box_sizes.iter().copied().filter(|s| *s > 0).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "box counting needs at least two distinct box sizes, got {box_sizes:?}"
        )));
    }
    if sizes.len() < 4 {
        log::warn!("only {} box sizes available; fractal dimension will be coarse", sizes.len());
    }

    let counts: Vec<usize> = sizes
        .iter()
        .map(|&r| points.iter().map(|&(x, y)| (x / r, y / r)).collect::<HashSet<_>>().len())
        .collect();
    if counts.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::Degenerate(format!("all box counts equal ({})", counts[0])));
    }

    let log_r: Vec<f64> = sizes.iter().map(|&r| (r as f64).ln()).collect();
    let log_n: Vec<f64> = counts.iter().map(|&n| (n as f64).ln()).collect();
    let fit = ols(&log_r, &log_n).ok_or_else(|| Error::Degenerate("box-count regression failed".into()))?;
    let raw = -fit.slope;
    let d_f = raw.clamp(1.0, 2.0);
    Ok(FractalFit {
        d_f,
        raw_d_f: raw,
        clamped: d_f != raw,
        log_k: fit.intercept,
        r_squared: fit.r_squared,
        box_sizes: sizes,
        counts,
    })
}

/// Box-counting dimension of a mask's boundary with the default ladder.
pub fn mask_fractal_dimension(mask: &BinaryMask) -> Result<FractalFit> {
    let sizes = default_box_sizes(mask.width(), mask.height());
    box_count_dimension(&boundary_pixels(mask), &sizes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_line_is_one_dimensional() {
        let pts: Vec<_> = (0..512).map(|x| (x, 7)).collect();
        let fit = box_count_dimension(&pts, &[2, 4, 8, 16, 32]).unwrap();
        assert!((fit.d_f - 1.0).abs() < 0.05, "{fit:?}");
        assert!(fit.r_squared > 0.99);
    }

    #[test]
    fn filled_square_counts_as_two_dimensional() {
        let pts: Vec<_> = (0..256).flat_map(|y| (0..256).map(move |x| (x, y))).collect();
        let fit = box_count_dimension(&pts, &[1, 2, 4, 8, 16]).unwrap();
        assert!((fit.raw_d_f - 2.0).abs() < 1e-12);
    }

    #[test]
    fn translation_by_box_multiple_is_invariant() {
        let pts: Vec<_> = (0..300).map(|i| (i, (i * i / 97) % 50)).collect();
        let sizes = [2, 4, 8, 16];
        let a = box_count_dimension(&pts, &sizes).unwrap();
        let shifted: Vec<_> = pts.iter().map(|&(x, y)| (x + 32, y + 64)).collect();
        let b = box_count_dimension(&shifted, &sizes).unwrap();
        assert_eq!(a.counts, b.counts);
    }

    #[test]
    fn equal_counts_are_degenerate() {
        let err = box_count_dimension(&[(0, 0)], &[2, 4, 8]).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
    }

    #[test]
    fn ladder() {
        assert_eq!(default_box_sizes(737, 220), vec![2, 4, 8, 16, 32]);
        assert!(default_box_sizes(7, 7).is_empty());
    }

    #[test]
    fn boundary_of_block_is_ring() {
        let m = BinaryMask::from_fn(10, 10, 1.0, |x, y| (2..7).contains(&x) && (2..7).contains(&y)).unwrap();
        assert_eq!(boundary_pixels(&m).len(), 16);
    }
}
