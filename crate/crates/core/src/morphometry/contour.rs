//! Sub-pixel boundary length by marching squares.
//!
//! Tracing the raw 0/1 mask at level ½ produces a path made of unit and
//! 45° half-diagonal steps, which overestimates the length of curved edges
//! by about 5.5% on average. The mask is therefore blurred with a unit
//! Gaussian first; the interpolated ½-contour of the blurred field follows
//! curved and straight edges to within about 1%.

use crate::error::{Error, Result};
use crate::ingest::BinaryMask;

const SIGMA_PX: f64 = 1.0;
const KERNEL_RADIUS: usize = 3;
/// Border added on every side so that all contours close.
const PAD: usize = KERNEL_RADIUS + 1;

/// Length of all outer and inner contours, in cm.
pub fn boundary_length(mask: &BinaryMask) -> Result<f64> {
    Ok(boundary_length_px(mask)? * mask.scale())
}

/// Length of all contours in pixel units.
pub fn boundary_length_px(mask: &BinaryMask) -> Result<f64> {
    if mask.is_empty() {
        return Err(Error::InvalidInput("cannot measure the boundary of an empty mask".into()));
    }
    let (field, w, h) = padded_field(mask);
    let smoothed = gaussian_blur(&field, w, h);
    let length = marching_squares_length(&smoothed, w, h);
    if length > 0.0 {
        return Ok(length);
    }
    // Specks smaller than the blur kernel vanish after smoothing; measure
    // them on the raw mask instead.
    Ok(marching_squares_length(&field, w, h))
}

fn padded_field(mask: &BinaryMask) -> (Vec<f32>, usize, usize) {
    let w = mask.width() + 2 * PAD;
    let h = mask.height() + 2 * PAD;
    let mut field = vec![0.0f32; w * h];
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if mask.get(x, y) {
                field[(y + PAD) * w + x + PAD] = 1.0;
            }
        }
    }
    (field, w, h)
}

fn gaussian_blur(field: &[f32], w: usize, h: usize) -> Vec<f32> {
    let mut kernel: Vec<f32> = (0..=2 * KERNEL_RADIUS)
        .map(|i| {
            let d = i as f64 - KERNEL_RADIUS as f64;
            (-d * d / (2.0 * SIGMA_PX * SIGMA_PX)).exp() as f32
        })
        .collect();
    let norm: f32 = kernel.iter().sum();
    kernel.iter_mut().for_each(|k| *k /= norm);
    let r = KERNEL_RADIUS as isize;

    let mut tmp = vec![0.0f32; w * h];
    for y in 0..h {
        let row = &field[y * w..(y + 1) * w];
        for x in 0..w {
            let mut acc = 0.0;
            for (i, k) in kernel.iter().enumerate() {
                let xx = x as isize + i as isize - r;
                if xx >= 0 && (xx as usize) < w {
                    acc += k * row[xx as usize];
                }
            }
            tmp[y * w + x] = acc;
        }
    }
    let mut out = vec![0.0f32; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (i, k) in kernel.iter().enumerate() {
                let yy = y as isize + i as isize - r;
                if yy >= 0 && (yy as usize) < h {
                    acc += k * tmp[yy as usize * w + x];
                }
            }
            out[y * w + x] = acc;
        }
    }
    out
}

/// Sum of the ½-isoline segment lengths over every 2×2 cell.
fn marching_squares_length(field: &[f32], w: usize, h: usize) -> f64 {
    const LEVEL: f64 = 0.5;
    let mut total = 0.0;
    for y in 0..h - 1 {
        for x in 0..w - 1 {
            // Corners: top-left, top-right, bottom-right, bottom-left.
            let v = [
                field[y * w + x] as f64,
                field[y * w + x + 1] as f64,
                field[(y + 1) * w + x + 1] as f64,
                field[(y + 1) * w + x] as f64,
            ];
            let inside = v.map(|c| c >= LEVEL);
            if inside.iter().all(|&b| b) || inside.iter().all(|&b| !b) {
                continue;
            }
            let corner = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
            // Edge e joins corner e and corner (e + 1) % 4.
            let crossing = |e: usize| -> Option<(f64, f64)> {
                let (a, b) = (e, (e + 1) % 4);
                if inside[a] == inside[b] {
                    return None;
                }
                let t = (LEVEL - v[a]) / (v[b] - v[a]);
                let (pa, pb) = (corner[a], corner[b]);
                Some((pa.0 + t * (pb.0 - pa.0), pa.1 + t * (pb.1 - pa.1)))
            };
            let pts: Vec<(usize, (f64, f64))> = (0..4).filter_map(|e| crossing(e).map(|p| (e, p))).collect();
            let dist = |p: (f64, f64), q: (f64, f64)| ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt();
            if pts.len() == 2 {
                total += dist(pts[0].1, pts[1].1);
            } else if pts.len() == 4 {
                // Saddle: the centre value decides which diagonal is connected.
                let centre_inside = v.iter().sum::<f64>() / 4.0 >= LEVEL;
                let p = |e: usize| pts[e].1;
                // Corner 0 sits between edges 3 and 0, corner 1 between 0 and 1, ...
                let cut_corner_0_and_2 = centre_inside != inside[0];
                if cut_corner_0_and_2 {
                    total += dist(p(3), p(0)) + dist(p(1), p(2));
                } else {
                    total += dist(p(0), p(1)) + dist(p(2), p(3));
                }
            }
        }
    }
    total
}
