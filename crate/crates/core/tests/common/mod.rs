//! Test-side oracles, written independently of the library code paths.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const HBAR: f64 = 1.054_571_817e-34;

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Plain trapezoid rule with `n` panels.
pub fn trapezoid<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + i as f64 * h)).sum();
    h * (0.5 * (f(a) + f(b)) + inner)
}

pub fn logistic(amp: f64, rate: f64, mid: f64, t: f64) -> f64 {
    amp / (1.0 + (-rate * (t - mid)).exp())
}

pub fn logistic_slope(amp: f64, rate: f64, mid: f64, t: f64) -> f64 {
    let e = (-rate * (t - mid)).exp();
    amp * rate * e / ((1.0 + e) * (1.0 + e))
}

/// `(amplitude, rate, midpoint)` triples drawn from ranges that cover the
/// experimentally plausible growth curves.
pub fn random_sigmoids(seed: u64, n: usize) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (rng.random_range(5.0..40.0), rng.random_range(0.2..1.2), rng.random_range(4.0..14.0)))
        .collect()
}

/// Pixels on a Koch curve of the given depth whose base spans `base` pixels,
/// shifted by `offset` on both axes.
pub fn koch_pixels(depth: u32, base: f64, offset: f64) -> Vec<(usize, usize)> {
    let mut pts = vec![(0.0_f64, 0.0_f64), (base, 0.0)];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(pts.len() * 4);
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let d = ((b.0 - a.0) / 3.0, (b.1 - a.1) / 3.0);
            let p1 = (a.0 + d.0, a.1 + d.1);
            let p3 = (a.0 + 2.0 * d.0, a.1 + 2.0 * d.1);
            let (s, c) = (std::f64::consts::FRAC_PI_3.sin(), std::f64::consts::FRAC_PI_3.cos());
            let p2 = (p1.0 + d.0 * c + d.1 * s, p1.1 - d.0 * s + d.1 * c);
            next.extend_from_slice(&[a, p1, p2, p3]);
        }
        next.push(*pts.last().unwrap());
        pts = next;
    }
    let ymin = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let mut out = Vec::new();
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
        let steps = (len * 4.0).ceil().max(1.0) as usize;
        for k in 0..=steps {
            let s = k as f64 / steps as f64;
            let x = a.0 + s * (b.0 - a.0) + offset;
            let y = a.1 + s * (b.1 - a.1) - ymin + offset;
            out.push((x.floor() as usize, y.floor() as usize));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}
