//! Box-counting dimension of a Koch curve and circularity of simple shapes.

use physarum_bounds::ingest::BinaryMask;
use physarum_bounds::morphometry::{box_count_dimension, default_box_sizes, measure_mask};
use physarum_bounds::units::cm_per_pixel;

fn koch(depth: u32, base: f64) -> Vec<(f64, f64)> {
    let mut pts = vec![(0.0, 0.0), (base, 0.0)];
    let (s, c) = (std::f64::consts::FRAC_PI_3.sin(), std::f64::consts::FRAC_PI_3.cos());
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let d = ((b.0 - a.0) / 3.0, (b.1 - a.1) / 3.0);
            let p1 = (a.0 + d.0, a.1 + d.1);
            let p2 = (p1.0 + d.0 * c + d.1 * s, p1.1 - d.0 * s + d.1 * c);
            next.extend_from_slice(&[a, p1, p2, (a.0 + 2.0 * d.0, a.1 + 2.0 * d.1)]);
        }
        next.push(*pts.last().unwrap());
        pts = next;
    }
    pts
}

fn main() -> physarum_bounds::Result<()> {
    let curve = koch(6, 729.0);
    let ymin = curve.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let mut pixels: Vec<(usize, usize)> = Vec::new();
    for w in curve.windows(2) {
        for k in 0..=4 {
            let t = k as f64 / 4.0;
            let x = w[0].0 + t * (w[1].0 - w[0].0) + 4.0;
            let y = w[0].1 + t * (w[1].1 - w[0].1) - ymin + 4.0;
            pixels.push((x as usize, y as usize));
        }
    }
    pixels.sort_unstable();
    pixels.dedup();
    let w = pixels.iter().map(|p| p.0).max().unwrap() + 5;
    let h = pixels.iter().map(|p| p.1).max().unwrap() + 5;
    let fit = box_count_dimension(&pixels, &default_box_sizes(w, h))?;
    println!("Koch curve (depth 6): d_f = {:.4} (exact ln4/ln3 = {:.4})", fit.d_f, 4f64.ln() / 3f64.ln());
    for (s, n) in fit.box_sizes.iter().zip(&fit.counts) {
        println!("  box {s:>3} px: {n} boxes");
    }

    let scale = cm_per_pixel(1600.0);
    let disk = BinaryMask::from_fn(420, 420, scale, |x, y| {
        let (dx, dy) = (x as f64 - 209.5, y as f64 - 209.5);
        dx * dx + dy * dy <= 180.0 * 180.0
    })?;
    let square = BinaryMask::from_fn(700, 700, scale, |x, y| (35..665).contains(&x) && (35..665).contains(&y))?;
    for (name, mask) in [("disk", &disk), ("1 cm square", &square)] {
        let m = measure_mask(0.0, mask)?;
        println!("{name}: area {:.4} cm², perimeter {:.4} cm, circularity {:.4}", m.area_cm2, m.perimeter_cm, m.circularity.unwrap());
    }
    Ok(())
}
