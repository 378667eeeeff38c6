//! Minimal SVG 1.1 plots of group bounds and allometry.

use std::fmt::Write;

use super::analyze::GroupReport;
use crate::bounds::BoundKind;
use crate::scaling::AllometryReport;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 460.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 110.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 50.0;

fn colour(kind: BoundKind) -> &'static str {
    match kind {
        BoundKind::Hydro => "#1f77b4",
        BoundKind::Chem => "#d62728",
        BoundKind::Ke => "#2ca02c",
        BoundKind::Qo => "#9467bd",
        BoundKind::KeNumeric => "#8c564b",
    }
}

/// Linear map from data coordinates to the plotting area.
struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        let widen = |(a, b): (f64, f64)| if b > a { (a, b) } else { (a - 0.5, a + 0.5) };
        Self { x: widen(x), y: widen(y) }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_L + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_B - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - MARGIN_T - MARGIN_B)
    }

    fn points(&self, pts: impl Iterator<Item = (f64, f64)>) -> String {
        pts.map(|(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn header(title: &str, xlabel: &str, ylabel: &str, frame: &Frame) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (l, r) = (MARGIN_L, WIDTH - MARGIN_R);
    let (t, b) = (MARGIN_T, HEIGHT - MARGIN_B);
    let _ = writeln!(s, r#"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="black"/>"#, r - l, b - t);
    let _ = writeln!(s, r#"<text x="{}" y="18" text-anchor="middle">{}</text>"#, (l + r) / 2.0, escape(title));
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (l + r) / 2.0, HEIGHT - 10.0, escape(xlabel));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        (t + b) / 2.0,
        (t + b) / 2.0,
        escape(ylabel)
    );
    for i in 0..=4 {
        let fx = frame.x.0 + (frame.x.1 - frame.x.0) * i as f64 / 4.0;
        let fy = frame.y.0 + (frame.y.1 - frame.y.0) * i as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#, frame.px(fx), b + 16.0, tick(fx));
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, l - 6.0, frame.py(fy) + 4.0, tick(fy));
    }
    s
}

fn tick(v: f64) -> String {
    if v.abs() >= 100.0 || v == v.round() {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Geometric-mean bounds on a log axis with ±1 multiplicative SE bands,
/// NESS times as dotted lines and tail fits dashed.
pub fn bounds_plot(g: &GroupReport) -> String {
    let series: Vec<_> = g.bounds.iter().filter(|b| b.kind != BoundKind::KeNumeric).collect();
    let logs = |i: usize, b: &crate::bounds::GroupAggregate| b.geo_mean[i].map(|v| (b.times[i], v.log10()));
    let all: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|b| (0..b.times.len()).filter_map(move |i| logs(i, b)))
        .collect();
    let x = all.iter().map(|p| p.0).fold((f64::INFINITY, f64::NEG_INFINITY), |a, v| (a.0.min(v), a.1.max(v)));
    let y = all.iter().map(|p| p.1).fold((f64::INFINITY, f64::NEG_INFINITY), |a, v| (a.0.min(v), a.1.max(v)));
    let frame = if all.is_empty() {
        Frame::new((0.0, 1.0), (0.0, 1.0))
    } else {
        Frame::new((x.0, x.1), (y.0.floor(), y.1.ceil()))
    };
    let mut s = header(&format!("Group {}", g.group), "time (h)", "log10 cumulative operations", &frame);

    for b in &series {
        let c = colour(b.kind);
        let idx: Vec<usize> = (0..b.times.len()).filter(|&i| b.geo_mean[i].is_some()).collect();
        let band = |i: usize, up: bool| {
            let gm = b.geo_mean[i].unwrap();
            let f = b.mult_se_factor[i].unwrap_or(1.0);
            (b.times[i], if up { (gm * f).log10() } else { (gm / f).log10() })
        };
        let upper = idx.iter().map(|&i| band(i, true));
        let lower = idx.iter().rev().map(|&i| band(i, false));
        let _ = writeln!(s, r#"<polygon points="{}" fill="{c}" fill-opacity="0.15" stroke="none"/>"#, frame.points(upper.chain(lower)));
        let line = idx.iter().filter_map(|&i| logs(i, b));
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{c}" stroke-width="1.5"/>"#, frame.points(line));
        if let Some(&last) = idx.last() {
            let (tx, ty) = logs(last, b).unwrap();
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" fill="{c}">{}</text>"#, frame.px(tx) + 6.0, frame.py(ty) + 4.0, b.kind);
        }
    }
    for tail in &g.tails {
        let Some(fit) = tail.fit else { continue };
        let pts: Vec<(f64, f64)> = (0..=20)
            .map(|k| fit.window.0 + (fit.window.1 - fit.window.0) * k as f64 / 20.0)
            .map(|t| (t, fit.slope * t + fit.intercept))
            .filter(|(_, v)| *v > 0.0)
            .map(|(t, v)| (t, v.log10()))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-dasharray="6,4"/>"#,
            frame.points(pts.into_iter()),
            colour(tail.kind)
        );
    }
    for t in &g.t_ness_area {
        if *t >= frame.x.0 && *t <= frame.x.1 {
            let px = frame.px(*t);
            let _ = writeln!(
                s,
                r#"<line x1="{px:.2}" y1="{MARGIN_T}" x2="{px:.2}" y2="{}" stroke="gray" stroke-dasharray="2,3"/>"#,
                HEIGHT - MARGIN_B
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Log-log scatter with shaded acclimation and boundary zones and the
/// fitted line over the intermediate zone.
pub fn allometry_plot(a: &AllometryReport) -> String {
    let x = a.points.iter().map(|p| p.0).fold((f64::INFINITY, f64::NEG_INFINITY), |r, v| (r.0.min(v), r.1.max(v)));
    let y = a.points.iter().map(|p| p.1).fold((f64::INFINITY, f64::NEG_INFINITY), |r, v| (r.0.min(v), r.1.max(v)));
    let frame = Frame::new(x, y);
    let title = format!(
        "{}: slope {:.3}, R² {:.3}",
        a.group.as_deref().unwrap_or("group"),
        a.slope,
        a.r_squared
    );
    let mut s = header(&title, "log10 M/M0", "log10 N_chem", &frame);

    let xs_at = |pred: &dyn Fn(f64) -> bool| -> Option<(f64, f64)> {
        let v: Vec<f64> = a.times.iter().zip(&a.points).filter(|(t, _)| pred(**t)).map(|(_, p)| p.0).collect();
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo <= hi).then_some((lo, hi))
    };
    let zones = [
        (xs_at(&|t| t <= a.zones.acclimation_end_h), "#f4b6c2"),
        (xs_at(&|t| t >= a.zones.boundary_start_h), "#cccccc"),
    ];
    for (span, fill) in zones.iter() {
        if let Some((lo, hi)) = span {
            let (l, r) = (frame.px(*lo), frame.px(*hi));
            let _ = writeln!(
                s,
                r#"<rect x="{l:.2}" y="{MARGIN_T}" width="{:.2}" height="{}" fill="{fill}" fill-opacity="0.4"/>"#,
                (r - l).max(1.0),
                HEIGHT - MARGIN_T - MARGIN_B
            );
        }
    }
    for (px, py) in &a.points {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="black"/>"#, frame.px(*px), frame.py(*py));
    }
    if let Some((lo, hi)) = xs_at(&|t| t >= a.zones.acclimation_end_h && t <= a.zones.boundary_start_h) {
        let line = [lo, hi].into_iter().map(|v| (v, a.slope * v + a.intercept));
        let _ = writeln!(s, r##"<polyline points="{}" fill="none" stroke="#d62728" stroke-width="2"/>"##, frame.points(line));
    }
    s.push_str("</svg>\n");
    s
}
