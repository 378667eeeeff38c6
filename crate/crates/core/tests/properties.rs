use proptest::prelude::*;

use physarum_bounds::bounds::{BoundKind, BoundSeries};
use physarum_bounds::growthfit::{GrowthCurve, SigmoidParams};
use physarum_bounds::ingest::{segment_plate, BinaryMask, PlateImage, SegmentationConfig};
use physarum_bounds::morphometry::{box_count_dimension, circularity};
use physarum_bounds::ness::detect_ness;
use physarum_bounds::scaling::{allometric_fit, Zones};
use physarum_bounds::units::cm_per_pixel;

const SIDE: usize = 96;

fn blob_image(blobs: &[(f64, f64, f64)]) -> Vec<u8> {
    (0..SIDE * SIDE)
        .map(|i| {
            let (x, y) = ((i % SIDE) as f64 + 0.5, (i / SIDE) as f64 + 0.5);
            let inside = blobs.iter().any(|&(cx, cy, r)| (x - cx).powi(2) + (y - cy).powi(2) <= r * r);
            if inside {
                210
            } else {
                30
            }
        })
        .collect()
}

fn plate(pixels: Vec<u8>) -> PlateImage {
    PlateImage {
        width: SIDE,
        height: SIDE,
        pixels,
        dpi: 400.0,
        plate_center: (SIDE as f64 / 2.0, SIDE as f64 / 2.0),
        plate_radius: SIDE as f64 / 2.0,
        timestamp_h: 0.0,
    }
}

fn series(times: &[f64], values: Vec<f64>) -> BoundSeries {
    BoundSeries {
        kind: BoundKind::Chem,
        times: times.to_vec(),
        cumulative_ops: values,
        rate_ops_per_s: vec![0.0; times.len()],
        energy_j: vec![0.0; times.len()],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circularity_ignores_scale(a in 0.1f64..100.0, p in 1.2f64..200.0, k in 0.01f64..100.0) {
        let base = circularity(a, p).unwrap();
        let scaled = circularity(a * k * k, p * k).unwrap();
        prop_assert!((base - scaled).abs() <= 1e-12 * base.max(1.0));
    }

    #[test]
    fn area_is_monotone_under_inclusion(
        x0 in 0usize..40, y0 in 0usize..40, w in 1usize..40, h in 1usize..40,
        grow in 0usize..10,
    ) {
        let scale = cm_per_pixel(300.0);
        let inner = BinaryMask::from_fn(96, 96, scale, |x, y| (x0..x0 + w).contains(&x) && (y0..y0 + h).contains(&y)).unwrap();
        let outer = BinaryMask::from_fn(96, 96, scale, |x, y| {
            (x0..x0 + w + grow).contains(&x) && (y0..y0 + h + grow).contains(&y)
        })
        .unwrap();
        prop_assert!(inner.is_subset_of(&outer));
        prop_assert!(inner.area_cm2() <= outer.area_cm2());
    }

    #[test]
    fn box_count_ignores_aligned_shifts(
        pts in prop::collection::vec((0usize..200, 0usize..200), 20..200),
        sx in 0usize..4, sy in 0usize..4,
    ) {
        let sizes = [2, 4, 8, 16, 32];
        let shifted: Vec<(usize, usize)> = pts.iter().map(|&(x, y)| (x + 32 * sx, y + 32 * sy)).collect();
        match (box_count_dimension(&pts, &sizes), box_count_dimension(&shifted, &sizes)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.counts, b.counts);
                prop_assert_eq!(a.d_f, b.d_f);
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "only one of the fits failed"),
        }
    }

    #[test]
    fn segmentation_is_idempotent_without_median(
        blobs in prop::collection::vec((20.0f64..76.0, 20.0f64..76.0, 3.0f64..14.0), 1..4),
    ) {
        let cfg = SegmentationConfig { median_filter_radius: 0, dpi: 400.0, ..SegmentationConfig::default() };
        let first = segment_plate(&plate(blob_image(&blobs)), &cfg).unwrap();
        let redrawn: Vec<u8> = first.bits().iter().map(|&b| if b { 255 } else { 0 }).collect();
        let second = segment_plate(&plate(redrawn), &cfg).unwrap();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn allometric_slope_ignores_units(k_mass in 1e-3f64..1e3, k_ops in 1e-6f64..1e6, exponent in 0.5f64..2.0) {
        let times: Vec<f64> = (1..=30).map(|i| i as f64 * 0.5).collect();
        let mass: Vec<f64> = times.iter().map(|t| (0.2 * t).exp()).collect();
        let ops: Vec<f64> = mass.iter().map(|m| 1e30 * m.powf(exponent)).collect();
        let zones = Some(Zones { acclimation_end_h: 2.0, boundary_start_h: 13.0 });
        let base = allometric_fit(&series(&times, ops.clone()), &mass, zones, None).unwrap();
        let scaled_mass: Vec<f64> = mass.iter().map(|m| m * k_mass).collect();
        let scaled_ops: Vec<f64> = ops.iter().map(|v| v * k_ops).collect();
        let scaled = allometric_fit(&series(&times, scaled_ops), &scaled_mass, zones, None).unwrap();
        prop_assert!((base.slope - exponent).abs() < 1e-9);
        prop_assert!((base.slope - scaled.slope).abs() < 1e-9);
    }

    #[test]
    fn ness_time_ignores_amplitude(amp in 0.5f64..50.0, k in 0.1f64..10.0, rate in 0.2f64..1.5, mid in 3.0f64..15.0) {
        let a = detect_ness(&GrowthCurve::Sigmoid(SigmoidParams::new(amp, rate, mid)), 0.01).unwrap();
        let b = detect_ness(&GrowthCurve::Sigmoid(SigmoidParams::new(amp * k, rate, mid)), 0.01).unwrap();
        prop_assert_eq!(a.len(), 1);
        prop_assert_eq!(b.len(), 1);
        prop_assert!((a[0].t_ness - b[0].t_ness).abs() < 1e-6);
    }
}
