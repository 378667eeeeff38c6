//! Segments a synthetic plate scan: one bright organism, a few specks of
//! debris and some sensor noise.

use physarum_bounds::ingest::{segment_plate, PlateImage, SegmentationConfig};
use physarum_bounds::morphometry::measure_mask;

fn main() -> physarum_bounds::Result<()> {
    let side = 400;
    let mut pixels = vec![25u8; side * side];
    for y in 0..side {
        for x in 0..side {
            let (dx, dy) = (x as f64 - 200.0, y as f64 - 190.0);
            let r = (dx * dx + dy * dy).sqrt();
            let lobes = 70.0 + 18.0 * (5.0 * dy.atan2(dx)).cos();
            let noise = ((x * 31 + y * 17) % 23) as u8;
            pixels[y * side + x] = if r < lobes { 200 + noise } else { 25 + noise };
        }
    }
    for &(x, y) in &[(60, 200), (330, 80), (120, 340)] {
        pixels[y * side + x] = 255;
    }

    let cfg = SegmentationConfig { dpi: 600.0, ..SegmentationConfig::default() };
    let image = PlateImage {
        width: side,
        height: side,
        pixels,
        dpi: cfg.dpi,
        plate_center: (200.0, 200.0),
        plate_radius: 200.0,
        timestamp_h: 6.0,
    };
    let mask = segment_plate(&image, &cfg)?;
    let m = measure_mask(image.timestamp_h, &mask)?;
    println!("foreground pixels: {}", mask.count());
    println!("area {:.3} cm², perimeter {:.3} cm", m.area_cm2, m.perimeter_cm);
    println!("circularity {:?}, fractal dimension {:?}", m.circularity, m.fractal_dim);
    Ok(())
}
