use serde::{Deserialize, Serialize};

use super::BinaryMask;
use crate::error::{Error, Result};
use crate::units::cm_per_pixel;

/// 8-bit grayscale scan of one plate at one time point.
#[derive(Debug, Clone, PartialEq)]
pub struct PlateImage {
    pub width: usize,
    pub height: usize,
    /// Row-major intensities.
    pub pixels: Vec<u8>,
    pub dpi: f64,
    /// Pixel coordinates of the plate centre (pixel centres sit at `i + 0.5`).
    pub plate_center: (f64, f64),
    pub plate_radius: f64,
    pub timestamp_h: f64,
}

impl PlateImage {
    pub fn scale(&self) -> f64 {
        cm_per_pixel(self.dpi)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pixels.len() != self.width * self.height {
            return Err(Error::InvalidInput(format!(
                "image has {} pixels, expected {}×{}",
                self.pixels.len(),
                self.width,
                self.height
            )));
        }
        if !(self.dpi > 0.0 && self.dpi.is_finite()) {
            return Err(Error::InvalidInput(format!("dpi must be positive, got {}", self.dpi)));
        }
        if !(self.plate_radius > 0.0) {
            return Err(Error::Geometry(format!("plate radius must be positive, got {}", self.plate_radius)));
        }
        let (cx, cy) = self.plate_center;
        let r = self.plate_radius;
        // Half a pixel of slack so the largest inscribed circle is accepted.
        let slack = 0.5;
        if cx - r < -slack || cy - r < -slack || cx + r > self.width as f64 + slack || cy + r > self.height as f64 + slack {
            return Err(Error::Geometry(format!(
                "plate circle (centre {cx}, {cy}; radius {r}) does not fit in a {}×{} image",
                self.width, self.height
            )));
        }
        Ok(())
    }
}

/// Whether the organism is brighter or darker than the agar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    #[default]
    Bright,
    Dark,
}

/// Plate circle in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateGeometry {
    pub center_x: f64,
    pub center_y: f64,
    pub radius: f64,
}

impl PlateGeometry {
    /// Largest circle that fits in the image, centred on it.
    pub fn inscribed(width: usize, height: usize) -> Self {
        Self {
            center_x: width as f64 / 2.0,
            center_y: height as f64 / 2.0,
            radius: width.min(height) as f64 / 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SegmentationConfig {
    /// Threshold inside `radius_fraction · plate_radius`.
    pub inner_threshold: u8,
    /// Threshold in the outer annulus; must not be below the inner one.
    pub outer_threshold: u8,
    pub radius_fraction: f64,
    /// Connected components smaller than this (cm²) are dropped.
    pub min_blob_area: f64,
    pub median_filter_radius: usize,
    pub polarity: Polarity,
    pub dpi: f64,
    /// Fixed plate circle; when absent the largest inscribed circle is used.
    pub plate: Option<PlateGeometry>,
}

impl Default for SegmentationConfig {
    fn default() -> Self {
        Self {
            inner_threshold: 100,
            outer_threshold: 140,
            radius_fraction: 0.85,
            min_blob_area: 0.01,
            median_filter_radius: 2,
            polarity: Polarity::Bright,
            dpi: 1600.0,
            plate: None,
        }
    }
}

impl SegmentationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius_fraction > 0.0 && self.radius_fraction < 1.0) {
            return Err(Error::InvalidInput(format!(
                "radius_fraction must lie in (0, 1), got {}",
                self.radius_fraction
            )));
        }
        if self.outer_threshold < self.inner_threshold {
            return Err(Error::InvalidInput(format!(
                "outer_threshold {} is below inner_threshold {}",
                self.outer_threshold, self.inner_threshold
            )));
        }
        if !(self.min_blob_area >= 0.0) {
            return Err(Error::InvalidInput("min_blob_area must be non-negative".into()));
        }
        if !(self.dpi > 0.0 && self.dpi.is_finite()) {
            return Err(Error::InvalidInput(format!("dpi must be positive, got {}", self.dpi)));
        }
        Ok(())
    }

    pub fn geometry_for(&self, width: usize, height: usize) -> PlateGeometry {
        self.plate.unwrap_or_else(|| PlateGeometry::inscribed(width, height))
    }
}

/// Two-zone thresholding of a plate scan.
///
/// The image is median filtered, then a pixel inside the plate is kept when
/// its (polarity-corrected) intensity reaches the inner threshold within
/// `radius_fraction` of the plate radius, or the outer threshold beyond it.
/// Components below `min_blob_area` are removed.
pub fn segment_plate(image: &PlateImage, cfg: &SegmentationConfig) -> Result<BinaryMask> {
    image.validate()?;
    cfg.validate()?;
    let (w, h) = (image.width, image.height);
    let filtered = median_filter(&image.pixels, w, h, cfg.median_filter_radius);
    let (cx, cy) = image.plate_center;
    let r_plate = image.plate_radius;
    let r_split = cfg.radius_fraction * r_plate;

    let scale = image.scale();
    let mut mask = BinaryMask::new(w, h, scale)?;
    for y in 0..h {
        for x in 0..w {
            let dx = x as f64 + 0.5 - cx;
            let dy = y as f64 + 0.5 - cy;
            let dist = (dx * dx + dy * dy).sqrt();
            if dist > r_plate {
                continue;
            }
            let raw = filtered[y * w + x];
            let v = match cfg.polarity {
                Polarity::Bright => raw,
                Polarity::Dark => 255 - raw,
            };
            let threshold = if dist <= r_split { cfg.inner_threshold } else { cfg.outer_threshold };
            if v >= threshold {
                mask.set(x, y, true);
            }
        }
    }

    let min_pixels = cfg.min_blob_area / (scale * scale);
    remove_small_components(&mut mask, min_pixels);
    if mask.is_empty() {
        log::warn!("segmentation at t = {} h produced an empty mask", image.timestamp_h);
    }
    Ok(mask)
}

/// Square-window median with edge replication, using a sliding histogram.
pub fn median_filter(pixels: &[u8], w: usize, h: usize, radius: usize) -> Vec<u8> {
    if radius == 0 || w == 0 || h == 0 {
        return pixels.to_vec();
    }
    let r = radius as isize;
    let at = |x: isize, y: isize| -> u8 {
        let xc = x.clamp(0, w as isize - 1) as usize;
        let yc = y.clamp(0, h as isize - 1) as usize;
        pixels[yc * w + xc]
    };
    let window = ((2 * radius + 1) * (2 * radius + 1)) as u32;
    let rank = window / 2 + 1;
    let mut out = vec![0u8; w * h];
    for y in 0..h as isize {
        let mut hist = [0u32; 256];
        for dy in -r..=r {
            for dx in -r..=r {
                hist[at(dx, y + dy) as usize] += 1;
            }
        }
        for x in 0..w as isize {
            if x > 0 {
                for dy in -r..=r {
                    hist[at(x - r - 1, y + dy) as usize] -= 1;
                    hist[at(x + r, y + dy) as usize] += 1;
                }
            }
            let mut seen = 0;
            for (value, count) in hist.iter().enumerate() {
                seen += count;
                if seen >= rank {
                    out[y as usize * w + x as usize] = value as u8;
                    break;
                }
            }
        }
    }
    out
}

/// Clears 8-connected components with fewer than `min_pixels` pixels.
pub fn remove_small_components(mask: &mut BinaryMask, min_pixels: f64) {
    if min_pixels <= 1.0 {
        return;
    }
    let (w, h) = (mask.width(), mask.height());
    let mut seen = vec![false; w * h];
    let mut stack = Vec::new();
    let mut component = Vec::new();
    for start in 0..w * h {
        if seen[start] || !mask.bits()[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        component.clear();
        while let Some(i) = stack.pop() {
            component.push(i);
            let (x, y) = ((i % w) as isize, (i / w) as isize);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    if mask.get_signed(nx, ny) {
                        let j = ny as usize * w + nx as usize;
                        if !seen[j] {
                            seen[j] = true;
                            stack.push(j);
                        }
                    }
                }
            }
        }
        if (component.len() as f64) < min_pixels {
            for &i in &component {
                mask.set(i % w, i / w, false);
            }
        }
    }
}
