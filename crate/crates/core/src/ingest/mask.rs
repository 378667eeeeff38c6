use crate::error::{Error, Result};

/// Row-major boolean image with a physical pixel size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
    /// Centimetres per pixel edge, stored as bits to keep `Eq`.
    scale_bits: u64,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, scale_cm_per_px: f64) -> Result<Self> {
        if !(scale_cm_per_px > 0.0 && scale_cm_per_px.is_finite()) {
            return Err(Error::InvalidInput(format!("mask scale must be positive, got {scale_cm_per_px}")));
        }
        Ok(Self {
            width,
            height,
            bits: vec![false; width * height],
            scale_bits: scale_cm_per_px.to_bits(),
        })
    }

    pub fn from_fn<F: Fn(usize, usize) -> bool>(width: usize, height: usize, scale_cm_per_px: f64, f: F) -> Result<Self> {
        let mut m = Self::new(width, height, scale_cm_per_px)?;
        for y in 0..height {
            for x in 0..width {
                m.bits[y * width + x] = f(x, y);
            }
        }
        Ok(m)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn scale(&self) -> f64 {
        f64::from_bits(self.scale_bits)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    /// Out-of-range coordinates read as background.
    #[inline]
    pub fn get_signed(&self, x: isize, y: isize) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height && self.get(x as usize, y as usize)
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    pub fn area_cm2(&self) -> f64 {
        let s = self.scale();
        self.count() as f64 * s * s
    }

    /// True if every foreground pixel of `self` is foreground in `other`.
    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.bits.iter().zip(&other.bits).all(|(a, b)| !a || *b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::cm_per_pixel;

    #[test]
    fn run_length_is_exact() {
        let scale = cm_per_pixel(1600.0);
        let m = BinaryMask::from_fn(20, 3, scale, |x, y| y == 1 && x < 7).unwrap();
        assert_eq!(m.count(), 7);
        assert!((m.area_cm2() - 7.0 * scale * scale).abs() < 1e-18);
    }

    #[test]
    fn signed_access_outside_is_background() {
        let m = BinaryMask::from_fn(2, 2, 1.0, |_, _| true).unwrap();
        assert!(!m.get_signed(-1, 0));
        assert!(!m.get_signed(0, 2));
        assert!(m.get_signed(1, 1));
    }

    #[test]
    fn rejects_bad_scale() {
        assert!(BinaryMask::new(1, 1, 0.0).is_err());
    }
}
