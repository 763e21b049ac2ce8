use std::io::Write;
use std::path::Path;

use crate::{Error, Result};

/// RGB written for pixels no surface covers.
pub const BACKGROUND_RGB: [u8; 3] = [40, 60, 110];

/// Per-pixel visibility in `[0, 1]`, row 0 at the top.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub width: u32,
    pub height: u32,
    pub values: Vec<f32>,
    pub coverage: Vec<bool>,
}

impl Image {
    /// Uncovered image of the given size.
    pub fn background(width: u32, height: u32) -> Self {
        let n = width as usize * height as usize;
        Image {
            width,
            height,
            values: vec![0.0; n],
            coverage: vec![false; n],
        }
    }

    #[inline]
    pub fn index(&self, x: u32, y: u32) -> usize {
        y as usize * self.width as usize + x as usize
    }

    pub fn get(&self, x: u32, y: u32) -> Option<f32> {
        let i = self.index(x, y);
        self.coverage[i].then(|| self.values[i])
    }

    pub fn pixel_count(&self) -> usize {
        self.values.len()
    }

    pub fn covered_count(&self) -> usize {
        self.coverage.iter().filter(|&&c| c).count()
    }

    pub fn same_size(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn mirrored_x(&self) -> Image {
        let w = self.width as usize;
        let mut out = self.clone();
        for row in out.values.chunks_mut(w) {
            row.reverse();
        }
        for row in out.coverage.chunks_mut(w) {
            row.reverse();
        }
        out
    }

    /// Binary PPM (P6): visibility as gray, background as [`BACKGROUND_RGB`].
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.reserve(3 * self.values.len());
        for (v, &covered) in self.values.iter().zip(&self.coverage) {
            if covered {
                let g = (v.clamp(0.0, 1.0) * 255.0).round() as u8;
                out.extend_from_slice(&[g, g, g]);
            } else {
                out.extend_from_slice(&BACKGROUND_RGB);
            }
        }
        out
    }

    pub fn write_ppm(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        file.write_all(&self.to_ppm()).map_err(|e| Error::io(path, e))
    }
}
