use std::io::{Read, Write};
use std::path::Path;

use nalgebra::Matrix4;

use crate::rbsm::Texel;
use crate::scene::LightCoord;
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"SMAP";
const HEADER_LEN: usize = 16;

/// Depth buffer rendered from the light.
///
/// `depth` is row-major with row 0 at the bottom of light texture space
/// (texture coordinate `y = 0`), cleared to 1.0.
#[derive(Debug, Clone, PartialEq)]
pub struct ShadowMap {
    pub width: u32,
    pub height: u32,
    pub depth: Vec<f32>,
    pub light_view_projection: Matrix4<f64>,
}

impl ShadowMap {
    pub fn cleared(width: u32, height: u32, light_view_projection: Matrix4<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::validation(format!(
                "shadow map resolution must be positive, got {width}x{height}"
            )));
        }
        Ok(ShadowMap {
            width,
            height,
            depth: vec![1.0; width as usize * height as usize],
            light_view_projection,
        })
    }

    /// Wraps an existing depth grid (identity light transform).
    pub fn from_depths(width: u32, height: u32, depth: Vec<f32>) -> Result<Self> {
        let mut sm = ShadowMap::cleared(width, height, Matrix4::identity())?;
        if depth.len() != sm.depth.len() {
            return Err(Error::validation(format!(
                "expected {} depth values for {width}x{height}, got {}",
                sm.depth.len(),
                depth.len()
            )));
        }
        if let Some(bad) = depth.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return Err(Error::validation(format!("depth {bad} outside [0, 1]")));
        }
        sm.depth = depth;
        Ok(sm)
    }

    /// Size of one texel in texture coordinates.
    pub fn offset(&self) -> (f64, f64) {
        (1.0 / self.width as f64, 1.0 / self.height as f64)
    }

    /// Stored depth with out-of-range indices clamped to the border.
    #[inline]
    pub fn depth_at(&self, t: Texel) -> f64 {
        let x = t.x.clamp(0, self.width as i64 - 1) as usize;
        let y = t.y.clamp(0, self.height as i64 - 1) as usize;
        self.depth[y * self.width as usize + x] as f64
    }

    /// Nearest texel of a light-space coordinate and the position inside it.
    #[inline]
    pub fn locate(&self, p: &LightCoord) -> (Texel, (f64, f64)) {
        let axis = |u: f64, n: u32| {
            let t = u * n as f64;
            let i = t.floor();
            if i < 0.0 {
                (0, 0.0)
            } else if i >= n as f64 {
                (n as i64 - 1, 1.0)
            } else {
                (i as i64, t - i)
            }
        };
        let (x, fx) = axis(p.x, self.width);
        let (y, fy) = axis(p.y, self.height);
        (Texel::new(x, y), (fx, fy))
    }

    /// Horizontally mirrored copy.
    pub fn mirrored_x(&self) -> ShadowMap {
        let w = self.width as usize;
        let mut depth = self.depth.clone();
        for row in depth.chunks_mut(w) {
            row.reverse();
        }
        ShadowMap {
            depth,
            ..self.clone()
        }
    }

    /// Writes the debug dump: `SMAP`, width, height, reserved (all u32 LE),
    /// then the depths as little-endian f32 in row-major order.
    pub fn write_dump<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut buf = Vec::with_capacity(HEADER_LEN + 4 * self.depth.len());
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&self.width.to_le_bytes());
        buf.extend_from_slice(&self.height.to_le_bytes());
        buf.extend_from_slice(&0u32.to_le_bytes());
        for d in &self.depth {
            buf.extend_from_slice(&d.to_le_bytes());
        }
        out.write_all(&buf)
    }

    pub fn save_dump(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_dump(std::io::BufWriter::new(file))
            .map_err(|e| Error::io(path, e))
    }

    /// Reads a dump; the light transform is not stored and comes back as identity.
    pub fn read_dump<R: Read>(mut input: R) -> Result<Self> {
        let mut bytes = Vec::new();
        input
            .read_to_end(&mut bytes)
            .map_err(|e| Error::io("<shadow map dump>", e))?;
        if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
            return Err(Error::validation("not a shadow map dump"));
        }
        let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
        let (width, height) = (word(4), word(8));
        let body = &bytes[HEADER_LEN..];
        if body.len() != 4 * width as usize * height as usize {
            return Err(Error::validation(format!(
                "dump body has {} bytes, expected {} for {width}x{height}",
                body.len(),
                4 * width as usize * height as usize
            )));
        }
        let depth = body
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        ShadowMap::from_depths(width, height, depth)
    }
}
