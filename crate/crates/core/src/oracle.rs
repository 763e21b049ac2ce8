//! Exact hard-shadow reference by ray casting, and image difference metrics.

use std::fmt::Write as _;

use nalgebra::{Point3, Vector3};
use rayon::prelude::*;

use crate::raster::{GBuffer, Image};
use crate::scene::{Aabb, Light, Scene};
use crate::{Error, Result};

/// Ray origins are pushed off the surface by this fraction of the scene diagonal.
pub const SELF_HIT_EPSILON: f64 = 1e-4;

struct Blocker {
    bounds: Aabb,
    triangles: Vec<[Point3<f64>; 3]>,
}

/// Ray/segment shadow test against every triangle of the scene.
///
/// Each covered pixel gets 1 when nothing lies between its surface point and
/// the light, 0 otherwise.
pub fn raycast_shadow(scene: &Scene, gbuffer: &GBuffer, light: &Light) -> Image {
    let blockers: Vec<Blocker> = scene
        .meshes
        .iter()
        .map(|m| Blocker {
            bounds: m.bounds(),
            triangles: m.triangle_vertices().collect(),
        })
        .collect();
    let eps = SELF_HIT_EPSILON * scene.bounds().diagonal();

    let mut img = Image::background(gbuffer.width, gbuffer.height);
    img.values
        .par_iter_mut()
        .zip(img.coverage.par_iter_mut())
        .zip(gbuffer.fragments.par_iter())
        .for_each(|((v, c), f)| {
            let Some(f) = f else { return };
            let (to_light, _) = light.towards_light(&f.world);
            let n = if f.normal.dot(&to_light) < 0.0 { -f.normal } else { f.normal };
            let origin = f.world + n * eps;
            let (dir, tmax) = light.towards_light(&origin);
            let blocked = blockers.iter().any(|b| {
                ray_hits_box(&origin, &dir, tmax, &b.bounds)
                    && b.triangles.iter().any(|t| ray_triangle(&origin, &dir, tmax, t).is_some())
            });
            *v = if blocked { 0.0 } else { 1.0 };
            *c = true;
        });
    img
}

fn ray_hits_box(o: &Point3<f64>, d: &Vector3<f64>, tmax: f64, b: &Aabb) -> bool {
    let (mut t0, mut t1) = (0.0f64, tmax);
    for k in 0..3 {
        let inv = 1.0 / d[k];
        let mut a = (b.min[k] - o[k]) * inv;
        let mut c = (b.max[k] - o[k]) * inv;
        if a > c {
            std::mem::swap(&mut a, &mut c);
        }
        // NaN (origin on a slab with a parallel ray) leaves the interval unchanged.
        t0 = t0.max(a);
        t1 = t1.min(c);
        if t0 > t1 {
            return false;
        }
    }
    true
}

/// Watertight ray/triangle intersection. Returns the hit distance in `(0, tmax)`.
///
/// Points on a shared edge count as inside for both triangles, so rays never
/// slip through a closed mesh.
pub fn ray_triangle(
    o: &Point3<f64>,
    d: &Vector3<f64>,
    tmax: f64,
    tri: &[Point3<f64>; 3],
) -> Option<f64> {
    let kz = d.iamax();
    let mut kx = (kz + 1) % 3;
    let mut ky = (kx + 1) % 3;
    if d[kz] < 0.0 {
        std::mem::swap(&mut kx, &mut ky);
    }
    let sx = d[kx] / d[kz];
    let sy = d[ky] / d[kz];
    let sz = 1.0 / d[kz];

    let rel = tri.map(|p| p - o);
    let shear = |v: &Vector3<f64>| (v[kx] - sx * v[kz], v[ky] - sy * v[kz]);
    let (ax, ay) = shear(&rel[0]);
    let (bx, by) = shear(&rel[1]);
    let (cx, cy) = shear(&rel[2]);

    let u = cx * by - cy * bx;
    let v = ax * cy - ay * cx;
    let w = bx * ay - by * ax;
    if (u < 0.0 || v < 0.0 || w < 0.0) && (u > 0.0 || v > 0.0 || w > 0.0) {
        return None;
    }
    let det = u + v + w;
    if det == 0.0 {
        return None;
    }
    let t = (u * sz * rel[0][kz] + v * sz * rel[1][kz] + w * sz * rel[2][kz]) / det;
    (t > 0.0 && t < tmax).then_some(t)
}

/// Difference between a rendered image and a reference, with the error
/// counted separately near the oracle's shadow boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffReport {
    /// Mean squared difference over all pixels.
    pub mse: f64,
    /// Pixels whose binarized visibility (lit iff >= 0.5) differs.
    pub misclassified: usize,
    /// Misclassified pixels closer than `band_radius` to an oracle boundary pixel.
    pub edge_band_misclassified: usize,
    pub band_radius: f64,
    pub pixel_count: usize,
}

impl DiffReport {
    pub const CSV_HEADER: &'static str =
        "mode,mse,misclassified,edge_band_misclassified,band_radius,pixel_count";

    pub fn csv_row(&self, mode: &str) -> String {
        format!(
            "{mode},{:.9},{},{},{},{}",
            self.mse, self.misclassified, self.edge_band_misclassified, self.band_radius, self.pixel_count
        )
    }

    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "mse={:.9}", self.mse);
        let _ = writeln!(s, "misclassified={}", self.misclassified);
        let _ = writeln!(s, "edge_band_misclassified={}", self.edge_band_misclassified);
        let _ = writeln!(s, "band_radius={}", self.band_radius);
        let _ = writeln!(s, "pixel_count={}", self.pixel_count);
        s
    }
}

#[inline]
fn lit(v: f32) -> bool {
    v >= 0.5
}

/// Covered pixels with a covered 4-neighbour of the opposite binarized visibility.
pub fn boundary_mask(img: &Image) -> Vec<bool> {
    let (w, h) = (img.width as usize, img.height as usize);
    let mut mask = vec![false; w * h];
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if !img.coverage[i] {
                continue;
            }
            let mut neighbours = [None; 4];
            if x > 0 {
                neighbours[0] = Some(i - 1);
            }
            if x + 1 < w {
                neighbours[1] = Some(i + 1);
            }
            if y > 0 {
                neighbours[2] = Some(i - w);
            }
            if y + 1 < h {
                neighbours[3] = Some(i + w);
            }
            mask[i] = neighbours
                .into_iter()
                .flatten()
                .any(|j| img.coverage[j] && lit(img.values[j]) != lit(img.values[i]));
        }
    }
    mask
}

/// Pixels at Euclidean distance strictly less than `radius` from a set pixel of `mask`.
pub fn dilate(mask: &[bool], width: u32, height: u32, radius: f64) -> Vec<bool> {
    let (w, h) = (width as i64, height as i64);
    let mut out = vec![false; mask.len()];
    if radius <= 0.0 {
        return out;
    }
    let r = radius.ceil() as i64;
    let mut stamp = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if ((dx * dx + dy * dy) as f64) < radius * radius {
                stamp.push((dx, dy));
            }
        }
    }
    for (i, _) in mask.iter().enumerate().filter(|(_, &m)| m) {
        let (x, y) = (i as i64 % w, i as i64 / w);
        for &(dx, dy) in &stamp {
            let (xx, yy) = (x + dx, y + dy);
            if xx >= 0 && xx < w && yy >= 0 && yy < h {
                out[(yy * w + xx) as usize] = true;
            }
        }
    }
    out
}

/// Compares `a` against `b`; the edge band is taken from `oracle`'s boundaries.
pub fn diff(a: &Image, b: &Image, oracle: &Image, band_radius: f64) -> Result<DiffReport> {
    if !a.same_size(b) || !a.same_size(oracle) {
        return Err(Error::validation(format!(
            "image sizes differ: {}x{}, {}x{}, {}x{}",
            a.width, a.height, b.width, b.height, oracle.width, oracle.height
        )));
    }
    if !(band_radius >= 0.0 && band_radius.is_finite()) {
        return Err(Error::validation(format!("band radius must be >= 0, got {band_radius}")));
    }
    let band = dilate(&boundary_mask(oracle), oracle.width, oracle.height, band_radius);
    let mut sq = 0.0f64;
    let mut mis = 0;
    let mut band_mis = 0;
    for i in 0..a.values.len() {
        let d = a.values[i] as f64 - b.values[i] as f64;
        sq += d * d;
        if lit(a.values[i]) != lit(b.values[i]) {
            mis += 1;
            if band[i] {
                band_mis += 1;
            }
        }
    }
    Ok(DiffReport {
        mse: sq / a.values.len().max(1) as f64,
        misclassified: mis,
        edge_band_misclassified: band_mis,
        band_radius,
        pixel_count: a.values.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img(values: &[f32], w: u32) -> Image {
        let mut i = Image::background(w, values.len() as u32 / w);
        i.values = values.to_vec();
        i.coverage = vec![true; values.len()];
        i
    }

    #[test]
    fn diff_examples() {
        let a = img(&[1.0; 100], 10);
        let r = diff(&a, &a, &a, 2.0).unwrap();
        assert_eq!((r.mse, r.misclassified), (0.0, 0));

        let mut b = a.clone();
        b.values[37] = 0.0;
        let r = diff(&a, &b, &a, 2.0).unwrap();
        assert!((r.mse - 0.01).abs() < 1e-12);
        assert_eq!(r.misclassified, 1);

        let mut c = a.clone();
        c.values[5] = 0.7;
        c.values[6] = 0.55;
        let r = diff(&c, &a, &a, 2.0).unwrap();
        assert_eq!(r.misclassified, 0);
        assert!(r.mse > 0.0);

        assert!(diff(&a, &img(&[1.0; 50], 10), &a, 1.0).is_err());
    }

    #[test]
    fn band_radius() {
        // Oracle: left half shadowed.
        let oracle = img(&(0..64).map(|i| if i % 8 < 4 { 0.0 } else { 1.0 }).collect::<Vec<_>>(), 8);
        let flipped = img(&oracle.values.iter().map(|v| 1.0 - v).collect::<Vec<_>>(), 8);
        let r = diff(&flipped, &oracle, &oracle, 0.0).unwrap();
        assert_eq!((r.misclassified, r.edge_band_misclassified), (64, 0));
        // Boundary columns 3 and 4; radius 1 covers exactly them.
        let r = diff(&flipped, &oracle, &oracle, 1.0).unwrap();
        assert_eq!(r.edge_band_misclassified, 16);
        let r = diff(&flipped, &oracle, &oracle, 2.0).unwrap();
        assert_eq!(r.edge_band_misclassified, 32);
    }

    #[test]
    fn serialization() {
        let r = DiffReport { mse: 0.5, misclassified: 3, edge_band_misclassified: 2, band_radius: 2.0, pixel_count: 9 };
        assert_eq!(r.csv_row("sm"), "sm,0.500000000,3,2,2,9");
        assert!(r.to_key_values().contains("edge_band_misclassified=2\n"));
        assert_eq!(DiffReport::CSV_HEADER.split(',').count(), r.csv_row("x").split(',').count());
    }

    #[test]
    fn watertight_shared_edge() {
        let a = Point3::new(-1.0, 0.0, -1.0);
        let b = Point3::new(1.0, 0.0, -1.0);
        let c = Point3::new(1.0, 0.0, 1.0);
        let d = Point3::new(-1.0, 0.0, 1.0);
        let dir = Vector3::new(0.0, 1.0, 0.0);
        // Straight through the shared diagonal.
        for s in [-0.5, 0.0, 0.3] {
            let o = Point3::new(s, -1.0, s);
            let hits = [ray_triangle(&o, &dir, f64::INFINITY, &[a, b, c]), ray_triangle(&o, &dir, f64::INFINITY, &[a, c, d])];
            assert!(hits.iter().any(|h| h.is_some()));
        }
        assert!(ray_triangle(&Point3::new(0.0, -1.0, 0.5), &dir, 0.5, &[a, c, d]).is_none());
        assert_eq!(ray_triangle(&Point3::new(-0.5, -1.0, 0.5), &dir, 2.0, &[a, c, d]), Some(1.0));
        assert!(ray_triangle(&Point3::new(-0.5, 1.0, 0.5), &dir, 2.0, &[a, c, d]).is_none());
    }
}
