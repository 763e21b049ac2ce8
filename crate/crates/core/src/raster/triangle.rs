//! Homogeneous-clip triangle setup and scan conversion.
//!
//! Screen coordinates are centred on the viewport (`ndc * size / 2`) with `y`
//! up, and sample `(i, j)` sits at `(i + 0.5 - w/2, j + 0.5 - h/2)`. Centring
//! makes a horizontal mirror of the input an exact mirror of the coverage.

use nalgebra::Vector4;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy)]
struct ClipVertex {
    clip: Vector4<f64>,
    /// Weights of the source triangle's vertices.
    weights: [f64; 3],
}

impl ClipVertex {
    fn lerp(&self, other: &ClipVertex, t: f64) -> ClipVertex {
        let mut weights = [0.0; 3];
        for (k, w) in weights.iter_mut().enumerate() {
            *w = self.weights[k] + t * (other.weights[k] - self.weights[k]);
        }
        ClipVertex {
            clip: self.clip + (other.clip - self.clip) * t,
            weights,
        }
    }
}

/// A screen-space triangle ready for scanning.
#[derive(Debug, Clone)]
pub(crate) struct Setup {
    /// Index of the source triangle.
    pub source: usize,
    pts: [[f64; 2]; 3],
    z: [f64; 3],
    inv_w: [f64; 3],
    weights: [[f64; 3]; 3],
    area: f64,
    inclusive: [bool; 3],
    cols: (i64, i64),
    rows: (i64, i64),
}

impl Setup {
    /// Perspective-correct weights of the source triangle's vertices from
    /// screen-space barycentrics `b`.
    pub fn source_weights(&self, b: &[f64; 3]) -> [f64; 3] {
        let mut pw = [0.0; 3];
        let mut sum = 0.0;
        for k in 0..3 {
            pw[k] = b[k] * self.inv_w[k];
            sum += pw[k];
        }
        let mut out = [0.0; 3];
        for k in 0..3 {
            let t = pw[k] / sum;
            for (s, o) in out.iter_mut().enumerate() {
                *o += t * self.weights[k][s];
            }
        }
        out
    }
}

/// Clips a triangle given in homogeneous clip space against `z >= 0` and
/// appends the resulting screen triangles to `out`.
pub(crate) fn setup_triangle(
    clip: [Vector4<f64>; 3],
    width: u32,
    height: u32,
    source: usize,
    out: &mut Vec<Setup>,
) {
    let unit = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let poly: Vec<ClipVertex> = (0..3)
        .map(|k| ClipVertex {
            clip: clip[k],
            weights: unit[k],
        })
        .collect();
    let poly = if poly.iter().all(|v| v.clip.z >= 0.0) {
        poly
    } else {
        clip_near(&poly)
    };
    for k in 1..poly.len().saturating_sub(1) {
        if let Some(s) = project([poly[0], poly[k], poly[k + 1]], width, height, source) {
            out.push(s);
        }
    }
}

fn clip_near(poly: &[ClipVertex]) -> Vec<ClipVertex> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let cur = &poly[i];
        let next = &poly[(i + 1) % poly.len()];
        let (cin, nin) = (cur.clip.z >= 0.0, next.clip.z >= 0.0);
        if cin {
            out.push(*cur);
        }
        if cin != nin {
            let t = cur.clip.z / (cur.clip.z - next.clip.z);
            out.push(cur.lerp(next, t));
        }
    }
    out
}

fn edge(a: &[f64; 2], b: &[f64; 2], p: &[f64; 2]) -> f64 {
    (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
}

fn project(mut v: [ClipVertex; 3], width: u32, height: u32, source: usize) -> Option<Setup> {
    let (hw, hh) = (width as f64 / 2.0, height as f64 / 2.0);
    let screen = |c: &Vector4<f64>| {
        if c.w <= 0.0 || !c.iter().all(|x| x.is_finite()) {
            None
        } else {
            Some([c.x / c.w * hw, c.y / c.w * hh])
        }
    };
    let mut pts = [screen(&v[0].clip)?, screen(&v[1].clip)?, screen(&v[2].clip)?];
    let mut area = edge(&pts[0], &pts[1], &pts[2]);
    if area == 0.0 || !area.is_finite() {
        return None;
    }
    if area < 0.0 {
        v.swap(1, 2);
        pts.swap(1, 2);
        area = -area;
    }
    let mut inclusive = [false; 3];
    for (k, inc) in inclusive.iter_mut().enumerate() {
        let a = pts[(k + 1) % 3];
        let b = pts[(k + 2) % 3];
        // Top-left rule for counter-clockwise triangles with y up.
        *inc = b[1] < a[1] || (a[1] == b[1] && b[0] < a[0]);
    }
    let (mut xmin, mut xmax, mut ymin, mut ymax) =
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in &pts {
        xmin = xmin.min(p[0]);
        xmax = xmax.max(p[0]);
        ymin = ymin.min(p[1]);
        ymax = ymax.max(p[1]);
    }
    let span = |lo: f64, hi: f64, half: f64, n: u32| {
        let a = ((lo + half - 0.5).floor() as i64).max(0);
        let b = ((hi + half - 0.5).ceil() as i64).min(n as i64 - 1);
        (a, b)
    };
    let cols = span(xmin, xmax, hw, width);
    let rows = span(ymin, ymax, hh, height);
    if cols.0 > cols.1 || rows.0 > rows.1 {
        return None;
    }
    Some(Setup {
        source,
        pts,
        z: v.map(|c| c.clip.z / c.clip.w),
        inv_w: v.map(|c| 1.0 / c.clip.w),
        weights: v.map(|c| c.weights),
        area,
        inclusive,
        cols,
        rows,
    })
}

/// Scans all triangles into a bottom-up row-major grid, in triangle order.
///
/// `visit(cell, setup, depth, b)` is called for every covered sample with the
/// screen-linear depth and barycentrics. Rows are processed in parallel bands;
/// each sample still sees the triangles in input order, so the result does not
/// depend on scheduling.
pub(crate) fn scan<'a, T, F>(tris: &'a [Setup], width: u32, height: u32, grid: &mut [T], visit: F)
where
    T: Send,
    F: Fn(&mut T, &'a Setup, f64, [f64; 3]) + Sync,
{
    let w = width as usize;
    let (hw, hh) = (width as f64 / 2.0, height as f64 / 2.0);
    const BAND: usize = 16;
    grid.par_chunks_mut(w * BAND)
        .enumerate()
        .for_each(|(band, cells)| {
            let j0 = (band * BAND) as i64;
            let j1 = j0 + (cells.len() / w) as i64 - 1;
            for tri in tris {
                let (r0, r1) = (tri.rows.0.max(j0), tri.rows.1.min(j1));
                for j in r0..=r1 {
                    let py = j as f64 + 0.5 - hh;
                    let row = &mut cells[(j - j0) as usize * w..][..w];
                    for i in tri.cols.0..=tri.cols.1 {
                        let p = [i as f64 + 0.5 - hw, py];
                        let mut e = [0.0; 3];
                        let mut inside = true;
                        for k in 0..3 {
                            e[k] = edge(&tri.pts[(k + 1) % 3], &tri.pts[(k + 2) % 3], &p);
                            if !(e[k] > 0.0 || (e[k] == 0.0 && tri.inclusive[k])) {
                                inside = false;
                                break;
                            }
                        }
                        if !inside {
                            continue;
                        }
                        let b = e.map(|x| x / tri.area);
                        let depth = b[0] * tri.z[0] + b[1] * tri.z[1] + b[2] * tri.z[2];
                        visit(&mut row[i as usize], tri, depth, b);
                    }
                }
            }
        });
}
