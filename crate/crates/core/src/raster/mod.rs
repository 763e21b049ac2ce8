//! Deterministic software rasterization: the light depth pass, the camera
//! pass producing per-pixel light-space fragments, and per-pixel shading.

mod image;
mod shadow_map;
mod triangle;

use nalgebra::{Point3, Vector3};
use rayon::prelude::*;

use crate::rbsm::{shade_fragment, Algorithm, RbsmParams};
use crate::scene::{project_to_light, transform, LightCoord, Scene};
use crate::{Error, Result};
use triangle::{scan, setup_triangle, Setup};

pub use image::{Image, BACKGROUND_RGB};
pub use shadow_map::ShadowMap;

/// Surface seen through one camera pixel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fragment {
    pub world: Point3<f64>,
    /// Unit geometric normal of the visible triangle (arbitrary side).
    pub normal: Vector3<f64>,
    pub p: LightCoord,
}

/// Camera-pass output, row 0 at the top.
#[derive(Debug, Clone, PartialEq)]
pub struct GBuffer {
    pub width: u32,
    pub height: u32,
    pub fragments: Vec<Option<Fragment>>,
}

impl GBuffer {
    pub fn covered_count(&self) -> usize {
        self.fragments.iter().filter(|f| f.is_some()).count()
    }

    pub fn get(&self, x: u32, y: u32) -> Option<&Fragment> {
        self.fragments[y as usize * self.width as usize + x as usize].as_ref()
    }
}

fn scene_triangles(scene: &Scene) -> Vec<[Point3<f64>; 3]> {
    scene
        .meshes
        .iter()
        .flat_map(|m| m.triangle_vertices())
        .collect()
}

/// Light-view depth pass: per texel, the nearest normalized depth of all
/// triangles covering its centre, 1.0 where nothing projects.
pub fn rasterize_depth(scene: &Scene, width: u32, height: u32) -> Result<ShadowMap> {
    let vp = scene.light.view_projection;
    let mut sm = ShadowMap::cleared(width, height, vp)?;
    let mut setups = Vec::new();
    for (i, tri) in scene_triangles(scene).iter().enumerate() {
        setup_triangle(tri.map(|p| transform(&vp, &p)), width, height, i, &mut setups);
    }
    scan(&setups, width, height, &mut sm.depth, |d, _, z, _| {
        let z = z.clamp(0.0, 1.0) as f32;
        if z < *d {
            *d = z;
        }
    });
    Ok(sm)
}

#[derive(Clone, Copy)]
struct Hit<'a> {
    depth: f32,
    tri: Option<&'a Setup>,
    b: [f64; 3],
}

/// Camera pass: nearest surface per pixel and its light-space coordinate.
pub fn rasterize_camera(scene: &Scene) -> GBuffer {
    let cam = &scene.camera;
    let (w, h) = (cam.width, cam.height);
    let tris = scene_triangles(scene);
    let mut setups = Vec::new();
    for (i, tri) in tris.iter().enumerate() {
        setup_triangle(tri.map(|p| transform(&cam.view_projection, &p)), w, h, i, &mut setups);
    }
    let empty = Hit {
        depth: f32::INFINITY,
        tri: None,
        b: [0.0; 3],
    };
    let mut hits = vec![empty; w as usize * h as usize];
    scan(&setups, w, h, &mut hits, |hit, tri, z, b| {
        let z = z as f32;
        if z < hit.depth {
            *hit = Hit {
                depth: z,
                tri: Some(tri),
                b,
            };
        }
    });

    let light = &scene.light;
    let mut fragments = vec![None; hits.len()];
    fragments
        .par_chunks_mut(w as usize)
        .enumerate()
        .for_each(|(row, out)| {
            // Scan rows run bottom-up, image rows top-down.
            let j = h as usize - 1 - row;
            for (slot, hit) in out.iter_mut().zip(&hits[j * w as usize..][..w as usize]) {
                let Some(tri) = hit.tri else { continue };
                let [a, b, c] = tris[tri.source];
                let wt = tri.source_weights(&hit.b);
                let world = Point3::new(
                    wt[0] * a.x + wt[1] * b.x + wt[2] * c.x,
                    wt[0] * a.y + wt[1] * b.y + wt[2] * c.y,
                    wt[0] * a.z + wt[1] * b.z + wt[2] * c.z,
                );
                let normal = (b - a).cross(&(c - a)).normalize();
                *slot = Some(Fragment {
                    world,
                    normal,
                    p: project_to_light(&world, light),
                });
            }
        });
    GBuffer {
        width: w,
        height: h,
        fragments,
    }
}

/// Shades every covered pixel with `algorithm`.
///
/// Runs on the current rayon pool; results do not depend on the thread count.
pub fn shade_image(
    gbuffer: &GBuffer,
    sm: &ShadowMap,
    algorithm: Algorithm,
    params: &RbsmParams,
) -> Result<Image> {
    params.validate()?;
    if gbuffer.fragments.len() != gbuffer.width as usize * gbuffer.height as usize {
        return Err(Error::validation("gbuffer size does not match its dimensions"));
    }
    let mut img = Image::background(gbuffer.width, gbuffer.height);
    img.values
        .par_iter_mut()
        .zip(img.coverage.par_iter_mut())
        .zip(gbuffer.fragments.par_iter())
        .for_each(|((v, c), f)| {
            if let Some(f) = f {
                *v = shade_fragment(sm, &f.p, algorithm, params) as f32;
                *c = true;
            }
        });
    if algorithm == Algorithm::RbsmFilter && params.pcf_kernel > 1 {
        img = box_filter(&img, params.pcf_kernel);
    }
    Ok(img)
}

/// Mean over the covered pixels of each `kernel`×`kernel` window.
fn box_filter(img: &Image, kernel: u32) -> Image {
    let r = (kernel / 2) as i64;
    let (w, h) = (img.width as i64, img.height as i64);
    let mut out = img.clone();
    out.values
        .par_chunks_mut(w as usize)
        .enumerate()
        .for_each(|(y, row)| {
            for (x, v) in row.iter_mut().enumerate() {
                let i = y * w as usize + x;
                if !img.coverage[i] {
                    continue;
                }
                let (mut sum, mut n) = (0.0f64, 0u32);
                for yy in (y as i64 - r).max(0)..=(y as i64 + r).min(h - 1) {
                    for xx in (x as i64 - r).max(0)..=(x as i64 + r).min(w - 1) {
                        let j = (yy * w + xx) as usize;
                        if img.coverage[j] {
                            sum += img.values[j] as f64;
                            n += 1;
                        }
                    }
                }
                *v = (sum / n as f64) as f32;
            }
        });
    out
}
