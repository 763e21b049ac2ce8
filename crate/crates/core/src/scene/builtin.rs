//! Procedural scenes that need no mesh assets.

use nalgebra::{Point3, Vector3};

use super::{CameraParams, LightKind, Mesh, Scene};
use crate::rbsm::{Algorithm, RbsmParams};
use crate::{Error, Result};

pub const BUILTIN_SCENES: [&str; 3] = ["staircase", "bar-grid", "fence-like"];

/// Builds a named procedural scene.
pub fn builtin_scene(name: &str) -> Result<Scene> {
    match name {
        "staircase" => staircase(),
        "bar-grid" => bar_grid(),
        "fence-like" => fence_like(),
        other => Err(Error::validation(format!(
            "unknown builtin scene `{other}` (available: {})",
            BUILTIN_SCENES.join(", ")
        ))),
    }
}

// Receiver extents are deliberately asymmetric so the split diagonal never
// passes exactly through a pixel center.
fn ground(x0: f64, x1: f64, z0: f64, z1: f64) -> Mesh {
    Mesh::quad([
        Point3::new(x0, 0.0, z0),
        Point3::new(x1, 0.0, z0),
        Point3::new(x1, 0.0, z1),
        Point3::new(x0, 0.0, z1),
    ])
}

fn top_down_camera() -> CameraParams {
    // Sits below every blocker so only the receiver is visible.
    CameraParams {
        position: Point3::new(0.0, 1.0, 0.0),
        look_at: Point3::origin(),
        up: Vector3::new(0.0, 0.0, -1.0),
        fov_deg: 90.0,
    }
}

fn straight_down() -> LightKind {
    LightKind::Directional {
        direction: Vector3::new(0.0, -1.0, 0.0),
    }
}

/// A planar receiver under one large blocker whose long edge is rotated 15
/// degrees off the shadow-map axes, producing a regular staircase.
fn staircase() -> Result<Scene> {
    let blocker = Mesh::quad([
        Point3::new(-1.1, 0.0, -1.45),
        Point3::new(0.0, 0.0, -1.45),
        Point3::new(0.0, 0.0, 1.15),
        Point3::new(-1.1, 0.0, 1.15),
    ])
    .transformed(
        Vector3::new(0.0123, 1.5, 0.0),
        Vector3::new(0.0, 15.0, 0.0),
        Vector3::repeat(1.0),
    );
    Scene::new(
        vec![ground(-1.07, 1.05, -1.06, 1.08), blocker],
        top_down_camera(),
        (1024, 1024),
        straight_down(),
        (256, 256),
        Algorithm::RbsmRecovery,
        RbsmParams::default(),
    )
}

/// Crossed layers of thin bars: narrow lit gaps and short shadow strips give
/// U- and O-shaped edges next to L-shaped ones.
fn bar_grid() -> Result<Scene> {
    let mut meshes = vec![ground(-1.07, 1.05, -1.06, 1.08)];
    let bar = |offset: f64, width: f64, height: f64, angle: f64| {
        Mesh::cuboid(
            Point3::new(offset, height, -1.05),
            Point3::new(offset + width, height + 0.02, 1.03),
        )
        .transformed(
            Vector3::zeros(),
            Vector3::new(0.0, angle, 0.0),
            Vector3::repeat(1.0),
        )
    };
    for (i, width) in [0.06, 0.025, 0.09, 0.04].into_iter().enumerate() {
        meshes.push(bar(-0.73 + 0.41 * i as f64, width, 1.5, 20.0));
    }
    for (i, width) in [0.05, 0.03, 0.07].into_iter().enumerate() {
        meshes.push(bar(-0.61 + 0.47 * i as f64, width, 1.6, -70.0));
    }
    Scene::new(
        meshes,
        top_down_camera(),
        (1024, 1024),
        straight_down(),
        (256, 256),
        Algorithm::RbsmFilter,
        RbsmParams::default(),
    )
}

/// Posts and rails standing on the ground, lit obliquely and viewed from the side.
fn fence_like() -> Result<Scene> {
    let mut parts = Vec::new();
    for i in 0..9 {
        let x = -1.6 + 0.4 * i as f64;
        parts.push(Mesh::cuboid(
            Point3::new(x - 0.04, 0.0, -0.04),
            Point3::new(x + 0.04, 0.8, 0.04),
        ));
    }
    for y in [0.3, 0.62] {
        parts.push(Mesh::cuboid(
            Point3::new(-1.7, y, -0.025),
            Point3::new(1.7, y + 0.06, 0.025),
        ));
    }
    let mut meshes = vec![ground(-2.03, 2.01, -2.02, 2.04)];
    meshes.extend(parts.into_iter().map(|m| {
        m.transformed(
            Vector3::new(0.011, 0.0, 0.007),
            Vector3::new(0.0, 25.0, 0.0),
            Vector3::repeat(1.0),
        )
    }));
    Scene::new(
        meshes,
        CameraParams {
            position: Point3::new(0.2, 2.6, 3.2),
            look_at: Point3::new(0.0, 0.0, -0.2),
            up: Vector3::new(0.0, 1.0, 0.0),
            fov_deg: 55.0,
        },
        (1024, 768),
        LightKind::Directional {
            direction: Vector3::new(0.35, -1.0, 0.55),
        },
        (512, 512),
        Algorithm::RbsmFilter,
        RbsmParams {
            depth_bias: 0.006,
            ..RbsmParams::default()
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtins_build() {
        for name in BUILTIN_SCENES {
            let s = builtin_scene(name).unwrap();
            assert!(s.triangle_count() > 0, "{name}");
        }
        assert!(builtin_scene("quadbot").is_err());
    }
}
