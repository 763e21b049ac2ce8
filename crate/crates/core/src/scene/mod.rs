//! Scene representation: triangle meshes, camera, light and the light-space transform.

mod builtin;
mod config;
mod obj;

use nalgebra::{Matrix4, Point3, Rotation3, Vector3, Vector4};

use crate::rbsm::{Algorithm, RbsmParams};
use crate::{Error, Result};

pub use builtin::{builtin_scene, BUILTIN_SCENES};
pub use config::{AlgorithmSection, CameraSection, LightSection, MeshEntry, SceneConfig};
pub use obj::{load_mesh, parse_obj};

/// Light-space texture coordinates are snapped to this many steps per unit of
/// normalized device coordinate. The grid is symmetric about the frustum axis, so
/// `u` and `1 - u` are both exactly representable and mirrored scenes sample
/// mirrored texels with mirrored sub-texel fractions.
const LIGHT_COORD_STEPS: f64 = (1u64 << 30) as f64;

/// Axis-aligned bounding box in world units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point3<f64>,
    pub max: Point3<f64>,
}

impl Aabb {
    /// The empty box; `union` with it is the identity.
    pub fn empty() -> Self {
        Aabb {
            min: Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY),
            max: Point3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    pub fn new(min: Point3<f64>, max: Point3<f64>) -> Self {
        Aabb { min, max }
    }

    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a Point3<f64>>) -> Self {
        points.into_iter().fold(Aabb::empty(), |b, p| b.grow(p))
    }

    pub fn grow(mut self, p: &Point3<f64>) -> Self {
        for i in 0..3 {
            self.min[i] = self.min[i].min(p[i]);
            self.max[i] = self.max[i].max(p[i]);
        }
        self
    }

    pub fn union(self, other: &Aabb) -> Self {
        self.grow(&other.min).grow(&other.max)
    }

    pub fn is_empty(&self) -> bool {
        (0..3).any(|i| !(self.min[i] <= self.max[i]))
    }

    pub fn extent(&self) -> Vector3<f64> {
        self.max - self.min
    }

    pub fn center(&self) -> Point3<f64> {
        Point3::from((self.min.coords + self.max.coords) * 0.5)
    }

    pub fn diagonal(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.extent().norm()
        }
    }

    pub fn corners(&self) -> [Point3<f64>; 8] {
        let (a, b) = (self.min, self.max);
        [
            Point3::new(a.x, a.y, a.z),
            Point3::new(b.x, a.y, a.z),
            Point3::new(a.x, b.y, a.z),
            Point3::new(b.x, b.y, a.z),
            Point3::new(a.x, a.y, b.z),
            Point3::new(b.x, a.y, b.z),
            Point3::new(a.x, b.y, b.z),
            Point3::new(b.x, b.y, b.z),
        ]
    }
}

/// Indexed triangle mesh in world units.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Point3<f64>>,
    pub triangles: Vec<[u32; 3]>,
}

impl Mesh {
    /// Builds a mesh and checks index bounds and vertex finiteness.
    pub fn new(vertices: Vec<Point3<f64>>, triangles: Vec<[u32; 3]>) -> Result<Self> {
        let mesh = Mesh {
            vertices,
            triangles,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(v) = self.vertices.iter().find(|v| !v.iter().all(|c| c.is_finite())) {
            return Err(Error::validation(format!("non-finite vertex {v:?}")));
        }
        let n = self.vertices.len();
        for (i, tri) in self.triangles.iter().enumerate() {
            if let Some(&bad) = tri.iter().find(|&&ix| ix as usize >= n) {
                return Err(Error::validation(format!(
                    "triangle {i} references vertex {} but the mesh has {n} vertices",
                    bad as u64 + 1
                )));
            }
        }
        Ok(())
    }

    pub fn bounds(&self) -> Aabb {
        Aabb::from_points(&self.vertices)
    }

    /// Iterates triangles as vertex triples.
    pub fn triangle_vertices(&self) -> impl Iterator<Item = [Point3<f64>; 3]> + '_ {
        self.triangles.iter().map(|t| {
            [
                self.vertices[t[0] as usize],
                self.vertices[t[1] as usize],
                self.vertices[t[2] as usize],
            ]
        })
    }

    /// Applies scale, then rotation (X, then Y, then Z, in degrees), then translation.
    pub fn transformed(&self, translate: Vector3<f64>, rotate_deg: Vector3<f64>, scale: Vector3<f64>) -> Mesh {
        let rotation = euler_xyz(rotate_deg);
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let scaled = Point3::new(v.x * scale.x, v.y * scale.y, v.z * scale.z);
                rotation * scaled + translate
            })
            .collect();
        Mesh {
            vertices,
            triangles: self.triangles.clone(),
        }
    }

    /// Reflects the mesh through the `x = 0` plane. Triangle order is kept.
    pub fn mirrored_x(&self) -> Mesh {
        Mesh {
            vertices: self.vertices.iter().map(|v| Point3::new(-v.x, v.y, v.z)).collect(),
            triangles: self.triangles.clone(),
        }
    }

    /// Axis-aligned box from `min` to `max`, 12 triangles.
    pub fn cuboid(min: Point3<f64>, max: Point3<f64>) -> Mesh {
        let vertices = Aabb::new(min, max).corners().to_vec();
        // corner index bits: x = 1, y = 2, z = 4
        let faces: [[u32; 4]; 6] = [
            [0, 2, 3, 1],
            [4, 5, 7, 6],
            [0, 1, 5, 4],
            [2, 6, 7, 3],
            [0, 4, 6, 2],
            [1, 3, 7, 5],
        ];
        let triangles = faces
            .iter()
            .flat_map(|f| [[f[0], f[1], f[2]], [f[0], f[2], f[3]]])
            .collect();
        Mesh {
            vertices,
            triangles,
        }
    }

    /// Planar quad from four corners given in order, split along the 0-2 diagonal.
    pub fn quad(corners: [Point3<f64>; 4]) -> Mesh {
        Mesh {
            vertices: corners.to_vec(),
            triangles: vec![[0, 1, 2], [0, 2, 3]],
        }
    }
}

fn euler_xyz(deg: Vector3<f64>) -> Rotation3<f64> {
    let rx = Rotation3::from_axis_angle(&Vector3::x_axis(), deg.x.to_radians());
    let ry = Rotation3::from_axis_angle(&Vector3::y_axis(), deg.y.to_radians());
    let rz = Rotation3::from_axis_angle(&Vector3::z_axis(), deg.z.to_radians());
    rz * ry * rx
}

/// Row-by-row homogeneous transform with a fixed summation order.
pub(crate) fn transform(m: &Matrix4<f64>, p: &Point3<f64>) -> Vector4<f64> {
    let v = [p.x, p.y, p.z, 1.0];
    let mut out = Vector4::zeros();
    for r in 0..4 {
        out[r] = m[(r, 0)] * v[0] + m[(r, 1)] * v[1] + m[(r, 2)] * v[2] + m[(r, 3)] * v[3];
    }
    out
}

/// Right-handed orthonormal basis `(right, up, forward)` for a view direction.
fn view_basis(forward: &Vector3<f64>, up_hint: &Vector3<f64>) -> Result<[Vector3<f64>; 3]> {
    let f = forward
        .try_normalize(1e-12)
        .ok_or_else(|| Error::validation("view direction has zero length"))?;
    let mut hint = *up_hint;
    if f.cross(&hint).norm() < 1e-6 * hint.norm() {
        hint = if f.y.abs() > 0.99 {
            Vector3::new(0.0, 0.0, 1.0)
        } else {
            Vector3::new(0.0, 1.0, 0.0)
        };
    }
    let right = f
        .cross(&hint)
        .try_normalize(1e-12)
        .ok_or_else(|| Error::validation("degenerate up vector"))?;
    let up = right.cross(&f);
    Ok([right, up, f])
}

/// View matrix mapping world space to `(right, up, forward)` coordinates about `eye`.
fn view_matrix(eye: &Point3<f64>, basis: &[Vector3<f64>; 3]) -> Matrix4<f64> {
    let mut m = Matrix4::identity();
    for (r, axis) in basis.iter().enumerate() {
        m[(r, 0)] = axis.x;
        m[(r, 1)] = axis.y;
        m[(r, 2)] = axis.z;
        m[(r, 3)] = -axis.dot(&eye.coords);
    }
    m
}

/// Perspective projection on view coordinates where `forward` is positive depth.
/// Normalized depth is 0 at `near` and 1 at `far`.
fn perspective(tan_half_x: f64, tan_half_y: f64, near: f64, far: f64) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m[(0, 0)] = 1.0 / tan_half_x;
    m[(1, 1)] = 1.0 / tan_half_y;
    m[(2, 2)] = far / (far - near);
    m[(2, 3)] = -far * near / (far - near);
    m[(3, 2)] = 1.0;
    m
}

/// User-facing camera placement; the matrix is derived per viewport.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraParams {
    pub position: Point3<f64>,
    pub look_at: Point3<f64>,
    pub up: Vector3<f64>,
    /// Vertical field of view.
    pub fov_deg: f64,
}

impl CameraParams {
    pub fn mirrored_x(&self) -> Self {
        let m = |p: Point3<f64>| Point3::new(-p.x, p.y, p.z);
        CameraParams {
            position: m(self.position),
            look_at: m(self.look_at),
            up: Vector3::new(-self.up.x, self.up.y, self.up.z),
            fov_deg: self.fov_deg,
        }
    }
}

/// Perspective camera with a world to clip transform.
#[derive(Debug, Clone, PartialEq)]
pub struct Camera {
    pub position: Point3<f64>,
    pub view_projection: Matrix4<f64>,
    pub width: u32,
    pub height: u32,
    pub params: CameraParams,
}

impl Camera {
    /// Builds the camera; near and far planes are derived from `scene_bounds`.
    pub fn new(params: CameraParams, width: u32, height: u32, scene_bounds: &Aabb) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::validation("camera resolution must be at least 1x1"));
        }
        if !(params.fov_deg > 0.0 && params.fov_deg < 180.0) {
            return Err(Error::validation(format!(
                "camera fov_deg must be in (0, 180), got {}",
                params.fov_deg
            )));
        }
        let basis = view_basis(&(params.look_at - params.position), &params.up)?;
        let far_dist = scene_bounds
            .corners()
            .iter()
            .map(|c| (c - params.position).norm())
            .fold(0.0, f64::max);
        let far = (far_dist * 1.05).max(1e-3);
        let near = far * 1e-4;
        let tan_y = (params.fov_deg.to_radians() * 0.5).tan();
        let tan_x = tan_y * width as f64 / height as f64;
        let view_projection =
            perspective(tan_x, tan_y, near, far) * view_matrix(&params.position, &basis);
        if view_projection.try_inverse().is_none() {
            return Err(Error::validation("camera transform is not invertible"));
        }
        Ok(Camera {
            position: params.position,
            view_projection,
            width,
            height,
            params,
        })
    }
}

/// Light placement before fitting to the scene.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LightKind {
    /// Orthographic light; `direction` points from the light into the scene.
    Directional { direction: Vector3<f64> },
    /// Perspective light at `position` aimed along `direction`.
    Spot {
        position: Point3<f64>,
        direction: Vector3<f64>,
    },
}

impl LightKind {
    pub fn mirrored_x(&self) -> Self {
        let mv = |v: Vector3<f64>| Vector3::new(-v.x, v.y, v.z);
        match *self {
            LightKind::Directional { direction } => LightKind::Directional {
                direction: mv(direction),
            },
            LightKind::Spot {
                position,
                direction,
            } => LightKind::Spot {
                position: Point3::new(-position.x, position.y, position.z),
                direction: mv(direction),
            },
        }
    }
}

/// A light with its world to light-clip transform.
#[derive(Debug, Clone, PartialEq)]
pub struct Light {
    pub kind: LightKind,
    pub view_projection: Matrix4<f64>,
}

impl Light {
    pub fn is_orthographic(&self) -> bool {
        matches!(self.kind, LightKind::Directional { .. })
    }

    /// Direction for directional lights, position for spot lights.
    pub fn position_or_direction(&self) -> Vector3<f64> {
        match self.kind {
            LightKind::Directional { direction } => direction,
            LightKind::Spot { position, .. } => position.coords,
        }
    }

    /// Unit vector from `point` towards the light and the distance to it
    /// (infinite for directional lights).
    pub fn towards_light(&self, point: &Point3<f64>) -> (Vector3<f64>, f64) {
        match self.kind {
            LightKind::Directional { direction } => (-direction.normalize(), f64::INFINITY),
            LightKind::Spot { position, .. } => {
                let d = position - point;
                let len = d.norm();
                (d / len, len)
            }
        }
    }
}

/// Fits the light frustum around `bounds`.
///
/// Every corner of `bounds` lands in normalized depth `[0, 1]` and inside the
/// texture square with at least a 2% margin on each side.
pub fn fit_light_to_scene(kind: LightKind, bounds: &Aabb) -> Result<Light> {
    if bounds.is_empty() || bounds.extent().max() <= 0.0 {
        return Err(Error::validation(
            "cannot fit a light to bounds with zero extent on every axis",
        ));
    }
    // 3% per side keeps the contract's 2% with room for rounding.
    const MARGIN: f64 = 0.03;
    let corners = bounds.corners();
    let view_projection = match kind {
        LightKind::Directional { direction } => {
            let basis = view_basis(&direction, &Vector3::new(0.0, 1.0, 0.0))?;
            let mut lo = Vector3::repeat(f64::INFINITY);
            let mut hi = Vector3::repeat(f64::NEG_INFINITY);
            for c in &corners {
                for (i, axis) in basis.iter().enumerate() {
                    let d = axis.dot(&c.coords);
                    lo[i] = lo[i].min(d);
                    hi[i] = hi[i].max(d);
                }
            }
            let floor = bounds.diagonal() * 1e-3;
            for i in 0..3 {
                let pad = MARGIN * (hi[i] - lo[i]).max(floor);
                lo[i] -= pad;
                hi[i] += pad;
            }
            let mut m = Matrix4::zeros();
            for i in 0..2 {
                let span = hi[i] - lo[i];
                for j in 0..3 {
                    m[(i, j)] = 2.0 * basis[i][j] / span;
                }
                m[(i, 3)] = -(hi[i] + lo[i]) / span;
            }
            let span = hi[2] - lo[2];
            for j in 0..3 {
                m[(2, j)] = basis[2][j] / span;
            }
            m[(2, 3)] = -lo[2] / span;
            m[(3, 3)] = 1.0;
            m
        }
        LightKind::Spot {
            position,
            direction,
        } => {
            let basis = view_basis(&direction, &Vector3::new(0.0, 1.0, 0.0))?;
            let view = view_matrix(&position, &basis);
            let mut near = f64::INFINITY;
            let mut far: f64 = 0.0;
            let mut tan_x: f64 = 0.0;
            let mut tan_y: f64 = 0.0;
            for c in &corners {
                let v = transform(&view, c);
                if v.z <= 0.0 {
                    return Err(Error::validation(
                        "scene bounds extend behind the spot light",
                    ));
                }
                near = near.min(v.z);
                far = far.max(v.z);
                tan_x = tan_x.max((v.x / v.z).abs());
                tan_y = tan_y.max((v.y / v.z).abs());
            }
            let floor = 1e-3;
            let tan_x = tan_x.max(floor) * (1.0 + 2.0 * MARGIN);
            let tan_y = tan_y.max(floor) * (1.0 + 2.0 * MARGIN);
            let near = near * (1.0 - MARGIN);
            let far = far * (1.0 + MARGIN);
            perspective(tan_x, tan_y, near, far) * view
        }
    };
    if view_projection.try_inverse().is_none() {
        return Err(Error::validation("light transform is not invertible"));
    }
    Ok(Light {
        kind,
        view_projection,
    })
}

/// Light-space coordinate of a fragment: `x`, `y` are shadow-map texture
/// coordinates and `z` is normalized depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightCoord {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Projects a world point into light space.
///
/// Points outside the light frustum yield coordinates outside `[0, 1]`.
pub fn project_to_light(point: &Point3<f64>, light: &Light) -> LightCoord {
    let clip = transform(&light.view_projection, point);
    let (nx, ny, nz) = if light.is_orthographic() {
        (clip.x, clip.y, clip.z)
    } else {
        (clip.x / clip.w, clip.y / clip.w, clip.z / clip.w)
    };
    let snap = |n: f64| 0.5 + (n * LIGHT_COORD_STEPS).round() / (2.0 * LIGHT_COORD_STEPS);
    LightCoord {
        x: snap(nx),
        y: snap(ny),
        z: nz,
    }
}

/// A fully resolved scene: world-space meshes, camera, light and render settings.
#[derive(Debug, Clone)]
pub struct Scene {
    pub meshes: Vec<Mesh>,
    pub camera: Camera,
    pub light: Light,
    pub shadow_map_size: (u32, u32),
    pub algorithm: Algorithm,
    pub params: RbsmParams,
}

impl Scene {
    /// Assembles a scene, fitting the light to the mesh bounds.
    pub fn new(
        meshes: Vec<Mesh>,
        camera: CameraParams,
        viewport: (u32, u32),
        light: LightKind,
        shadow_map_size: (u32, u32),
        algorithm: Algorithm,
        params: RbsmParams,
    ) -> Result<Self> {
        for m in &meshes {
            m.validate()?;
        }
        if shadow_map_size.0 == 0 || shadow_map_size.1 == 0 {
            return Err(Error::validation("shadow map resolution must be at least 1x1"));
        }
        params.validate()?;
        let bounds = meshes.iter().fold(Aabb::empty(), |b, m| b.union(&m.bounds()));
        let light = fit_light_to_scene(light, &bounds)?;
        let camera = Camera::new(camera, viewport.0, viewport.1, &bounds)?;
        Ok(Scene {
            meshes,
            camera,
            light,
            shadow_map_size,
            algorithm,
            params,
        })
    }

    /// Loads a scene config file, or a builtin scene for `builtin:NAME`.
    pub fn load(source: &str) -> Result<Self> {
        match source.strip_prefix("builtin:") {
            Some(name) => builtin_scene(name),
            None => SceneConfig::load(source)?.into_scene(),
        }
    }

    pub fn bounds(&self) -> Aabb {
        self.meshes.iter().fold(Aabb::empty(), |b, m| b.union(&m.bounds()))
    }

    pub fn triangle_count(&self) -> usize {
        self.meshes.iter().map(|m| m.triangles.len()).sum()
    }

    /// Same scene rendered at another viewport resolution.
    pub fn with_viewport(&self, width: u32, height: u32) -> Result<Self> {
        let mut s = self.clone();
        s.camera = Camera::new(self.camera.params, width, height, &self.bounds())?;
        Ok(s)
    }

    pub fn with_shadow_map_size(&self, width: u32, height: u32) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::validation("shadow map resolution must be at least 1x1"));
        }
        let mut s = self.clone();
        s.shadow_map_size = (width, height);
        Ok(s)
    }

    /// The scene reflected through `x = 0`, camera and light included.
    pub fn mirrored_x(&self) -> Result<Self> {
        Scene::new(
            self.meshes.iter().map(Mesh::mirrored_x).collect(),
            self.camera.params.mirrored_x(),
            (self.camera.width, self.camera.height),
            self.light.kind.mirrored_x(),
            self.shadow_map_size,
            self.algorithm,
            self.params,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cube() -> Aabb {
        Aabb::new(Point3::new(-0.5, -0.5, -0.5), Point3::new(0.5, 0.5, 0.5))
    }

    fn inside_unit(p: &LightCoord) -> bool {
        [p.x, p.y, p.z].iter().all(|c| (0.0..=1.0).contains(c))
    }

    #[test]
    fn directional_fit_contains_cube() {
        for dir in [Vector3::new(0.0, -1.0, 0.0), Vector3::new(0.0, 0.0, -1.0)] {
            let light = fit_light_to_scene(LightKind::Directional { direction: dir }, &unit_cube()).unwrap();
            for c in unit_cube().corners() {
                let p = project_to_light(&c, &light);
                assert!(inside_unit(&p), "{p:?}");
                assert!(p.x >= 0.02 && p.x <= 0.98 && p.y >= 0.02 && p.y <= 0.98, "{p:?}");
            }
        }
    }

    #[test]
    fn oblique_and_spot_fits_contain_cube() {
        let kinds = [
            LightKind::Directional {
                direction: Vector3::new(0.3, -1.0, 0.45),
            },
            LightKind::Spot {
                position: Point3::new(1.0, 3.0, 0.5),
                direction: Vector3::new(-1.0, -3.0, -0.5),
            },
        ];
        for kind in kinds {
            let light = fit_light_to_scene(kind, &unit_cube()).unwrap();
            for c in unit_cube().corners() {
                let p = project_to_light(&c, &light);
                assert!(inside_unit(&p), "{kind:?} {p:?}");
                assert!(p.x >= 0.02 && p.x <= 0.98 && p.y >= 0.02 && p.y <= 0.98);
            }
        }
    }

    #[test]
    fn empty_bounds_rejected() {
        let kind = LightKind::Directional {
            direction: Vector3::new(0.0, -1.0, 0.0),
        };
        assert!(fit_light_to_scene(kind, &Aabb::empty()).is_err());
        let point = Aabb::new(Point3::new(1.0, 1.0, 1.0), Point3::new(1.0, 1.0, 1.0));
        assert!(fit_light_to_scene(kind, &point).is_err());
    }

    #[test]
    fn spot_behind_light_rejected() {
        let kind = LightKind::Spot {
            position: Point3::origin(),
            direction: Vector3::new(0.0, -1.0, 0.0),
        };
        assert!(fit_light_to_scene(kind, &unit_cube()).is_err());
    }

    #[test]
    fn centered_point_and_depth_endpoints() {
        let kind = LightKind::Directional {
            direction: Vector3::new(0.0, -1.0, 0.0),
        };
        let light = fit_light_to_scene(kind, &unit_cube()).unwrap();
        let c = project_to_light(&Point3::origin(), &light);
        assert!((c.x - 0.5).abs() < 1e-9 && (c.y - 0.5).abs() < 1e-9);
        assert!((c.z - 0.5).abs() < 1e-9);
        // The near plane sits one margin above the top of the box.
        let inv = light.view_projection.try_inverse().unwrap();
        let near = inv.transform_point(&Point3::new(0.0, 0.0, 0.0));
        assert!(project_to_light(&near, &light).z.abs() < 1e-6);
        let behind = project_to_light(&Point3::new(0.0, -2.0, 0.0), &light);
        assert!(behind.z > 1.0);
    }

    #[test]
    fn mesh_validation() {
        let v = vec![Point3::origin(); 3];
        assert!(Mesh::new(v.clone(), vec![[0, 1, 2]]).is_ok());
        assert!(Mesh::new(v.clone(), vec![[0, 1, 8]]).is_err());
        let mut bad = v;
        bad[1].x = f64::NAN;
        assert!(Mesh::new(bad, vec![[0, 1, 2]]).is_err());
    }

    #[test]
    fn transform_order_is_scale_rotate_translate() {
        let m = Mesh::quad([
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
            Point3::new(1.0, 0.0, 1.0),
        ]);
        let t = m.transformed(
            Vector3::new(0.0, 5.0, 0.0),
            Vector3::new(0.0, 0.0, 90.0),
            Vector3::new(2.0, 1.0, 1.0),
        );
        // (1,0,0) -> scale (2,0,0) -> rotate about z (0,2,0) -> translate (0,7,0)
        assert!((t.vertices[0] - Point3::new(0.0, 7.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn mirrored_light_coordinates_are_exact_reflections() {
        let bounds = Aabb::new(Point3::new(-1.3, 0.0, -0.9), Point3::new(0.7, 1.5, 1.1));
        let kind = LightKind::Directional {
            direction: Vector3::new(0.3, -1.0, 0.45),
        };
        let light = fit_light_to_scene(kind, &bounds).unwrap();
        let mirrored_bounds = Aabb::new(Point3::new(-0.7, 0.0, -0.9), Point3::new(1.3, 1.5, 1.1));
        let mirrored = fit_light_to_scene(kind.mirrored_x(), &mirrored_bounds).unwrap();
        for p in [Point3::new(0.123, 0.4, -0.77), Point3::new(-0.9, 0.0, 0.31)] {
            let a = project_to_light(&p, &light);
            let b = project_to_light(&Point3::new(-p.x, p.y, p.z), &mirrored);
            assert_eq!(a.x, 1.0 - b.x);
            assert_eq!(a.y, b.y);
            assert_eq!(a.z, b.z);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn ortho_projection_is_affine_along_light_rays(
                x in -0.5f64..0.5, z in -0.5f64..0.5, y0 in -0.5f64..0.5, y1 in -0.5f64..0.5,
            ) {
                let kind = LightKind::Directional { direction: Vector3::new(0.0, -1.0, 0.0) };
                let light = fit_light_to_scene(kind, &unit_cube()).unwrap();
                let a = project_to_light(&Point3::new(x, y0, z), &light);
                let b = project_to_light(&Point3::new(x, y1, z), &light);
                let m = project_to_light(&Point3::new(x, 0.5 * (y0 + y1), z), &light);
                prop_assert!((m.z - 0.5 * (a.z + b.z)).abs() < 1e-6);
                prop_assert!((m.x - a.x).abs() < 1e-6 && (m.y - a.y).abs() < 1e-6);
            }

            #[test]
            fn fit_is_translation_equivariant(
                tx in -50.0f64..50.0, ty in -50.0f64..50.0, tz in -50.0f64..50.0,
                px in -0.5f64..0.5, py in -0.5f64..0.5, pz in -0.5f64..0.5,
            ) {
                let kind = LightKind::Directional { direction: Vector3::new(0.2, -1.0, 0.1) };
                let t = Vector3::new(tx, ty, tz);
                let b = unit_cube();
                let moved = Aabb::new(b.min + t, b.max + t);
                let l0 = fit_light_to_scene(kind, &b).unwrap();
                let l1 = fit_light_to_scene(kind, &moved).unwrap();
                let p = Point3::new(px, py, pz);
                let a = project_to_light(&p, &l0);
                let c = project_to_light(&(p + t), &l1);
                prop_assert!((a.x - c.x).abs() < 1e-6);
                prop_assert!((a.y - c.y).abs() < 1e-6);
                prop_assert!((a.z - c.z).abs() < 1e-6);
            }
        }
    }
}
