//! TOML scene description.
//!
//! ```toml
//! [[meshes]]
//! path = "ground.obj"          # relative to the config file
//! translate = [0.0, 0.0, 0.0]
//! rotate_deg = [0.0, 15.0, 0.0]
//! scale = 1.0                  # or [sx, sy, sz]
//!
//! [camera]
//! position = [0.0, 1.0, 0.0]
//! look_at = [0.0, 0.0, 0.0]
//! up = [0.0, 0.0, -1.0]
//! fov_deg = 90.0
//! width = 1024
//! height = 1024
//!
//! [light]
//! kind = "directional"         # or "spot"
//! direction = [0.0, -1.0, 0.0] # spot lights also take `position`
//!
//! [shadow_map]
//! width = 256
//! height = 256
//!
//! [algorithm]
//! mode = "rbsm_recovery"       # sm | rbsm_recovery | rbsm_filter | pcf
//! maxdist = 16
//! bias = 1.2e-7
//! pcf_kernel = 1              # >1 also box-filters rbsm_filter output
//! ```

use std::path::{Path, PathBuf};

use nalgebra::{Point3, Vector3};
use serde::Deserialize;

use super::{load_mesh, CameraParams, LightKind, Scene};
use crate::rbsm::{Algorithm, RbsmParams};
use crate::{Error, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    #[serde(default)]
    pub meshes: Vec<MeshEntry>,
    pub camera: CameraSection,
    pub light: LightSection,
    pub shadow_map: ShadowMapSection,
    #[serde(default)]
    pub algorithm: AlgorithmSection,
    /// Directory mesh paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshEntry {
    pub path: PathBuf,
    #[serde(default)]
    pub translate: [f64; 3],
    #[serde(default)]
    pub rotate_deg: [f64; 3],
    #[serde(default)]
    pub scale: Scale,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum Scale {
    Uniform(f64),
    PerAxis([f64; 3]),
}

impl Default for Scale {
    fn default() -> Self {
        Scale::Uniform(1.0)
    }
}

impl Scale {
    fn vector(self) -> Vector3<f64> {
        match self {
            Scale::Uniform(s) => Vector3::repeat(s),
            Scale::PerAxis(v) => Vector3::from(v),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CameraSection {
    pub position: [f64; 3],
    pub look_at: [f64; 3],
    #[serde(default = "default_up")]
    pub up: [f64; 3],
    pub fov_deg: f64,
    pub width: u32,
    pub height: u32,
}

fn default_up() -> [f64; 3] {
    [0.0, 1.0, 0.0]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LightSection {
    pub kind: String,
    pub direction: Option<[f64; 3]>,
    pub position: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShadowMapSection {
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AlgorithmSection {
    pub mode: String,
    pub maxdist: u32,
    pub bias: f64,
    pub pcf_kernel: u32,
}

impl Default for AlgorithmSection {
    fn default() -> Self {
        let p = RbsmParams::default();
        AlgorithmSection {
            mode: Algorithm::Sm.to_string(),
            maxdist: p.maxdist,
            bias: p.depth_bias,
            pcf_kernel: p.pcf_kernel,
        }
    }
}

impl AlgorithmSection {
    pub fn resolve(&self) -> Result<(Algorithm, RbsmParams)> {
        let algorithm: Algorithm = self.mode.parse()?;
        let params = RbsmParams {
            maxdist: self.maxdist,
            depth_bias: self.bias,
            pcf_kernel: self.pcf_kernel,
        };
        params.validate()?;
        Ok((algorithm, params))
    }
}

impl SceneConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::parse(&text, path)?;
        config.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(config)
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })
    }

    fn light_kind(&self) -> Result<LightKind> {
        let l = &self.light;
        match l.kind.as_str() {
            "directional" => {
                let d = l.direction.ok_or_else(|| {
                    Error::validation("directional light needs `direction`")
                })?;
                Ok(LightKind::Directional {
                    direction: Vector3::from(d),
                })
            }
            "spot" => {
                let p = l
                    .position
                    .ok_or_else(|| Error::validation("spot light needs `position`"))?;
                let d = l
                    .direction
                    .ok_or_else(|| Error::validation("spot light needs `direction`"))?;
                Ok(LightKind::Spot {
                    position: Point3::from(p),
                    direction: Vector3::from(d),
                })
            }
            other => Err(Error::validation(format!(
                "unknown light kind `{other}` (expected directional or spot)"
            ))),
        }
    }

    /// Loads every mesh and resolves the camera and light.
    pub fn into_scene(self) -> Result<Scene> {
        let mut meshes = Vec::with_capacity(self.meshes.len());
        for entry in &self.meshes {
            let path = self.base_dir.join(&entry.path);
            if !path.exists() {
                return Err(Error::io(
                    &path,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "mesh file not found"),
                ));
            }
            let mesh = load_mesh(&path)?;
            meshes.push(mesh.transformed(
                Vector3::from(entry.translate),
                Vector3::from(entry.rotate_deg),
                entry.scale.vector(),
            ));
        }
        let (algorithm, params) = self.algorithm.resolve()?;
        let c = &self.camera;
        let camera = CameraParams {
            position: Point3::from(c.position),
            look_at: Point3::from(c.look_at),
            up: Vector3::from(c.up),
            fov_deg: c.fov_deg,
        };
        Scene::new(
            meshes,
            camera,
            (c.width, c.height),
            self.light_kind()?,
            (self.shadow_map.width, self.shadow_map.height),
            algorithm,
            params,
        )
    }
}
