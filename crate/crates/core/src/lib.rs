//! Software shadow renderer built around shadow-edge revectorization.
//!
//! The pipeline is: load or build a [`Scene`], rasterize a [`ShadowMap`] from the
//! light, rasterize a [`GBuffer`] from the camera, then shade every covered pixel
//! with one of the [`Algorithm`]s. The [`oracle`] module provides an exact
//! ray-cast reference and image difference metrics; [`bench`] times the passes.

pub mod bench;
mod error;
pub mod oracle;
pub mod raster;
pub mod rbsm;
pub mod scene;

pub use error::{Error, Result};
pub use oracle::{diff, raycast_shadow, DiffReport};
pub use raster::{
    rasterize_camera, rasterize_depth, shade_image, GBuffer, Image, ShadowMap,
};
pub use rbsm::{
    Algorithm, Discontinuity, EdgeDistances, NormalizedDistances, RbsmParams, Texel,
};
pub use scene::{
    fit_light_to_scene, load_mesh, project_to_light, Aabb, Camera, CameraParams, Light,
    LightCoord, LightKind, Mesh, Scene,
};

/// Renders the scene's configured algorithm end to end.
pub fn render(scene: &Scene, algorithm: Algorithm, params: &RbsmParams) -> Result<Image> {
    let sm = rasterize_depth(scene, scene.shadow_map_size.0, scene.shadow_map_size.1)?;
    let gbuffer = rasterize_camera(scene);
    shade_image(&gbuffer, &sm, algorithm, params)
}

/// Runs `f` on a dedicated pool of `threads` workers (0 = one per core).
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Validation(format!("cannot start worker threads: {e}")))?;
    Ok(pool.install(f))
}
