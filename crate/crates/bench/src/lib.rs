//! Fixtures shared by the criterion benchmarks.

use rbsm::{rasterize_camera, rasterize_depth, GBuffer, Result, Scene, ShadowMap};

/// A builtin scene rasterized once, ready for repeated shading passes.
pub struct Fixture {
    pub scene: Scene,
    pub gbuffer: GBuffer,
    pub shadow_map: ShadowMap,
}

impl Fixture {
    pub fn builtin(name: &str, sm_size: u32, viewport: (u32, u32)) -> Result<Self> {
        let scene = Scene::load(&format!("builtin:{name}"))?
            .with_shadow_map_size(sm_size, sm_size)?
            .with_viewport(viewport.0, viewport.1)?;
        let shadow_map = rasterize_depth(&scene, sm_size, sm_size)?;
        let gbuffer = rasterize_camera(&scene);
        Ok(Fixture {
            scene,
            gbuffer,
            shadow_map,
        })
    }
}
