//! Shadow-edge revectorization on top of a plain shadow map.
//!
//! A fragment is first classified with the binary shadow test. Fragments whose
//! 4-connected shadow-map neighbours disagree with them sit on an aliased shadow
//! edge; for those the edge is walked in all four axis directions to find where
//! it ends, the walk lengths are normalized into a local frame anchored at the
//! aliasing corner, and a shape-specific visibility function (I, U, L or O
//! shaped edge) decides the final visibility.
//!
//! Two variants share everything up to the visibility function:
//! silhouette recovery (binary, lit side only) and filtering (fractional, both
//! sides of the edge).

mod discontinuity;
mod pcf;
mod traversal;
mod visibility;

use std::fmt;
use std::str::FromStr;

use crate::raster::ShadowMap;
use crate::scene::LightCoord;
use crate::{Error, Result};

pub use discontinuity::{check_discontinuity, compute_discontinuity, neighborhood, shadow_test};
pub use pcf::pcf;
pub use traversal::{compute_edge_distances, normalize_distances, traverse};
pub use visibility::{visibility_filtering, visibility_recovery};

/// Default edge walk limit.
pub const DEFAULT_MAXDIST: u32 = 16;

/// Twice the spacing of a 24-bit depth buffer over the unit depth range.
pub const DEFAULT_DEPTH_BIAS: f64 = 2.0 / (1u32 << 24) as f64;

/// Per-pixel shading algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Plain binary shadow test.
    Sm,
    /// Revectorized hard shadows.
    RbsmRecovery,
    /// Revectorized fake penumbra.
    RbsmFilter,
    /// Percentage-closer filtering.
    Pcf,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Sm,
        Algorithm::RbsmRecovery,
        Algorithm::RbsmFilter,
        Algorithm::Pcf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sm => "sm",
            Algorithm::RbsmRecovery => "rbsm_recovery",
            Algorithm::RbsmFilter => "rbsm_filter",
            Algorithm::Pcf => "pcf",
        }
    }

    pub fn valid_names() -> String {
        Algorithm::ALL.map(Algorithm::name).join(", ")
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                Error::validation(format!(
                    "unknown algorithm `{s}` (valid: {})",
                    Algorithm::valid_names()
                ))
            })
    }
}

/// Which visibility function a revectorized edge fragment goes through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Recovery,
    Filtering,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RbsmParams {
    /// Maximum number of texels walked per direction along an edge.
    pub maxdist: u32,
    /// Constant offset in normalized depth applied to the shadow test.
    pub depth_bias: f64,
    /// Kernel size for the `pcf` algorithm. Above 1 it also enables a box
    /// post-filter of the `rbsm_filter` image that hides skeleton artifacts.
    pub pcf_kernel: u32,
}

impl Default for RbsmParams {
    fn default() -> Self {
        RbsmParams {
            maxdist: DEFAULT_MAXDIST,
            depth_bias: DEFAULT_DEPTH_BIAS,
            pcf_kernel: 1,
        }
    }
}

impl RbsmParams {
    pub fn validate(&self) -> Result<()> {
        if self.maxdist < 1 {
            return Err(Error::validation("maxdist must be at least 1"));
        }
        if !(self.depth_bias >= 0.0 && self.depth_bias.is_finite()) {
            return Err(Error::validation(format!(
                "depth bias must be finite and non-negative, got {}",
                self.depth_bias
            )));
        }
        if self.pcf_kernel == 0 || self.pcf_kernel.is_multiple_of(2) {
            return Err(Error::validation(format!(
                "pcf kernel must be odd and at least 1, got {}",
                self.pcf_kernel
            )));
        }
        Ok(())
    }
}

/// Integer shadow-map texel index. Lookups outside the map clamp to the border.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Texel {
    pub x: i64,
    pub y: i64,
}

impl Texel {
    pub fn new(x: i64, y: i64) -> Self {
        Texel { x, y }
    }

    pub fn offset(self, dx: i64, dy: i64) -> Self {
        Texel::new(self.x + dx, self.y + dy)
    }
}

/// Traversal direction in texel space; `Up` is increasing `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Left,
    Right,
    Down,
    Up,
}

impl Direction {
    pub fn step(self) -> (i64, i64) {
        match self {
            Direction::Left => (-1, 0),
            Direction::Right => (1, 0),
            Direction::Down => (0, -1),
            Direction::Up => (0, 1),
        }
    }

    pub fn is_horizontal(self) -> bool {
        matches!(self, Direction::Left | Direction::Right)
    }
}

/// Compressed discontinuity of a fragment.
///
/// | value | `dx`            | `dy`           | `dz`      |
/// |-------|-----------------|----------------|-----------|
/// | 0     | no edge         | no edge        | lit       |
/// | 0.25  | edge at +x      | edge at -y     |           |
/// | 0.5   | edge at -x      | edge at +y     |           |
/// | 0.75  | both sides      | both sides     |           |
/// | 1     |                 |                | shadowed  |
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discontinuity {
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
}

impl Discontinuity {
    /// Two-bit direction set of a compressed component: 0.25 -> 1, 0.5 -> 2, 0.75 -> 3.
    pub fn bits(component: f64) -> u8 {
        (component * 4.0) as u8
    }

    pub fn on_edge(&self) -> bool {
        self.dx > 0.0 || self.dy > 0.0
    }
}

/// Signed walk lengths per direction: positive when the walk hit the end of the
/// edge, negative when it left the edge or ran out of steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeDistances {
    pub left: i32,
    pub right: i32,
    pub down: i32,
    pub up: i32,
}

/// Position of a fragment in the unit frame of its edge plus per-axis end flags.
///
/// `zflag` (horizontal) and `wflag` (vertical) are 1 when both walks on the axis
/// found an end, 0 when exactly one did and -1 when none did.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedDistances {
    pub x: f64,
    pub y: f64,
    pub zflag: i8,
    pub wflag: i8,
}

/// Revectorized visibility of one light-space fragment.
pub fn rbsm_shade(sm: &ShadowMap, p: &LightCoord, mode: Mode, params: &RbsmParams) -> f64 {
    let (texel, frac) = sm.locate(p);
    let z = sm.depth_at(texel);
    let s = shadow_test(p.z, z, params.depth_bias);
    // Recovery only ever darkens the lit side of an edge.
    if mode == Mode::Recovery && s == 0.0 {
        return s;
    }
    let d = compute_discontinuity(sm, texel, p.z, z, params.depth_bias);
    if !d.on_edge() {
        return s;
    }
    let rd = compute_edge_distances(sm, texel, p.z, &d, params);
    let nrd = normalize_distances(&rd, frac);
    match mode {
        Mode::Recovery => visibility_recovery(&d, &nrd),
        Mode::Filtering => visibility_filtering(&d, &nrd),
    }
}

/// Visibility of `p` under `algorithm` (the post-filter is applied at image level).
pub fn shade_fragment(
    sm: &ShadowMap,
    p: &LightCoord,
    algorithm: Algorithm,
    params: &RbsmParams,
) -> f64 {
    match algorithm {
        Algorithm::Sm => {
            let (texel, _) = sm.locate(p);
            shadow_test(p.z, sm.depth_at(texel), params.depth_bias)
        }
        Algorithm::RbsmRecovery => rbsm_shade(sm, p, Mode::Recovery, params),
        Algorithm::RbsmFilter => rbsm_shade(sm, p, Mode::Filtering, params),
        Algorithm::Pcf => pcf(sm, p, params.pcf_kernel, params.depth_bias),
    }
}
