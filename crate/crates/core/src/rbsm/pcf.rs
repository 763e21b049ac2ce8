use super::discontinuity::shadow_test;
use crate::raster::ShadowMap;
use crate::scene::LightCoord;

/// Mean shadow test over the `kernel`×`kernel` texels centred on `p`'s texel.
pub fn pcf(sm: &ShadowMap, p: &LightCoord, kernel: u32, bias: f64) -> f64 {
    let (center, _) = sm.locate(p);
    let r = (kernel / 2) as i64;
    let mut lit = 0.0;
    for dy in -r..=r {
        for dx in -r..=r {
            lit += shadow_test(p.z, sm.depth_at(center.offset(dx, dy)), bias);
        }
    }
    lit / (kernel as f64 * kernel as f64)
}

#[cfg(test)]
mod tests {
    use super::super::testutil::{map, RECEIVER};
    use super::*;

    #[test]
    fn kernel_one_is_shadow_test() {
        let sm = map(&["#.", ".."]);
        let p = LightCoord { x: 0.25, y: 0.75, z: RECEIVER };
        assert_eq!(pcf(&sm, &p, 1, 0.0), 0.0);
        let p = LightCoord { x: 0.75, y: 0.75, z: RECEIVER };
        assert_eq!(pcf(&sm, &p, 1, 0.0), 1.0);
    }

    #[test]
    fn averages_window() {
        let sm = map(&["#..", "#..", "#.."]);
        let p = LightCoord { x: 0.5, y: 0.5, z: RECEIVER };
        assert!((pcf(&sm, &p, 3, 0.0) - 2.0 / 3.0).abs() < 1e-12);
        // Border clamping repeats the blocker column.
        let p = LightCoord { x: 0.1, y: 0.5, z: RECEIVER };
        assert!((pcf(&sm, &p, 3, 0.0) - 1.0 / 3.0).abs() < 1e-12);
    }
}
