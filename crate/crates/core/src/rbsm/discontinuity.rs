use super::{Direction, Discontinuity, Texel};
use crate::raster::ShadowMap;

/// 0 when `p_z` lies behind the stored depth by more than `bias`, 1 otherwise.
#[inline]
pub fn shadow_test(p_z: f64, z: f64, bias: f64) -> f64 {
    if p_z - bias > z {
        0.0
    } else {
        1.0
    }
}

/// Shadow tests of the 4-connected neighbours of `texel` against the fragment
/// depth `p_z`, ordered (-x, +x, +y, -y).
pub fn neighborhood(sm: &ShadowMap, texel: Texel, p_z: f64, bias: f64) -> [f64; 4] {
    [(-1, 0), (1, 0), (0, 1), (0, -1)]
        .map(|(dx, dy)| shadow_test(p_z, sm.depth_at(texel.offset(dx, dy)), bias))
}

/// Discontinuity of a fragment at depth `p_z` in `texel`, whose stored depth is `z`.
pub fn compute_discontinuity(
    sm: &ShadowMap,
    texel: Texel,
    p_z: f64,
    z: f64,
    bias: f64,
) -> Discontinuity {
    let s = shadow_test(p_z, z, bias);
    let du = neighborhood(sm, texel, p_z, bias).map(|n| (n - s).abs());
    Discontinuity {
        dx: (2.0 * du[0] + du[1]) / 4.0,
        dy: (2.0 * du[2] + du[3]) / 4.0,
        dz: 1.0 - s,
    }
}

/// Whether the neighbour texel `np`, tested at the origin fragment's depth,
/// continues the same edge as `origin`: its discontinuity perpendicular to the
/// traversal direction must share at least one direction with the origin's.
pub fn check_discontinuity(
    sm: &ShadowMap,
    np: Texel,
    origin: &Discontinuity,
    p_z: f64,
    bias: f64,
    dir: Direction,
) -> bool {
    let n = compute_discontinuity(sm, np, p_z, sm.depth_at(np), bias);
    let (theirs, ours) = if dir.is_horizontal() {
        (n.dy, origin.dy)
    } else {
        (n.dx, origin.dx)
    };
    Discontinuity::bits(theirs) & Discontinuity::bits(ours) != 0
}

#[cfg(test)]
mod tests {
    use super::super::testutil::{map, RECEIVER};
    use super::*;

    const B: f64 = 0.0;

    #[test]
    fn shadow_test_cases() {
        assert_eq!(shadow_test(0.8, 0.5, 0.0), 0.0);
        assert_eq!(shadow_test(0.5, 0.5, 0.0), 1.0);
        assert_eq!(shadow_test(0.5001, 0.5, 0.001), 1.0);
    }

    #[test]
    fn neighborhood_cases() {
        let lit = map(&["...", "...", "..."]);
        assert_eq!(neighborhood(&lit, Texel::new(1, 1), RECEIVER, B), [1.0; 4]);
        let step = map(&["#..", "#..", "#.."]);
        assert_eq!(neighborhood(&step, Texel::new(1, 1), RECEIVER, B), [0.0, 1.0, 1.0, 1.0]);
        let dark = map(&["###", "###", "###"]);
        assert_eq!(neighborhood(&dark, Texel::new(1, 1), RECEIVER, B), [0.0; 4]);
    }

    #[test]
    fn neighborhood_clamps_to_border() {
        let sm = map(&["#..", "...", "..."]);
        // (0, 2) is the blocker; looking up (-1, 2) and (0, 3) hits it again.
        assert_eq!(neighborhood(&sm, Texel::new(0, 2), RECEIVER, B), [0.0, 1.0, 0.0, 1.0]);
    }

    fn disc(rows: &[&str], x: i64, y: i64) -> Discontinuity {
        let sm = map(rows);
        let t = Texel::new(x, y);
        compute_discontinuity(&sm, t, RECEIVER, sm.depth_at(t), B)
    }

    #[test]
    fn discontinuity_codes() {
        assert_eq!(disc(&["...", "#..", "..."], 1, 1).dx, 0.5);
        assert_eq!(disc(&["...", "..#", "..."], 1, 1).dx, 0.25);
        assert_eq!(disc(&["...", "#.#", "..."], 1, 1).dx, 0.75);
        assert_eq!(disc(&[".#.", "...", "..."], 1, 1).dy, 0.5);
        assert_eq!(disc(&["...", "...", ".#."], 1, 1).dy, 0.25);
        assert_eq!(
            disc(&["...", "...", "..."], 1, 1),
            Discontinuity { dx: 0.0, dy: 0.0, dz: 0.0 }
        );
        // A shadowed fragment sees its lit neighbours as discontinuities.
        assert_eq!(
            disc(&["...", ".##", "..."], 1, 1),
            Discontinuity { dx: 0.5, dy: 0.75, dz: 1.0 }
        );
    }

    #[test]
    fn shared_direction_check() {
        // Row 1 is lit with shadow below along x = 0..=2; x = 1 also has shadow above.
        let sm = map(&[
            ".#..",
            "....",
            "###.",
        ]);
        let origin = compute_discontinuity(&sm, Texel::new(1, 1), RECEIVER, 1.0, B);
        assert_eq!(origin.dy, 0.75);
        let check = |x, dir| check_discontinuity(&sm, Texel::new(x, 1), &origin, RECEIVER, B, dir);
        // dy = 0.25 at x = 0 and x = 2: shares the -y bit.
        assert!(check(0, Direction::Left));
        assert!(check(2, Direction::Right));
        // x = 3 has no vertical discontinuity.
        assert!(!check(3, Direction::Right));

        let single = Discontinuity { dx: 0.0, dy: 0.25, dz: 0.0 };
        assert!(check_discontinuity(&sm, Texel::new(2, 1), &single, RECEIVER, B, Direction::Right));
        let top = Discontinuity { dx: 0.0, dy: 0.5, dz: 0.0 };
        assert!(!check_discontinuity(&sm, Texel::new(2, 1), &top, RECEIVER, B, Direction::Right));
    }
}
