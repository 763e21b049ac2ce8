use super::discontinuity::{check_discontinuity, shadow_test};
use super::{Direction, Discontinuity, EdgeDistances, NormalizedDistances, RbsmParams, Texel};
use crate::raster::ShadowMap;

/// Walks from `texel` along `dir` while the neighbours stay on the same edge.
///
/// Returns `+n` when the n-th texel has the opposite shadow state (the edge
/// ends there), `-n` when the n-th texel no longer shares an edge direction,
/// and `-(maxdist + 1)` when no decision was reached within `maxdist` steps.
pub fn traverse(
    sm: &ShadowMap,
    texel: Texel,
    p_z: f64,
    d: &Discontinuity,
    dir: Direction,
    params: &RbsmParams,
) -> i32 {
    let (sx, sy) = dir.step();
    let mut distance: i32 = 1;
    for _ in 0..params.maxdist {
        let np = texel.offset(sx * distance as i64, sy * distance as i64);
        if shadow_test(p_z, sm.depth_at(np), params.depth_bias) == d.dz {
            return distance;
        }
        if !check_discontinuity(sm, np, d, p_z, params.depth_bias, dir) {
            return -distance;
        }
        distance += 1;
    }
    -distance
}

/// Edge walks in all four directions. A side already flagged in the fragment's
/// own discontinuity is an adjacent end and gets `+1` without walking.
pub fn compute_edge_distances(
    sm: &ShadowMap,
    texel: Texel,
    p_z: f64,
    d: &Discontinuity,
    params: &RbsmParams,
) -> EdgeDistances {
    let bx = Discontinuity::bits(d.dx);
    let by = Discontinuity::bits(d.dy);
    let walk = |adjacent: bool, dir| {
        if adjacent {
            1
        } else {
            traverse(sm, texel, p_z, d, dir, params)
        }
    };
    EdgeDistances {
        left: walk(bx & 2 != 0, Direction::Left),
        right: walk(bx & 1 != 0, Direction::Right),
        down: walk(by & 1 != 0, Direction::Down),
        up: walk(by & 2 != 0, Direction::Up),
    }
}

fn flag(neg: i32, pos: i32) -> i8 {
    match (neg > 0, pos > 0) {
        (true, true) => 1,
        (false, false) => -1,
        _ => 0,
    }
}

/// Distance along one axis from the edge end, in units of the edge length.
///
/// `neg`/`pos` are the walk results towards -axis/+axis and `frac` the
/// sub-texel position along +axis. The value is 0 at the end that was found
/// (the aliasing corner) and 1 at the open extremity of the edge.
fn axis_distance(neg: i32, pos: i32, frac: f64) -> f64 {
    let (n, p) = (neg.unsigned_abs() as f64, pos.unsigned_abs() as f64);
    let len = n + p - 1.0;
    let from_neg = (n - 1.0) + frac;
    let from_pos = (p - 1.0) + (1.0 - frac);
    let q = match flag(neg, pos) {
        0 if neg > 0 => from_neg,
        0 => from_pos,
        // Both or neither end found: measure from the nearer side.
        _ => from_neg.min(from_pos),
    };
    (q / len).clamp(0.0, 1.0)
}

/// Orients and normalizes the walk lengths into the unit frame of the edge.
pub fn normalize_distances(rd: &EdgeDistances, subtexel: (f64, f64)) -> NormalizedDistances {
    NormalizedDistances {
        x: axis_distance(rd.left, rd.right, subtexel.0),
        y: axis_distance(rd.down, rd.up, subtexel.1),
        zflag: flag(rd.left, rd.right),
        wflag: flag(rd.down, rd.up),
    }
}

#[cfg(test)]
mod tests {
    use super::super::discontinuity::compute_discontinuity;
    use super::super::testutil::{map, RECEIVER};
    use super::*;
    use proptest::prelude::*;

    fn distances(sm: &ShadowMap, x: i64, y: i64, maxdist: u32) -> EdgeDistances {
        let t = Texel::new(x, y);
        let params = RbsmParams { maxdist, depth_bias: 0.0, ..Default::default() };
        let d = compute_discontinuity(sm, t, RECEIVER, sm.depth_at(t), 0.0);
        compute_edge_distances(sm, t, RECEIVER, &d, &params)
    }

    fn walk(sm: &ShadowMap, x: i64, y: i64, dir: Direction, maxdist: u32) -> i32 {
        let t = Texel::new(x, y);
        let params = RbsmParams { maxdist, depth_bias: 0.0, ..Default::default() };
        let d = compute_discontinuity(sm, t, RECEIVER, sm.depth_at(t), 0.0);
        traverse(sm, t, RECEIVER, &d, dir, &params)
    }

    #[test]
    fn immediate_end() {
        let sm = map(&["....", "..#.", "####"]);
        assert_eq!(walk(&sm, 1, 1, Direction::Right, 16), 1);
    }

    #[test]
    fn immediate_exit() {
        let sm = map(&["....", "....", "##.."]);
        assert_eq!(walk(&sm, 1, 1, Direction::Right, 16), -1);
    }

    #[test]
    fn walk_exhausts_maxdist() {
        let sm = map(&[&".".repeat(40), &"#".repeat(40)]);
        assert_eq!(walk(&sm, 2, 1, Direction::Right, 16), -17);
        assert_eq!(walk(&sm, 2, 1, Direction::Right, 3), -4);
    }

    #[test]
    fn five_texel_step() {
        let sm = map(&[
            "........",
            "........",
            "........",
            "........",
            "........",
            "........",
            "......##",
            ".#######",
        ]);
        let rd = distances(&sm, 3, 1, 16);
        assert_eq!((rd.left, rd.right), (-3, 3));
        assert_eq!(rd.down, 1);
        assert_eq!(rd.up, -1);
    }

    #[test]
    fn i_shape_has_no_vertical_ends() {
        // A straight horizontal edge seen from the lit side and from the shadowed side.
        let sm = map(&[&".".repeat(12), &".".repeat(12), &"#".repeat(12), &"#".repeat(12)]);
        let lit = distances(&sm, 6, 2, 4);
        assert_eq!((lit.left, lit.right), (-5, -5));
        assert_eq!((lit.down, lit.up), (1, -1));
        let shadowed = distances(&sm, 6, 1, 4);
        assert_eq!((shadowed.left, shadowed.right), (-5, -5));
        // Both vertical walks of a vertical edge fragment are negative.
        let sm = map(&["..##", "..##", "..##", "..##", "..##", "..##"]);
        let rd = distances(&sm, 1, 3, 16);
        assert!(rd.down < 0 && rd.up < 0, "{rd:?}");
        assert_eq!(rd.right, 1);
    }

    #[test]
    fn normalization_examples() {
        let n = normalize_distances(&EdgeDistances { left: -3, right: 1, down: 1, up: -1 }, (0.5, 0.25));
        assert_eq!(n.zflag, 0);
        // Half a texel from the end of a 3-texel edge.
        assert!((n.x - 1.0 / 6.0).abs() < 1e-12, "{}", n.x);
        assert!((n.y - 0.25).abs() < 1e-12);
        assert_eq!(n.wflag, 0);

        let n = normalize_distances(&EdgeDistances { left: -5, right: -5, down: 1, up: -1 }, (0.5, 0.5));
        assert_eq!(n.zflag, -1);
        let n = normalize_distances(&EdgeDistances { left: 2, right: 2, down: 1, up: -1 }, (0.5, 0.5));
        assert_eq!(n.zflag, 1);
        // Centre of a 3-texel edge closed at both ends.
        assert!((n.x - 0.5).abs() < 1e-12);
    }

    #[test]
    fn normalization_end_orientation() {
        // End on the left: distance grows to the right.
        let a = normalize_distances(&EdgeDistances { left: 1, right: -4, down: 1, up: -1 }, (0.1, 0.0));
        let b = normalize_distances(&EdgeDistances { left: 1, right: -4, down: 1, up: -1 }, (0.9, 0.0));
        assert!(a.x < b.x);
        assert!((a.x - 0.1 / 4.0).abs() < 1e-12);
    }

    fn arb_walk() -> impl Strategy<Value = i32> {
        prop_oneof![1..=17i32, -17..=-1i32]
    }

    proptest! {
        #[test]
        fn normalized_in_unit_square(l in arb_walk(), r in arb_walk(), d in arb_walk(), u in arb_walk(),
                                     fx in 0.0..1.0f64, fy in 0.0..1.0f64) {
            let n = normalize_distances(&EdgeDistances { left: l, right: r, down: d, up: u }, (fx, fy));
            prop_assert!((0.0..=1.0).contains(&n.x) && (0.0..=1.0).contains(&n.y));
        }

        #[test]
        fn normalization_mirror_symmetric(l in arb_walk(), r in arb_walk(), k in 0u32..1024) {
            let fx = k as f64 / 1024.0;
            let a = normalize_distances(&EdgeDistances { left: l, right: r, down: 1, up: -1 }, (fx, 0.5));
            let b = normalize_distances(&EdgeDistances { left: r, right: l, down: 1, up: -1 }, (1.0 - fx, 0.5));
            prop_assert_eq!(a.x, b.x);
            prop_assert_eq!(a.zflag, b.zflag);
        }
    }
}
