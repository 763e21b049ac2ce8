//! Edge walks on staircase maps whose run lengths are known in closed form.

use rbsm::rbsm::{compute_discontinuity, compute_edge_distances};
use rbsm::{RbsmParams, ShadowMap, Texel};

const BLOCKER: f32 = 0.25;
const OPEN: f32 = 1.0;
const RECEIVER: f64 = 0.5;

fn map(width: u32, height: u32, shadowed: impl Fn(i64, i64) -> bool) -> ShadowMap {
    let depth = (0..height as i64)
        .flat_map(|y| (0..width as i64).map(move |x| (x, y)))
        .map(|(x, y)| if shadowed(x, y) { BLOCKER } else { OPEN })
        .collect();
    ShadowMap::from_depths(width, height, depth).unwrap()
}

fn walks(sm: &ShadowMap, t: Texel, maxdist: u32) -> [i32; 4] {
    let params = RbsmParams {
        maxdist,
        ..RbsmParams::default()
    };
    let d = compute_discontinuity(sm, t, RECEIVER, sm.depth_at(t), params.depth_bias);
    let rd = compute_edge_distances(sm, t, RECEIVER, &d, &params);
    [rd.left, rd.right, rd.down, rd.up]
}

/// Expected walk result when the decisive texel sits `n` steps away.
fn capped(n: i64, found_end: bool, maxdist: u32) -> i32 {
    if n > maxdist as i64 {
        -(maxdist as i32 + 1)
    } else if found_end {
        n as i32
    } else {
        -(n as i32)
    }
}

// Shadow below a rising staircase with horizontal treads of length k:
// texel (x, y) is shadowed iff y < x / k. The lit tread texels at y = x / k
// end on the right against the next riser (shadow) and on the left where
// the edge drops away (lit, no longer an edge).
#[test]
fn horizontal_treads() {
    for maxdist in [4u32, 16] {
        for k in 1..=20i64 {
            let sm = map((6 * k + 2) as u32, 8, |x, y| y < x / k);
            for y in 2..5 {
                for x in k * y..k * y + k {
                    let got = walks(&sm, Texel::new(x, y), maxdist);
                    let right = capped(k * y + k - x, true, maxdist);
                    let left = capped(x - k * y + 1, false, maxdist);
                    assert_eq!(
                        (got[0], got[1]),
                        (left, right),
                        "k={k} maxdist={maxdist} texel=({x},{y})"
                    );
                }
            }
        }
    }
}

// The same staircase transposed: shadow to the left of vertical risers.
#[test]
fn vertical_risers() {
    for maxdist in [4u32, 16] {
        for k in 1..=20i64 {
            let sm = map(8, (6 * k + 2) as u32, |x, y| x < y / k);
            for x in 2..5 {
                for y in k * x..k * x + k {
                    let got = walks(&sm, Texel::new(x, y), maxdist);
                    let up = capped(k * x + k - y, true, maxdist);
                    let down = capped(y - k * x + 1, false, maxdist);
                    assert_eq!(
                        (got[2], got[3]),
                        (down, up),
                        "k={k} maxdist={maxdist} texel=({x},{y})"
                    );
                }
            }
        }
    }
}

// A shadowed texel on a straight edge that spans the whole map never finds
// an end; the border repeats the last texel, so the walk runs out.
#[test]
fn unbounded_edge_runs_out() {
    let sm = map(40, 10, |_, y| y < 5);
    for x in [0i64, 7, 20, 39] {
        let got = walks(&sm, Texel::new(x, 4), 16);
        assert_eq!((got[0], got[1]), (-17, -17), "x={x}");
    }
}

// A single shadowed texel is its own end in every direction.
#[test]
fn isolated_texel_is_closed() {
    let sm = map(9, 9, |x, y| x == 4 && y == 4);
    assert_eq!(walks(&sm, Texel::new(4, 4), 16), [1, 1, 1, 1]);
}
