use super::{Discontinuity, NormalizedDistances};

/// `0` when `v < edge`, else `1`.
fn step(edge: f64, v: f64) -> f64 {
    if v < edge {
        0.0
    } else {
        1.0
    }
}

/// Binary visibility of a lit edge fragment after revectorization.
pub fn visibility_recovery(d: &Discontinuity, nrd: &NormalizedDistances) -> f64 {
    // Short U or O shape: too thin to revectorize, close it.
    if d.dx == 0.75 || d.dy == 0.75 {
        return 0.0;
    }
    // U shape.
    if nrd.zflag == 1 || nrd.wflag == 1 {
        return 0.0;
    }
    // I shape: nothing to revectorize.
    if nrd.zflag == -1 || nrd.wflag == -1 {
        return 1.0;
    }
    // L shape: lit above the line through the two ends.
    step(1.0 - nrd.x, nrd.y)
}

/// Fractional visibility of an edge fragment on either side of the edge.
pub fn visibility_filtering(d: &Discontinuity, nrd: &NormalizedDistances) -> f64 {
    let sign = -2.0 * d.dz + 1.0;
    // Short O shape: flip the shadow test.
    if d.dx == 0.75 && d.dy == 0.75 {
        return d.dz;
    }
    // O shape.
    if nrd.zflag == 1 && nrd.wflag == 1 {
        return d.dz;
    }
    // U shapes ramp along their open axis only.
    if nrd.zflag == 1 {
        return d.dz + sign * nrd.y;
    }
    if nrd.wflag == 1 {
        return d.dz + sign * nrd.x;
    }
    // I shape: keep the shadow test.
    if nrd.zflag == -1 || nrd.wflag == -1 {
        return 1.0 - d.dz;
    }
    (d.dz + sign * nrd.y + sign * nrd.x).clamp(0.0, 1.0)
}
