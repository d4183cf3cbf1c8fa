//! Continuation of `sqrt(q)` along paths.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::{Path, QuadDiff};
use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;

/// The square root of `value` closest in argument to `reference`.
pub fn nearest_branch(value: Complex64, reference: Complex64) -> Complex64 {
    let s = value.sqrt();
    if (s * reference.conj()).re >= 0.0 {
        s
    } else {
        -s
    }
}

/// `sqrt(q)` at every waypoint of `path`, continued from `initial_branch`.
///
/// Between waypoints the segment is bisected until the phase of `q` can move
/// by at most a quarter turn per piece, so the nearest-argument rule is
/// unambiguous.
pub fn sqrt_q_along(qd: &QuadDiff, path: &Path, initial_branch: Complex64) -> Result<Vec<Complex64>> {
    let z0 = path.first();
    let q0 = qd.q(z0);
    if (initial_branch * initial_branch - q0).norm() > 1e-9 * q0.norm().max(1e-300) {
        return Err(Error::Precondition(format!(
            "initial branch {initial_branch} does not square to q({z0}) = {q0}"
        )));
    }
    path.check_clearance(qd)?;
    if qd.critical_near(z0, qd.eps_crit()).is_some() || qd.critical_near(path.last(), qd.eps_crit()).is_some() {
        return Err(Error::PathThroughSingularity {
            near: format!("{z0}"),
            radius: qd.eps_crit(),
        });
    }
    let mut out = Vec::with_capacity(path.points().len());
    out.push(initial_branch);
    let mut s = initial_branch;
    for w in path.points().windows(2) {
        s = continue_segment(qd, w[0], w[1], s, 0)?;
        out.push(s);
    }
    Ok(out)
}

/// Continues the branch `s_a` at `a` to `b` along the straight segment.
pub(crate) fn continue_segment(
    qd: &QuadDiff,
    a: Complex64,
    b: Complex64,
    s_a: Complex64,
    depth: u32,
) -> Result<Complex64> {
    let qb = qd.q(b);
    if phase_variation(qd, a, b) <= FRAC_PI_2 && qb.norm() > 0.0 {
        return Ok(nearest_branch(qb, s_a));
    }
    let m = (a + b) * 0.5;
    let eps = qd.eps_crit();
    if depth >= MAX_DEPTH || qd.critical_near(m, eps).is_some() {
        return Err(Error::PathThroughSingularity {
            near: format!("{m}"),
            radius: eps,
        });
    }
    let s_m = continue_segment(qd, a, m, s_a, depth + 1)?;
    continue_segment(qd, m, b, s_m, depth + 1)
}

/// Bound on the change of `arg q` along the segment `a -> b`: each factor
/// `z - c` turns monotonically by the angle the segment subtends at `c`.
fn phase_variation(qd: &QuadDiff, a: Complex64, b: Complex64) -> f64 {
    let turn = |c: Complex64| ((b - c) / (a - c)).arg().abs();
    let zeros: f64 = qd.zeros().iter().map(|&(c, m)| m as f64 * turn(c)).sum();
    let pole = if qd.has_pole() { turn(Complex64::new(0.0, 0.0)) } else { 0.0 };
    zeros + pole
}

/// Branch at the end of a polyline whose endpoints may be critical points;
/// critical endpoints are replaced by a point a short way into the segment.
pub(crate) fn end_reference(qd: &QuadDiff, points: &[Complex64], reference: Complex64) -> Result<Complex64> {
    let eps = qd.eps_crit();
    let n = points.len();
    if n == 1 {
        return Ok(reference);
    }
    let pull = |p: Complex64, toward: Complex64| {
        if qd.critical_near(p, eps).is_some() {
            p + (toward - p) * 1e-3
        } else {
            p
        }
    };
    let mut pts: Vec<Complex64> = points.to_vec();
    pts[0] = pull(points[0], points[1]);
    pts[n - 1] = pull(points[n - 1], points[n - 2]);
    let mut s = nearest_branch(qd.q(pts[0]), reference);
    for w in pts.windows(2) {
        s = continue_segment(qd, w[0], w[1], s, 0)?;
    }
    Ok(s)
}
