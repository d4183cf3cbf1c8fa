//! Adaptive Dormand-Prince integration of the unit-speed trajectory field.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use super::{initial_directions, principal_direction_of, Orientation, TraceConfig, Termination, Trajectory};
use crate::error::{Error, Result};
use crate::qdcore::{nearest_branch, period, Path, QuadDiff};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Escape radius multiplier applied at most three times when the crossing
/// angle is too close to a sector boundary.
const EXTENSIONS: u32 = 3;
/// Largest relative transverse part of the remaining period for a capture.
const CAPTURE_SLOPE: f64 = 0.05;

/// Largest transverse period to the pole, in units of `scale^((k + 1) / 2)`,
/// for a capture there. Near a simple pole a miss by `w` in the flat
/// coordinate passes at distance about `w^2`, so neither the slope test nor
/// the distance alone separates a connection from a near miss.
const POLE_MISS: f64 = 1e-6;

struct Field<'a> {
    qd: &'a QuadDiff,
    rot: Complex64,
}

impl Field<'_> {
    /// Unit tangent `e^{i phi} conj(s) / |s|` and the branch `s` of
    /// `sqrt(q(z))` nearest to `s_ref`, or `None` if `q` turns too far.
    fn eval(&self, z: Complex64, s_ref: Complex64) -> Option<(Complex64, Complex64)> {
        let q = self.qd.q(z);
        let norm = q.norm();
        if !norm.is_finite() || norm == 0.0 || (q / (s_ref * s_ref)).arg().abs() > FRAC_PI_4 {
            return None;
        }
        let s = nearest_branch(q, s_ref);
        Some((self.rot * s.conj() / s.norm(), s))
    }
}

/// Traces the critical trajectory leaving critical point `start` along its
/// local direction `direction` (an index into [`initial_directions`]).
pub fn trace(
    qd: &QuadDiff,
    start: usize,
    direction: usize,
    orientation: Orientation,
    config: &TraceConfig,
) -> Result<Trajectory> {
    let dirs = initial_directions(qd, start, orientation)?;
    let theta = *dirs
        .get(direction)
        .ok_or_else(|| Error::Precondition(format!("critical point {start} has no direction {direction}")))?;
    let cps = qd.critical_points();
    let z0 = cps[start].z;
    let scale = qd.scale();
    let eps_cap = config.capture_radius(qd);
    let radius = config.escape_radius(qd);
    let field = Field { qd, rot: orientation.rotation() };
    let target = Complex64::from_polar(1.0, orientation.target_phase());

    let mut z = z0 + theta * (0.01 * eps_cap);
    let q = qd.q(z);
    let mut s = q.sqrt();
    if (field.rot * s.conj() * theta.conj()).re < 0.0 {
        s = -s;
    }
    let mut points = vec![z0, z];
    let mut h = 0.01 * eps_cap;
    let mut max_phase_error = 0.0_f64;
    let mut exit = None;
    let mut limit = radius;
    let mut extensions = 0;

    for _ in 0..config.max_steps {
        let nearest = cps.iter().map(|c| (c.z - z).norm()).fold(f64::INFINITY, f64::min);
        h = h.min(0.5 * nearest);
        if h < 1e-15 * z.norm().max(scale) {
            return Err(Error::StepFailure { at: format!("{z}") });
        }
        let Some((z_new, err)) = dp_step(&field, z, s, h) else {
            h *= 0.25;
            continue;
        };
        let allow = config.tolerance * scale;
        if err > allow {
            h *= (0.9 * (allow / err).powf(0.2)).max(0.1);
            continue;
        }
        let Some((tangent, s_new)) = field.eval(z_new, s) else {
            h *= 0.25;
            continue;
        };
        let phase = (qd.q(z_new) * tangent * tangent * target.conj()).arg().abs();
        max_phase_error = max_phase_error.max(phase);
        let (z_old, s_old, h_used) = (z, s, h);
        z = z_new;
        s = s_new;
        points.push(z);
        h *= if err > 0.0 { (0.9 * (allow / err).powf(0.2)).clamp(0.2, 5.0) } else { 5.0 };

        if z.norm() >= limit {
            let crossing = land_on_circle(&field, z_old, s_old, h_used, limit);
            if exit.is_none() {
                exit = Some(if limit == radius {
                    crossing
                } else {
                    land_on_circle(&field, z_old, s_old, h_used, radius)
                });
            }
            match principal_direction_of(qd, crossing.arg(), orientation) {
                Ok(j) => {
                    *points.last_mut().unwrap() = crossing;
                    return Ok(Trajectory {
                        orientation,
                        start: (start, direction),
                        points,
                        termination: Termination::Escape { direction: j },
                        exit,
                        max_phase_error,
                    });
                }
                Err(e) if extensions >= EXTENSIONS => return Err(e),
                Err(_) => {
                    extensions += 1;
                    limit *= 10.0;
                }
            }
        }

        for (id, cp) in cps.iter().enumerate() {
            if id == start {
                continue;
            }
            let d = cp.z - z;
            if d.norm() >= eps_cap || (d * tangent.conj()).re <= 0.0 {
                continue;
            }
            if cp.is_pole() {
                let miss = POLE_MISS * scale.powf((qd.k() + 1) as f64 / 2.0);
                match transverse_to(qd, z, s, cp.z, field.rot) {
                    Ok(Some(t)) if t <= miss => {}
                    _ => continue,
                }
            } else if d.norm() > (0.01 * eps_cap).max(2.0 * qd.eps_crit()) && !heads_into(qd, z, s, cp.z, field.rot)? {
                continue;
            }
            let arrival = initial_directions(qd, id, orientation)?
                .iter()
                .enumerate()
                .min_by(|a, b| ((*a.1) + d / d.norm()).norm().total_cmp(&((*b.1) + d / d.norm()).norm()))
                .map(|(j, _)| j)
                .unwrap();
            points.push(cp.z);
            return Ok(Trajectory {
                orientation,
                start: (start, direction),
                points,
                termination: Termination::HitsCritical { point: id, direction: arrival },
                exit: None,
                max_phase_error,
            });
        }
    }
    Ok(Trajectory {
        orientation,
        start: (start, direction),
        points,
        termination: Termination::Budget,
        exit: None,
        max_phase_error,
    })
}

/// One Dormand-Prince step; returns the fifth-order point and the error
/// estimate, or `None` if a stage lands where the branch cannot be followed.
fn dp_step(field: &Field, z: Complex64, s: Complex64, h: f64) -> Option<(Complex64, f64)> {
    let mut k = [Complex64::new(0.0, 0.0); 7];
    for i in 0..7 {
        let mut zi = z;
        for j in 0..i {
            zi += k[j] * (h * A[i][j]);
        }
        debug_assert!(C[i] >= 0.0);
        k[i] = field.eval(zi, s)?.0;
    }
    let mut z5 = z;
    let mut e = Complex64::new(0.0, 0.0);
    for i in 0..7 {
        z5 += k[i] * (h * B5[i]);
        e += k[i] * (h * (B5[i] - B4[i]));
    }
    Some((z5, e.norm()))
}

/// Whether the period from `z` to the critical point `c` runs along the
/// trajectory direction, as it does for a trajectory that ends at `c`.
fn heads_into(qd: &QuadDiff, z: Complex64, s: Complex64, c: Complex64, rot: Complex64) -> Result<bool> {
    let dw = period(qd, &Path::segment(z, c)?, s)? * rot.conj();
    Ok(dw.re > 0.0 && dw.im.abs() <= CAPTURE_SLOPE * dw.norm())
}

/// Transverse part of the period from `z` to `c` when it satisfies the
/// slope test.
fn transverse_to(qd: &QuadDiff, z: Complex64, s: Complex64, c: Complex64, rot: Complex64) -> Result<Option<f64>> {
    let dw = period(qd, &Path::segment(z, c)?, s)? * rot.conj();
    Ok((dw.re > 0.0 && dw.im.abs() <= CAPTURE_SLOPE * dw.norm()).then_some(dw.im.abs()))
}

/// Point where the step of length `h` from `z` leaves the circle `|z| = r`,
/// found by bisection on the step length so that it lies on the trajectory.
fn land_on_circle(field: &Field, z: Complex64, s: Complex64, h: f64, r: f64) -> Complex64 {
    let (mut lo, mut hi) = (0.0, h);
    let mut best = None;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        match dp_step(field, z, s, mid) {
            Some((w, _)) if w.norm() >= r => {
                hi = mid;
                best = Some(w);
            }
            Some((w, _)) => {
                lo = mid;
                if best.is_none() {
                    best = Some(w);
                }
            }
            None => hi = mid,
        }
        if hi - lo <= 1e-14 * h {
            break;
        }
    }
    let w = best.unwrap_or(z);
    w * (r / w.norm())
}
