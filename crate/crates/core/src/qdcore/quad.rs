//! Periods `int_path sqrt(q) dz` by adaptive Gauss-Kronrod quadrature.
//!
//! Endpoints sitting on a zero or on the pole are integrable singularities of
//! the form `(z - z0)^{m/2}`; the substitution `z - z0 = d u^2` turns them into
//! analytic integrands in `u`.

use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::branch::{end_reference, nearest_branch};
use super::{Path, QuadDiff};
use crate::error::{Error, Result};

/// Absolute error target for periods.
pub const PERIOD_TOLERANCE: f64 = 1e-9;

const MAX_EVALUATIONS: usize = 4_000_000;
const MIN_WIDTH: f64 = 1e-13;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodEstimate {
    pub value: Complex64,
    pub error: f64,
}

/// `int_path sqrt(q) dz`, failing when the error target is not met.
pub fn period(qd: &QuadDiff, path: &Path, initial_branch: Complex64) -> Result<Complex64> {
    let est = period_with_error(qd, path, initial_branch)?;
    Ok(est.value)
}

/// `int_path sqrt(q) dz` together with its error estimate.
///
/// `initial_branch` selects the sign of `sqrt(q)` at the first waypoint; when
/// that waypoint is a critical point it is matched against the values just
/// inside the first segment instead.
///
/// The path is always integrated in a canonical orientation, so reversing it
/// (with the matching end branch) negates the result exactly.
pub fn period_with_error(qd: &QuadDiff, path: &Path, initial_branch: Complex64) -> Result<PeriodEstimate> {
    let pts = path.points();
    if pts.len() == 1 {
        return Ok(PeriodEstimate {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
        });
    }
    let eps = qd.eps_crit();
    if qd.critical_near(pts[0], eps).is_none() {
        let q0 = qd.q(pts[0]);
        if (initial_branch * initial_branch - q0).norm() > 1e-9 * q0.norm() {
            return Err(Error::Precondition(format!(
                "initial branch {initial_branch} does not square to q = {q0}"
            )));
        }
    }
    path.check_clearance(qd)?;
    let reversed: Vec<Complex64> = pts.iter().rev().copied().collect();
    if lexicographic(pts, &reversed) != Ordering::Greater {
        integrate_polyline(qd, pts, initial_branch)
    } else {
        let end = end_reference(qd, pts, initial_branch)?;
        let est = integrate_polyline(qd, &reversed, end)?;
        Ok(PeriodEstimate {
            value: -est.value,
            error: est.error,
        })
    }
}

fn lexicographic(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x
            .re
            .partial_cmp(&y.re)
            .unwrap_or(Ordering::Equal)
            .then(x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

#[derive(Clone, Copy)]
enum Kind {
    Regular,
    /// critical point at the start of the piece
    LeftSingular,
    /// critical point at the end of the piece
    RightSingular,
}

struct Piece {
    a: Complex64,
    b: Complex64,
    kind: Kind,
}

impl Piece {
    fn z(&self, u: f64) -> Complex64 {
        let d = self.b - self.a;
        match self.kind {
            Kind::Regular => self.a + d * u,
            Kind::LeftSingular => self.a + d * (u * u),
            Kind::RightSingular => self.b - d * ((1.0 - u) * (1.0 - u)),
        }
    }

    fn dz(&self, u: f64) -> Complex64 {
        let d = self.b - self.a;
        match self.kind {
            Kind::Regular => d,
            Kind::LeftSingular => d * (2.0 * u),
            Kind::RightSingular => d * (2.0 * (1.0 - u)),
        }
    }

    fn singular_end(&self) -> bool {
        matches!(self.kind, Kind::RightSingular)
    }
}

struct Integrator<'a> {
    qd: &'a QuadDiff,
    evaluations: usize,
}

fn integrate_polyline(qd: &QuadDiff, pts: &[Complex64], initial: Complex64) -> Result<PeriodEstimate> {
    let eps = qd.eps_crit();
    let n_last = pts.len() - 1;
    let mut pieces = Vec::new();
    for (i, w) in pts.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let left = i == 0 && qd.critical_near(a, eps).is_some();
        let right = i + 1 == n_last && qd.critical_near(b, eps).is_some();
        match (left, right) {
            (false, false) => pieces.push(Piece { a, b, kind: Kind::Regular }),
            (true, false) => pieces.push(Piece { a, b, kind: Kind::LeftSingular }),
            (false, true) => pieces.push(Piece { a, b, kind: Kind::RightSingular }),
            (true, true) => {
                let m = (a + b) * 0.5;
                pieces.push(Piece { a, b: m, kind: Kind::LeftSingular });
                pieces.push(Piece { a: m, b, kind: Kind::RightSingular });
            }
        }
    }
    let mut integ = Integrator { qd, evaluations: 0 };
    let tol = PERIOD_TOLERANCE / pieces.len() as f64;
    let mut total = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut s = match pieces[0].kind {
        // sqrt(q) has constant phase along the substituted segment near the
        // critical start, so any point close to it fixes the branch
        Kind::LeftSingular => nearest_branch(qd.q(pieces[0].z(1e-3)), initial),
        _ => initial,
    };
    for piece in &pieces {
        let (v, e, s_end) = integ.adaptive(piece, 0.0, 1.0, s, tol, 0)?;
        total += v;
        error += e;
        s = s_end;
    }
    Ok(PeriodEstimate { value: total, error })
}

impl Integrator<'_> {
    fn adaptive(
        &mut self,
        piece: &Piece,
        u0: f64,
        u1: f64,
        s_ref: Complex64,
        tol: f64,
        depth: u32,
    ) -> Result<(Complex64, f64, Complex64)> {
        let rule = self.gk15(piece, u0, u1, s_ref);
        if let Some((value, err, magnitude, s_last)) = rule {
            // allow for roundoff in large integrals
            let floor = 1e-14 * magnitude;
            if err <= tol.max(floor) {
                let s_end = if piece.singular_end() && u1 >= 1.0 {
                    s_last
                } else {
                    let q_end = self.qd.q(piece.z(u1));
                    let q_last = s_last * s_last;
                    if (q_end / q_last).arg().abs() > FRAC_PI_2 {
                        return self.split(piece, u0, u1, s_ref, tol, depth);
                    }
                    nearest_branch(q_end, s_last)
                };
                return Ok((value, err, s_end));
            }
        }
        self.split(piece, u0, u1, s_ref, tol, depth)
    }

    fn split(
        &mut self,
        piece: &Piece,
        u0: f64,
        u1: f64,
        s_ref: Complex64,
        tol: f64,
        depth: u32,
    ) -> Result<(Complex64, f64, Complex64)> {
        if u1 - u0 < MIN_WIDTH || self.evaluations > MAX_EVALUATIONS || depth > 200 {
            return Err(Error::QuadratureFailure {
                estimate: f64::INFINITY,
                target: tol,
            });
        }
        let m = 0.5 * (u0 + u1);
        let (v1, e1, s_mid) = self.adaptive(piece, u0, m, s_ref, 0.5 * tol, depth + 1)?;
        let (v2, e2, s_end) = self.adaptive(piece, m, u1, s_mid, 0.5 * tol, depth + 1)?;
        Ok((v1 + v2, e1 + e2, s_end))
    }

    /// Kronrod value, |K15 - G7|, sum of |f| weights, last branch value.
    /// `None` when the branch moves too fast between nodes.
    fn gk15(&mut self, piece: &Piece, u0: f64, u1: f64, s_ref: Complex64) -> Option<(Complex64, f64, f64, Complex64)> {
        let c = 0.5 * (u0 + u1);
        let h = 0.5 * (u1 - u0);
        // nodes in ascending order: -x0 .. -x6, 0, x6 .. x0
        let mut nodes = [(0.0_f64, 0.0_f64, 0.0_f64); 15];
        for i in 0..7 {
            let g = if i % 2 == 1 { WG[i / 2] } else { 0.0 };
            nodes[i] = (-XGK[i], WGK[i], g);
            nodes[14 - i] = (XGK[i], WGK[i], g);
        }
        nodes[7] = (0.0, WGK[7], WG[3]);

        let mut kronrod = Complex64::new(0.0, 0.0);
        let mut gauss = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        let mut s = s_ref;
        let mut q_prev = s_ref * s_ref;
        for &(x, wk, wg) in &nodes {
            let u = c + h * x;
            let z = piece.z(u);
            let q = self.qd.q(z);
            if q_prev.norm() > 0.0 && q.norm() > 0.0 && (q / q_prev).arg().abs() > FRAC_PI_2 {
                return None;
            }
            s = nearest_branch(q, s);
            q_prev = q;
            let f = s * piece.dz(u);
            kronrod += f * wk;
            gauss += f * wg;
            magnitude += f.norm() * wk;
        }
        self.evaluations += 15;
        Some((kronrod * h, ((kronrod - gauss) * h).norm(), magnitude * h, s))
    }
}
