//! Critical trajectories and the trajectory structure they cut out.
//!
//! A horizontal trajectory is a curve along which `q(z) dz^2 > 0`, a vertical
//! one a curve along which `q(z) dz^2 < 0`. Critical trajectories start at the
//! zeros and at the pole; together they split the plane into half-planes
//! (ending domains) and strips.

mod integrate;
mod shorts;
mod structure;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qdcore::QuadDiff;

pub use integrate::trace;
pub use shorts::find_short_trajectories;
pub use structure::{build_structure, HalfPlane, PoleConnection, Short, Strip, StripEnd, TrajectoryStructure};

/// Angular distance to a sector boundary below which escape directions are
/// not classified.
pub const DIRECTION_MARGIN: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Horizontal,
    Vertical,
}

impl Orientation {
    pub const BOTH: [Orientation; 2] = [Orientation::Horizontal, Orientation::Vertical];

    /// `e^{i phi}` with `phi = 0` (horizontal) or `pi/2` (vertical).
    pub fn rotation(self) -> Complex64 {
        match self {
            Orientation::Horizontal => Complex64::new(1.0, 0.0),
            Orientation::Vertical => Complex64::new(0.0, 1.0),
        }
    }

    /// Target argument of `q dz^2`.
    pub fn target_phase(self) -> f64 {
        match self {
            Orientation::Horizontal => 0.0,
            Orientation::Vertical => PI,
        }
    }

    /// The transverse part of a period: `Im` for horizontal, `Re` for vertical.
    pub fn transverse(self, p: Complex64) -> f64 {
        match self {
            Orientation::Horizontal => p.im,
            Orientation::Vertical => p.re,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Orientation::Horizontal => "horizontal",
            Orientation::Vertical => "vertical",
        }
    }
}

impl std::str::FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h" | "horizontal" => Ok(Orientation::Horizontal),
            "v" | "vertical" => Ok(Orientation::Vertical),
            _ => Err(Error::Precondition(format!("unknown orientation {s:?}"))),
        }
    }
}

/// Numerical parameters of the tracer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    /// Local error tolerance of the Runge-Kutta pair.
    pub tolerance: f64,
    pub max_steps: usize,
    /// Escape radius in units of `QuadDiff::scale`.
    pub escape_factor: f64,
    /// Capture radius in units of `QuadDiff::scale`.
    pub capture_factor: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            max_steps: 1_000_000,
            escape_factor: 1e3,
            capture_factor: 1e-4,
        }
    }
}

impl TraceConfig {
    pub fn escape_radius(&self, qd: &QuadDiff) -> f64 {
        self.escape_factor * qd.scale()
    }

    /// Capture radius, shrunk when critical points sit closer together than
    /// the nominal radius can resolve.
    pub fn capture_radius(&self, qd: &QuadDiff) -> f64 {
        let pts = qd.critical_points();
        let mut sep = f64::INFINITY;
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                sep = sep.min((a.z - b.z).norm());
            }
        }
        (self.capture_factor * qd.scale()).min(0.05 * sep)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Termination {
    /// Left the escape disk; index of the principal direction.
    Escape { direction: usize },
    /// Ran into a critical point along one of its local directions.
    HitsCritical { point: usize, direction: usize },
    Budget,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub orientation: Orientation,
    /// Critical point id and index into its `initial_directions`.
    pub start: (usize, usize),
    /// Polyline from the critical point to the end of the trace.
    pub points: Vec<Complex64>,
    pub termination: Termination,
    /// Crossing with the escape circle, for escaping trajectories.
    pub exit: Option<Complex64>,
    /// Largest deviation of `arg(q dz^2)` from its target at accepted steps.
    pub max_phase_error: f64,
}

/// The `mu + 2` local directions of the critical trajectories leaving a
/// critical point of order `mu` (one for the pole), sorted by angle in
/// `[0, 2 pi)`.
pub fn initial_directions(qd: &QuadDiff, point: usize, orientation: Orientation) -> Result<Vec<Complex64>> {
    let cps = qd.critical_points();
    let cp = cps.get(point).ok_or(Error::InvalidCriticalPoint(point))?;
    let c = qd.local_coefficient(cp);
    let count = (cp.order + 2) as usize;
    let mut angles: Vec<f64> = (0..count)
        .map(|j| ((orientation.target_phase() - c.arg() + TAU * j as f64) / count as f64).rem_euclid(TAU))
        .collect();
    angles.sort_by(f64::total_cmp);
    Ok(angles.into_iter().map(|t| Complex64::from_polar(1.0, t)).collect())
}

/// Angle of principal direction `j`.
pub fn principal_angle(qd: &QuadDiff, j: usize, orientation: Orientation) -> f64 {
    let n = qd.n_directions() as f64;
    let offset = match orientation {
        Orientation::Horizontal => 0.0,
        Orientation::Vertical => PI / n,
    };
    offset + TAU * j as f64 / n
}

/// Index of the principal direction whose sector contains `angle`.
pub fn principal_direction_of(qd: &QuadDiff, angle: f64, orientation: Orientation) -> Result<usize> {
    let n = qd.n_directions();
    let sector = TAU / n as f64;
    let x = (angle - principal_angle(qd, 0, orientation)) / sector;
    let nearest = x.round();
    let margin = (0.5 - (x - nearest).abs()) * sector;
    if margin < DIRECTION_MARGIN {
        return Err(Error::AmbiguousDirection { angle, margin });
    }
    Ok((nearest as i64).rem_euclid(n as i64) as usize)
}
