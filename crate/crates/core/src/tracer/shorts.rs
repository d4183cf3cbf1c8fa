//! Short trajectories: critical trajectories joining two zeros.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{initial_directions, trace, Orientation, TraceConfig, Termination};
use crate::qdcore::{period, Path, QuadDiff};

/// Pairs of zeros joined by a trajectory of the given orientation, with the
/// period along the connection. A captured trajectory qualifies when its
/// period is real (horizontal) or imaginary (vertical) to relative `tol`.
///
/// Tracing failures count as "no short"; the detector never errors.
pub fn find_short_trajectories(qd: &QuadDiff, orientation: Orientation, tol: f64) -> Vec<(usize, usize, Complex64)> {
    let zeros = qd.zeros().len();
    if zeros < 2 {
        return Vec::new();
    }
    let config = TraceConfig::default();
    let starts: Vec<(usize, usize)> = (0..zeros)
        .flat_map(|i| {
            let n = initial_directions(qd, i, orientation).map(|d| d.len()).unwrap_or(0);
            (0..n).map(move |d| (i, d))
        })
        .collect();
    let mut found: Vec<(usize, usize, Complex64)> = starts
        .par_iter()
        .filter_map(|&(i, d)| {
            let t = trace(qd, i, d, orientation, &config).ok()?;
            let Termination::HitsCritical { point: j, .. } = t.termination else {
                return None;
            };
            if j >= zeros || j <= i {
                return None;
            }
            let p = connection_period(qd, &t.points)?;
            (orientation.transverse(p).abs() <= tol * p.norm()).then_some((i, j, p))
        })
        .collect();
    found.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    found.dedup_by(|a, b| (a.0, a.1) == (b.0, b.1));
    found
}

fn connection_period(qd: &QuadDiff, pts: &[Complex64]) -> Option<Complex64> {
    let eps = 3.0 * qd.eps_crit();
    let n = pts.len();
    let kept: Vec<Complex64> = pts
        .iter()
        .enumerate()
        .filter(|&(i, z)| i == 0 || i + 1 == n || qd.critical_near(*z, eps).is_none())
        .map(|(_, z)| *z)
        .collect();
    let path = Path::new(kept).ok()?;
    period(qd, &path, Complex64::new(1.0, 0.0)).ok()
}
