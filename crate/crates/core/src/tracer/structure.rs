//! Assembly of the trajectory structure from the traced critical trajectories.
//!
//! The critical trajectories, together with one node per principal direction
//! placed on a circle at infinity, form a plane graph. Its faces inside the
//! circle are the domains: a face containing an arc of the circle is a
//! half-plane, any other face is a strip whose two ends are its visits to
//! direction nodes.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{initial_directions, principal_angle, trace, Orientation, TraceConfig, Termination, Trajectory};
use crate::error::{Error, Result};
use crate::qdcore::{period, Path, QuadDiff};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfPlane {
    /// Consecutive principal directions `(j, j + 1 mod n)` it lies between.
    pub between: (usize, usize),
    /// Critical points on its boundary, sorted.
    pub boundary: Vec<usize>,
}

/// One end of a strip at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StripEnd {
    pub direction: usize,
    /// Position among the gaps between consecutive trajectories escaping in
    /// `direction`, counted counterclockwise from the arc to `direction + 1`.
    pub gap: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Strip {
    pub ends: [StripEnd; 2],
    /// Critical points on its boundary, sorted.
    pub boundary: Vec<usize>,
    pub has_finite_pole_on_boundary: bool,
    pub width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Short {
    /// Zero ids, ascending.
    pub zeros: (usize, usize),
    /// Period along the connecting trajectory.
    pub period: Complex64,
    /// Index into `TrajectoryStructure::trajectories`.
    pub trajectory: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoleConnection {
    pub zero: usize,
    pub trajectory: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrajectoryStructure {
    pub qd: QuadDiff,
    pub orientation: Orientation,
    /// Critical trajectories; a connection between two critical points is
    /// listed once.
    pub trajectories: Vec<Trajectory>,
    pub half_planes: Vec<HalfPlane>,
    pub strips: Vec<Strip>,
    pub shorts: Vec<Short>,
    pub pole_connections: Vec<PoleConnection>,
}

impl TrajectoryStructure {
    /// Number of principal directions.
    pub fn n_directions(&self) -> usize {
        self.qd.n_directions()
    }

    pub fn is_generic(&self) -> bool {
        self.shorts.is_empty() && self.pole_connections.is_empty() && !self.qd.has_multiple_zero()
    }
}

/// Traces every critical trajectory of one orientation and reads off the
/// domains and strip widths.
pub fn build_structure(qd: &QuadDiff, orientation: Orientation, config: &TraceConfig) -> Result<TrajectoryStructure> {
    let cps = qd.critical_points();
    let mut starts = Vec::new();
    for id in 0..cps.len() {
        for d in 0..initial_directions(qd, id, orientation)?.len() {
            starts.push((id, d));
        }
    }
    let traced: Vec<Trajectory> = starts
        .par_iter()
        .map(|&(id, d)| trace(qd, id, d, orientation, config))
        .collect::<Result<_>>()?;

    let mut graph = Graph::new(cps.len(), qd.n_directions());
    for (id, cp) in cps.iter().enumerate() {
        graph.rotation[id] = vec![(usize::MAX, 0); (cp.order + 2) as usize];
    }
    let mut trajectories = Vec::new();
    let mut shorts = Vec::new();
    let mut pole_connections = Vec::new();
    let mut arrivals: Vec<Vec<(f64, usize)>> = vec![Vec::new(); qd.n_directions()];

    for t in &traced {
        let (i, di) = t.start;
        match t.termination {
            Termination::Budget => {
                return Err(Error::StructureAmbiguous(format!(
                    "trajectory from critical point {i} direction {di} exhausted the step budget"
                )))
            }
            Termination::Escape { direction } => {
                let idx = trajectories.len();
                trajectories.push(t.clone());
                let key = arrival_key(qd, orientation, config.escape_radius(qd), direction, t)?;
                arrivals[direction].push((key, graph.edges.len()));
                graph.add_edge(i, di, graph.direction_node(direction), None, idx);
            }
            Termination::HitsCritical { point: j, direction: dj } => {
                let partner = traced.iter().find(|u| u.start == (j, dj));
                let consistent = matches!(
                    partner.map(|u| u.termination),
                    Some(Termination::HitsCritical { point, direction }) if (point, direction) == (i, di)
                );
                if !consistent {
                    return Err(Error::StructureAmbiguous(format!(
                        "connection from critical point {i} to {j} is not confirmed from its other end"
                    )));
                }
                if (j, dj) < (i, di) {
                    continue;
                }
                let idx = trajectories.len();
                trajectories.push(t.clone());
                graph.add_edge(i, di, j, Some(dj), idx);
                let pole = qd.pole_id();
                if pole == Some(i) || pole == Some(j) {
                    let zero = if pole == Some(i) { j } else { i };
                    pole_connections.push(PoleConnection { zero, trajectory: idx });
                } else {
                    let p = polyline_period(qd, &t.points)?;
                    shorts.push(Short { zeros: (i.min(j), i.max(j)), period: p, trajectory: idx });
                }
            }
        }
    }

    // rotation at each direction node: arc to the next direction, arrivals
    // from counterclockwise-most to clockwise-most, arc to the previous one
    let n = qd.n_directions();
    let arc_base = graph.edges.len();
    for j in 0..n {
        graph.add_arc(j, (j + 1) % n);
    }
    for (j, list) in arrivals.iter_mut().enumerate() {
        list.sort_by(|a, b| b.0.total_cmp(&a.0));
        let node = graph.direction_node(j);
        let mut rot = vec![(arc_base + j, 0)];
        rot.extend(list.iter().map(|&(_, e)| (e, 1)));
        rot.push((arc_base + (j + n - 1) % n, 1));
        graph.set_rotation(node, rot);
    }
    let gap_of = |j: usize, edge: usize| arrivals[j].iter().position(|&(_, e)| e == edge).unwrap();

    let mut half_planes = Vec::new();
    let mut strips = Vec::new();
    for face in graph.faces()? {
        let arcs_fwd: Vec<usize> = face
            .iter()
            .filter(|&&(e, s)| graph.edges[e].arc && s == 0)
            .map(|&(e, _)| e - arc_base)
            .collect();
        if face.iter().any(|&(e, s)| graph.edges[e].arc && s == 1) {
            if face.iter().any(|&(e, _)| !graph.edges[e].arc) {
                return Err(Error::StructureAmbiguous("outer face touches a trajectory".into()));
            }
            continue;
        }
        let boundary = graph.critical_nodes(&face);
        match arcs_fwd.len() {
            1 => half_planes.push(HalfPlane {
                between: (arcs_fwd[0], (arcs_fwd[0] + 1) % n),
                boundary,
            }),
            0 => {
                let visits = graph.direction_visits(&face);
                if visits.len() != 2 {
                    return Err(Error::StructureAmbiguous(format!(
                        "strip with {} ends at infinity",
                        visits.len()
                    )));
                }
                let mut ends: Vec<StripEnd> = visits
                    .iter()
                    .map(|&(j, _, out)| StripEnd { direction: j, gap: gap_of(j, out) })
                    .collect();
                let (j, e_in, e_out) = visits[0];
                let width = strip_width(
                    qd,
                    orientation,
                    config.escape_radius(qd),
                    &trajectories[graph.edges[e_in].trajectory],
                    &trajectories[graph.edges[e_out].trajectory],
                )?;
                if width <= 1e-14 * qd.scale() {
                    return Err(Error::StructureAmbiguous(format!(
                        "strip ending in direction {j} has vanishing width"
                    )));
                }
                ends.sort();
                strips.push(Strip {
                    ends: [ends[0], ends[1]],
                    has_finite_pole_on_boundary: qd.pole_id().is_some_and(|p| boundary.contains(&p)),
                    boundary,
                    width,
                });
            }
            _ => {
                return Err(Error::StructureAmbiguous(
                    "a domain touches infinity along several arcs".into(),
                ))
            }
        }
    }
    if half_planes.len() != n {
        return Err(Error::StructureAmbiguous(format!(
            "{} half-planes for {n} principal directions",
            half_planes.len()
        )));
    }
    half_planes.sort_by_key(|h| h.between.0);
    strips.sort_by(|a, b| a.ends.cmp(&b.ends).then(a.width.total_cmp(&b.width)));
    shorts.sort_by_key(|s| s.zeros);

    Ok(TrajectoryStructure {
        qd: qd.clone(),
        orientation,
        trajectories,
        half_planes,
        strips,
        shorts,
        pole_connections,
    })
}

fn wrap(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Position of an escaping trajectory across its principal direction: the
/// transverse period from a reference point on the principal ray to the
/// start of the trajectory, signed to increase counterclockwise.
///
/// Unlike the exit angle this is constant along the trajectory, so it does
/// not depend on how far the trace has drifted.
fn arrival_key(qd: &QuadDiff, orientation: Orientation, radius: f64, j: usize, t: &Trajectory) -> Result<f64> {
    let theta = principal_angle(qd, j, orientation);
    let reference = Complex64::from_polar(radius, theta);
    let exit = t.exit.expect("escaping trajectory has an exit point");
    let delta = wrap(exit.arg() - theta);
    let mut pts = vec![reference];
    for i in 1..8 {
        pts.push(Complex64::from_polar(radius, theta + delta * i as f64 / 8.0));
    }
    let mut back = inside(t, radius);
    back.reverse();
    pts.extend(back);
    let s_ref = qd.q(reference).sqrt();
    let p = period(qd, &clean(qd, &pts)?, s_ref)?;
    let sign = orientation.transverse(s_ref * Complex64::i() * reference).signum();
    Ok(orientation.transverse(p) * sign)
}

/// Polyline of an escaping trajectory up to its exit point.
fn inside(t: &Trajectory, radius: f64) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = t.points.iter().copied().take_while(|z| z.norm() < radius).collect();
    v.push(t.exit.expect("escaping trajectory has an exit point"));
    v
}

/// Drops interior waypoints too close to a critical point or to their
/// predecessor for the period integrator. Endpoints are kept.
fn clean(qd: &QuadDiff, pts: &[Complex64]) -> Result<Path> {
    let eps = qd.eps_crit();
    let cps = qd.critical_points();
    let n = pts.len();
    let mut out: Vec<Complex64> = Vec::with_capacity(n);
    let push = |out: &mut Vec<Complex64>, z: Complex64, last_point: bool| {
        if let Some(&last) = out.last() {
            if (z - last).norm() <= 1e-12 * z.norm().max(qd.scale()) {
                if last_point {
                    *out.last_mut().unwrap() = z;
                }
                return;
            }
        }
        out.push(z);
    };
    let mut i = 0;
    while i < n {
        let z = pts[i];
        let interior = i > 0 && i + 1 < n;
        let Some(id) = qd.critical_near(z, 3.0 * eps).filter(|_| interior) else {
            push(&mut out, z, i + 1 == n);
            i += 1;
            continue;
        };
        let c = cps[id].z;
        let mut j = i;
        while j + 1 < n && (pts[j] - c).norm() < 3.0 * eps {
            j += 1;
        }
        let (before, after) = (*out.last().unwrap(), pts[j]);
        if (before - c).norm() >= 3.0 * eps && (after - c).norm() >= 3.0 * eps {
            // a pass close to `c`: go around it on the side the trajectory took
            let mut sweep = 0.0;
            let mut prev = before;
            for &p in &pts[i..=j] {
                sweep += ((p - c) / (prev - c)).arg();
                prev = p;
            }
            let rho = (before - c).norm().min((after - c).norm());
            let a0 = (before - c).arg();
            let m = (sweep.abs() / (PI / 8.0)).ceil().max(1.0) as usize;
            for step in 0..=m {
                push(&mut out, c + Complex64::from_polar(rho, a0 + sweep * step as f64 / m as f64), false);
            }
        }
        i = j;
    }
    Path::new(out)
}

fn polyline_period(qd: &QuadDiff, pts: &[Complex64]) -> Result<Complex64> {
    period(qd, &clean(qd, pts)?, Complex64::new(1.0, 0.0))
}

/// Width of the strip with an end between the escaping trajectories `t_in`
/// and `t_out`: the transverse period from the start of `t_in` out to the
/// escape circle, along the circle, and back along `t_out`.
fn strip_width(
    qd: &QuadDiff,
    orientation: Orientation,
    radius: f64,
    t_in: &Trajectory,
    t_out: &Trajectory,
) -> Result<f64> {
    let mut pts = inside(t_in, radius);
    let (a, b) = (t_in.exit.unwrap().arg(), t_out.exit.unwrap().arg());
    let delta = wrap(b - a);
    for i in 1..8 {
        pts.push(Complex64::from_polar(radius, a + delta * i as f64 / 8.0));
    }
    let mut back = inside(t_out, radius);
    back.reverse();
    pts.extend(back);
    let p = polyline_period(qd, &pts)?;
    Ok(orientation.transverse(p).abs())
}

struct Edge {
    ends: [usize; 2],
    arc: bool,
    trajectory: usize,
}

/// Plane graph with rotation systems.
struct Graph {
    n_critical: usize,
    edges: Vec<Edge>,
    /// Counterclockwise `(edge, side)` list at every node.
    rotation: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    fn new(n_critical: usize, n_directions: usize) -> Self {
        Self {
            n_critical,
            edges: Vec::new(),
            rotation: vec![Vec::new(); n_critical + n_directions],
        }
    }

    fn direction_node(&self, j: usize) -> usize {
        self.n_critical + j
    }

    /// Trajectory edge from critical point `i` (local direction `di`) to
    /// node `to`, occupying rotation slot `to_slot` there if `to` is critical.
    fn add_edge(&mut self, i: usize, di: usize, to: usize, to_slot: Option<usize>, trajectory: usize) {
        let e = self.edges.len();
        self.edges.push(Edge { ends: [i, to], arc: false, trajectory });
        place(&mut self.rotation[i], di, (e, 0));
        if let Some(slot) = to_slot {
            place(&mut self.rotation[to], slot, (e, 1));
        }
    }

    fn add_arc(&mut self, a: usize, b: usize) {
        let (na, nb) = (self.direction_node(a), self.direction_node(b));
        self.edges.push(Edge { ends: [na, nb], arc: true, trajectory: usize::MAX });
    }

    fn set_rotation(&mut self, node: usize, rot: Vec<(usize, usize)>) {
        self.rotation[node] = rot;
    }

    fn position(&self, e: usize, side: usize) -> usize {
        let node = self.edges[e].ends[side];
        self.rotation[node]
            .iter()
            .position(|&x| x == (e, side))
            .expect("edge end registered in rotation")
    }

    fn faces(&self) -> Result<Vec<Vec<(usize, usize)>>> {
        for (v, rot) in self.rotation.iter().enumerate() {
            if rot.iter().any(|&(e, _)| e == usize::MAX) {
                return Err(Error::StructureAmbiguous(format!("node {v} has an unconnected direction")));
            }
        }
        let mut seen = vec![[false; 2]; self.edges.len()];
        let mut faces = Vec::new();
        for e0 in 0..self.edges.len() {
            for s0 in 0..2 {
                if seen[e0][s0] {
                    continue;
                }
                let mut face = Vec::new();
                let (mut e, mut s) = (e0, s0);
                while !seen[e][s] {
                    seen[e][s] = true;
                    face.push((e, s));
                    let v = self.edges[e].ends[1 - s];
                    let rot = &self.rotation[v];
                    let p = self.position(e, 1 - s);
                    (e, s) = rot[(p + rot.len() - 1) % rot.len()];
                }
                faces.push(face);
            }
        }
        Ok(faces)
    }

    fn critical_nodes(&self, face: &[(usize, usize)]) -> Vec<usize> {
        let mut v: Vec<usize> = face
            .iter()
            .map(|&(e, s)| self.edges[e].ends[s])
            .filter(|&v| v < self.n_critical)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `(direction, incoming edge, outgoing edge)` for every pass of the face
    /// through a direction node.
    fn direction_visits(&self, face: &[(usize, usize)]) -> Vec<(usize, usize, usize)> {
        let m = face.len();
        (0..m)
            .filter_map(|i| {
                let (e, s) = face[i];
                let v = self.edges[e].ends[1 - s];
                (v >= self.n_critical).then(|| (v - self.n_critical, e, face[(i + 1) % m].0))
            })
            .collect()
    }
}

fn place(rot: &mut Vec<(usize, usize)>, slot: usize, value: (usize, usize)) {
    if rot.len() <= slot {
        rot.resize(slot + 1, (usize::MAX, 0));
    }
    rot[slot] = value;
}
