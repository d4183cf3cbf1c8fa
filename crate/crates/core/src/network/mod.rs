//! Weighted graphs of trajectory structures.
//!
//! An admissible graph has one outer vertex per principal direction, forming
//! a convex polygon whose sides stand for the half-planes, a centre vertex `O`
//! for the finite pole, and one weighted edge per strip. A strip with the pole
//! on its boundary is drawn as two edges through `O`.

mod arrangement;
mod merge;

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::combinat::{Chord, WeightedChordDiagram};
use crate::error::{Error, Result};
use crate::qdcore::Family;
use crate::tracer::{Orientation, TrajectoryStructure};

pub use arrangement::{extend_graph, ExtFace, ExtendedGraph, FaceKind, Metric, Piece};
pub use merge::{merge_graphs, MergedEdge, MergedGraph, MergedVertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Vertex {
    Outer(usize),
    Center,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub ends: [Vertex; 2],
    pub weight: f64,
    /// Attachment gap at each outer end, counted as in
    /// [`StripEnd::gap`](crate::tracer::StripEnd); unused at the centre.
    pub gaps: [usize; 2],
}

impl GraphEdge {
    pub fn touches_center(&self) -> bool {
        self.ends.contains(&Vertex::Center)
    }

    /// `(vertex, gap)` of the outer ends.
    pub fn outer_ends(&self) -> Vec<(usize, usize)> {
        self.ends
            .iter()
            .zip(self.gaps)
            .filter_map(|(v, g)| match v {
                Vertex::Outer(j) => Some((*j, g)),
                Vertex::Center => None,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleGraph {
    pub orientation: Orientation,
    pub n_outer: usize,
    pub edges: Vec<GraphEdge>,
    /// Outer vertex carrying both centre edges, if they share it.
    pub double_support: Option<usize>,
}

/// A chord diagram read off an admissible graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaDiagram {
    pub diagram: WeightedChordDiagram,
    /// Strips that end up along polygon sides; the first is the pole strip.
    pub sides: Vec<Chord>,
    /// Outer vertex of the graph each polygon vertex comes from.
    pub origin: Vec<usize>,
}

/// Builds the admissible graph of a trajectory structure.
pub fn build_graph(s: &TrajectoryStructure) -> Result<AdmissibleGraph> {
    if s.qd.family() != Family::Rational {
        return Err(Error::Precondition("graphs need the finite pole".into()));
    }
    if s.qd.has_multiple_zero() {
        return Err(Error::Precondition("structure has a multiple zero".into()));
    }
    let mut edges = Vec::new();
    let mut double_support = None;
    for strip in &s.strips {
        let [e0, e1] = strip.ends;
        if strip.has_finite_pole_on_boundary {
            for e in [e0, e1] {
                edges.push(GraphEdge {
                    ends: [Vertex::Center, Vertex::Outer(e.direction)],
                    weight: strip.width,
                    gaps: [0, e.gap],
                });
            }
            if e0.direction == e1.direction {
                double_support = Some(e0.direction);
            }
        } else {
            edges.push(GraphEdge {
                ends: [Vertex::Outer(e0.direction), Vertex::Outer(e1.direction)],
                weight: strip.width,
                gaps: [e0.gap, e1.gap],
            });
        }
    }
    let g = AdmissibleGraph {
        orientation: s.orientation,
        n_outer: s.n_directions(),
        edges,
        double_support,
    };
    if !check_admissible(&g) {
        return Err(Error::NotRepresentable(format!(
            "{} structure does not give an admissible graph",
            s.orientation.name()
        )));
    }
    Ok(g)
}

fn adjacent(n: usize, a: usize, b: usize) -> bool {
    (a + 1) % n == b || (b + 1) % n == a
}

fn interleave(n: usize, (a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    if a == c || a == d || b == c || b == d {
        return false;
    }
    let inside = |x: usize| (x + n - a) % n < (b + n - a) % n;
    inside(c) != inside(d)
}

/// Combinatorial admissibility: two centre edges ending at adjacent or equal
/// outer vertices, positive weights, non-crossing strip chords, and an
/// attachment order at every outer vertex that a straight-line drawing
/// reproduces.
pub fn check_admissible(g: &AdmissibleGraph) -> bool {
    let n = g.n_outer;
    if n < 3 {
        return false;
    }
    let in_range = |v: &Vertex| matches!(v, Vertex::Outer(j) if *j < n) || *v == Vertex::Center;
    if g.edges.iter().any(|e| !e.ends.iter().all(in_range) || !(e.weight > 0.0) || !e.weight.is_finite()) {
        return false;
    }
    let center: Vec<&GraphEdge> = g.edges.iter().filter(|e| e.touches_center()).collect();
    if center.len() != 2 || center.iter().any(|e| e.ends == [Vertex::Center, Vertex::Center]) {
        return false;
    }
    let (a, b) = (center[0].outer_ends()[0].0, center[1].outer_ends()[0].0);
    let double = (a == b).then_some(a);
    if double != g.double_support || (a != b && !adjacent(n, a, b)) {
        return false;
    }
    let chords: Vec<(usize, usize)> = g
        .edges
        .iter()
        .filter(|e| !e.touches_center())
        .map(|e| {
            let o = e.outer_ends();
            (o[0].0, o[1].0)
        })
        .collect();
    if chords.iter().any(|&(x, y)| x == y) {
        return false;
    }
    for (i, &c1) in chords.iter().enumerate() {
        if chords[i + 1..].iter().any(|&c2| interleave(n, c1, c2)) {
            return false;
        }
    }
    attachment_order_consistent(g)
}

/// At each outer vertex `v`, attachments sorted by gap must reach around the
/// polygon from `v + 1` towards `v - 1`.
fn attachment_order_consistent(g: &AdmissibleGraph) -> bool {
    let n = g.n_outer;
    let mut at: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in &g.edges {
        if e.touches_center() {
            let (v, gap) = e.outer_ends()[0];
            if g.double_support.is_some() {
                continue;
            }
            let other = g.edges.iter().find(|f| f.touches_center() && !std::ptr::eq(*f, e)).unwrap();
            let w = other.outer_ends()[0].0;
            let offset = if (v + 1) % n == w { 0.5 } else { n as f64 - 0.5 };
            at[v].push((gap, offset));
        } else {
            let o = e.outer_ends();
            for (x, y) in [(o[0], o[1]), (o[1], o[0])] {
                at[x.0].push((x.1, ((y.0 + n - x.0) % n) as f64));
            }
        }
    }
    at.iter_mut().all(|list| {
        list.sort_by_key(|&(gap, _)| gap);
        list.windows(2).all(|w| w[0].0 != w[1].0 && w[0].1 <= w[1].1)
    })
}

impl AdmissibleGraph {
    pub fn center_edges(&self) -> Vec<&GraphEdge> {
        self.edges.iter().filter(|e| e.touches_center()).collect()
    }

    pub fn strip_edges(&self) -> Vec<&GraphEdge> {
        self.edges.iter().filter(|e| !e.touches_center()).collect()
    }

    /// Angle of outer vertex `j`: the angle of principal direction `j`.
    pub fn outer_angle(&self, j: usize) -> f64 {
        let n = self.n_outer as f64;
        let offset = match self.orientation {
            Orientation::Horizontal => 0.0,
            Orientation::Vertical => PI / n,
        };
        offset + TAU * j as f64 / n
    }

    pub fn outer_position(&self, j: usize) -> [f64; 2] {
        let a = self.outer_angle(j);
        [a.cos(), a.sin()]
    }

    /// Vertex cycle (counterclockwise) of the face of the polygon cut by the
    /// strip chords in which the centre sits.
    pub fn center_face(&self) -> Result<Vec<usize>> {
        let n = self.n_outer;
        let mut nbrs: Vec<Vec<usize>> = (0..n).map(|v| vec![(v + 1) % n, (v + n - 1) % n]).collect();
        for e in self.strip_edges() {
            let o = e.outer_ends();
            let (x, y) = (o[0].0, o[1].0);
            if !adjacent(n, x, y) {
                nbrs[x].push(y);
                nbrs[y].push(x);
            }
        }
        for (v, list) in nbrs.iter_mut().enumerate() {
            list.sort_by_key(|&u| (u + n - v) % n);
            list.dedup();
        }
        let faces = polygon_faces(&nbrs);
        let center = self.center_edges();
        let (a, ga) = center[0].outer_ends()[0];
        let (b, _) = center[1].outer_ends()[0];
        let pattern: Vec<usize> = if a != b {
            if (a + 1) % n == b {
                vec![a, b]
            } else {
                vec![b, a]
            }
        } else {
            // wedge at `a` after the chords attached on the `a + 1` side
            let pole_gap = center.iter().map(|e| e.outer_ends()[0].1).min().unwrap_or(ga);
            let mut before: Vec<usize> = self
                .strip_edges()
                .iter()
                .flat_map(|e| {
                    let o = e.outer_ends();
                    [(o[0], o[1]), (o[1], o[0])]
                })
                .filter(|(x, y)| x.0 == a && x.1 < pole_gap && !adjacent(n, a, y.0))
                .map(|(_, y)| y.0)
                .collect();
            before.sort_unstable();
            before.dedup();
            let list = &nbrs[a];
            let i = before.len();
            vec![list[i + 1], a, list[i]]
        };
        faces
            .into_iter()
            .find(|f| contains_run(f, &pattern))
            .ok_or_else(|| Error::NotRepresentable("no face for the centre vertex".into()))
    }

    /// Position of the centre: the vertex average of its face.
    pub fn center_position(&self) -> Result<[f64; 2]> {
        let face = self.center_face()?;
        let pts: Vec<[f64; 2]> = face.iter().map(|&v| self.outer_position(v)).collect();
        Ok(average(&pts))
    }
}

pub(crate) fn average(pts: &[[f64; 2]]) -> [f64; 2] {
    let m = pts.len() as f64;
    let (x, y) = pts.iter().fold((0.0, 0.0), |(x, y), p| (x + p[0], y + p[1]));
    [x / m, y / m]
}

fn contains_run(cycle: &[usize], run: &[usize]) -> bool {
    let m = cycle.len();
    (0..m).any(|s| run.iter().enumerate().all(|(i, &v)| cycle[(s + i) % m] == v))
}

/// Interior faces of a convex polygon with chords, as counterclockwise vertex
/// cycles. `nbrs[v]` lists neighbours by increasing offset `(u - v) mod n`,
/// which is their counterclockwise order seen from `v`.
fn polygon_faces(nbrs: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = nbrs.len();
    let mut seen = std::collections::HashSet::new();
    let mut faces = Vec::new();
    for v in 0..n {
        for &w in &nbrs[v] {
            if seen.contains(&(v, w)) {
                continue;
            }
            let mut face = Vec::new();
            let (mut a, mut b) = (v, w);
            while seen.insert((a, b)) {
                face.push(a);
                let list = &nbrs[b];
                let p = list.iter().position(|&x| x == a).unwrap();
                let c = list[(p + list.len() - 1) % list.len()];
                (a, b) = (b, c);
            }
            // the outer face runs clockwise through every vertex
            let outer = face.len() == n && face.windows(2).all(|x| (x[0] + n - 1) % n == x[1]);
            if !outer {
                faces.push(face);
            }
        }
    }
    faces
}

/// The chord diagram of an admissible graph: the centre is removed and its
/// two edges become one chord; a doubly supported vertex is split in two.
///
/// The pole chord always joins neighbouring polygon vertices, so it is
/// reported in `sides` rather than among the diagonals.
pub fn to_chord_diagram(g: &AdmissibleGraph) -> Result<GammaDiagram> {
    let n = g.n_outer;
    let center = g.center_edges();
    if center.len() != 2 {
        return Err(Error::Precondition("graph is not admissible".into()));
    }
    let pole_gaps = {
        let mut v: Vec<usize> = center.iter().map(|e| e.outer_ends()[0].1).collect();
        v.sort_unstable();
        v
    };
    let (origin, image): (Vec<usize>, Box<dyn Fn(usize, usize) -> usize>) = match g.double_support {
        None => ((0..n).collect(), Box::new(|j, _| j)),
        Some(a) => {
            let mut origin = Vec::with_capacity(n + 1);
            for j in 0..n {
                origin.push(j);
                if j == a {
                    origin.push(j);
                }
            }
            let low = pole_gaps[0];
            // vertex `a` (toward a - 1) and `a + 1` (toward the next direction)
            let map = move |j: usize, gap: usize| match j.cmp(&a) {
                std::cmp::Ordering::Less => j,
                std::cmp::Ordering::Greater => j + 1,
                std::cmp::Ordering::Equal => {
                    if gap <= low {
                        a + 1
                    } else {
                        a
                    }
                }
            };
            (origin, Box::new(map))
        }
    };
    let m = origin.len();
    let (a, ga) = center[0].outer_ends()[0];
    let (b, gb) = center[1].outer_ends()[0];
    let mut sides = vec![Chord {
        a: image(a, ga),
        c: image(b, gb),
        weight: center[0].weight,
    }];
    let mut chords: Vec<Chord> = Vec::new();
    for e in g.strip_edges() {
        let o = e.outer_ends();
        let (x, y) = (image(o[0].0, o[0].1), image(o[1].0, o[1].1));
        let chord = Chord {
            a: x.min(y),
            c: x.max(y),
            weight: e.weight,
        };
        if adjacent(m, x, y) {
            sides.push(chord);
        } else if let Some(c) = chords.iter_mut().find(|c| (c.a, c.c) == (chord.a, chord.c)) {
            // parallel strips between the same two directions
            c.weight += chord.weight;
        } else {
            chords.push(chord);
        }
    }
    Ok(GammaDiagram {
        diagram: WeightedChordDiagram::new(m, chords)?,
        sides,
        origin,
    })
}

/// True when the chord diagram of `g` is not a complete triangulation.
pub fn has_short(g: &AdmissibleGraph) -> Result<bool> {
    Ok(!to_chord_diagram(g)?.diagram.is_complete())
}

#[cfg(test)]
mod tests;
