//! The extended graph: the merged graph cut into typed pieces.
//!
//! Colored edges and the sides of the `2n`-gon are split at their crossings.
//! Each face of the arrangement gets a center joined to the polygon vertices
//! and colored pieces on its boundary, which cuts it into triangles and
//! quadrilaterals of four kinds.

use std::collections::HashSet;

use serde::Serialize;

use super::merge::area;
use super::{MergedGraph, MergedVertex};
use crate::error::{Error, Result};
use crate::tracer::Orientation;

const SNAP: f64 = 1e-9;

type Pt = [f64; 2];

/// A piece of a polygon side (`color == None`) or of a colored edge.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Piece {
    pub color: Option<Orientation>,
    pub weight: f64,
    pub ends: [Pt; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceKind {
    /// Triangle on a side of the polygon.
    OuterSide,
    /// Triangle with one polygon vertex and half a colored piece.
    OuterVertex,
    /// Quadrilateral around a crossing of two colors.
    Bicolored,
    /// Triangle with a corner at the pole.
    Pole,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Metric {
    Quadrant,
    StripQuarter { color: Orientation, width: f64 },
    Rectangle { horizontal: f64, vertical: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtFace {
    pub kind: FaceKind,
    pub metric: Metric,
    pub polygon: Vec<Pt>,
    /// Index into `component_centers`.
    pub component: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtendedGraph {
    pub pi: Vec<Pt>,
    pub center: Pt,
    pub pieces: Vec<Piece>,
    pub component_centers: Vec<Pt>,
    pub auxiliary: Vec<[Pt; 2]>,
    pub faces: Vec<ExtFace>,
}

impl ExtendedGraph {
    pub fn count(&self, kind: FaceKind) -> usize {
        self.faces.iter().filter(|f| f.kind == kind).count()
    }
}

/// Builds the extended graph. On a degenerate arrangement the pole is nudged
/// once and the construction retried.
pub fn extend_graph(g: &MergedGraph) -> Result<ExtendedGraph> {
    match build(g, g.center) {
        Err(Error::ArrangementDegeneracy(_)) => {
            let c = [g.center[0] + 0.6e-6, g.center[1] + 0.8e-6];
            build(g, c)
        }
        r => r,
    }
}

struct Segment {
    ends: [usize; 2],
    color: Option<Orientation>,
    weight: f64,
}

struct Edge {
    ends: [usize; 2],
    color: Option<Orientation>,
    weight: f64,
}

fn sub(a: Pt, b: Pt) -> Pt {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: Pt, b: Pt) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn lerp(a: Pt, b: Pt, t: f64) -> Pt {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

fn dist(a: Pt, b: Pt) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn build(g: &MergedGraph, center: Pt) -> Result<ExtendedGraph> {
    let m = g.pi_len();
    let mut nodes: Vec<Pt> = (0..m).map(|i| g.pi_position(i)).collect();
    let o = m;
    nodes.push(center);
    let is_pi = |v: usize| v < m;

    let mut segments: Vec<Segment> = (0..m)
        .map(|i| Segment {
            ends: [i, (i + 1) % m],
            color: None,
            weight: 0.0,
        })
        .collect();
    for e in &g.edges {
        let id = |v: MergedVertex| match v {
            MergedVertex::Pi(i) => i,
            MergedVertex::Center => o,
        };
        let (a, b) = (id(e.ends[0]), id(e.ends[1]));
        let ends = [a.min(b), a.max(b)];
        let color = Some(e.color);
        match segments.iter_mut().find(|s| s.ends == ends && s.color == color) {
            // the two pole edges of a doubly supported vertex coincide
            Some(_) if ends[1] == o => {}
            Some(s) => s.weight += e.weight,
            None => segments.push(Segment {
                ends,
                color,
                weight: e.weight,
            }),
        }
    }

    // a colored segment may touch other nodes only at its ends
    for s in segments.iter().filter(|s| s.color.is_some()) {
        let (p, q) = (nodes[s.ends[0]], nodes[s.ends[1]]);
        for (v, &x) in nodes.iter().enumerate() {
            if s.ends.contains(&v) {
                continue;
            }
            let t = ((x[0] - p[0]) * (q[0] - p[0]) + (x[1] - p[1]) * (q[1] - p[1])) / dist(p, q).powi(2);
            if (0.0..=1.0).contains(&t) && dist(lerp(p, q, t), x) < SNAP {
                return Err(Error::ArrangementDegeneracy(format!("edge passes through node {v}")));
            }
        }
    }

    // crossings, recorded per segment as (parameter, node)
    let mut on: Vec<Vec<(f64, usize)>> = segments
        .iter()
        .map(|s| vec![(0.0, s.ends[0]), (1.0, s.ends[1])])
        .collect();
    for i in 0..segments.len() {
        for j in i + 1..segments.len() {
            let (si, sj) = (&segments[i], &segments[j]);
            let (Some(ci), Some(cj)) = (si.color, sj.color) else { continue };
            if si.ends.iter().any(|v| sj.ends.contains(v)) {
                continue;
            }
            let (p, r) = (nodes[si.ends[0]], sub(nodes[si.ends[1]], nodes[si.ends[0]]));
            let (q, s) = (nodes[sj.ends[0]], sub(nodes[sj.ends[1]], nodes[sj.ends[0]]));
            let den = cross(r, s);
            if den.abs() < 1e-15 {
                continue;
            }
            let t = cross(sub(q, p), s) / den;
            let u = cross(sub(q, p), r) / den;
            if t <= 0.0 || t >= 1.0 || u <= 0.0 || u >= 1.0 {
                continue;
            }
            if ci == cj {
                return Err(Error::Precondition("edges of one color cross".into()));
            }
            let x = lerp(p, nodes[si.ends[1]], t);
            if on[i].iter().chain(&on[j]).any(|&(_, v)| dist(nodes[v], x) < SNAP) {
                return Err(Error::ArrangementDegeneracy(format!("three segments meet near {x:?}")));
            }
            nodes.push(x);
            let v = nodes.len() - 1;
            on[i].push((t, v));
            on[j].push((u, v));
        }
    }

    let mut edges: Vec<Edge> = Vec::new();
    for (s, list) in segments.iter().zip(&mut on) {
        list.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in list.windows(2) {
            edges.push(Edge {
                ends: [w[0].1, w[1].1],
                color: s.color,
                weight: s.weight,
            });
        }
    }

    // counterclockwise rotation of (edge, other end) at every node
    let mut rot: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes.len()];
    for (k, e) in edges.iter().enumerate() {
        rot[e.ends[0]].push((k, e.ends[1]));
        rot[e.ends[1]].push((k, e.ends[0]));
    }
    for (v, list) in rot.iter_mut().enumerate() {
        let angle = |w: usize| {
            let d = sub(nodes[w], nodes[v]);
            d[1].atan2(d[0])
        };
        list.sort_by(|a, b| angle(a.1).total_cmp(&angle(b.1)));
    }

    let mut seen = HashSet::new();
    let mut out = ExtendedGraph {
        pi: nodes[..m].to_vec(),
        center,
        pieces: edges
            .iter()
            .map(|e| Piece {
                color: e.color,
                weight: e.weight,
                ends: [nodes[e.ends[0]], nodes[e.ends[1]]],
            })
            .collect(),
        component_centers: Vec::new(),
        auxiliary: Vec::new(),
        faces: Vec::new(),
    };
    for start in 0..nodes.len() {
        for &(k0, w0) in &rot[start] {
            if seen.contains(&(start, w0, k0)) {
                continue;
            }
            // darts (from, edge) of the face to the left
            let mut darts = Vec::new();
            let (mut a, mut b, mut k) = (start, w0, k0);
            while seen.insert((a, b, k)) {
                darts.push((a, k));
                let list = &rot[b];
                let p = list.iter().position(|&(kk, _)| kk == k).unwrap();
                let (kn, c) = list[(p + list.len() - 1) % list.len()];
                (a, b, k) = (b, c, kn);
            }
            let poly: Vec<Pt> = darts.iter().map(|&(v, _)| nodes[v]).collect();
            if area(&poly) <= 0.0 {
                continue;
            }
            type_face(&mut out, &nodes, &edges, &darts, &poly, is_pi, o);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy)]
enum Target {
    Vertex(usize),
    Piece(usize),
}

fn type_face(
    out: &mut ExtendedGraph,
    nodes: &[Pt],
    edges: &[Edge],
    darts: &[(usize, usize)],
    poly: &[Pt],
    is_pi: impl Fn(usize) -> bool,
    o: usize,
) {
    let c = interior_point(poly);
    let component = out.component_centers.len();
    out.component_centers.push(c);
    let mid = |k: usize| lerp(nodes[edges[k].ends[0]], nodes[edges[k].ends[1]], 0.5);

    let mut targets = Vec::new();
    for &(v, k) in darts {
        if is_pi(v) {
            targets.push(Target::Vertex(v));
        }
        if edges[k].color.is_some() {
            targets.push(Target::Piece(k));
        }
    }
    for t in &targets {
        let p = match *t {
            Target::Vertex(v) => nodes[v],
            Target::Piece(k) => mid(k),
        };
        out.auxiliary.push([c, p]);
    }
    let quarter = |k: usize| Metric::StripQuarter {
        color: edges[k].color.unwrap(),
        width: edges[k].weight,
    };
    let mut push = |kind, metric, polygon| {
        out.faces.push(ExtFace {
            kind,
            metric,
            polygon,
            component,
        })
    };
    let t = targets.len();
    for i in 0..t {
        match (targets[i], targets[(i + 1) % t]) {
            (Target::Vertex(p), Target::Vertex(q)) => {
                push(FaceKind::OuterSide, Metric::Quadrant, vec![c, nodes[p], nodes[q]]);
            }
            (Target::Vertex(p), Target::Piece(k)) => {
                push(FaceKind::OuterVertex, quarter(k), vec![c, nodes[p], mid(k)]);
            }
            (Target::Piece(k), Target::Vertex(q)) => {
                push(FaceKind::OuterVertex, quarter(k), vec![c, mid(k), nodes[q]]);
            }
            (Target::Piece(e), Target::Piece(f)) => {
                // the node where the two pieces meet
                let v = *edges[e].ends.iter().find(|v| edges[f].ends.contains(v)).unwrap();
                let (ce, cf) = (edges[e].color.unwrap(), edges[f].color.unwrap());
                if ce == cf {
                    debug_assert_eq!(v, o);
                    push(FaceKind::Pole, quarter(e), vec![c, mid(e), nodes[v]]);
                    push(FaceKind::Pole, quarter(f), vec![c, nodes[v], mid(f)]);
                    out.auxiliary.push([c, nodes[v]]);
                } else {
                    let (h, w) = if ce == Orientation::Horizontal {
                        (edges[e].weight, edges[f].weight)
                    } else {
                        (edges[f].weight, edges[e].weight)
                    };
                    let kind = if v == o { FaceKind::Pole } else { FaceKind::Bicolored };
                    push(
                        kind,
                        Metric::Rectangle {
                            horizontal: h,
                            vertical: w,
                        },
                        vec![c, mid(e), nodes[v], mid(f)],
                    );
                }
            }
        }
    }
}

fn inside(poly: &[Pt], x: Pt) -> bool {
    let m = poly.len();
    let mut winding = false;
    for i in 0..m {
        let (a, b) = (poly[i], poly[(i + 1) % m]);
        if (a[1] > x[1]) != (b[1] > x[1]) && x[0] < a[0] + (x[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]) {
            winding = !winding;
        }
    }
    winding
}

/// Area centroid of a counterclockwise polygon, or the centroid of an ear
/// when the area centroid falls outside.
fn interior_point(poly: &[Pt]) -> Pt {
    let m = poly.len();
    let a = area(poly);
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..m {
        let (p, q) = (poly[i], poly[(i + 1) % m]);
        let w = cross(p, q);
        cx += (p[0] + q[0]) * w;
        cy += (p[1] + q[1]) * w;
    }
    let c = [cx / (6.0 * a), cy / (6.0 * a)];
    if inside(poly, c) {
        return c;
    }
    for i in 0..m {
        let (p, q, r) = (poly[(i + m - 1) % m], poly[i], poly[(i + 1) % m]);
        let tri = [p, q, r];
        if cross(sub(q, p), sub(r, q)) > 0.0
            && poly.iter().all(|x| tri.contains(x) || !inside(&tri, *x))
        {
            return [(p[0] + q[0] + r[0]) / 3.0, (p[1] + q[1] + r[1]) / 3.0];
        }
    }
    c
}
