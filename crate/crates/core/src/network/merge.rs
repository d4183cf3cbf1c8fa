//! Superposition of a horizontal and a vertical admissible graph.

use std::f64::consts::PI;

use serde::Serialize;

use super::{average, AdmissibleGraph, Vertex};
use crate::error::{Error, Result};
use crate::tracer::Orientation;

/// Vertex of the merged graph: one of the `2n` polygon vertices, or the pole.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MergedVertex {
    Pi(usize),
    Center,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MergedEdge {
    pub color: Orientation,
    pub ends: [MergedVertex; 2],
    pub weight: f64,
}

/// Horizontal outer vertex `j` sits at polygon vertex `2j`, vertical `j` at
/// `2j + 1`; polygon vertex `i` is at angle `i * pi / n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MergedGraph {
    pub n_outer: usize,
    pub edges: Vec<MergedEdge>,
    pub center: [f64; 2],
    pub horizontal: AdmissibleGraph,
    pub vertical: AdmissibleGraph,
}

impl MergedGraph {
    pub fn pi_len(&self) -> usize {
        2 * self.n_outer
    }

    pub fn pi_position(&self, i: usize) -> [f64; 2] {
        let a = PI * i as f64 / self.n_outer as f64;
        [a.cos(), a.sin()]
    }

    pub fn position(&self, v: MergedVertex) -> [f64; 2] {
        match v {
            MergedVertex::Pi(i) => self.pi_position(i),
            MergedVertex::Center => self.center,
        }
    }
}

/// Merges `gh` and `gv` over a common centre, placed at the middle of the
/// region where both graphs allow it.
pub fn merge_graphs(gh: &AdmissibleGraph, gv: &AdmissibleGraph) -> Result<MergedGraph> {
    if gh.orientation != Orientation::Horizontal || gv.orientation != Orientation::Vertical {
        return Err(Error::Precondition("expected a horizontal and a vertical graph".into()));
    }
    if gh.n_outer != gv.n_outer {
        return Err(Error::Precondition(format!(
            "graphs have {} and {} outer vertices",
            gh.n_outer, gv.n_outer
        )));
    }
    let polygon = |g: &AdmissibleGraph| -> Result<Vec<[f64; 2]>> {
        Ok(g.center_face()?.iter().map(|&v| g.outer_position(v)).collect())
    };
    let region = clip(&polygon(gh)?, &polygon(gv)?);
    if region.len() < 3 || area(&region) < 1e-12 {
        return Err(Error::NotRepresentable(
            "centre faces of the two graphs do not overlap".into(),
        ));
    }
    let mut edges = Vec::new();
    for (g, shift) in [(gh, 0), (gv, 1)] {
        for e in &g.edges {
            let map = |v: Vertex| match v {
                Vertex::Outer(j) => MergedVertex::Pi(2 * j + shift),
                Vertex::Center => MergedVertex::Center,
            };
            edges.push(MergedEdge {
                color: g.orientation,
                ends: [map(e.ends[0]), map(e.ends[1])],
                weight: e.weight,
            });
        }
    }
    Ok(MergedGraph {
        n_outer: gh.n_outer,
        edges,
        center: average(&region),
        horizontal: gh.clone(),
        vertical: gv.clone(),
    })
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

pub(crate) fn area(poly: &[[f64; 2]]) -> f64 {
    let m = poly.len();
    (0..m)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % m]);
            p[0] * q[1] - p[1] * q[0]
        })
        .sum::<f64>()
        / 2.0
}

/// Intersection of two convex counterclockwise polygons.
fn clip(subject: &[[f64; 2]], window: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut out = subject.to_vec();
    let m = window.len();
    for i in 0..m {
        let (a, b) = (window[i], window[(i + 1) % m]);
        let input = std::mem::take(&mut out);
        let k = input.len();
        for j in 0..k {
            let (p, q) = (input[j], input[(j + 1) % k]);
            let (sp, sq) = (cross(a, b, p), cross(a, b, q));
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let t = sp / (sp - sq);
                out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clip_squares() {
        let a = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]];
        let b = [[1.0, 1.0], [3.0, 1.0], [3.0, 3.0], [1.0, 3.0]];
        let r = clip(&a, &b);
        assert!((area(&r) - 1.0).abs() < 1e-12);
        let c = average(&r);
        assert!((c[0] - 1.5).abs() < 1e-12 && (c[1] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn clip_disjoint() {
        let a = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let b = [[2.0, 2.0], [3.0, 2.0], [2.0, 3.0]];
        assert!(clip(&a, &b).len() < 3);
    }
}
