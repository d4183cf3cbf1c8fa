//! Balanced weights on a regular polygon, weighted chord diagrams and the
//! Stasheff fan.
//!
//! The polygon is the regular `(n+1)`-gon inscribed in the unit circle with
//! vertex `i` at angle `2 pi i / (n+1)`. A weight assigns a real number to every
//! vertex; lifting vertex `i` to height `f(i)` and taking the upper convex hull
//! induces a polygon subdivision. Its diagonals carry positive weights (the
//! length of the interval swept at a reference point by the supporting planes
//! through the two endpoints), which gives the chord diagram of the weight.

pub mod exact;
mod hull;
mod linalg;
mod triangulation;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use hull::{is_degenerate, upper_hull_subdivision, DegeneracyWitness, COPLANARITY_TOL};
pub use triangulation::{
    adjacent, catalan, complete, crosses, enumerate_triangulations, flip, flip_graph, is_non_crossing,
    normalize, Diagonal, Triangulation, ENUMERATION_LIMIT,
};

/// Chords whose interval is shorter than this are treated as absent.
pub const CHORD_EPS: f64 = 1e-10;

/// Balance constraints are checked to this accuracy.
pub const BALANCE_TOL: f64 = 1e-9;

/// Default reference point, generic for every polygon size used here.
pub const DEFAULT_P: [f64; 2] = [0.23, 0.11];

/// Vertex `i` of the regular `n_plus_1`-gon.
pub fn vertex(n_plus_1: usize, i: usize) -> [f64; 2] {
    let t = std::f64::consts::TAU * i as f64 / n_plus_1 as f64;
    [t.cos(), t.sin()]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalancedWeight {
    values: Vec<f64>,
}

impl BalancedWeight {
    /// Accepts `values` if they sum to zero with zero first moment.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let w = Self { values };
        if w.values.len() < 4 {
            return Err(Error::Precondition("balanced weights need at least 4 vertices".into()));
        }
        let (s, mx, my) = w.moments();
        let scale = w.values.iter().map(|v| v.abs()).fold(1.0, f64::max);
        if s.abs() > BALANCE_TOL * scale || mx.abs() > BALANCE_TOL * scale || my.abs() > BALANCE_TOL * scale {
            return Err(Error::Precondition(format!(
                "weight is not balanced: sum {s:e}, moment ({mx:e}, {my:e})"
            )));
        }
        Ok(w)
    }

    /// Projects arbitrary values onto the balanced subspace (removes the
    /// affine part, which is orthogonal to it on a regular polygon).
    pub fn project(values: &[f64]) -> Self {
        let m = values.len();
        let mut out = values.to_vec();
        let mean = values.iter().sum::<f64>() / m as f64;
        let (mut cx, mut cy) = (0.0, 0.0);
        for (i, v) in values.iter().enumerate() {
            let [x, y] = vertex(m, i);
            cx += v * x;
            cy += v * y;
        }
        cx *= 2.0 / m as f64;
        cy *= 2.0 / m as f64;
        for (i, o) in out.iter_mut().enumerate() {
            let [x, y] = vertex(m, i);
            *o -= mean + cx * x + cy * y;
        }
        Self { values: out }
    }

    pub fn zero(n_plus_1: usize) -> Self {
        Self {
            values: vec![0.0; n_plus_1],
        }
    }

    /// Uniform random values projected onto the balanced subspace.
    pub fn random<R: Rng>(n_plus_1: usize, rng: &mut R) -> Self {
        let raw: Vec<f64> = (0..n_plus_1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Self::project(&raw)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n_plus_1(&self) -> usize {
        self.values.len()
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * lambda).collect(),
        }
    }

    /// `(sum f, sum f x, sum f y)`
    pub fn moments(&self) -> (f64, f64, f64) {
        let m = self.values.len();
        let mut out = (0.0, 0.0, 0.0);
        for (i, v) in self.values.iter().enumerate() {
            let [x, y] = vertex(m, i);
            out.0 += v;
            out.1 += v * x;
            out.2 += v * y;
        }
        out
    }
}

/// A weighted chord: diagonal `(a, c)` with weight `weight > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chord {
    pub a: usize,
    pub c: usize,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedChordDiagram {
    pub n_plus_1: usize,
    /// Sorted by `(a, c)` with `a < c`.
    pub chords: Vec<Chord>,
}

impl WeightedChordDiagram {
    pub fn new(n_plus_1: usize, chords: Vec<Chord>) -> Result<Self> {
        let mut chords: Vec<Chord> = chords
            .into_iter()
            .map(|ch| {
                let (a, c) = normalize((ch.a, ch.c));
                Chord { a, c, weight: ch.weight }
            })
            .collect();
        chords.sort_by(|x, y| (x.a, x.c).cmp(&(y.a, y.c)));
        for ch in &chords {
            if ch.c >= n_plus_1 || ch.a == ch.c || adjacent(n_plus_1, ch.a, ch.c) {
                return Err(Error::InvalidDiagonal(ch.a, ch.c));
            }
            if !(ch.weight > 0.0) {
                return Err(Error::InconsistentDiagram(format!(
                    "chord ({}, {}) has non-positive weight {}",
                    ch.a, ch.c, ch.weight
                )));
            }
        }
        if chords.windows(2).any(|w| (w[0].a, w[0].c) == (w[1].a, w[1].c)) {
            return Err(Error::InconsistentDiagram("repeated chord".into()));
        }
        let d: Vec<Diagonal> = chords.iter().map(|c| (c.a, c.c)).collect();
        if !is_non_crossing(&d) {
            return Err(Error::InconsistentDiagram("chords cross".into()));
        }
        Ok(Self { n_plus_1, chords })
    }

    pub fn diagonals(&self) -> Vec<Diagonal> {
        self.chords.iter().map(|c| (c.a, c.c)).collect()
    }

    /// A triangulation of the `(n+1)`-gon has `n - 2` diagonals.
    pub fn is_complete(&self) -> bool {
        self.chords.len() + 3 >= self.n_plus_1
    }

    /// Canonical text form of the chord support, e.g. `6:0-2,0-3,3-5`.
    pub fn support_signature(&self) -> String {
        let body: Vec<String> = self.chords.iter().map(|c| format!("{}-{}", c.a, c.c)).collect();
        format!("{}:{}", self.n_plus_1, body.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    n_plus_1: usize,
    chords: Vec<(usize, usize, f64)>,
}

impl Serialize for WeightedChordDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiagramRepr {
            n_plus_1: self.n_plus_1,
            chords: self.chords.iter().map(|c| (c.a, c.c, c.weight)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightedChordDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DiagramRepr::deserialize(d)?;
        let chords = r.chords.into_iter().map(|(a, c, weight)| Chord { a, c, weight }).collect();
        WeightedChordDiagram::new(r.n_plus_1, chords).map_err(serde::de::Error::custom)
    }
}

/// A cone of the Stasheff fan, labelled by the diagonals of its subdivision.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FanFace {
    pub n_plus_1: usize,
    pub diagonal_set: Vec<Diagonal>,
    /// `(n - 2) - |diagonal_set|`; zero for full-dimensional cones.
    pub codim: usize,
}

impl FanFace {
    pub fn new(n_plus_1: usize, mut diagonal_set: Vec<Diagonal>) -> Self {
        diagonal_set.sort_unstable();
        let codim = (n_plus_1 - 3).saturating_sub(diagonal_set.len());
        Self {
            n_plus_1,
            diagonal_set,
            codim,
        }
    }

    pub fn is_apex(&self) -> bool {
        self.diagonal_set.is_empty()
    }
}

/// Face of the Stasheff fan containing `f`.
pub fn fan_face(f: &BalancedWeight) -> FanFace {
    upper_hull_subdivision(f)
}

fn signed_area(a: [f64; 2], c: [f64; 2], z: [f64; 2]) -> f64 {
    (c[0] - a[0]) * (z[1] - a[1]) - (c[1] - a[1]) * (z[0] - a[0])
}

fn check_general_position(n_plus_1: usize, p: [f64; 2]) -> Result<()> {
    for a in 0..n_plus_1 {
        for c in a + 1..n_plus_1 {
            let (va, vc) = (vertex(n_plus_1, a), vertex(n_plus_1, c));
            let len = ((vc[0] - va[0]).powi(2) + (vc[1] - va[1]).powi(2)).sqrt();
            if signed_area(va, vc, p).abs() / len <= 1e-9 {
                return Err(Error::GeneralPositionViolated(format!(
                    "p = ({}, {}) lies on the line through vertices {a} and {c}",
                    p[0], p[1]
                )));
            }
        }
    }
    Ok(())
}

/// Length of the interval swept at `p` by affine majorants of `f` that agree
/// with `f` at `a` and `c`; zero when no majorant touches both.
pub fn chord_interval(f: &BalancedWeight, a: usize, c: usize, p: [f64; 2]) -> f64 {
    let m = f.n_plus_1();
    let fv = f.values();
    let (va, vc) = (vertex(m, a), vertex(m, c));
    let dx = [vc[0] - va[0], vc[1] - va[1]];
    let len2 = dx[0] * dx[0] + dx[1] * dx[1];
    // L0 interpolates along the chord and is constant across it
    let base = |z: [f64; 2]| fv[a] + (fv[c] - fv[a]) * ((z[0] - va[0]) * dx[0] + (z[1] - va[1]) * dx[1]) / len2;
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for v in 0..m {
        if v == a || v == c {
            continue;
        }
        let z = vertex(m, v);
        let side = signed_area(va, vc, z);
        let need = (fv[v] - base(z)) / side;
        if side > 0.0 {
            lo = lo.max(need);
        } else {
            hi = hi.min(need);
        }
    }
    if hi < lo {
        return 0.0;
    }
    (hi - lo) * signed_area(va, vc, p).abs()
}

/// The weighted chord diagram of a balanced weight, read at `p`.
pub fn weight_to_diagram(f: &BalancedWeight, p: [f64; 2]) -> Result<WeightedChordDiagram> {
    let m = f.n_plus_1();
    check_general_position(m, p)?;
    let mut chords = Vec::new();
    for a in 0..m {
        for c in a + 2..m {
            if adjacent(m, a, c) {
                continue;
            }
            let weight = chord_interval(f, a, c, p);
            if weight > CHORD_EPS {
                chords.push(Chord { a, c, weight });
            }
        }
    }
    WeightedChordDiagram::new(m, chords)
}

/// Crease of the piecewise-affine function on triangulation `t` across
/// diagonal `d`, as a linear form in the vertex values.
fn crease_row(t: &Triangulation, d: Diagonal) -> Result<(Vec<f64>, f64)> {
    let m = t.n_plus_1;
    let (a, c) = d;
    let (b, e) = match t.apexes(d) {
        (Some(b), Some(e)) => (b, e),
        _ => return Err(Error::InconsistentDiagram(format!("diagonal {d:?} has no two triangles"))),
    };
    let (pa, pc, pb, pe) = (vertex(m, a), vertex(m, c), vertex(m, b), vertex(m, e));
    // barycentric coordinates of e in triangle (a, c, b)
    let det = signed_area(pa, pc, pb);
    let beta_b = signed_area(pa, pc, pe) / det;
    let beta_a = signed_area(pc, pb, pe) / det;
    let beta_c = 1.0 - beta_a - beta_b;
    let norm = signed_area(pa, pc, pe).abs();
    let mut row = vec![0.0; m];
    row[a] += beta_a / norm;
    row[c] += beta_c / norm;
    row[b] += beta_b / norm;
    row[e] -= 1.0 / norm;
    Ok((row, norm))
}

/// A balanced weight whose chord diagram at `p` is `d`.
///
/// On the cone of weights inducing a fixed triangulation, chord weights are
/// linear in the weight. The diagram is completed to a triangulation, the
/// extra diagonals get weight zero, and the square system for the creases is
/// solved in a basis of the balanced subspace.
pub fn diagram_to_weight(d: &WeightedChordDiagram, p: [f64; 2]) -> Result<BalancedWeight> {
    let m = d.n_plus_1;
    check_general_position(m, p)?;
    if m < 4 {
        return Err(Error::InconsistentDiagram("polygon has fewer than 4 vertices".into()));
    }
    let t = complete(m, &d.diagonals());
    let basis = linalg::balanced_basis(m);
    let dim = basis.len();
    let mut matrix = vec![vec![0.0; dim]; dim];
    let mut rhs = vec![0.0; dim];
    for (row_idx, &diag) in t.diagonals.iter().enumerate() {
        let (row, _) = crease_row(&t, diag)?;
        for (j, b) in basis.iter().enumerate() {
            matrix[row_idx][j] = row.iter().zip(b).map(|(x, y)| x * y).sum();
        }
        let weight = d
            .chords
            .iter()
            .find(|ch| (ch.a, ch.c) == diag)
            .map_or(0.0, |ch| ch.weight);
        let (va, vc) = (vertex(m, diag.0), vertex(m, diag.1));
        rhs[row_idx] = weight / signed_area(va, vc, p).abs();
    }
    let x = linalg::solve(matrix, rhs)
        .ok_or_else(|| Error::InconsistentDiagram("crease system is singular".into()))?;
    let mut values = vec![0.0; m];
    for (coef, b) in x.iter().zip(&basis) {
        for (v, bi) in values.iter_mut().zip(b) {
            *v += coef * bi;
        }
    }
    for &diag in &t.diagonals {
        let (row, _) = crease_row(&t, diag)?;
        let crease: f64 = row.iter().zip(&values).map(|(r, v)| r * v).sum();
        if crease < -1e-10 {
            return Err(Error::InconsistentDiagram(format!(
                "solution leaves the cone at {diag:?} (crease {crease:e})"
            )));
        }
    }
    Ok(BalancedWeight::project(&values))
}

#[cfg(test)]
mod tests;
