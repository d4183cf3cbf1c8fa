//! Upper convex hull of the lifted polygon vertices.

use serde::{Deserialize, Serialize};

use super::{adjacent, vertex, BalancedWeight, Diagonal, FanFace};

/// Lifted points within this distance of a plane count as lying on it
/// (values normalized to `max |f| = 1`).
pub const COPLANARITY_TOL: f64 = 1e-9;

/// An affine majorant `L(x, y) = c0 + c1 x + c2 y` touching at least four vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyWitness {
    pub affine: [f64; 3],
    pub touching: Vec<usize>,
}

struct UpperFace {
    affine: [f64; 3],
    vertices: Vec<usize>,
}

fn normalized(f: &BalancedWeight) -> (Vec<f64>, f64) {
    let scale = f.values().iter().map(|v| v.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return (f.values().to_vec(), 1.0);
    }
    (f.values().iter().map(|v| v / scale).collect(), scale)
}

fn plane_through(m: usize, f: &[f64], i: usize, j: usize, l: usize) -> [f64; 3] {
    let (p, q, r) = (vertex(m, i), vertex(m, j), vertex(m, l));
    // solve c0 + c1 x + c2 y = f at three points via Cramer's rule
    let det = (q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]);
    let (df1, df2) = (f[j] - f[i], f[l] - f[i]);
    let c1 = (df1 * (r[1] - p[1]) - df2 * (q[1] - p[1])) / det;
    let c2 = ((q[0] - p[0]) * df2 - (r[0] - p[0]) * df1) / det;
    let c0 = f[i] - c1 * p[0] - c2 * p[1];
    [c0, c1, c2]
}

fn eval(a: &[f64; 3], z: [f64; 2]) -> f64 {
    a[0] + a[1] * z[0] + a[2] * z[1]
}

fn upper_faces(f: &BalancedWeight) -> Vec<UpperFace> {
    let m = f.n_plus_1();
    let (fv, _) = normalized(f);
    let mut faces: Vec<UpperFace> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for l in j + 1..m {
                let plane = plane_through(m, &fv, i, j, l);
                let mut touching = Vec::new();
                let mut ok = true;
                for v in 0..m {
                    let gap = eval(&plane, vertex(m, v)) - fv[v];
                    if gap < -COPLANARITY_TOL {
                        ok = false;
                        break;
                    }
                    if gap <= COPLANARITY_TOL {
                        touching.push(v);
                    }
                }
                if ok && !faces.iter().any(|face| face.vertices == touching) {
                    faces.push(UpperFace {
                        affine: plane,
                        vertices: touching,
                    });
                }
            }
        }
    }
    // tolerance can produce a triangle and the quadrilateral containing it
    let sets: Vec<Vec<usize>> = faces.iter().map(|f| f.vertices.clone()).collect();
    faces.retain(|face| {
        !sets
            .iter()
            .any(|s| s.len() > face.vertices.len() && face.vertices.iter().all(|v| s.contains(v)))
    });
    faces
}

/// Whether some affine majorant of `f` touches it at four or more vertices.
pub fn is_degenerate(f: &BalancedWeight) -> (bool, Option<DegeneracyWitness>) {
    let (_, scale) = normalized(f);
    for face in upper_faces(f) {
        if face.vertices.len() >= 4 {
            let affine = [face.affine[0] * scale, face.affine[1] * scale, face.affine[2] * scale];
            return (
                true,
                Some(DegeneracyWitness {
                    affine,
                    touching: face.vertices,
                }),
            );
        }
    }
    (false, None)
}

/// Diagonals of the subdivision induced by the upper hull of the lifting.
pub fn upper_hull_subdivision(f: &BalancedWeight) -> FanFace {
    let m = f.n_plus_1();
    let mut diagonals: Vec<Diagonal> = Vec::new();
    for face in upper_faces(f) {
        let vs = &face.vertices;
        for idx in 0..vs.len() {
            let (a, c) = (vs[idx], vs[(idx + 1) % vs.len()]);
            let d = if a < c { (a, c) } else { (c, a) };
            if !adjacent(m, d.0, d.1) && d.0 != d.1 && !diagonals.contains(&d) {
                diagonals.push(d);
            }
        }
    }
    FanFace::new(m, diagonals)
}
