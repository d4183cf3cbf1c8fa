//! Exact predicates for rational weights.
//!
//! Degeneracy and the induced subdivision are invariant under affine maps of
//! the plane, and a linear map also preserves the balance conditions. The
//! square and the regular hexagon are linear images of polygons with integer
//! vertices, so for those sizes rational weights can be classified without
//! any tolerance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{adjacent, Diagonal, FanFace};
use crate::error::{Error, Result};

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Integer model of the regular `n_plus_1`-gon, when one exists.
pub fn model_polygon(n_plus_1: usize) -> Result<Vec<(BigRational, BigRational)>> {
    let pts: &[(i64, i64)] = match n_plus_1 {
        4 => &[(1, 0), (0, 1), (-1, 0), (0, -1)],
        6 => &[(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)],
        _ => {
            return Err(Error::Precondition(format!(
                "no rational model of the regular {n_plus_1}-gon"
            )))
        }
    };
    Ok(pts.iter().map(|&(x, y)| (int(x), int(y))).collect())
}

/// Exact balance test on the model polygon.
pub fn is_balanced(values: &[BigRational]) -> Result<bool> {
    let pts = model_polygon(values.len())?;
    let mut s = BigRational::zero();
    let mut mx = BigRational::zero();
    let mut my = BigRational::zero();
    for (v, (x, y)) in values.iter().zip(&pts) {
        s += v;
        mx += v * x;
        my += v * y;
    }
    Ok(s.is_zero() && mx.is_zero() && my.is_zero())
}

/// Upper-hull subdivision and degeneracy flag with exact arithmetic.
pub fn upper_hull_subdivision(values: &[BigRational]) -> Result<(FanFace, bool)> {
    let m = values.len();
    let pts = model_polygon(m)?;
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for l in j + 1..m {
                // orientation of (v - p) against the plane through i, j, l:
                // sign of det [q-p, r-p, v-p] in lifted coordinates
                let lift = |k: usize| (pts[k].0.clone(), pts[k].1.clone(), values[k].clone());
                let (p, q, r) = (lift(i), lift(j), lift(l));
                let base = (&q.0 - &p.0) * (&r.1 - &p.1) - (&r.0 - &p.0) * (&q.1 - &p.1);
                let mut touching = Vec::new();
                let mut ok = true;
                for v in 0..m {
                    let w = lift(v);
                    let det = det3(
                        [&q.0 - &p.0, &q.1 - &p.1, &q.2 - &p.2],
                        [&r.0 - &p.0, &r.1 - &p.1, &r.2 - &p.2],
                        [&w.0 - &p.0, &w.1 - &p.1, &w.2 - &p.2],
                    );
                    // above the plane when det has the sign of base
                    let above = if base.is_positive() { det.is_positive() } else { det.is_negative() };
                    if above {
                        ok = false;
                        break;
                    }
                    if det.is_zero() {
                        touching.push(v);
                    }
                }
                if ok && !faces.contains(&touching) {
                    faces.push(touching);
                }
            }
        }
    }
    let degenerate = faces.iter().any(|f| f.len() >= 4);
    let mut diagonals: Vec<Diagonal> = Vec::new();
    for vs in &faces {
        for idx in 0..vs.len() {
            let (a, c) = (vs[idx], vs[(idx + 1) % vs.len()]);
            let d = if a < c { (a, c) } else { (c, a) };
            if !adjacent(m, d.0, d.1) && !diagonals.contains(&d) {
                diagonals.push(d);
            }
        }
    }
    Ok((FanFace::new(m, diagonals), degenerate))
}

fn det3(a: [BigRational; 3], b: [BigRational; 3], c: [BigRational; 3]) -> BigRational {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn square() {
        let (face, deg) = upper_hull_subdivision(&r(&[1, -1, 1, -1])).unwrap();
        assert!(!deg);
        assert_eq!(face.diagonal_set, vec![(0, 2)]);
        let (face, deg) = upper_hull_subdivision(&r(&[0, 0, 0, 0])).unwrap();
        assert!(deg);
        assert!(face.is_apex());
        assert!(is_balanced(&r(&[1, -1, 1, -1])).unwrap());
        assert!(!is_balanced(&r(&[1, 0, 0, 0])).unwrap());
    }

    #[test]
    fn hexagon_degenerate_quadrilateral() {
        // Balanced on the model hexagon; vertices 0, 1, 3, 4 are coplanar on top.
        let v = r(&[1, 1, -2, 1, 1, -2]);
        assert!(is_balanced(&v).unwrap());
        let (face, deg) = upper_hull_subdivision(&v).unwrap();
        assert!(deg);
        assert!(face.codim > 0);
    }

    #[test]
    fn unsupported_size() {
        assert!(upper_hull_subdivision(&r(&[1, 2, 3, 4, 5])).is_err());
    }
}
