//! Quadratic differentials `q(z) dz^2` with one simple pole at the origin,
//! their critical points, and periods `int sqrt(q) dz`.

mod branch;
pub mod poly;
mod quad;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use branch::{nearest_branch, sqrt_q_along};
pub use quad::{period, period_with_error, PeriodEstimate, PERIOD_TOLERANCE};

/// Which member of the family the differential belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `(z^k + a_{k-1} z^{k-1} + ... + a_0) / z dz^2`
    #[default]
    Rational,
    /// `(z^k + a_{k-1} z^{k-1} + ... + a_0) dz^2`, the pole-free subfamily.
    Polynomial,
}

/// A zero, or the simple pole at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPoint {
    pub z: Complex64,
    /// Multiplicity for zeros, `-1` for the simple pole.
    pub order: i32,
}

impl CriticalPoint {
    pub fn is_pole(&self) -> bool {
        self.order < 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadDiff {
    k: usize,
    coeffs: Vec<Complex64>,
    family: Family,
    zeros: Vec<(Complex64, usize)>,
    numerator: Vec<Complex64>,
}

impl QuadDiff {
    /// `(z^k + a_{k-1} z^{k-1} + ... + a_0) / z`, `coeffs = [a_0, ..., a_{k-1}]`.
    pub fn new(k: usize, coeffs: &[Complex64]) -> Result<Self> {
        if k < 2 {
            return Err(Error::DegenerateInput(format!("k = {k}, need k >= 2")));
        }
        if coeffs.len() != k {
            return Err(Error::DegenerateInput(format!(
                "expected {k} coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs[0].norm() == 0.0 {
            return Err(Error::DegenerateInput(
                "a_0 = 0 cancels the simple pole at the origin".into(),
            ));
        }
        Self::build(k, coeffs, Family::Rational)
    }

    /// The pole-free subfamily `(z^k + ... + a_0) dz^2` with `k >= 1`.
    pub fn polynomial(k: usize, coeffs: &[Complex64]) -> Result<Self> {
        if k < 1 || coeffs.len() != k {
            return Err(Error::DegenerateInput(format!(
                "polynomial degree {k} with {} coefficients",
                coeffs.len()
            )));
        }
        Self::build(k, coeffs, Family::Polynomial)
    }

    fn build(k: usize, coeffs: &[Complex64], family: Family) -> Result<Self> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::DegenerateInput("non-finite coefficient".into()));
        }
        let mut numerator = coeffs.to_vec();
        numerator.push(Complex64::new(1.0, 0.0));
        let zeros = poly::roots(&numerator)?;
        Ok(Self {
            k,
            coeffs: coeffs.to_vec(),
            family,
            zeros,
            numerator,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn has_pole(&self) -> bool {
        self.family == Family::Rational
    }

    /// Ascending numerator coefficients including the leading 1.
    pub fn numerator(&self) -> &[Complex64] {
        &self.numerator
    }

    /// Zeros with multiplicities, sorted by real then imaginary part.
    pub fn zeros(&self) -> &[(Complex64, usize)] {
        &self.zeros
    }

    /// Order of the pole at infinity: `k + 3` for the rational family.
    pub fn pole_infinity_order(&self) -> usize {
        match self.family {
            Family::Rational => self.k + 3,
            Family::Polynomial => self.k + 4,
        }
    }

    /// Number of principal directions at infinity (`m - 2`).
    pub fn n_directions(&self) -> usize {
        self.pole_infinity_order() - 2
    }

    pub fn has_multiple_zero(&self) -> bool {
        self.zeros.iter().any(|&(_, m)| m > 1)
    }

    /// Zeros first (in `zeros()` order), then the pole when present.
    /// Indices into this list are the critical point ids used everywhere.
    pub fn critical_points(&self) -> Vec<CriticalPoint> {
        let mut out: Vec<CriticalPoint> = self
            .zeros
            .iter()
            .map(|&(z, m)| CriticalPoint { z, order: m as i32 })
            .collect();
        if self.has_pole() {
            out.push(CriticalPoint {
                z: Complex64::new(0.0, 0.0),
                order: -1,
            });
        }
        out
    }

    pub fn pole_id(&self) -> Option<usize> {
        self.has_pole().then_some(self.zeros.len())
    }

    pub fn q(&self, z: Complex64) -> Complex64 {
        let p = poly::eval(&self.numerator, z);
        match self.family {
            Family::Rational => p / z,
            Family::Polynomial => p,
        }
    }

    /// Leading coefficient `c` of `q(z) ~ c (z - z0)^order` at a critical point.
    pub fn local_coefficient(&self, point: &CriticalPoint) -> Complex64 {
        if point.is_pole() {
            return self.coeffs[0];
        }
        let mut d = self.numerator.clone();
        let mut fact = 1.0;
        for i in 1..=point.order as usize {
            d = poly::derivative(&d);
            fact *= i as f64;
        }
        let c = poly::eval(&d, point.z) / fact;
        match self.family {
            Family::Rational => c / point.z,
            Family::Polynomial => c,
        }
    }

    /// `max(1, max |zero|)`
    pub fn scale(&self) -> f64 {
        self.zeros.iter().map(|z| z.0.norm()).fold(1.0, f64::max)
    }

    /// Radius inside which a point counts as sitting on a critical point.
    pub fn eps_crit(&self) -> f64 {
        let pts: Vec<Complex64> = self.critical_points().iter().map(|c| c.z).collect();
        let mut diam = 0.0_f64;
        for a in &pts {
            for b in &pts {
                diam = diam.max((a - b).norm());
            }
        }
        if diam == 0.0 {
            diam = self.scale();
        }
        1e-6 * diam
    }

    /// Id of the critical point within `radius` of `z`, if any.
    pub fn critical_near(&self, z: Complex64, radius: f64) -> Option<usize> {
        self.critical_points()
            .iter()
            .position(|c| (c.z - z).norm() <= radius)
    }

    /// Complex conjugate differential (conjugated coefficients).
    pub fn conj(&self) -> Result<Self> {
        let c: Vec<Complex64> = self.coeffs.iter().map(|c| c.conj()).collect();
        Self::build(self.k, &c, self.family)
    }

    pub fn has_real_coefficients(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }
}

#[derive(Serialize, Deserialize)]
struct QuadDiffRepr {
    k: usize,
    coeffs: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "is_rational")]
    family: Family,
}

fn is_rational(f: &Family) -> bool {
    *f == Family::Rational
}

impl Serialize for QuadDiff {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuadDiffRepr {
            k: self.k,
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            family: self.family,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadDiff {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = QuadDiffRepr::deserialize(d)?;
        let coeffs: Vec<Complex64> = repr.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect();
        let built = match repr.family {
            Family::Rational => QuadDiff::new(repr.k, &coeffs),
            Family::Polynomial => QuadDiff::polynomial(repr.k, &coeffs),
        };
        built.map_err(serde::de::Error::custom)
    }
}

/// Convenience wrapper for [`QuadDiff::new`].
pub fn make_qdiff(k: usize, coeffs: &[Complex64]) -> Result<QuadDiff> {
    QuadDiff::new(k, coeffs)
}

/// A piecewise-linear path through the given waypoints.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    points: Vec<Complex64>,
}

impl Path {
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Precondition("empty path".into()));
        }
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Precondition("consecutive waypoints coincide".into()));
        }
        Ok(Self { points })
    }

    pub fn segment(a: Complex64, b: Complex64) -> Result<Self> {
        Self::new(vec![a, b])
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn first(&self) -> Complex64 {
        self.points[0]
    }

    pub fn last(&self) -> Complex64 {
        *self.points.last().unwrap()
    }

    pub fn reversed(&self) -> Self {
        let mut p = self.points.clone();
        p.reverse();
        Self { points: p }
    }

    pub fn conj(&self) -> Self {
        Self {
            points: self.points.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn concat(&self, other: &Path) -> Result<Self> {
        if (self.last() - other.first()).norm() > 0.0 {
            return Err(Error::Precondition("paths do not join".into()));
        }
        let mut p = self.points.clone();
        p.extend_from_slice(&other.points[1..]);
        Self::new(p)
    }

    /// Checks that interior waypoints keep away from critical points.
    pub fn check_clearance(&self, qd: &QuadDiff) -> Result<()> {
        let eps = qd.eps_crit();
        let n = self.points.len();
        for (i, &z) in self.points.iter().enumerate() {
            if i == 0 || i + 1 == n {
                continue;
            }
            if let Some(id) = qd.critical_near(z, eps) {
                return Err(Error::PathThroughSingularity {
                    near: format!("{}", qd.critical_points()[id].z),
                    radius: eps,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn k2_example() {
        let qd = make_qdiff(2, &[c(-1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(qd.pole_infinity_order(), 5);
        assert_eq!(qd.n_directions(), 3);
        let z = qd.zeros();
        assert_eq!(z.len(), 2);
        assert!((z[0].0 - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((z[1].0 - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn k3_example() {
        let qd = make_qdiff(3, &[c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(qd.pole_infinity_order(), 6);
        assert_eq!(qd.n_directions(), 4);
        assert_eq!(qd.zeros().len(), 3);
        for j in 0..3 {
            let w = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / 3.0);
            assert!(qd.zeros().iter().any(|&(z, m)| m == 1 && (z - w).norm() < 1e-13));
        }
        let total: usize = qd.zeros().iter().map(|z| z.1).sum();
        assert_eq!(total, 3);
    }

    #[test]
    fn a0_zero_is_degenerate() {
        let err = make_qdiff(2, &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)));
        assert!(matches!(make_qdiff(1, &[c(1.0, 0.0)]), Err(Error::DegenerateInput(_))));
        assert!(matches!(make_qdiff(3, &[c(1.0, 0.0)]), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn local_coefficient_at_simple_zero() {
        let qd = make_qdiff(2, &[c(-1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let one = qd.critical_points().into_iter().find(|p| (p.z - 1.0).norm() < 1e-12).unwrap();
        // (z^2 - 1)/z = (z - 1)(z + 1)/z, so c = 2 at z = 1
        assert!((qd.local_coefficient(&one) - c(2.0, 0.0)).norm() < 1e-12);
        let pole = qd.critical_points()[qd.pole_id().unwrap()];
        assert!((qd.local_coefficient(&pole) - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn json_shape() {
        let qd = make_qdiff(2, &[c(-1.0, 0.5), c(0.0, 0.0)]).unwrap();
        let s = serde_json::to_string(&qd).unwrap();
        assert_eq!(s, r#"{"k":2,"coeffs":[[-1.0,0.5],[0.0,0.0]]}"#);
        let back: QuadDiff = serde_json::from_str(&s).unwrap();
        assert_eq!(back, qd);
        assert!(serde_json::from_str::<QuadDiff>(r#"{"k":2,"coeffs":[[0,0],[1,0]]}"#).is_err());
    }
}
