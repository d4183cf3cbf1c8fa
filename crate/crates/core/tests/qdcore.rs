use std::f64::consts::TAU;

use proptest::prelude::*;
use strata::qdcore::{make_qdiff, period, poly, sqrt_q_along, Path, QuadDiff};
use strata::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(c(0.0, 0.0), |acc, a| acc * z + a)
}

fn cubic_real() -> QuadDiff {
    make_qdiff(3, &[c(-1.0, 0.0), c(0.3, 0.0), c(0.2, 0.0)]).unwrap()
}

fn cubic_generic() -> QuadDiff {
    make_qdiff(3, &[c(-1.0, 0.0), c(0.0, 0.1), c(0.0, 0.0)]).unwrap()
}

fn circle(centre: Complex64, r: f64) -> Path {
    let mut pts: Vec<Complex64> = (0..96).map(|i| centre + Complex64::from_polar(r, TAU * i as f64 / 96.0)).collect();
    pts.push(pts[0]);
    Path::new(pts).unwrap()
}

fn loop_sign(qd: &QuadDiff, path: &Path) -> f64 {
    let b = qd.q(path.first()).sqrt();
    let end = *sqrt_q_along(qd, path, b).unwrap().last().unwrap();
    let r = end / b;
    assert!((r.norm() - 1.0).abs() < 1e-6 && r.im.abs() < 1e-6, "{r}");
    r.re.signum()
}

fn point() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, y)| c(x, y))
}

fn clear_of(qd: &QuadDiff, z: Complex64) -> bool {
    qd.critical_points().iter().all(|p| (p.z - z).norm() > 0.05)
}

#[test]
fn monodromy_follows_enclosed_order() {
    let qd = cubic_generic();
    let zs: Vec<Complex64> = qd.zeros().iter().map(|z| z.0).collect();
    for &z in &zs {
        assert_eq!(loop_sign(&qd, &circle(z, 0.2)), -1.0);
    }
    // one zero with the pole, and each pair of zeros: even order
    assert_eq!(loop_sign(&qd, &circle(zs[2] * 0.5, 0.7)), 1.0);
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        let mid = (zs[i] + zs[j]) * 0.5;
        let r = 0.5 * (zs[i] - zs[j]).norm() + 0.2;
        // keep the pole and the third zero outside
        if (mid.norm() > r + 0.05) && zs.iter().all(|z| *z == zs[i] || *z == zs[j] || (z - mid).norm() > r + 0.05) {
            assert_eq!(loop_sign(&qd, &circle(mid, r)), 1.0);
        }
    }
    // all three zeros without the pole is impossible on a circle; all of
    // them with the pole is even
    assert_eq!(loop_sign(&qd, &circle(c(0.0, 0.0), 2.0)), 1.0);
    assert_eq!(loop_sign(&qd, &circle(c(3.0, 3.0), 0.5)), 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn root_residuals(
        deg in 2usize..=8,
        raw in proptest::collection::vec((0.0..1.0f64, 0.0..TAU), 8),
    ) {
        let mut coeffs: Vec<Complex64> = raw[..deg].iter().map(|&(r, a)| Complex64::from_polar(r, a)).collect();
        coeffs.push(c(1.0, 0.0));
        let roots = poly::roots(&coeffs).unwrap();
        prop_assert_eq!(roots.iter().map(|r| r.1).sum::<usize>(), deg);
        for (r, m) in roots {
            if m == 1 {
                let bound = 1e-10 * r.norm().powi(deg as i32).max(1.0);
                prop_assert!(eval(&coeffs, r).norm() <= bound, "{} at {}", eval(&coeffs, r).norm(), r);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn period_is_additive_and_antisymmetric(a in point(), m in point(), b in point()) {
        let qd = cubic_generic();
        prop_assume!(clear_of(&qd, a) && clear_of(&qd, m) && clear_of(&qd, b));
        prop_assume!((a - m).norm() > 1e-3 && (m - b).norm() > 1e-3);
        let first = Path::segment(a, m).unwrap();
        let second = Path::segment(m, b).unwrap();
        let whole = first.concat(&second).unwrap();
        let s0 = qd.q(a).sqrt();
        let Ok(branches) = sqrt_q_along(&qd, &whole, s0) else { return Ok(()) };
        let (Ok(p), Ok(p1), Ok(p2)) = (
            period(&qd, &whole, s0),
            period(&qd, &first, s0),
            period(&qd, &second, branches[1]),
        ) else {
            return Ok(());
        };
        prop_assert!((p - p1 - p2).norm() <= 1e-8 * p.norm().max(1.0), "{}", (p - p1 - p2).norm());
        let back = period(&qd, &whole.reversed(), branches[2]).unwrap();
        prop_assert_eq!(back, -p);
    }

    #[test]
    fn real_coefficients_conjugate_periods(a in point(), b in point()) {
        let qd = cubic_real();
        prop_assert!(qd.has_real_coefficients());
        prop_assume!(clear_of(&qd, a) && clear_of(&qd, b) && (a - b).norm() > 1e-3);
        let path = Path::segment(a, b).unwrap();
        let s0 = qd.q(a).sqrt();
        let (Ok(p), Ok(pc)) = (period(&qd, &path, s0), period(&qd, &path.conj(), s0.conj())) else {
            return Ok(());
        };
        prop_assert!((pc - p.conj()).norm() <= 1e-8 * p.norm().max(1.0));
    }
}
