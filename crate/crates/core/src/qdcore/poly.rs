//! Complex polynomials and simultaneous root finding.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 800;
const MAX_RESTARTS: usize = 6;

/// Roots of distinct approximations closer than this (relative to `max(1, |r|)`)
/// are merged into one multiple root.
pub const CLUSTER_TOL: f64 = 1e-8;

/// Looser radius used to look for multiple-root candidates before the
/// derivative test decides whether a group really is one multiple root.
const CANDIDATE_TOL: f64 = 1e-5;

/// Horner evaluation, coefficients ordered from the constant term upwards.
pub fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Value and first derivative in one Horner pass.
pub fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let mut p = zero;
    let mut dp = zero;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

pub fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as f64)
        .collect()
}

/// Expands `prod (z - r_i)` into ascending coefficients.
pub fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); out.len() + 1];
        for (i, &c) in out.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        out = next;
    }
    out
}

/// Residual bound used to accept a root: `1e-10 * max(1, |r|^deg)`.
pub fn residual_bound(r: Complex64, degree: usize) -> f64 {
    1e-10 * r.norm().powi(degree as i32).max(1.0)
}

/// All roots of a polynomial with their multiplicities.
///
/// `coeffs` is ascending; the leading coefficient must be nonzero and the
/// polynomial is normalized to monic form internally.
pub fn roots(coeffs: &[Complex64]) -> Result<Vec<(Complex64, usize)>> {
    let coeffs = trim(coeffs);
    if coeffs.len() < 2 {
        return Err(Error::DegenerateInput("polynomial degree must be at least 1".into()));
    }
    let lead = *coeffs.last().unwrap();
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let degree = monic.len() - 1;
    if degree == 1 {
        return Ok(vec![(-monic[0], 1)]);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_a6e47);
    let mut approx = None;
    let mut total = 0;
    for attempt in 0..=MAX_RESTARTS {
        let mut z = initial_guesses(&monic);
        if attempt > 0 {
            let scale = cauchy_radius(&monic);
            for zi in z.iter_mut() {
                let jitter = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                *zi += jitter * 0.1 * scale;
            }
        }
        let (converged, iterations) = aberth(&monic, &mut z);
        total += iterations;
        if converged {
            approx = Some(z);
            break;
        }
    }
    let mut approx = approx.ok_or(Error::RootFindingFailure { iterations: total })?;
    for zi in approx.iter_mut() {
        *zi = newton_polish(&monic, *zi);
    }
    let clustered = cluster(&monic, &approx);
    for &(r, m) in &clustered {
        if m == 1 && eval(&monic, r).norm() > residual_bound(r, degree) {
            return Err(Error::RootFindingFailure { iterations: total });
        }
    }
    Ok(clustered)
}

fn trim(coeffs: &[Complex64]) -> &[Complex64] {
    let mut end = coeffs.len();
    while end > 0 && coeffs[end - 1] == Complex64::new(0.0, 0.0) {
        end -= 1;
    }
    &coeffs[..end]
}

fn cauchy_radius(monic: &[Complex64]) -> f64 {
    let n = monic.len() - 1;
    // Fujiwara bound
    (0..n)
        .map(|i| {
            let c = monic[i].norm();
            let c = if i == 0 { c / 2.0 } else { c };
            2.0 * c.powf(1.0 / (n - i) as f64)
        })
        .fold(0.0_f64, f64::max)
        .max(1e-3)
}

fn initial_guesses(monic: &[Complex64]) -> Vec<Complex64> {
    let n = monic.len() - 1;
    let centre = -monic[n - 1] / n as f64;
    let radius = 0.5 * cauchy_radius(monic) + centre.norm() * 0.1;
    (0..n)
        .map(|i| {
            let angle = std::f64::consts::TAU * i as f64 / n as f64 + 0.4;
            centre + Complex64::from_polar(radius, angle)
        })
        .collect()
}

fn aberth(monic: &[Complex64], z: &mut [Complex64]) -> (bool, usize) {
    let n = z.len();
    for iteration in 1..=MAX_ITERATIONS {
        let mut max_step = 0.0_f64;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                return (false, iteration);
            }
            z[i] -= step;
            max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
        }
        if max_step < 1e-15 {
            return (true, iteration);
        }
    }
    // Multiple roots only converge linearly; accept if every residual is tiny.
    let ok = z
        .iter()
        .all(|&zi| eval(monic, zi).norm() <= 1e-12 * zi.norm().powi(n as i32).max(1.0));
    (ok, MAX_ITERATIONS)
}

fn newton_polish(monic: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..4 {
        let (p, dp) = eval_with_derivative(monic, z);
        if dp.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        if eval(monic, next).norm() >= p.norm() {
            break;
        }
        z = next;
    }
    z
}

/// Groups nearby approximations and decides multiplicities.
fn cluster(monic: &[Complex64], approx: &[Complex64]) -> Vec<(Complex64, usize)> {
    let degree = monic.len() - 1;
    let mut used = vec![false; approx.len()];
    let mut out = Vec::new();
    for i in 0..approx.len() {
        if used[i] {
            continue;
        }
        // transitive closure under the candidate radius
        let mut group = vec![i];
        used[i] = true;
        let mut cursor = 0;
        while cursor < group.len() {
            let g = approx[group[cursor]];
            for j in 0..approx.len() {
                if !used[j] && (approx[j] - g).norm() <= CANDIDATE_TOL * g.norm().max(1.0) {
                    used[j] = true;
                    group.push(j);
                }
            }
            cursor += 1;
        }
        let members: Vec<Complex64> = group.iter().map(|&g| approx[g]).collect();
        if members.len() == 1 {
            out.push((members[0], 1));
            continue;
        }
        match confirm_multiple(monic, &members, degree) {
            Some(root) => out.push((root, members.len())),
            None => {
                // Tight merge only.
                let mut taken = vec![false; members.len()];
                for a in 0..members.len() {
                    if taken[a] {
                        continue;
                    }
                    taken[a] = true;
                    let mut sum = members[a];
                    let mut count = 1;
                    for b in a + 1..members.len() {
                        if !taken[b]
                            && (members[b] - members[a]).norm()
                                <= CLUSTER_TOL * members[a].norm().max(1.0)
                        {
                            taken[b] = true;
                            sum += members[b];
                            count += 1;
                        }
                    }
                    out.push((sum / count as f64, count));
                }
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.re
            .partial_cmp(&b.0.re)
            .unwrap()
            .then(a.0.im.partial_cmp(&b.0.im).unwrap())
    });
    out
}

/// Accepts a group of `m` approximations as one `m`-fold root when the
/// refined centre annihilates the first `m - 1` derivatives.
fn confirm_multiple(monic: &[Complex64], members: &[Complex64], degree: usize) -> Option<Complex64> {
    let m = members.len();
    let mut derivs = vec![monic.to_vec()];
    for _ in 1..=m {
        let d = derivative(derivs.last().unwrap());
        derivs.push(d);
    }
    let mut c = members.iter().sum::<Complex64>() / m as f64;
    // Newton on p^{(m-1)}, which has a simple root at an m-fold root of p.
    for _ in 0..8 {
        let (p, dp) = eval_with_derivative(&derivs[m - 1], c);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        c -= step;
        if step.norm() <= 1e-16 * c.norm().max(1.0) {
            break;
        }
    }
    let scale = c.norm().max(1.0);
    for (j, d) in derivs.iter().enumerate().take(m) {
        let bound = 1e-7 * scale.powi((degree - j) as i32) * (1..=degree).product::<usize>() as f64;
        if eval(d, c).norm() > bound {
            return None;
        }
    }
    if eval(monic, c).norm() > residual_bound(c, degree) {
        return None;
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn square_roots_of_one() {
        let r = roots(&[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].0 - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((r[1].0 - c(1.0, 0.0)).norm() < 1e-14);
        assert!(r.iter().all(|&(_, m)| m == 1));
    }

    #[test]
    fn cube_roots_of_one() {
        let r = roots(&[c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(r.len(), 3);
        for k in 0..3 {
            let w = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0);
            assert!(r.iter().any(|&(z, m)| m == 1 && (z - w).norm() < 1e-13));
        }
    }

    #[test]
    fn double_root_is_merged() {
        let coeffs = from_roots(&[c(0.3, 0.0), c(0.3, 0.0), c(0.0, -2.0)]);
        let r = roots(&coeffs).unwrap();
        assert_eq!(r.len(), 2, "{r:?}");
        let double = r.iter().find(|&&(_, m)| m == 2).unwrap();
        assert!((double.0 - c(0.3, 0.0)).norm() < 1e-8);
        let simple = r.iter().find(|&&(_, m)| m == 1).unwrap();
        assert!((simple.0 - c(0.0, -2.0)).norm() < 1e-12);
        for &(z, _) in &r {
            assert!(eval(&coeffs, z).norm() <= residual_bound(z, 3));
        }
    }

    #[test]
    fn triple_root() {
        let coeffs = from_roots(&[c(1.0, 1.0), c(1.0, 1.0), c(1.0, 1.0), c(-0.5, 0.0)]);
        let r = roots(&coeffs).unwrap();
        assert_eq!(r.iter().map(|x| x.1).sum::<usize>(), 4);
        assert!(r.iter().any(|&(z, m)| m == 3 && (z - c(1.0, 1.0)).norm() < 1e-6));
    }

    #[test]
    fn close_but_distinct_roots_stay_apart() {
        let coeffs = from_roots(&[c(0.5, 0.0), c(0.5 + 1e-4, 0.0), c(-1.0, 0.2)]);
        let r = roots(&coeffs).unwrap();
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn degree_zero_rejected() {
        assert!(roots(&[c(1.0, 0.0)]).is_err());
    }
}
