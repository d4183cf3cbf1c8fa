//! Small dense linear algebra for the crease systems.

use super::vertex;

/// Orthonormal basis of the balanced subspace of R^m (complement of the
/// affine functions restricted to the vertices).
pub(crate) fn balanced_basis(m: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut affine: Vec<Vec<f64>> = vec![vec![1.0; m]];
    affine.push((0..m).map(|i| vertex(m, i)[0]).collect());
    affine.push((0..m).map(|i| vertex(m, i)[1]).collect());
    let mut span: Vec<Vec<f64>> = Vec::new();
    for v in affine {
        if let Some(u) = orthonormalize(&v, &span) {
            span.push(u);
        }
    }
    for i in 0..m {
        let mut e = vec![0.0; m];
        e[i] = 1.0;
        let mut all = span.clone();
        all.extend(basis.iter().cloned());
        if let Some(u) = orthonormalize(&e, &all) {
            basis.push(u);
        }
    }
    basis
}

fn orthonormalize(v: &[f64], against: &[Vec<f64>]) -> Option<Vec<f64>> {
    let mut w = v.to_vec();
    for _ in 0..2 {
        for u in against {
            let d: f64 = w.iter().zip(u).map(|(a, b)| a * b).sum();
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= d * ui;
            }
        }
    }
    let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    (n > 1e-8).then(|| w.iter().map(|x| x / n).collect())
}

/// Gaussian elimination with partial pivoting; `None` if singular.
pub(crate) fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max).max(1e-300);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Numerical rank by Gaussian elimination with tolerance `tol`.
#[cfg(test)]
pub(crate) fn rank(mut rows: Vec<Vec<f64>>, tol: f64) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..rows.len()).max_by(|&i, &j| rows[i][col].abs().total_cmp(&rows[j][col].abs())) else {
            break;
        };
        if rows[piv][col].abs() <= tol {
            continue;
        }
        rows.swap(r, piv);
        for i in r + 1..rows.len() {
            let f = rows[i][col] / rows[r][col];
            for c in col..ncols {
                rows[i][c] -= f * rows[r][c];
            }
        }
        r += 1;
    }
    r
}
