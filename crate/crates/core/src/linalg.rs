//! Small dense numerics: nonnegative least squares, symmetric eigenvalues,
//! finite-difference Hessians.

use nalgebra::{DMatrix, DVector};

#[derive(Clone, Debug, PartialEq)]
pub struct NnlsSolution {
    pub x: Vec<f64>,
    /// `‖A x − b‖₂`
    pub residual_norm: f64,
    pub iterations: usize,
}

/// Unconstrained least squares restricted to the columns in `cols`.
fn restricted_lstsq(a: &DMatrix<f64>, b: &DVector<f64>, cols: &[usize]) -> DVector<f64> {
    let sub = a.select_columns(cols);
    let svd = sub.svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let eps = f64::EPSILON * smax * (a.nrows().max(cols.len()) as f64);
    svd.solve(b, eps).expect("both singular vector sets were computed")
}

/// Lawson–Hanson active-set NNLS: `min ‖A x − b‖₂` subject to `x >= 0`.
///
/// Each pass adds the bound-constrained coordinate with the largest positive
/// dual `w = Aᵀ(b − A x)` to the passive set, solves the unconstrained
/// problem on the passive set, and steps back toward feasibility while any
/// passive coordinate would turn nonpositive.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> NnlsSolution {
    let (rows, k) = a.shape();
    assert_eq!(rows, b.len(), "row count of A must match b");
    let mut x = DVector::<f64>::zeros(k);
    let mut passive = vec![false; k];
    let scale = a.norm() * b.norm().max(1.0);
    let tol = 10.0 * f64::EPSILON * scale * (rows.max(k).max(1) as f64);
    let max_outer = 3 * k + 10;
    let mut iterations = 0;

    let mut blocked = vec![false; k];
    while iterations < max_outer {
        let w = a.transpose() * (b - a * &x);
        let candidate = (0..k)
            .filter(|&j| !passive[j] && !blocked[j] && w[j] > tol)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(t) = candidate else { break };
        iterations += 1;
        passive[t] = true;

        let mut first = true;
        loop {
            let cols: Vec<usize> = (0..k).filter(|&j| passive[j]).collect();
            let sol = restricted_lstsq(a, b, &cols);
            let mut z = DVector::<f64>::zeros(k);
            for (slot, &j) in cols.iter().enumerate() {
                z[j] = sol[slot];
            }
            if cols.iter().all(|&j| z[j] > 0.0) {
                x = z;
                break;
            }
            if first && z[t] <= 0.0 {
                // The new column cannot enter with a positive weight; retry
                // the outer step with it excluded.
                passive[t] = false;
                blocked[t] = true;
                break;
            }
            first = false;
            let alpha = cols
                .iter()
                .filter(|&&j| z[j] <= 0.0)
                .map(|&j| x[j] / (x[j] - z[j]))
                .fold(f64::INFINITY, f64::min);
            x += (&z - &x) * alpha;
            for &j in &cols {
                if x[j] <= tol.max(f64::MIN_POSITIVE) {
                    x[j] = 0.0;
                    passive[j] = false;
                }
            }
            if passive.iter().all(|p| !p) {
                break;
            }
        }
        if !blocked[t] {
            blocked.iter_mut().for_each(|b| *b = false);
        }
    }

    let residual_norm = (a * &x - b).norm();
    NnlsSolution { x: x.iter().copied().collect(), residual_norm, iterations }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let frob: f64 = a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * frob || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Symmetrized central differences of a gradient:
/// `H[i][j] = (∂_i L(x + h e_j) − ∂_i L(x − h e_j)) / 2h`.
pub fn fd_hessian<E>(
    grad: impl Fn(&[f64]) -> Result<Vec<f64>, E>,
    x: &[f64],
    h: f64,
) -> Result<Vec<Vec<f64>>, E> {
    let n = x.len();
    let mut h_mat = vec![vec![0.0; n]; n];
    let mut probe = x.to_vec();
    for j in 0..n {
        probe[j] = x[j] + h;
        let plus = grad(&probe)?;
        probe[j] = x[j] - h;
        let minus = grad(&probe)?;
        probe[j] = x[j];
        for i in 0..n {
            h_mat[i][j] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (h_mat[i][j] + h_mat[j][i]);
            h_mat[i][j] = avg;
            h_mat[j][i] = avg;
        }
    }
    Ok(h_mat)
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
