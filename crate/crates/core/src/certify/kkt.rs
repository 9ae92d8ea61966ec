//! KKT residuals, multiplier recovery and the Fritz–John probe.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::geometry::{is_feasible, require_feasible};
use crate::linalg::{nnls, norm};
use crate::model::{FritzJohnCertificate, FritzJohnStatus, KktPoint, Problem, Tolerances};

use super::CertifyError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KktResidual {
    pub stationarity_residual: f64,
    pub complementarity_residual: f64,
    /// `x` satisfies every constraint to `eps_feas`.
    pub feasible: bool,
    /// `λ >= 0`.
    pub dual_feasible: bool,
}

impl KktResidual {
    pub fn within(&self, tol: &Tolerances) -> bool {
        self.feasible
            && self.dual_feasible
            && self.stationarity_residual <= tol.eps_kkt
            && self.complementarity_residual <= tol.eps_kkt
    }
}

pub(crate) struct Gradients {
    pub objective: Vec<f64>,
    pub constraints: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

pub(crate) fn gradients(p: &Problem, x: &[f64]) -> Result<Gradients, CertifyError> {
    if x.len() != p.dim() {
        return Err(CertifyError::Dimension { what: "point", expected: p.dim(), got: x.len() });
    }
    let objective = p.objective().gradient(x)?.grad;
    let mut constraints = Vec::with_capacity(p.num_constraints());
    let mut values = Vec::with_capacity(p.num_constraints());
    for g in p.constraints() {
        let gv = g.gradient(x)?;
        values.push(gv.value);
        constraints.push(gv.grad);
    }
    Ok(Gradients { objective, constraints, values })
}

/// `∇f(x) + Σ λ_j ∇g_j(x)`
fn stationarity(grads: &Gradients, lambda: &[f64]) -> Vec<f64> {
    let mut r = grads.objective.clone();
    for (l, g) in lambda.iter().zip(&grads.constraints) {
        for (ri, gi) in r.iter_mut().zip(g) {
            *ri += l * gi;
        }
    }
    r
}

/// Stationarity and complementarity residuals of `(x, λ)`.
pub fn kkt_residual(p: &Problem, x: &[f64], lambda: &[f64], tol: &Tolerances) -> Result<KktResidual, CertifyError> {
    if lambda.len() != p.num_constraints() {
        return Err(CertifyError::Dimension { what: "multiplier vector", expected: p.num_constraints(), got: lambda.len() });
    }
    let grads = gradients(p, x)?;
    let stationarity_residual = norm(&stationarity(&grads, lambda));
    let complementarity_residual = lambda
        .iter()
        .zip(&grads.values)
        .map(|(l, g)| (l * g).abs())
        .fold(0.0, f64::max);
    Ok(KktResidual {
        stationarity_residual,
        complementarity_residual,
        feasible: is_feasible(p, x, tol),
        dual_feasible: lambda.iter().all(|&l| l >= 0.0),
    })
}

fn active_indices(values: &[f64], tol: &Tolerances) -> Vec<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, g)| g.abs() <= tol.eps_active)
        .map(|(j, _)| j)
        .collect()
}

fn column_matrix(n: usize, columns: &[&[f64]]) -> DMatrix<f64> {
    DMatrix::from_fn(n, columns.len(), |i, c| columns[c][i])
}

/// Multipliers minimizing `‖∇f + Σ λ_j ∇g_j‖` over `λ >= 0`, supported on
/// the active set at `x` and found by NNLS. Inactive constraints get 0.
pub fn recover_multipliers(p: &Problem, x: &[f64], tol: &Tolerances) -> Result<KktPoint, CertifyError> {
    require_feasible(p, x, tol)?;
    let grads = gradients(p, x)?;
    let active = active_indices(&grads.values, tol);
    let cols: Vec<&[f64]> = active.iter().map(|&j| grads.constraints[j].as_slice()).collect();
    let a = column_matrix(p.dim(), &cols);
    let b = DVector::from_iterator(p.dim(), grads.objective.iter().map(|v| -v));
    let sol = nnls(&a, &b);
    let mut lambda = vec![0.0; p.num_constraints()];
    for (slot, &j) in active.iter().enumerate() {
        lambda[j] = sol.x[slot];
    }
    let r = kkt_residual(p, x, &lambda, tol)?;
    Ok(KktPoint {
        x: x.to_vec(),
        lambda,
        stationarity_residual: r.stationarity_residual,
        complementarity_residual: r.complementarity_residual,
    })
}

/// Weight of the appended `λ0 + Σ λ_j = 1` row, relative to the gradient scale.
const SIMPLEX_ROW_WEIGHT: f64 = 1e4;

/// Minimizes `‖λ0 ∇f + Σ λ_j ∇g_j‖` over nonnegative `(λ0, λ)` with
/// `λ0 + Σ λ_j = 1` and `λ` supported on the active set.
///
/// The normalization enters as a heavily weighted extra row of the NNLS
/// system; the result is renormalized onto the simplex afterwards. When the
/// minimizer found has `λ0 <= eps_kkt` but KKT multipliers also exist at `x`,
/// the rescaled KKT multipliers are reported instead, so `DegenerateFj`
/// means no representation with `λ0 > 0` makes the residual vanish.
pub fn fritz_john_probe(p: &Problem, x: &[f64], tol: &Tolerances) -> Result<FritzJohnCertificate, CertifyError> {
    require_feasible(p, x, tol)?;
    let grads = gradients(p, x)?;
    let active = active_indices(&grads.values, tol);
    let n = p.dim();

    let mut cols: Vec<&[f64]> = vec![grads.objective.as_slice()];
    cols.extend(active.iter().map(|&j| grads.constraints[j].as_slice()));
    let scale = cols.iter().map(|c| norm(c)).fold(1.0, f64::max);
    let weight = SIMPLEX_ROW_WEIGHT * scale;
    let k = cols.len();
    let a = DMatrix::from_fn(n + 1, k, |i, c| if i < n { cols[c][i] } else { weight });
    let mut b = DVector::zeros(n + 1);
    b[n] = weight;
    let sol = nnls(&a, &b);
    let total: f64 = sol.x.iter().sum();
    let mut weights: Vec<f64> = if total > 0.0 {
        sol.x.iter().map(|v| v / total).collect()
    } else {
        // Cannot happen for weight > 0; keep λ0 = 1 as the neutral choice.
        std::iter::once(1.0).chain(std::iter::repeat(0.0).take(k - 1)).collect()
    };
    if let Some(polished) = polish_on_support(&cols, &weights) {
        if simplex_residual(&cols, &polished) <= simplex_residual(&cols, &weights) {
            weights = polished;
        }
    }

    let mut lambda0 = weights[0];
    let mut lambda = vec![0.0; p.num_constraints()];
    for (slot, &j) in active.iter().enumerate() {
        lambda[j] = weights[slot + 1];
    }
    let mut residual = fj_residual(&grads, lambda0, &lambda);

    let mut status = if residual > tol.eps_kkt {
        FritzJohnStatus::NotFjPoint
    } else if lambda0 > tol.eps_kkt {
        FritzJohnStatus::RegularFj
    } else {
        FritzJohnStatus::DegenerateFj
    };

    if status == FritzJohnStatus::DegenerateFj {
        let kkt = recover_multipliers(p, x, tol)?;
        let total = 1.0 + kkt.lambda.iter().sum::<f64>();
        let alt0 = 1.0 / total;
        let alt: Vec<f64> = kkt.lambda.iter().map(|l| l / total).collect();
        let alt_residual = fj_residual(&grads, alt0, &alt);
        if alt_residual <= tol.eps_kkt && alt0 > tol.eps_kkt {
            lambda0 = alt0;
            lambda = alt;
            residual = alt_residual;
            status = FritzJohnStatus::RegularFj;
        }
    }

    Ok(FritzJohnCertificate { x: x.to_vec(), lambda0, lambda, residual, status })
}

fn simplex_residual(cols: &[&[f64]], w: &[f64]) -> f64 {
    let n = cols[0].len();
    let r: Vec<f64> = (0..n).map(|i| cols.iter().zip(w).map(|(c, wi)| wi * c[i]).sum()).collect();
    norm(&r)
}

/// Exact minimizer of `‖Σ w_c col_c‖` subject to `Σ w_c = 1` on the support
/// of `w`, from the bordered normal equations. `None` if it leaves `w >= 0`.
fn polish_on_support(cols: &[&[f64]], w: &[f64]) -> Option<Vec<f64>> {
    let support: Vec<usize> = (0..w.len()).filter(|&c| w[c] > 0.0).collect();
    let s = support.len();
    let mut kkt = DMatrix::zeros(s + 1, s + 1);
    for (a, &ca) in support.iter().enumerate() {
        for (b, &cb) in support.iter().enumerate() {
            kkt[(a, b)] = cols[ca].iter().zip(cols[cb]).map(|(x, y)| x * y).sum::<f64>();
        }
        kkt[(a, s)] = 1.0;
        kkt[(s, a)] = 1.0;
    }
    let mut rhs = DVector::zeros(s + 1);
    rhs[s] = 1.0;
    let z = kkt.svd(true, true).solve(&rhs, 1e-13).ok()?;
    let mut out = vec![0.0; w.len()];
    for (a, &c) in support.iter().enumerate() {
        if !(z[a] >= 0.0) {
            return None;
        }
        out[c] = z[a];
    }
    let total: f64 = out.iter().sum();
    (total > 0.0).then(|| out.iter().map(|v| v / total).collect())
}

pub(crate) fn fj_residual(grads: &Gradients, lambda0: f64, lambda: &[f64]) -> f64 {
    let mut r: Vec<f64> = grads.objective.iter().map(|g| lambda0 * g).collect();
    for (l, g) in lambda.iter().zip(&grads.constraints) {
        for (ri, gi) in r.iter_mut().zip(g) {
            *ri += l * gi;
        }
    }
    norm(&r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::load_problem;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn residual_at_hyp1_minimizer_is_exactly_zero() {
        let p = load_problem(fixtures::HYP1).unwrap();
        let r = kkt_residual(&p, &[1.0, 1.0], &[1.0, 0.0, 0.0], &tol()).unwrap();
        assert_eq!(r.stationarity_residual, 0.0);
        assert_eq!(r.complementarity_residual, 0.0);
        assert!(r.feasible && r.dual_feasible);
    }

    #[test]
    fn residual_with_zero_multipliers() {
        let p = load_problem(fixtures::HYP1).unwrap();
        let r = kkt_residual(&p, &[2.0, 2.0], &[0.0; 3], &tol()).unwrap();
        assert!((r.stationarity_residual - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.complementarity_residual, 0.0);
    }

    #[test]
    fn residual_at_hyp2_minimizer() {
        let p = load_problem(fixtures::HYP2).unwrap();
        let s = 2f64.sqrt();
        let r = kkt_residual(&p, &[s, s / 2.0], &[s, 0.0, 0.0, 0.0, 0.0], &tol()).unwrap();
        assert!(r.stationarity_residual < 1e-15);
    }

    #[test]
    fn residual_flags_negative_multipliers_and_infeasibility() {
        let p = load_problem(fixtures::HYP1).unwrap();
        let r = kkt_residual(&p, &[0.5, 0.5], &[-1.0, 0.0, 0.0], &tol()).unwrap();
        assert!(!r.feasible && !r.dual_feasible);
        assert!(kkt_residual(&p, &[1.0, 1.0], &[1.0], &tol()).is_err());
    }

    #[test]
    fn recovers_hyp1_multiplier() {
        let p = load_problem(fixtures::HYP1).unwrap();
        let k = recover_multipliers(&p, &[1.0, 1.0], &tol()).unwrap();
        assert_eq!(k.lambda, vec![1.0, 0.0, 0.0]);
        assert_eq!(k.stationarity_residual, 0.0);
    }

    #[test]
    fn grid_oracle_agrees_on_hyp1_multiplier() {
        // min over λ1 in [0, 10], step 1e-4, of ‖(1,1) + λ1 (−1,−1)‖
        let (mut best, mut arg) = (f64::INFINITY, 0.0);
        for i in 0..=100_000 {
            let l = i as f64 * 1e-4;
            let r = (2.0 * (1.0 - l) * (1.0 - l)).sqrt();
            if r < best {
                best = r;
                arg = l;
            }
        }
        let p = load_problem(fixtures::HYP1).unwrap();
        let k = recover_multipliers(&p, &[1.0, 1.0], &tol()).unwrap();
        assert!((k.lambda[0] - arg).abs() <= 1e-4);
        assert!(k.stationarity_residual <= best + 1e-12);
    }

    #[test]
    fn interior_point_has_zero_multipliers() {
        let p = load_problem(fixtures::HYP1).unwrap();
        let k = recover_multipliers(&p, &[2.0, 2.0], &tol()).unwrap();
        assert_eq!(k.lambda, vec![0.0; 3]);
        assert!((k.stationarity_residual - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn recovers_hyp2_multiplier() {
        let p = load_problem(fixtures::HYP2).unwrap();
        let s = 2f64.sqrt();
        let k = recover_multipliers(&p, &[s, s / 2.0], &tol()).unwrap();
        assert!((k.lambda[0] - s).abs() < 1e-12, "{:?}", k.lambda);
        assert!(k.lambda[1..].iter().all(|&l| l == 0.0));
        assert!(k.stationarity_residual <= 1e-10);
    }

    #[test]
    fn recovery_rejects_infeasible_points() {
        let p = load_problem(fixtures::HYP1).unwrap();
        assert!(matches!(
            recover_multipliers(&p, &[0.5, 0.5], &tol()),
            Err(CertifyError::Geometry(_))
        ));
    }

    #[test]
    fn fritz_john_degenerate_at_degen_origin() {
        let p = load_problem(fixtures::DEGEN).unwrap();
        let fj = fritz_john_probe(&p, &[0.0], &tol()).unwrap();
        assert_eq!(fj.status, FritzJohnStatus::DegenerateFj);
        assert!(fj.lambda0 <= 1e-8);
        assert!(fj.residual <= 1e-10);
        assert!((fj.lambda[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fritz_john_regular_at_hyp1_minimizer() {
        let p = load_problem(fixtures::HYP1).unwrap();
        let fj = fritz_john_probe(&p, &[1.0, 1.0], &tol()).unwrap();
        assert_eq!(fj.status, FritzJohnStatus::RegularFj);
        assert!((fj.lambda0 - 0.5).abs() < 1e-12 && (fj.lambda[0] - 0.5).abs() < 1e-12, "{fj:?}");
        assert!(fj.residual < 1e-12);
    }

    #[test]
    fn simplex_grid_oracle_for_hyp1() {
        // Enumerate λ0 on [0, 1] (λ1 = 1 − λ0) and compare the best residual.
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..=10_000 {
            let l0 = i as f64 * 1e-4;
            let r = (2.0 * (l0 - (1.0 - l0)).powi(2)).sqrt();
            if r < best.0 {
                best = (r, l0);
            }
        }
        let p = load_problem(fixtures::HYP1).unwrap();
        let fj = fritz_john_probe(&p, &[1.0, 1.0], &tol()).unwrap();
        assert!((fj.lambda0 - best.1).abs() <= 1e-4);
    }

    #[test]
    fn interior_point_is_not_fritz_john() {
        let p = load_problem(fixtures::HYP1).unwrap();
        let fj = fritz_john_probe(&p, &[2.0, 2.0], &tol()).unwrap();
        assert_eq!(fj.status, FritzJohnStatus::NotFjPoint);
        assert_eq!(fj.lambda0, 1.0);
        assert!((fj.residual - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_minimizer_prefers_kkt_representation_when_available() {
        // x1^2 <= 0 is degenerate at 0, but -x1 <= 0 alone supplies KKT multipliers.
        let p = load_problem("n = 1\nbox = [-1,1]\nminimize: x1\nsubject_to:\n  x1^2 <= 0\n  -x1 <= 0\n").unwrap();
        let fj = fritz_john_probe(&p, &[0.0], &tol()).unwrap();
        assert_eq!(fj.status, FritzJohnStatus::RegularFj);
        assert!(fj.lambda0 > 0.4);
    }
}
