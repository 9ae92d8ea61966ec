use serde::{Deserialize, Serialize};

use crate::geometry::uniform_in_box;
use crate::linalg::{fd_hessian, jacobi_eigenvalues};
use crate::model::{KktPoint, Problem, Tolerances};
use crate::rng;

use super::CertifyError;

/// Step of the finite-difference Hessian.
pub const HESSIAN_STEP: f64 = 1e-4;
/// Smallest eigenvalue still read as convex.
pub const CONVEXITY_SLACK: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonnegViolation {
    pub point: Vec<f64>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LagrangianProbeResult {
    pub lambda: Vec<f64>,
    pub fstar: f64,
    pub samples_requested: usize,
    pub samples_evaluated: usize,
    /// Samples where `L_f` or its Hessian stencil hit a domain error.
    pub samples_skipped: usize,
    pub min_hessian_eigenvalue_seen: Option<f64>,
    pub nonneg_violations: Vec<NonnegViolation>,
    pub convex_evidence: bool,
}

/// `L_f(x) = f(x) − fstar + Σ λ_j g_j(x)`
pub fn lagrangian_value(p: &Problem, lambda: &[f64], fstar: f64, x: &[f64]) -> Result<f64, CertifyError> {
    let mut v = p.objective_value(x)? - fstar;
    for (j, l) in lambda.iter().enumerate() {
        if *l != 0.0 {
            v += l * p.constraint_value(j, x)?;
        }
    }
    Ok(v)
}

fn lagrangian_gradient(p: &Problem, lambda: &[f64], x: &[f64]) -> Result<Vec<f64>, CertifyError> {
    let mut grad = p.objective().gradient(x)?.grad;
    for (j, l) in lambda.iter().enumerate() {
        if *l != 0.0 {
            for (a, b) in grad.iter_mut().zip(p.constraint(j).gradient(x)?.grad) {
                *a += l * b;
            }
        }
    }
    Ok(grad)
}

/// Samples `L_f` uniformly over the box, recording where it goes negative
/// and the smallest eigenvalue of its Hessian. The Hessian is the symmetrized
/// central difference of the exact gradient with step [`HESSIAN_STEP`].
pub fn lagrangian_probe(
    p: &Problem,
    kkt: &KktPoint,
    fstar: f64,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<LagrangianProbeResult, CertifyError> {
    if kkt.lambda.len() != p.num_constraints() {
        return Err(CertifyError::Dimension { what: "multiplier vector", expected: p.num_constraints(), got: kkt.lambda.len() });
    }
    if !(kkt.stationarity_residual <= tol.eps_kkt && kkt.complementarity_residual <= tol.eps_kkt) {
        return Err(CertifyError::Precondition(format!(
            "KKT residuals ({:e}, {:e}) exceed eps_kkt",
            kkt.stationarity_residual, kkt.complementarity_residual
        )));
    }
    let lambda = &kkt.lambda;
    let mut rng = rng::stream(seed, rng::streams::LAGRANGIAN);
    let mut result = LagrangianProbeResult {
        lambda: lambda.clone(),
        fstar,
        samples_requested: samples,
        samples_evaluated: 0,
        samples_skipped: 0,
        min_hessian_eigenvalue_seen: None,
        nonneg_violations: Vec::new(),
        convex_evidence: false,
    };
    for _ in 0..samples {
        let x = uniform_in_box(p, &mut rng);
        let value = match lagrangian_value(p, lambda, fstar, &x) {
            Ok(v) => v,
            Err(_) => {
                result.samples_skipped += 1;
                continue;
            }
        };
        let hessian = match fd_hessian(|z: &[f64]| lagrangian_gradient(p, lambda, z), &x, HESSIAN_STEP) {
            Ok(h) => h,
            Err(_) => {
                result.samples_skipped += 1;
                continue;
            }
        };
        result.samples_evaluated += 1;
        if value < -tol.eps_kkt {
            result.nonneg_violations.push(NonnegViolation { point: x, value });
        }
        let low = jacobi_eigenvalues(&hessian)[0];
        result.min_hessian_eigenvalue_seen = Some(result.min_hessian_eigenvalue_seen.map_or(low, |m| m.min(low)));
    }
    result.convex_evidence = result.min_hessian_eigenvalue_seen.is_some_and(|m| m >= -CONVEXITY_SLACK);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::load_problem;

    fn kkt(x: Vec<f64>, lambda: Vec<f64>) -> KktPoint {
        KktPoint { x, lambda, stationarity_residual: 0.0, complementarity_residual: 0.0 }
    }

    #[test]
    fn hyperbola_lagrangian_is_not_convex() {
        let p = load_problem(fixtures::HYP1).unwrap();
        let r = lagrangian_probe(&p, &kkt(vec![1.0, 1.0], vec![1.0, 0.0, 0.0]), 2.0, 200, 42, &Tolerances::default()).unwrap();
        assert!(!r.convex_evidence);
        assert!((r.min_hessian_eigenvalue_seen.unwrap() + 1.0).abs() < 1e-6);
        assert!(!r.nonneg_violations.is_empty());
        for v in &r.nonneg_violations {
            let again = lagrangian_value(&p, &r.lambda, 2.0, &v.point).unwrap();
            assert!(again < -1e-6 && again == v.value);
        }
    }

    #[test]
    fn affine_lagrangian_is_flat() {
        let p = load_problem("n = 2\nbox = [0,1] x [0,1]\nminimize: x1 + x2\nsubject_to:\n  -x1 <= 0\n  -x2 <= 0\n").unwrap();
        let r = lagrangian_probe(&p, &kkt(vec![0.0, 0.0], vec![1.0, 1.0]), 0.0, 50, 1, &Tolerances::default()).unwrap();
        assert!(r.convex_evidence);
        assert!(r.min_hessian_eigenvalue_seen.unwrap().abs() < 1e-9);
        assert!(r.nonneg_violations.is_empty());
    }

    #[test]
    fn rejects_non_kkt_input() {
        let p = load_problem(fixtures::HYP1).unwrap();
        let mut k = kkt(vec![2.0, 2.0], vec![0.0; 3]);
        k.stationarity_residual = 2f64.sqrt();
        assert!(lagrangian_probe(&p, &k, 2.0, 10, 1, &Tolerances::default()).is_err());
    }

    #[test]
    fn domain_errors_are_skipped() {
        let p = load_problem("n = 1\nbox = [-1,1]\nminimize: log(x1)\nsubject_to:\n  -x1 <= 0\n").unwrap();
        let r = lagrangian_probe(&p, &kkt(vec![1.0], vec![0.0]), 0.0, 100, 3, &Tolerances::default()).unwrap();
        assert!(r.samples_skipped > 20);
        assert_eq!(r.samples_skipped + r.samples_evaluated, 100);
    }
}
