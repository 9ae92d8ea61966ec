use serde::{Deserialize, Serialize};

use crate::geometry::{is_feasible, random_direction, sample_boundary_point};
use crate::linalg::norm;
use crate::model::{Problem, SlaterCertificate, Tolerances};
use crate::rng;

use super::CertifyError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientFailure {
    pub point: Vec<f64>,
    pub gradient_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintNondegeneracy {
    /// 0-based constraint index.
    pub j: usize,
    pub samples_tested: usize,
    /// Boundary points at which `g_j` had no gradient (e.g. `sqrt` at 0).
    pub undifferentiable: usize,
    pub min_gradient_norm: Option<f64>,
    pub failures: Vec<GradientFailure>,
}

impl ConstraintNondegeneracy {
    fn empty(j: usize) -> Self {
        ConstraintNondegeneracy { j, samples_tested: 0, undifferentiable: 0, min_gradient_norm: None, failures: Vec::new() }
    }

    fn record(&mut self, p: &Problem, x: &[f64], tol: &Tolerances) {
        self.samples_tested += 1;
        match p.constraint(self.j).gradient(x) {
            Ok(gv) => {
                let gn = norm(&gv.grad);
                self.min_gradient_norm = Some(self.min_gradient_norm.map_or(gn, |m| m.min(gn)));
                if gn < tol.eps_grad {
                    self.failures.push(GradientFailure { point: x.to_vec(), gradient_norm: gn });
                }
            }
            Err(_) => self.undifferentiable += 1,
        }
    }
}

/// Per-constraint gradient norms at sampled boundary points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NondegeneracyReport {
    pub constraints: Vec<ConstraintNondegeneracy>,
}

impl NondegeneracyReport {
    pub fn passed(&self) -> bool {
        self.constraints.iter().all(|c| c.failures.is_empty() && c.undifferentiable == 0)
    }

    pub fn min_gradient_norm(&self) -> Option<f64> {
        self.constraints.iter().filter_map(|c| c.min_gradient_norm).reduce(f64::min)
    }

    pub fn samples_tested(&self) -> usize {
        self.constraints.iter().map(|c| c.samples_tested).sum()
    }

    pub fn failures(&self) -> impl Iterator<Item = (usize, &GradientFailure)> {
        self.constraints.iter().flat_map(|c| c.failures.iter().map(move |f| (c.j, f)))
    }

    /// Appends the samples of `other`, constraint by constraint.
    pub fn merge(&mut self, other: NondegeneracyReport) {
        for o in other.constraints {
            let c = &mut self.constraints[o.j];
            c.samples_tested += o.samples_tested;
            c.undifferentiable += o.undifferentiable;
            c.min_gradient_norm = match (c.min_gradient_norm, o.min_gradient_norm) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
            c.failures.extend(o.failures);
        }
    }
}

/// Gradient norms of every constraint active at each given point.
/// Infeasible points are ignored.
pub fn nondegeneracy_at_points(p: &Problem, points: &[Vec<f64>], tol: &Tolerances) -> NondegeneracyReport {
    let mut constraints: Vec<_> = (0..p.num_constraints()).map(ConstraintNondegeneracy::empty).collect();
    for x in points {
        if x.len() != p.dim() || !is_feasible(p, x, tol) {
            continue;
        }
        for c in constraints.iter_mut() {
            if matches!(p.constraint_value(c.j, x), Ok(g) if g.abs() <= tol.eps_active) {
                c.record(p, x, tol);
            }
        }
    }
    NondegeneracyReport { constraints }
}

/// Shoots `samples_per_constraint` seeded rays from the Slater point for
/// each constraint and checks `‖∇g_j‖ >= eps_grad` where they first meet
/// `g_j = 0`. Rays that leave the feasible set through another constraint
/// or the box contribute no sample.
pub fn nondegeneracy_check(
    p: &Problem,
    slater: &SlaterCertificate,
    samples_per_constraint: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<NondegeneracyReport, CertifyError> {
    let mut constraints = Vec::with_capacity(p.num_constraints());
    for j in 0..p.num_constraints() {
        let mut rng = rng::stream(seed, rng::streams::NONDEGENERACY + j as u64);
        let mut c = ConstraintNondegeneracy::empty(j);
        for _ in 0..samples_per_constraint {
            let d = random_direction(p.dim(), &mut rng);
            if let Some(x) = sample_boundary_point(p, j, &slater.x0, &d, tol)? {
                c.record(p, &x, tol);
            }
        }
        constraints.push(c);
    }
    Ok(NondegeneracyReport { constraints })
}
