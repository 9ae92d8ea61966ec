use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::certify::recover_multipliers;
use crate::geometry::is_feasible;
use crate::linalg::{dot, norm};
use crate::model::{KktPoint, Problem, SlaterCertificate, Tolerances};

use super::SolverError;

/// Inner-iteration cap per barrier stage.
pub const MAX_STAGE_ITERATIONS: usize = 10_000;
const ARMIJO_SLOPE: f64 = 1e-4;
const SHRINK: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub mu0: f64,
    pub factor: f64,
    pub stages: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule { mu0: 1.0, factor: 0.5, stages: 40 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStop {
    /// `‖∇B_μ‖ <= max(eps_kkt, μ)`.
    GradientSmall,
    /// No step decreased `B_μ` in floating point; the stage cannot progress.
    LineSearchStalled,
    IterationCap,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Iterate {
    pub iteration: usize,
    pub x: Vec<f64>,
    pub barrier_value: f64,
    pub max_constraint: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageTrace {
    pub stage: usize,
    pub mu: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub barrier_value: f64,
    pub stop: StageStop,
    pub x: Vec<f64>,
    /// `max_j g_j(x)` at the end of the stage; negative throughout.
    pub max_constraint: f64,
    /// `μ / −g_j(x)`, diagnostics only.
    pub lambda_estimates: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub iterates: Vec<Iterate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub x: Vec<f64>,
    pub fstar: f64,
    pub kkt: Option<KktPoint>,
    pub converged: bool,
    pub schedule: Schedule,
    pub stages: Vec<StageTrace>,
}

struct Barrier<'a> {
    p: &'a Problem,
    mu: f64,
}

struct BarrierPoint {
    value: f64,
    grad: Vec<f64>,
    g: Vec<f64>,
    g_grads: Vec<Vec<f64>>,
}

impl Barrier<'_> {
    /// `B_μ(x)`, or `None` outside strict feasibility or the expression domain.
    fn value(&self, x: &[f64]) -> Option<f64> {
        let mut v = self.p.objective_value(x).ok()?;
        for j in 0..self.p.num_constraints() {
            let g = self.p.constraint_value(j, x).ok()?;
            if !(g < 0.0) {
                return None;
            }
            v -= self.mu * (-g).ln();
        }
        v.is_finite().then_some(v)
    }

    fn at(&self, x: &[f64]) -> Result<BarrierPoint, SolverError> {
        let fg = self.p.objective().gradient(x)?;
        let mut value = fg.value;
        let mut grad = fg.grad;
        let mut g = Vec::with_capacity(self.p.num_constraints());
        let mut g_grads = Vec::with_capacity(self.p.num_constraints());
        for c in self.p.constraints() {
            let gv = c.gradient(x)?;
            value -= self.mu * (-gv.value).ln();
            for (a, b) in grad.iter_mut().zip(&gv.grad) {
                *a += self.mu / -gv.value * b;
            }
            g.push(gv.value);
            g_grads.push(gv.grad);
        }
        Ok(BarrierPoint { value, grad, g, g_grads })
    }
}

/// Descent direction `−P⁻¹ ∇B` with `P = I + Σ_j μ/g_j² ∇g_j ∇g_jᵀ`, the
/// Gauss–Newton part of the barrier Hessian. Falls back to `−∇B`.
fn direction(bp: &BarrierPoint, mu: f64) -> Vec<f64> {
    let n = bp.grad.len();
    let mut p = DMatrix::<f64>::identity(n, n);
    for (g, dg) in bp.g.iter().zip(&bp.g_grads) {
        let w = mu / (g * g);
        for i in 0..n {
            for k in 0..n {
                p[(i, k)] += w * dg[i] * dg[k];
            }
        }
    }
    let rhs = DVector::from_iterator(n, bp.grad.iter().map(|v| -v));
    match p.cholesky() {
        Some(ch) => {
            let d = ch.solve(&rhs);
            if d.iter().all(|v| v.is_finite()) {
                return d.iter().copied().collect();
            }
            rhs.iter().copied().collect()
        }
        None => rhs.iter().copied().collect(),
    }
}

fn run_stage(
    p: &Problem,
    x: &mut Vec<f64>,
    stage: usize,
    mu: f64,
    tol: &Tolerances,
    record: bool,
) -> Result<StageTrace, SolverError> {
    let barrier = Barrier { p, mu };
    let threshold = tol.eps_kkt.max(mu);
    let mut iterates = Vec::new();
    let mut iterations = 0;
    let mut bp = barrier.at(x)?;
    let stop = loop {
        if norm(&bp.grad) <= threshold {
            break StageStop::GradientSmall;
        }
        if iterations == MAX_STAGE_ITERATIONS {
            break StageStop::IterationCap;
        }
        let d = direction(&bp, mu);
        let slope = dot(&bp.grad, &d);
        let mut step = 1.0;
        let mut next = None;
        while step > 1e-300 {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + step * b).collect();
            if trial == *x {
                break;
            }
            if let Some(v) = barrier.value(&trial) {
                if v <= bp.value + ARMIJO_SLOPE * step * slope && v < bp.value {
                    next = Some(trial);
                    break;
                }
            }
            step *= SHRINK;
        }
        let Some(trial) = next else { break StageStop::LineSearchStalled };
        *x = trial;
        iterations += 1;
        bp = barrier.at(x)?;
        if record {
            iterates.push(Iterate {
                iteration: iterations,
                x: x.clone(),
                barrier_value: bp.value,
                max_constraint: bp.g.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            });
        }
    };
    Ok(StageTrace {
        stage,
        mu,
        iterations,
        gradient_norm: norm(&bp.grad),
        barrier_value: bp.value,
        stop,
        x: x.clone(),
        max_constraint: bp.g.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        lambda_estimates: bp.g.iter().map(|g| mu / -g).collect(),
        iterates,
    })
}

/// Log-barrier homotopy from the Slater point: for `μ = μ0, μ0·factor, …`
/// minimizes `f − μ Σ log(−g_j)` with preconditioned gradient steps and
/// Armijo backtracking, rejecting any trial point that is not strictly
/// feasible. Multipliers at the final point come from NNLS.
pub fn barrier_solve(
    p: &Problem,
    slater: &SlaterCertificate,
    schedule: Schedule,
    tol: &Tolerances,
) -> Result<SolveResult, SolverError> {
    barrier_solve_traced(p, slater, schedule, tol, false)
}

/// [`barrier_solve`], optionally logging every accepted iterate.
pub fn barrier_solve_traced(
    p: &Problem,
    slater: &SlaterCertificate,
    schedule: Schedule,
    tol: &Tolerances,
    record_iterates: bool,
) -> Result<SolveResult, SolverError> {
    if !(schedule.mu0 > 0.0 && schedule.mu0.is_finite()) || !(schedule.factor > 0.0 && schedule.factor < 1.0) {
        return Err(SolverError::BadSchedule(schedule));
    }
    if slater.x0.len() != p.dim() || !matches!(p.max_constraint(&slater.x0), Ok(v) if v < 0.0) {
        return Err(SolverError::NotInterior);
    }
    let mut x = slater.x0.clone();
    let mut stages = Vec::with_capacity(schedule.stages);
    let mut mu = schedule.mu0;
    for stage in 0..schedule.stages {
        stages.push(run_stage(p, &mut x, stage, mu, tol, record_iterates)?);
        mu *= schedule.factor;
    }
    let fstar = p.objective_value(&x)?;
    let kkt = recover_multipliers(p, &x, tol).ok();
    let converged = is_feasible(p, &x, tol)
        && stages.iter().all(|s| s.stop != StageStop::IterationCap)
        && kkt
            .as_ref()
            .is_some_and(|k| k.stationarity_residual <= tol.eps_kkt && k.complementarity_residual <= tol.eps_kkt);
    Ok(SolveResult { x, fstar, kkt, converged, schedule, stages })
}
