//! Independent re-evaluation of stored certificates against a problem.

use thiserror::Error;

use crate::expr::EvalError;
use crate::geometry::is_feasible;
use crate::model::{ConvexityViolation, FritzJohnCertificate, KktPoint, Problem, SlaterCertificate, Tolerances};

use super::kkt::{fj_residual, gradients, kkt_residual};
use super::CertifyError;

/// Allowed drift between a stored number and its recomputation.
pub const RECHECK_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum RecheckError {
    #[error("{field}: stored {stored:e}, recomputed {recomputed:e}")]
    Mismatch { field: &'static str, stored: f64, recomputed: f64 },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl From<CertifyError> for RecheckError {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::Eval(e) => RecheckError::Eval(e),
            other => RecheckError::Invalid(other.to_string()),
        }
    }
}

fn same(field: &'static str, stored: f64, recomputed: f64) -> Result<(), RecheckError> {
    if (stored - recomputed).abs() <= RECHECK_TOLERANCE * stored.abs().max(1.0) {
        Ok(())
    } else {
        Err(RecheckError::Mismatch { field, stored, recomputed })
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), RecheckError> {
    if cond {
        Ok(())
    } else {
        Err(RecheckError::Invalid(msg()))
    }
}

impl KktPoint {
    pub fn recheck(&self, p: &Problem, tol: &Tolerances) -> Result<(), RecheckError> {
        let r = kkt_residual(p, &self.x, &self.lambda, tol)?;
        ensure(r.dual_feasible, || "negative multiplier".into())?;
        same("stationarity_residual", self.stationarity_residual, r.stationarity_residual)?;
        same("complementarity_residual", self.complementarity_residual, r.complementarity_residual)
    }
}

impl SlaterCertificate {
    pub fn recheck(&self, p: &Problem) -> Result<(), RecheckError> {
        ensure(self.x0.len() == p.dim() && p.box_contains(&self.x0), || "x0 is outside the box".into())?;
        let max = p.max_constraint(&self.x0)?;
        ensure(max < 0.0, || format!("max g(x0) = {max:e} is not negative"))?;
        same("margin", self.margin, -max)
    }
}

impl ConvexityViolation {
    /// Confirms `x` is on the boundary of `g_j`, `y` is feasible, the inner
    /// product is positive and the witness point violates `g_j <= eps_feas`.
    pub fn recheck(&self, p: &Problem, tol: &Tolerances) -> Result<(), RecheckError> {
        ensure(self.j < p.num_constraints(), || format!("no constraint g{}", self.j + 1))?;
        ensure(self.x.len() == p.dim() && self.y.len() == p.dim(), || "point length".into())?;
        ensure(is_feasible(p, &self.x, tol), || "x is not feasible".into())?;
        ensure(is_feasible(p, &self.y, tol), || "y is not feasible".into())?;
        let gv = p.constraint(self.j).gradient(&self.x)?;
        ensure(gv.value.abs() <= tol.eps_active, || "g_j is not active at x".into())?;
        let ip: f64 = gv.grad.iter().zip(self.y.iter().zip(&self.x)).map(|(g, (a, b))| g * (a - b)).sum();
        same("inner_product", self.inner_product, ip)?;
        ensure(ip > 0.0, || "inner product is not positive".into())?;
        let w: Vec<f64> = self.x.iter().zip(&self.y).map(|(a, b)| a + self.witness_t * (b - a)).collect();
        for (stored, again) in self.witness_point.iter().zip(&w) {
            same("witness_point", *stored, *again)?;
        }
        let g = p.constraint_value(self.j, &self.witness_point)?;
        same("witness_gval", self.witness_gval, g)?;
        ensure(g > tol.eps_feas, || "witness point is feasible".into())
    }
}

impl FritzJohnCertificate {
    pub fn recheck(&self, p: &Problem, tol: &Tolerances) -> Result<(), RecheckError> {
        ensure(self.lambda.len() == p.num_constraints(), || "multiplier length".into())?;
        ensure(self.lambda0 >= 0.0 && self.lambda.iter().all(|&l| l >= 0.0), || "negative multiplier".into())?;
        let total = self.lambda0 + self.lambda.iter().sum::<f64>();
        same("lambda0 + Σλ", total, 1.0)?;
        ensure(is_feasible(p, &self.x, tol), || "x is not feasible".into())?;
        let grads = gradients(p, &self.x)?;
        same("residual", self.residual, fj_residual(&grads, self.lambda0, &self.lambda))
    }
}
