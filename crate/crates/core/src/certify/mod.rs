//! Hypothesis checks and the global-optimality certificate.

mod convexity;
mod global;
mod kkt;
mod lagrangian;
mod nondegeneracy;
mod recheck;
mod slater;

use thiserror::Error;

use crate::expr::EvalError;
use crate::geometry::GeometryError;

pub use convexity::{
    check_pair, convexity_falsify, convexity_falsify_with, FalsifyReport, PairCheck, UnconfirmedViolation,
    WITNESS_SCAN_DEPTH,
};
pub use global::{certify_global, CertificateStatus, CertifyConfig, GlobalOptimalityCertificate};
pub use kkt::{fritz_john_probe, kkt_residual, recover_multipliers, KktResidual};
pub use lagrangian::{lagrangian_probe, lagrangian_value, LagrangianProbeResult, NonnegViolation, HESSIAN_STEP};
pub use nondegeneracy::{
    nondegeneracy_at_points, nondegeneracy_check, ConstraintNondegeneracy, GradientFailure, NondegeneracyReport,
};
pub use recheck::{RecheckError, RECHECK_TOLERANCE};
pub use slater::{slater_search, SlaterFailure, SLATER_STARTS};

#[derive(Debug, Error, PartialEq)]
pub enum CertifyError {
    #[error("{what} has length {got}, expected {expected}")]
    Dimension { what: &'static str, expected: usize, got: usize },
    #[error("constraint index {j} out of range for {m} constraints")]
    BadIndex { j: usize, m: usize },
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
