//! Certification toolkit for smooth inequality-constrained minimization
//! whose feasible set is convex even though its defining functions may not
//! be.
//!
//! For `min f(x)` subject to `g_j(x) <= 0` the crate checks the hypotheses
//! under which KKT points and global minimizers coincide for *any*
//! representation of a convex feasible set: a strictly feasible (Slater)
//! point, nonvanishing constraint gradients on the active boundary, and the
//! supporting-hyperplane inequality `⟨∇g_j(x), y − x⟩ <= 0` for boundary
//! points `x` and feasible `y`. It then locates KKT points with a log-barrier
//! homotopy and issues certificates whose evidence can be re-checked.
//!
//! Convexity of the feasible set is tested by sampling, so a clean run is
//! reported as [`certify::CertificateStatus::CertifiedModuloSampling`], never
//! as a proof.
//!
//! ```
//! use kkt_cert::{fixtures, model::{load_problem, Tolerances}, certify};
//!
//! let p = load_problem(fixtures::HYP1).unwrap();
//! let kkt = certify::recover_multipliers(&p, &[1.0, 1.0], &Tolerances::default()).unwrap();
//! assert!((kkt.lambda[0] - 1.0).abs() < 1e-12);
//! ```

pub mod certify;
pub mod cli;
pub mod expr;
pub mod fixtures;
pub mod geometry;
pub mod linalg;
pub mod model;
pub mod report;
pub mod rng;
pub mod solver;

/// Version string embedded in every report.
pub const VERSION: &str = concat!("kkt-cert ", env!("CARGO_PKG_VERSION"));
