//! The Lagrangian of the hyperbola representation is neither convex nor nonnegative.

use kkt_cert::certify::{lagrangian_probe, recover_multipliers};
use kkt_cert::fixtures;
use kkt_cert::model::{load_problem, Tolerances};

fn main() {
    let tol = Tolerances::default();
    let p = load_problem(fixtures::HYP1).unwrap();
    let kkt = recover_multipliers(&p, &[1.0, 1.0], &tol).unwrap();
    let r = lagrangian_probe(&p, &kkt, 2.0, 500, 42, &tol).unwrap();
    println!("min Hessian eigenvalue: {:?}", r.min_hessian_eigenvalue_seen);
    println!("convex evidence: {}", r.convex_evidence);
    println!("points with L < 0: {} of {}", r.nonneg_violations.len(), r.samples_evaluated);
}
