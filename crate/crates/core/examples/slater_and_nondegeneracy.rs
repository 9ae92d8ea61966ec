//! Slater search and the sampled gradient check, on a good and a degenerate set.

use kkt_cert::certify::{nondegeneracy_at_points, nondegeneracy_check, slater_search};
use kkt_cert::fixtures;
use kkt_cert::model::{load_problem, Tolerances};

fn main() {
    let tol = Tolerances::default();

    let p = load_problem(fixtures::HYP1).unwrap();
    let s = slater_search(&p, 42, &tol).expect("interior exists");
    println!("HYP1 Slater point {:?}, margin {}", s.x0, s.margin);
    let r = nondegeneracy_check(&p, &s, 200, 42, &tol).unwrap();
    println!("HYP1 min |grad g| on boundary: {:?}, passed: {}", r.min_gradient_norm(), r.passed());

    let d = load_problem(fixtures::DEGEN).unwrap();
    let fail = slater_search(&d, 42, &tol).unwrap_err();
    println!("DEGEN: no Slater point, best max g = {:?} at {:?}", fail.best_phi, fail.best_x);
    let r = nondegeneracy_at_points(&d, &[vec![0.0]], &tol);
    for (j, f) in r.failures() {
        println!("DEGEN: g{} has |grad| = {} at {:?}", j + 1, f.gradient_norm, f.point);
    }
}
