//! Barrier homotopy on HYP2, compared with the grid oracle.

use kkt_cert::certify::slater_search;
use kkt_cert::fixtures;
use kkt_cert::model::{load_problem, Tolerances};
use kkt_cert::solver::{barrier_solve, brute_force_oracle, Schedule};

fn main() {
    let tol = Tolerances::default();
    let p = load_problem(fixtures::HYP2).unwrap();
    let s = slater_search(&p, 42, &tol).unwrap();
    let r = barrier_solve(&p, &s, Schedule::default(), &tol).unwrap();
    println!("x = {:?}, f* = {}, converged = {}", r.x, r.fstar, r.converged);
    for st in r.stages.iter().step_by(8) {
        println!("  mu = {:.3e}: {} iterations, |grad B| = {:.2e}", st.mu, st.iterations, st.gradient_norm);
    }
    let o = brute_force_oracle(&p, 201, 6).unwrap();
    println!("oracle: {} at {:?} (2*sqrt2 = {})", o.value, o.x, 2.0 * 2f64.sqrt());
}
