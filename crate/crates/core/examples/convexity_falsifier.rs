//! Sampled supporting-hyperplane test: refutes the disk complement, passes the hyperbola.

use kkt_cert::certify::{convexity_falsify, slater_search};
use kkt_cert::fixtures;
use kkt_cert::model::{load_problem, Tolerances};

fn main() {
    let tol = Tolerances::default();
    for (name, text) in [("DISK-COMP", fixtures::DISK_COMP), ("HYP1", fixtures::HYP1)] {
        let p = load_problem(text).unwrap();
        let s = slater_search(&p, 42, &tol).unwrap();
        let r = convexity_falsify(&p, &s, 1000, 42, &tol).unwrap();
        println!("{name}: {} pairs, {} violations", r.pairs_tested, r.violations.len());
        if let Some(v) = r.violations.first() {
            v.recheck(&p, &tol).expect("witness re-verifies");
            println!(
                "  x = {:?}, y = {:?}, inner product {:.4}, g at t = {} is {:.4}",
                v.x, v.y, v.inner_product, v.witness_t, v.witness_gval
            );
        }
    }
}
