//! Feasibility, active sets and boundary sampling on the hyperbola region.

use kkt_cert::fixtures;
use kkt_cert::geometry::{active_set, is_feasible, sample_boundary_point, sample_feasible_point};
use kkt_cert::model::{load_problem, Tolerances};

fn main() {
    let p = load_problem(fixtures::HYP1).unwrap();
    let tol = Tolerances::default();
    for x in [[1.0, 1.0], [0.5, 0.5], [2.0, 3.0]] {
        println!("{x:?} feasible: {}", is_feasible(&p, &x, &tol));
    }
    let a = active_set(&p, &[1.0, 1.0], &tol).unwrap();
    println!("active at (1,1): {:?}", a.indices);

    let b = sample_boundary_point(&p, 0, &[3.0, 3.0], &[-1.0, -1.0], &tol).unwrap();
    println!("boundary along the diagonal: {b:?}");
    println!("seeded feasible sample: {:?}", sample_feasible_point(&p, 42, &tol));
}
