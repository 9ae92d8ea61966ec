//! Load a problem file and validate it.

use kkt_cert::model::{load_problem, validate};

const TEXT: &str = "\
# unit disk, shifted objective
n = 2
box = [-2,2] x [-2,2]
minimize: (x1 - 3)^2 + x2^2
subject_to:
  x1^2 + x2^2 - 1 <= 0
";

fn main() {
    let p = load_problem(TEXT).expect("well-formed problem");
    println!("n = {}, m = {}", p.dim(), p.num_constraints());
    for (j, g) in p.constraints().iter().enumerate() {
        println!("g{} = {g}", j + 1);
    }
    let d = validate(&p);
    println!("diagnostics ok: {}", d.is_ok());

    let broken = "n = 2\nbox = [0,1] x [0,1]\nminimize: x3\nsubject_to:\n  -x1 <= 0\n";
    if let Err(e) = load_problem(broken) {
        println!("rejected: {e}");
    }
}
