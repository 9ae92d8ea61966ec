//! Residuals, NNLS multipliers and the Fritz–John probe.

use kkt_cert::certify::{fritz_john_probe, kkt_residual, recover_multipliers};
use kkt_cert::fixtures;
use kkt_cert::model::{load_problem, Tolerances};

fn main() {
    let tol = Tolerances::default();
    let p = load_problem(fixtures::HYP2).unwrap();
    let s = 2f64.sqrt();
    let x = [s, s / 2.0];
    let k = recover_multipliers(&p, &x, &tol).unwrap();
    println!("HYP2 multipliers at (sqrt2, sqrt2/2): {:?}", k.lambda);
    println!("stationarity residual {:e}", k.stationarity_residual);
    let r = kkt_residual(&p, &x, &[0.0; 5], &tol).unwrap();
    println!("with zero multipliers: {:?}", r);

    let d = load_problem(fixtures::DEGEN).unwrap();
    let fj = fritz_john_probe(&d, &[0.0], &tol).unwrap();
    println!("DEGEN at 0: {:?}, lambda0 = {}, residual = {}", fj.status, fj.lambda0, fj.residual);
}
