//! Full certificate for the hyperbola minimizer, printed as JSON.

use kkt_cert::certify::{certify_global, CertifyConfig};
use kkt_cert::fixtures;
use kkt_cert::model::{load_problem, Tolerances};

fn main() {
    let p = load_problem(fixtures::HYP1).unwrap();
    let cert = certify_global(&p, &[1.0, 1.0], &CertifyConfig::default(), &Tolerances::default());
    println!("status: {}", cert.status);
    println!("{}", serde_json::to_string_pretty(&cert.kkt).unwrap());

    let disk = load_problem(fixtures::DISK_COMP).unwrap();
    let refuted = certify_global(&disk, &[1.0, 0.0], &CertifyConfig::default(), &Tolerances::default());
    println!("disk complement at (1,0): {}", refuted.status);
}
