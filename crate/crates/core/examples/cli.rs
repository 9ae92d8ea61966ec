//! Drive the command-line front end in-process.

fn main() {
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/hyp1.prob");
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = kkt_cert::cli::run(["kkt-cert", "certify", fixture, "--at", "1,1"], &mut out, &mut err);
    print!("{}", String::from_utf8_lossy(&out));
    println!("exit code {code}");
}
