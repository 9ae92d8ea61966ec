//! Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use kkt_cert::certify::{
    certify_global, convexity_falsify, fritz_john_probe, lagrangian_probe, nondegeneracy_at_points,
    nondegeneracy_check, recover_multipliers, slater_search, CertificateStatus, CertifyConfig,
};
use kkt_cert::fixtures;
use kkt_cert::geometry::is_feasible;
use kkt_cert::model::{load_problem, FritzJohnStatus, Problem, Tolerances};
use kkt_cert::solver::{barrier_solve, brute_force_oracle, Schedule, SolveResult};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn problem(text: &str) -> Problem {
    load_problem(text).expect("fixture loads")
}

fn solve(p: &Problem) -> SolveResult {
    let s = slater_search(p, 42, &tol()).expect("fixture has a Slater point");
    barrier_solve(p, &s, Schedule::default(), &tol()).expect("barrier runs")
}

fn hyp1_end_to_end() -> Outcome {
    let start = Instant::now();
    let p = problem(fixtures::HYP1);
    let r = solve(&p);
    let o = brute_force_oracle(&p, 201, 6).map_err(|e| e.to_string())?;
    let cert = certify_global(&p, &[1.0, 1.0], &CertifyConfig::default(), &tol());
    let elapsed = start.elapsed().as_secs_f64();
    check((r.fstar - 2.0).abs() <= 1e-4, format!("fstar {}", r.fstar))?;
    check((r.fstar - o.value).abs() <= 1e-4, format!("oracle {} vs solver {}", o.value, r.fstar))?;
    check(r.x.iter().all(|v| (v - 1.0).abs() <= 1e-4), format!("x {:?}", r.x))?;
    check(cert.status == CertificateStatus::CertifiedModuloSampling, format!("status {}", cert.status))?;
    let lambda = cert.kkt.expect("kkt present").lambda;
    check((lambda[0] - 1.0).abs() <= 1e-6 && lambda[1] == 0.0 && lambda[2] == 0.0, format!("lambda {lambda:?}"))?;
    check(elapsed < 2.0, format!("runtime {elapsed:.2} s"))?;
    Ok(format!("fstar {:.9}, oracle {:.9}, lambda1 {}, {elapsed:.2} s", r.fstar, o.value, lambda[0]))
}

fn hyp2_template() -> Outcome {
    let start = Instant::now();
    let p = problem(fixtures::HYP2);
    let r = solve(&p);
    let s = 2f64.sqrt();
    let k = recover_multipliers(&p, &[s, s / 2.0], &tol()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    check((r.fstar - 2.0 * s).abs() <= 1e-4, format!("fstar {}", r.fstar))?;
    check((k.lambda[0] - s).abs() <= 1e-6, format!("lambda1 {}", k.lambda[0]))?;
    let solved = r.kkt.expect("kkt at solver point");
    check((solved.lambda[0] - s).abs() <= 1e-6, format!("lambda1 at solver point {}", solved.lambda[0]))?;
    check(elapsed < 2.0, format!("runtime {elapsed:.2} s"))?;
    Ok(format!("fstar {:.9}, lambda1 {:.9}, {elapsed:.2} s", r.fstar, k.lambda[0]))
}

fn theorem_round_trip() -> Outcome {
    let mut certified = 0;
    for (name, text) in fixtures::CONVEX_SETS {
        let p = problem(text);
        let o = brute_force_oracle(&p, 201, 6).map_err(|e| format!("{name}: {e}"))?;
        let k = recover_multipliers(&p, &o.x, &tol()).map_err(|e| format!("{name}: {e}"))?;
        check(
            k.stationarity_residual <= 1e-4 && k.complementarity_residual <= 1e-4,
            format!("{name}: oracle argmin residuals {} {}", k.stationarity_residual, k.complementarity_residual),
        )?;
        let r = solve(&p);
        let cert = certify_global(&p, &r.x, &CertifyConfig::default(), &tol());
        check(cert.is_certified(), format!("{name}: solver point status {}", cert.status))?;
        let f = cert.objective_value.expect("objective evaluates");
        check(f <= o.value + 1e-4, format!("{name}: certified f {f} above oracle {}", o.value))?;
        certified += 1;
    }
    Ok(format!("{certified} fixtures"))
}

fn falsifier() -> Outcome {
    let p = problem(fixtures::DISK_COMP);
    let s = slater_search(&p, 42, &tol()).map_err(|_| "no Slater point")?;
    let r = convexity_falsify(&p, &s, 1000, 42, &tol()).map_err(|e| e.to_string())?;
    check(!r.violations.is_empty(), "no violation on DISK-COMP")?;
    for v in &r.violations {
        let g = p.constraint_value(v.j, &v.witness_point).map_err(|e| e.to_string())?;
        check(g > tol().eps_feas && v.recheck(&p, &tol()).is_ok(), "witness fails to re-verify")?;
    }
    for (name, text) in [("HYP1", fixtures::HYP1), ("AFFINE", fixtures::AFFINE)] {
        let p = problem(text);
        for seed in 0..10 {
            let s = slater_search(&p, seed, &tol()).map_err(|_| "no Slater point")?;
            let r = convexity_falsify(&p, &s, 1000, seed, &tol()).map_err(|e| e.to_string())?;
            check(r.violations.is_empty(), format!("{name} seed {seed}: {} violations", r.violations.len()))?;
        }
    }
    Ok(format!("{} DISK-COMP violations, all re-verified", r.violations.len()))
}

fn nondegeneracy() -> Outcome {
    let mut mins = Vec::new();
    for (name, text) in [("HYP1", fixtures::HYP1), ("HYP2", fixtures::HYP2), ("DISK-COMP", fixtures::DISK_COMP)] {
        let p = problem(text);
        let s = slater_search(&p, 42, &tol()).map_err(|_| "no Slater point")?;
        let r = nondegeneracy_check(&p, &s, 200, 42, &tol()).map_err(|e| e.to_string())?;
        let m = r.min_gradient_norm().unwrap_or(0.0);
        check(r.passed() && m >= 1e-3, format!("{name}: min norm {m}"))?;
        check(r.constraints[0].samples_tested > 0, format!("{name}: no samples on g1"))?;
        mins.push(format!("{name} {m:.4}"));
    }
    let p = problem(fixtures::DEGEN);
    let fail = slater_search(&p, 42, &tol()).err().ok_or("DEGEN has a Slater point")?;
    let r = nondegeneracy_at_points(&p, &fail.best_x.into_iter().collect::<Vec<_>>(), &tol());
    let (_, f) = r.failures().next().ok_or("DEGEN passed")?;
    check(f.point == vec![0.0], format!("DEGEN failure at {:?}", f.point))?;
    Ok(format!("min norms {}; DEGEN fails at 0", mins.join(", ")))
}

fn fritz_john() -> Outcome {
    let d = fritz_john_probe(&problem(fixtures::DEGEN), &[0.0], &tol()).map_err(|e| e.to_string())?;
    check(d.status == FritzJohnStatus::DegenerateFj, format!("DEGEN status {:?}", d.status))?;
    check(d.lambda0 <= 1e-8 && d.residual <= 1e-10, format!("DEGEN lambda0 {} residual {}", d.lambda0, d.residual))?;
    let h = fritz_john_probe(&problem(fixtures::HYP1), &[1.0, 1.0], &tol()).map_err(|e| e.to_string())?;
    check(h.lambda0 >= 0.4, format!("HYP1 lambda0 {}", h.lambda0))?;
    Ok(format!("DEGEN lambda0 {}, HYP1 lambda0 {}", d.lambda0, h.lambda0))
}

fn lagrangian() -> Outcome {
    let p = problem(fixtures::HYP1);
    let k = recover_multipliers(&p, &[1.0, 1.0], &tol()).map_err(|e| e.to_string())?;
    let r = lagrangian_probe(&p, &k, 2.0, 1000, 42, &tol()).map_err(|e| e.to_string())?;
    let m = r.min_hessian_eigenvalue_seen.ok_or("no samples")?;
    check(!r.convex_evidence, "convex evidence reported")?;
    check((m + 1.0).abs() <= 1e-6, format!("min eigenvalue {m}"))?;
    Ok(format!("min eigenvalue {m:.9}"))
}

fn ad_suite() -> Outcome {
    let s = common::ad_suite(1000, 2024);
    check(s.max_relative_error <= 1e-6, format!("max relative error {} at {}", s.max_relative_error, s.worst))?;
    Ok(format!("{} expressions, max relative error {:.2e}", s.expressions, s.max_relative_error))
}

fn representation_invariance() -> Outcome {
    let a = problem(fixtures::HYP1);
    let b = problem(fixtures::HYP1_SCALED);
    let (ra, rb) = (solve(&a), solve(&b));
    check((ra.fstar - rb.fstar).abs() <= 1e-6, format!("fstar {} vs {}", ra.fstar, rb.fstar))?;
    let config = CertifyConfig::default();
    for x in [vec![1.0, 1.0], ra.x.clone()] {
        let (ca, cb) = (certify_global(&a, &x, &config, &tol()), certify_global(&b, &x, &config, &tol()));
        check(ca.status == cb.status, format!("status {} vs {} at {x:?}", ca.status, cb.status))?;
        let (fa, fb) = (ca.objective_value.unwrap(), cb.objective_value.unwrap());
        check((fa - fb).abs() <= 1e-6, format!("objective {fa} vs {fb}"))?;
    }
    Ok(format!("fstar {:.9} vs {:.9}", ra.fstar, rb.fstar))
}

fn membership() -> Outcome {
    let p = problem(fixtures::HYP1);
    let exact = Tolerances { eps_feas: 0.0, ..tol() };
    let mut agree = 0;
    for i in 0..=100 {
        for k in 0..=100 {
            let x = [(i as f64 - 25.0) / 25.0, (k as f64 - 25.0) / 25.0];
            check(is_feasible(&p, &x, &exact) == common::psd_2x2(x[0], x[1], 1.0), format!("disagree at {x:?}"))?;
            agree += 1;
        }
    }
    Ok(format!("{agree} grid points agree"))
}

fn determinism() -> Outcome {
    let file = format!("{}/fixtures/hyp1.prob", env!("CARGO_MANIFEST_DIR"));
    let once = || {
        Command::new(env!("CARGO_BIN_EXE_kkt-cert"))
            .args(["certify", &file, "--at", "1,1", "--seed", "42", "--json"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (once(), once());
    check(a.status.code() == Some(0), format!("exit {:?}", a.status.code()))?;
    check(!a.stdout.is_empty() && a.stdout == b.stdout, "outputs differ")?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("HYP1 end-to-end", hyp1_end_to_end),
        ("HYP2 template", hyp2_template),
        ("KKT/minimizer round trip on convex fixtures", theorem_round_trip),
        ("supporting-hyperplane falsifier", falsifier),
        ("nondegeneracy checks", nondegeneracy),
        ("Fritz-John degeneracy", fritz_john),
        ("Lagrangian probe on HYP1", lagrangian),
        ("AD property suite", ad_suite),
        ("representation invariance", representation_invariance),
        ("membership equivalence", membership),
        ("deterministic certify JSON", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
