//! Command-line front end. `run` is the whole program; the binary only
//! forwards `std::env::args` and the standard streams.
//!
//! Exit codes: 0 success or certified, 1 refuted, degenerate or failed,
//! 2 usage or file errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::certify::{
    certify_global, convexity_falsify, fritz_john_probe, lagrangian_probe, nondegeneracy_at_points, nondegeneracy_check,
    recover_multipliers, slater_search, CertifyConfig, NondegeneracyReport,
};
use crate::model::{load_problem, FritzJohnStatus, Problem, Tolerances};
use crate::report::Report;
use crate::solver::{barrier_solve, brute_force_oracle, trace_json_lines, Schedule};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "kkt-cert", version = crate::VERSION, about = "Certify KKT points of smooth inequality-constrained problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Problem file.
    file: PathBuf,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Sample count (falsifier pairs or rays per constraint, probe points).
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Emit one JSON document instead of text.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    eps_active: Option<f64>,
    #[arg(long)]
    eps_grad: Option<f64>,
    #[arg(long)]
    eps_kkt: Option<f64>,
    #[arg(long)]
    eps_feas: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct At {
    /// Point as comma-separated reals, e.g. `1,1`.
    #[arg(long, allow_hyphen_values = true)]
    at: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Barrier homotopy from a Slater point, then multiplier recovery.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        mu0: f64,
        #[arg(long, default_value_t = 0.5)]
        factor: f64,
        #[arg(long, default_value_t = 40)]
        stages: usize,
        /// Write one JSON line per barrier stage to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Also run the grid oracle and report its value.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[arg(long, default_value_t = 6)]
        rounds: usize,
    },
    /// Global-optimality certificate for a candidate point.
    Certify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        at: At,
        /// Boundary rays per constraint for the gradient check.
        #[arg(long, default_value_t = 200)]
        nondegeneracy_samples: usize,
    },
    /// Search for a strictly feasible point.
    CheckSlater {
        #[command(flatten)]
        common: Common,
    },
    /// Sampled check that active constraint gradients do not vanish.
    CheckNondegeneracy {
        #[command(flatten)]
        common: Common,
        /// Extra point to probe; used alone when no Slater point exists.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Sampled search for violations of the supporting-hyperplane inequality.
    FalsifyConvexity {
        #[command(flatten)]
        common: Common,
    },
    /// NNLS multipliers on the active set at a point.
    RecoverMultipliers {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        at: At,
    },
    /// Normalized Fritz–John multipliers at a point.
    FritzJohn {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        at: At,
    },
    /// Brute-force grid minimum (n <= 4).
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[arg(long, default_value_t = 6)]
        rounds: usize,
    },
    /// Sample the Lagrangian built from the KKT multipliers at a point.
    ProbeLagrangian {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        at: At,
        /// Optimal value; defaults to f at the point.
        #[arg(long, allow_hyphen_values = true)]
        fstar: Option<f64>,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Solve { common, .. }
            | Command::Certify { common, .. }
            | Command::CheckSlater { common }
            | Command::CheckNondegeneracy { common, .. }
            | Command::FalsifyConvexity { common }
            | Command::RecoverMultipliers { common, .. }
            | Command::FritzJohn { common, .. }
            | Command::Oracle { common, .. }
            | Command::ProbeLagrangian { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Solve { .. } => "solve",
            Command::Certify { .. } => "certify",
            Command::CheckSlater { .. } => "check-slater",
            Command::CheckNondegeneracy { .. } => "check-nondegeneracy",
            Command::FalsifyConvexity { .. } => "falsify-convexity",
            Command::RecoverMultipliers { .. } => "recover-multipliers",
            Command::FritzJohn { .. } => "fritz-john",
            Command::Oracle { .. } => "oracle",
            Command::ProbeLagrangian { .. } => "probe-lagrangian",
        }
    }
}

struct UsageError(String);

/// Parses a comma-separated point of length `n`.
pub fn parse_point(text: &str, n: usize) -> Result<Vec<f64>, String> {
    let x: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("malformed point {text:?}")))
        .collect::<Result<_, _>>()?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(format!("malformed point {text:?}: non-finite coordinate"));
    }
    if x.len() != n {
        return Err(format!("point {text:?} has {} coordinates, problem has n = {n}", x.len()));
    }
    Ok(x)
}

fn tolerances(c: &Common) -> Result<Tolerances, UsageError> {
    let d = Tolerances::default();
    Tolerances {
        eps_active: c.eps_active.unwrap_or(d.eps_active),
        eps_grad: c.eps_grad.unwrap_or(d.eps_grad),
        eps_kkt: c.eps_kkt.unwrap_or(d.eps_kkt),
        eps_feas: c.eps_feas.unwrap_or(d.eps_feas),
    }
    .validated()
    .map_err(|e| UsageError(e.to_string()))
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|a| format!("{a}")).collect();
    format!("({})", parts.join(", "))
}

/// Runs the program on `argv` (including the program name).
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{text}");
                EXIT_OK
            } else {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            };
        }
    };
    match execute(&cli.command, out, err) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

struct Ctx<'a> {
    command: &'static str,
    common: &'a Common,
    tol: Tolerances,
    p: Problem,
}

impl Ctx<'_> {
    fn emit<T: Serialize>(&self, out: &mut dyn Write, result: T, text: impl FnOnce() -> String) {
        if self.common.json {
            let report = Report::new(
                self.command,
                &self.common.file.display().to_string(),
                self.common.seed,
                self.common.samples,
                self.tol,
                result,
            );
            let _ = writeln!(out, "{}", report.to_json());
        } else {
            let _ = write!(out, "{}", text());
        }
    }

    fn point(&self, text: &str) -> Result<Vec<f64>, UsageError> {
        parse_point(text, self.p.dim()).map_err(UsageError)
    }
}

fn code(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn execute(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, UsageError> {
    let common = command.common();
    let tol = tolerances(common)?;
    let text = std::fs::read_to_string(&common.file)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", common.file.display())))?;
    let p = load_problem(&text).map_err(|e| UsageError(format!("{}: {e}", common.file.display())))?;
    let ctx = Ctx { command: command.name(), common, tol, p };
    let p = &ctx.p;
    let seed = common.seed;

    match command {
        Command::Solve { mu0, factor, stages, trace, oracle, grid, rounds, .. } => {
            let slater = match slater_search(p, seed, &tol) {
                Ok(s) => s,
                Err(fail) => {
                    ctx.emit(out, json!({ "converged": false, "slater_failure": fail }), || {
                        "no strictly feasible starting point found\n".to_string()
                    });
                    return Ok(EXIT_FAILED);
                }
            };
            let schedule = Schedule { mu0: *mu0, factor: *factor, stages: *stages };
            let result = barrier_solve(p, &slater, schedule, &tol).map_err(|e| UsageError(e.to_string()))?;
            if let Some(path) = trace {
                std::fs::write(path, trace_json_lines(&result))
                    .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))?;
            }
            let oracle_result = if *oracle {
                match brute_force_oracle(p, *grid, *rounds) {
                    Ok(o) => Some(o),
                    Err(e) => {
                        let _ = writeln!(err, "oracle: {e}");
                        None
                    }
                }
            } else {
                None
            };
            let converged = result.converged;
            ctx.emit(out, json!({ "solve": &result, "oracle": &oracle_result }), || {
                let mut s = format!(
                    "x = {}\nf* = {}\nconverged = {}\n",
                    fmt_vec(&result.x),
                    result.fstar,
                    result.converged
                );
                if let Some(k) = &result.kkt {
                    s += &format!(
                        "lambda = {}\nstationarity residual = {:e}\ncomplementarity residual = {:e}\n",
                        fmt_vec(&k.lambda),
                        k.stationarity_residual,
                        k.complementarity_residual
                    );
                }
                if let Some(o) = &oracle_result {
                    s += &format!("oracle value = {} at {}\n", o.value, fmt_vec(&o.x));
                }
                s
            });
            Ok(code(converged))
        }
        Command::Certify { at, nondegeneracy_samples, .. } => {
            let x = ctx.point(&at.at)?;
            let config = CertifyConfig { seed, samples: common.samples, nondegeneracy_samples: *nondegeneracy_samples };
            let cert = certify_global(p, &x, &config, &tol);
            ctx.emit(out, &cert, || {
                let mut s = format!("status: {}\n", cert.status);
                if let Some(k) = &cert.kkt {
                    s += &format!("lambda = {}\nstationarity residual = {:e}\n", fmt_vec(&k.lambda), k.stationarity_residual);
                }
                if let Some(sl) = &cert.slater {
                    s += &format!("slater point {} with margin {}\n", fmt_vec(&sl.x0), sl.margin);
                }
                if let Some(v) = cert.convexity_violations.first() {
                    s += &format!(
                        "convexity violation on g{}: x = {}, y = {}, witness {} with g = {}\n",
                        v.j + 1,
                        fmt_vec(&v.x),
                        fmt_vec(&v.y),
                        fmt_vec(&v.witness_point),
                        v.witness_gval
                    );
                }
                for n in &cert.notes {
                    s += &format!("note: {n}\n");
                }
                s
            });
            Ok(code(cert.is_certified()))
        }
        Command::CheckSlater { .. } => match slater_search(p, seed, &tol) {
            Ok(cert) => {
                ctx.emit(out, json!({ "found": true, "certificate": &cert }), || {
                    format!("strictly feasible point {} with margin {}\n", fmt_vec(&cert.x0), cert.margin)
                });
                Ok(EXIT_OK)
            }
            Err(fail) => {
                ctx.emit(out, json!({ "found": false, "failure": &fail }), || {
                    format!("no strictly feasible point found; best max g = {:?}\n", fail.best_phi)
                });
                Ok(EXIT_FAILED)
            }
        },
        Command::CheckNondegeneracy { at, .. } => {
            let extra = at.as_deref().map(|t| ctx.point(t)).transpose()?;
            let mut points: Vec<Vec<f64>> = extra.into_iter().collect();
            let report = match slater_search(p, seed, &tol) {
                Ok(s) => {
                    let mut r = nondegeneracy_check(p, &s, common.samples, seed, &tol).map_err(|e| UsageError(e.to_string()))?;
                    r.merge(nondegeneracy_at_points(p, &points, &tol));
                    r
                }
                Err(fail) => {
                    points.extend(fail.best_x);
                    nondegeneracy_at_points(p, &points, &tol)
                }
            };
            ctx.emit(out, &report, || nondegeneracy_text(&report));
            Ok(code(report.passed()))
        }
        Command::FalsifyConvexity { .. } => {
            let slater = match slater_search(p, seed, &tol) {
                Ok(s) => s,
                Err(fail) => {
                    ctx.emit(out, json!({ "slater_failure": fail }), || "no strictly feasible point found\n".into());
                    return Ok(EXIT_FAILED);
                }
            };
            let report = convexity_falsify(p, &slater, common.samples, seed, &tol).map_err(|e| UsageError(e.to_string()))?;
            ctx.emit(out, &report, || {
                let mut s = format!(
                    "{} pairs tested, {} violations, {} unconfirmed\n",
                    report.pairs_tested,
                    report.violations.len(),
                    report.unconfirmed.len()
                );
                if let Some(v) = report.violations.first() {
                    s += &format!(
                        "g{}: x = {}, y = {}, <grad g, y - x> = {}, witness t = {} at {} with g = {}\n",
                        v.j + 1,
                        fmt_vec(&v.x),
                        fmt_vec(&v.y),
                        v.inner_product,
                        v.witness_t,
                        fmt_vec(&v.witness_point),
                        v.witness_gval
                    );
                }
                s
            });
            Ok(code(report.violations.is_empty()))
        }
        Command::RecoverMultipliers { at, .. } => {
            let x = ctx.point(&at.at)?;
            let kkt = recover_multipliers(p, &x, &tol).map_err(|e| UsageError(e.to_string()))?;
            let ok = kkt.stationarity_residual <= tol.eps_kkt && kkt.complementarity_residual <= tol.eps_kkt;
            ctx.emit(out, &kkt, || {
                format!(
                    "lambda = {}\nstationarity residual = {:e}\ncomplementarity residual = {:e}\n",
                    fmt_vec(&kkt.lambda),
                    kkt.stationarity_residual,
                    kkt.complementarity_residual
                )
            });
            Ok(code(ok))
        }
        Command::FritzJohn { at, .. } => {
            let x = ctx.point(&at.at)?;
            let fj = fritz_john_probe(p, &x, &tol).map_err(|e| UsageError(e.to_string()))?;
            ctx.emit(out, &fj, || {
                format!(
                    "status: {}\nlambda0 = {}\nlambda = {}\nresidual = {:e}\n",
                    serde_json::to_value(fj.status).unwrap().as_str().unwrap_or_default(),
                    fj.lambda0,
                    fmt_vec(&fj.lambda),
                    fj.residual
                )
            });
            Ok(code(fj.status == FritzJohnStatus::RegularFj))
        }
        Command::Oracle { grid, rounds, .. } => match brute_force_oracle(p, *grid, *rounds) {
            Ok(o) => {
                ctx.emit(out, &o, || format!("value = {} at {}\n", o.value, fmt_vec(&o.x)));
                Ok(EXIT_OK)
            }
            Err(e) => {
                ctx.emit(out, json!({ "error": e.to_string() }), || format!("{e}\n"));
                Ok(EXIT_FAILED)
            }
        },
        Command::ProbeLagrangian { at, fstar, .. } => {
            let x = ctx.point(&at.at)?;
            let kkt = recover_multipliers(p, &x, &tol).map_err(|e| UsageError(e.to_string()))?;
            let fstar = match fstar {
                Some(v) => *v,
                None => p.objective_value(&x).map_err(|e| UsageError(e.to_string()))?,
            };
            match lagrangian_probe(p, &kkt, fstar, common.samples, seed, &tol) {
                Ok(r) => {
                    ctx.emit(out, &r, || {
                        format!(
                            "lambda = {}\nmin Hessian eigenvalue = {:?}\nnonnegativity violations = {}\nconvex evidence = {}\n",
                            fmt_vec(&r.lambda),
                            r.min_hessian_eigenvalue_seen,
                            r.nonneg_violations.len(),
                            r.convex_evidence
                        )
                    });
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    ctx.emit(out, json!({ "error": e.to_string(), "kkt": kkt }), || format!("{e}\n"));
                    Ok(EXIT_FAILED)
                }
            }
        }
    }
}

fn nondegeneracy_text(r: &NondegeneracyReport) -> String {
    let mut s = String::new();
    for c in &r.constraints {
        s += &format!(
            "g{}: {} samples, min |grad| = {}, {} failures\n",
            c.j + 1,
            c.samples_tested,
            c.min_gradient_norm.map_or("n/a".to_string(), |v| format!("{v}")),
            c.failures.len()
        );
        for f in &c.failures {
            s += &format!("  failure at {} with |grad| = {}\n", fmt_vec(&f.point), f.gradient_norm);
        }
    }
    s
}
