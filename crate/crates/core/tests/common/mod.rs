#![allow(dead_code)]

use kkt_cert::expr::{BinaryOp, Expr, UnaryOp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random polynomial / exp / log tree over `n` variables. `log` is only
/// applied to `c + e²` with `c >= 0.5`, keeping it defined everywhere.
pub fn random_expr<R: Rng>(rng: &mut R, depth: u32, n: usize) -> Expr {
    if depth == 0 || rng.random_bool(0.25) {
        return if rng.random_bool(0.6) {
            Expr::var(rng.random_range(1..=n))
        } else {
            Expr::constant((rng.random_range(-3.0f64..3.0) * 4.0).round() / 4.0)
        };
    }
    let sub = |rng: &mut R| random_expr(rng, depth - 1, n);
    match rng.random_range(0..7) {
        0 => Expr::binary(BinaryOp::Add, sub(rng), sub(rng)),
        1 => Expr::binary(BinaryOp::Sub, sub(rng), sub(rng)),
        2 | 3 => Expr::binary(BinaryOp::Mul, sub(rng), sub(rng)),
        4 => Expr::pow(sub(rng), rng.random_range(2..=3)),
        5 => Expr::unary(UnaryOp::Exp, Expr::binary(BinaryOp::Mul, Expr::constant(0.5), sub(rng))),
        _ => {
            let inner = sub(rng);
            let sq = Expr::pow(inner, 2);
            let c = Expr::constant(rng.random_range(0.5f64..2.0));
            Expr::unary(UnaryOp::Log, Expr::binary(BinaryOp::Add, c, sq))
        }
    }
}

/// Central differences of `e.evaluate`, step `h`.
pub fn central_difference(e: &Expr, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let mut p = x.to_vec();
            let mut m = x.to_vec();
            p[i] += h;
            m[i] -= h;
            (e.evaluate(&p).unwrap() - e.evaluate(&m).unwrap()) / (2.0 * h)
        })
        .collect()
}

pub struct AdSuite {
    pub expressions: usize,
    pub max_relative_error: f64,
    pub worst: String,
}

/// Draws `count` expressions with moderate values at random points in
/// `[-1, 1]^3` and compares AD gradients with central differences (h = 1e-6).
pub fn ad_suite(count: usize, seed: u64) -> AdSuite {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suite = AdSuite { expressions: 0, max_relative_error: 0.0, worst: String::new() };
    while suite.expressions < count {
        let e = random_expr(&mut rng, 4, 3);
        let x: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let Ok(g) = e.gradient(&x) else { continue };
        if !(g.value.abs() <= 1e3) || g.grad.iter().any(|v| !(v.abs() <= 1e4)) {
            continue;
        }
        let fd = central_difference(&e, &x, 1e-6);
        for (a, b) in g.grad.iter().zip(&fd) {
            let rel = (a - b).abs() / 1f64.max(a.abs()).max(b.abs());
            if rel > suite.max_relative_error {
                suite.max_relative_error = rel;
                suite.worst = format!("{e} at {x:?}");
            }
        }
        suite.expressions += 1;
    }
    suite
}

/// `x1 >= 0 ∧ x2 >= 0 ∧ x1 x2 >= a`, written as the 2×2 principal-minor
/// test for `[[x1, √a], [√a, x2]] ⪰ 0`.
pub fn psd_2x2(x1: f64, x2: f64, a: f64) -> bool {
    x1 >= 0.0 && x2 >= 0.0 && x1 * x2 - a >= 0.0
}
