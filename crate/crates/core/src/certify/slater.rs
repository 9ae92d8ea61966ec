use serde::{Deserialize, Serialize};

use crate::geometry::{uniform_in_box, FEASIBLE_SAMPLE_CAP};
use crate::linalg::{dot, norm};
use crate::model::{Problem, SlaterCertificate, Tolerances};
use crate::rng;

/// Number of descent starts: the box center plus seeded uniform points.
pub const SLATER_STARTS: usize = 8;
const TEMPERATURES: [f64; 5] = [1.0, 1e-1, 1e-2, 1e-3, 1e-4];
const ITERATIONS_PER_TEMPERATURE: usize = 200;
/// Descent steps taken after first reaching `max_j g_j < 0`, to build margin.
const MARGIN_STEPS: usize = 20;

/// Evidence that no strictly feasible point was found.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlaterFailure {
    /// Point with the smallest `max_j g_j` reached.
    pub best_x: Option<Vec<f64>>,
    /// That smallest `max_j g_j`; never negative.
    pub best_phi: Option<f64>,
    pub starts: usize,
    pub fallback_draws: usize,
}

fn phi(p: &Problem, x: &[f64]) -> Option<f64> {
    p.max_constraint(x).ok()
}

/// Log-sum-exp smoothing of `max_j g_j` at temperature `t` and its gradient.
fn smoothed(p: &Problem, x: &[f64], t: f64) -> Option<(f64, Vec<f64>)> {
    let mut values = Vec::with_capacity(p.num_constraints());
    let mut grads = Vec::with_capacity(p.num_constraints());
    for g in p.constraints() {
        let gv = g.gradient(x).ok()?;
        values.push(gv.value);
        grads.push(gv.grad);
    }
    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = values.iter().map(|v| ((v - top) / t).exp()).collect();
    let total: f64 = weights.iter().sum();
    let value = top + t * total.ln();
    let mut grad = vec![0.0; p.dim()];
    for (w, g) in weights.iter().zip(&grads) {
        for (gi, v) in grad.iter_mut().zip(g) {
            *gi += w / total * v;
        }
    }
    Some((value, grad))
}

fn clamp_to_box(p: &Problem, x: &mut [f64]) {
    for (v, b) in x.iter_mut().zip(p.bounds()) {
        *v = v.clamp(b.lo, b.hi);
    }
}

/// Projected gradient descent with Armijo backtracking on the smoothed max.
/// Returns the last iterate and its exact `max_j g_j`.
fn descend(p: &Problem, start: Vec<f64>, best: &mut (f64, Vec<f64>)) -> Option<(Vec<f64>, f64)> {
    let mut x = start;
    clamp_to_box(p, &mut x);
    let mut exact = phi(p, &x)?;
    track(best, exact, &x);
    if exact < 0.0 {
        return Some((x, exact));
    }
    let mut extra: Option<usize> = None;
    for &t in &TEMPERATURES {
        for _ in 0..ITERATIONS_PER_TEMPERATURE {
            let Some((value, grad)) = smoothed(p, &x, t) else { return Some((x, exact)) };
            if norm(&grad) == 0.0 {
                break;
            }
            let mut step = 1.0;
            let mut accepted = None;
            while step > 1e-14 {
                let mut trial: Vec<f64> = x.iter().zip(&grad).map(|(a, g)| a - step * g).collect();
                clamp_to_box(p, &mut trial);
                let moved: Vec<f64> = trial.iter().zip(&x).map(|(a, b)| a - b).collect();
                if let Some((tv, _)) = smoothed(p, &trial, t) {
                    if tv <= value + 1e-4 * dot(&grad, &moved) && moved.iter().any(|&d| d != 0.0) {
                        accepted = Some(trial);
                        break;
                    }
                }
                step *= 0.5;
            }
            let Some(next) = accepted else { break };
            x = next;
            if let Some(v) = phi(p, &x) {
                exact = v;
                track(best, exact, &x);
            }
            if exact < 0.0 {
                let left = extra.get_or_insert(MARGIN_STEPS);
                if *left == 0 {
                    return Some((x, exact));
                }
                *left -= 1;
            }
        }
    }
    Some((x, exact))
}

fn track(best: &mut (f64, Vec<f64>), value: f64, x: &[f64]) {
    if value < best.0 {
        *best = (value, x.to_vec());
    }
}

/// Seeded multistart search for `x0` with `max_j g_j(x0) < 0`.
///
/// Starts at the box center, then at seeded uniform points, minimizing a
/// log-sum-exp smoothing of `max_j g_j` under a decreasing temperature
/// schedule. The first start that reaches strict feasibility wins. If none
/// does, rejection sampling over the box is tried before giving up.
pub fn slater_search(p: &Problem, seed: u64, _tol: &Tolerances) -> Result<SlaterCertificate, SlaterFailure> {
    let mut rng = rng::stream(seed, rng::streams::SLATER);
    let mut best = (f64::INFINITY, Vec::new());
    for start_index in 0..SLATER_STARTS {
        let start = if start_index == 0 { p.box_center() } else { uniform_in_box(p, &mut rng) };
        if let Some((x0, value)) = descend(p, start, &mut best) {
            if value < 0.0 {
                return Ok(SlaterCertificate { x0, margin: -value });
            }
        }
    }
    for _ in 0..FEASIBLE_SAMPLE_CAP {
        let x = uniform_in_box(p, &mut rng);
        if let Some(value) = phi(p, &x) {
            track(&mut best, value, &x);
            if value < 0.0 {
                return Ok(SlaterCertificate { x0: x, margin: -value });
            }
        }
    }
    let found = best.0.is_finite();
    Err(SlaterFailure {
        best_x: found.then_some(best.1),
        best_phi: found.then_some(best.0),
        starts: SLATER_STARTS,
        fallback_draws: FEASIBLE_SAMPLE_CAP,
    })
}
