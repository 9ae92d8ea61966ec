use serde::{Deserialize, Serialize};

use crate::geometry::is_feasible;
use crate::model::{Interval, Problem, Tolerances};

use super::SolverError;

pub const MAX_ORACLE_DIM: usize = 4;
/// Largest grid (points per round) the oracle will evaluate.
pub const MAX_GRID_POINTS: usize = 20_000_000;
const SNAP_BISECTIONS: usize = 60;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub x: Vec<f64>,
    pub value: f64,
    /// Largest grid spacing in the final round.
    pub grid_resolution: f64,
    pub grid_points_per_axis: usize,
    pub refinement_rounds: usize,
    pub points_evaluated: usize,
}

struct Best {
    value: f64,
    x: Vec<f64>,
}

fn consider(best: &mut Option<Best>, value: f64, x: &[f64]) {
    if value.is_finite() && best.as_ref().is_none_or(|b| value < b.value) {
        *best = Some(Best { value, x: x.to_vec() });
    }
}

/// Exhaustive grid search for `min f` over the feasible part of the box.
///
/// Each round evaluates a uniform grid, then bisects every grid edge that
/// crosses the feasible boundary and scores the feasible end, so minimizers
/// on a curved boundary are resolved to full precision rather than to the
/// grid spacing. The next round's box is the best point ± 1.5 cells.
pub fn brute_force_oracle(
    p: &Problem,
    grid_points_per_axis: usize,
    refinement_rounds: usize,
) -> Result<OracleResult, SolverError> {
    let n = p.dim();
    if n > MAX_ORACLE_DIM {
        return Err(SolverError::OracleDimension { n });
    }
    let g = grid_points_per_axis;
    let total = g.checked_pow(n as u32).filter(|&t| t <= MAX_GRID_POINTS);
    let Some(total) = total.filter(|_| g >= 2) else {
        return Err(SolverError::OracleGrid { points_per_axis: g, n });
    };
    let tol = Tolerances::default();
    let original = p.bounds().to_vec();
    let mut bounds = original.clone();
    let mut best: Option<Best> = None;
    let mut evaluated = 0;
    let mut resolution = 0.0;

    for _round in 0..=refinement_rounds {
        let h: Vec<f64> = bounds.iter().map(|b| b.width() / (g - 1) as f64).collect();
        resolution = h.iter().copied().fold(0.0, f64::max);
        let point = |idx: usize| -> Vec<f64> {
            let mut rem = idx;
            (0..n)
                .map(|i| {
                    let k = rem % g;
                    rem /= g;
                    if k == g - 1 { bounds[i].hi } else { bounds[i].lo + k as f64 * h[i] }
                })
                .collect()
        };
        let mut feasible = vec![false; total];
        for (idx, slot) in feasible.iter_mut().enumerate() {
            let x = point(idx);
            evaluated += 1;
            if is_feasible(p, &x, &tol) {
                *slot = true;
                if let Ok(v) = p.objective_value(&x) {
                    consider(&mut best, v, &x);
                }
            }
        }
        let mut stride = 1;
        for _axis in 0..n {
            for idx in 0..total {
                if (idx / stride) % g == g - 1 || feasible[idx] == feasible[idx + stride] {
                    continue;
                }
                let (inside, outside) =
                    if feasible[idx] { (point(idx), point(idx + stride)) } else { (point(idx + stride), point(idx)) };
                let edge = snap(p, &inside, &outside, &tol);
                evaluated += SNAP_BISECTIONS;
                if let Ok(v) = p.objective_value(&edge) {
                    consider(&mut best, v, &edge);
                }
            }
            stride *= g;
        }
        let Some(b) = &best else {
            return Err(SolverError::OracleInfeasible { points_per_axis: g });
        };
        bounds = original
            .iter()
            .zip(&b.x)
            .zip(&h)
            .map(|((o, &c), &hi)| Interval::new((c - 1.5 * hi).max(o.lo), (c + 1.5 * hi).min(o.hi)))
            .collect();
    }
    let b = best.expect("checked every round");
    Ok(OracleResult {
        x: b.x,
        value: b.value,
        grid_resolution: resolution,
        grid_points_per_axis: g,
        refinement_rounds,
        points_evaluated: evaluated,
    })
}

/// Feasible end of a bisected segment from a feasible to an infeasible point.
fn snap(p: &Problem, inside: &[f64], outside: &[f64], tol: &Tolerances) -> Vec<f64> {
    let mut lo = inside.to_vec();
    let mut hi = outside.to_vec();
    for _ in 0..SNAP_BISECTIONS {
        let mid: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        if mid == lo || mid == hi {
            break;
        }
        if is_feasible(p, &mid, tol) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::load_problem;

    #[test]
    fn hyperbola_value_two() {
        let p = load_problem(fixtures::HYP1).unwrap();
        let r = brute_force_oracle(&p, 201, 6).unwrap();
        assert!((r.value - 2.0).abs() < 1e-4, "{r:?}");
        assert!((r.x[0] - 1.0).abs() < 1e-3 && (r.x[1] - 1.0).abs() < 1e-3);
        assert!(is_feasible(&p, &r.x, &Tolerances::default()));
        assert_eq!(p.objective_value(&r.x).unwrap(), r.value);
    }

    #[test]
    fn weighted_hyperbola_value() {
        let p = load_problem(fixtures::HYP2).unwrap();
        let r = brute_force_oracle(&p, 201, 6).unwrap();
        assert!((r.value - 2.0 * 2f64.sqrt()).abs() < 1e-4, "{r:?}");
    }

    #[test]
    fn empty_set_is_an_error() {
        let p = load_problem(fixtures::EMPTY).unwrap();
        assert!(matches!(brute_force_oracle(&p, 51, 2), Err(SolverError::OracleInfeasible { .. })));
    }

    #[test]
    fn guards() {
        let p = load_problem(fixtures::HYP1).unwrap();
        assert!(brute_force_oracle(&p, 1, 2).is_err());
        assert!(brute_force_oracle(&p, 100_000, 2).is_err());
        let five = "n = 5\nbox = [0,1] x [0,1] x [0,1] x [0,1] x [0,1]\nminimize: x1\nsubject_to:\n  -x5 <= 0\n";
        assert!(matches!(
            brute_force_oracle(&load_problem(five).unwrap(), 3, 0),
            Err(SolverError::OracleDimension { n: 5 })
        ));
    }

    #[test]
    fn deterministic() {
        let p = load_problem(fixtures::AFFINE).unwrap();
        assert_eq!(brute_force_oracle(&p, 41, 3).unwrap(), brute_force_oracle(&p, 41, 3).unwrap());
    }
}
