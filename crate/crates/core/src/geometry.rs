//! Feasible-set queries: membership, active sets, and seeded sampling of
//! feasible and boundary points.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::EvalError;
use crate::model::{Problem, Tolerances};
use crate::rng;

/// Rejection-sampling budget per feasible point.
pub const FEASIBLE_SAMPLE_CAP: usize = 100_000;
/// Bisection budget for boundary crossings.
pub const MAX_BISECTION_STEPS: usize = 200;
/// Uniform probes along a ray before bisecting the first sign change.
pub const RAY_SCAN_STEPS: usize = 256;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("point is not feasible (max g = {max_violation:?}{})", domain_note(.domain_error))]
    Infeasible {
        max_violation: Option<f64>,
        domain_error: Option<String>,
    },
    #[error("ray origin is not strictly feasible")]
    NotInterior,
    #[error("ray direction is zero or not finite")]
    BadDirection,
    #[error("constraint index {j} out of range for {m} constraints")]
    BadIndex { j: usize, m: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

fn domain_note(e: &Option<String>) -> String {
    e.as_ref().map(|s| format!("; {s}")).unwrap_or_default()
}

/// Membership details behind [`is_feasible`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Feasibility {
    pub feasible: bool,
    /// `max_j g_j(x)`, absent when some constraint could not be evaluated.
    pub max_violation: Option<f64>,
    /// Set when evaluation failed; the point is then treated as infeasible.
    pub domain_error: Option<String>,
}

pub fn feasibility(p: &Problem, x: &[f64], tol: &Tolerances) -> Feasibility {
    match p.max_constraint(x) {
        Ok(max) => Feasibility { feasible: max <= tol.eps_feas, max_violation: Some(max), domain_error: None },
        Err(e) => Feasibility { feasible: false, max_violation: None, domain_error: Some(e.to_string()) },
    }
}

/// `g_j(x) <= eps_feas` for every j. Evaluation failures count as infeasible.
pub fn is_feasible(p: &Problem, x: &[f64], tol: &Tolerances) -> bool {
    feasibility(p, x, tol).feasible
}

/// `g_j(x) < 0` for every j.
pub fn is_strictly_feasible(p: &Problem, x: &[f64]) -> bool {
    matches!(p.max_constraint(x), Ok(m) if m < 0.0)
}

/// Constraints with `|g_j(x)| <= eps_active` at a feasible point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActiveSet {
    pub point: Vec<f64>,
    /// 0-based constraint indices, ascending.
    pub indices: Vec<usize>,
}

impl ActiveSet {
    pub fn contains(&self, j: usize) -> bool {
        self.indices.contains(&j)
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

pub fn active_set(p: &Problem, x: &[f64], tol: &Tolerances) -> Result<ActiveSet, GeometryError> {
    let values = require_feasible(p, x, tol)?;
    let indices = values
        .iter()
        .enumerate()
        .filter(|(_, g)| g.abs() <= tol.eps_active)
        .map(|(j, _)| j)
        .collect();
    Ok(ActiveSet { point: x.to_vec(), indices })
}

/// Constraint values at `x`, or an error when `x` is not feasible.
pub(crate) fn require_feasible(p: &Problem, x: &[f64], tol: &Tolerances) -> Result<Vec<f64>, GeometryError> {
    if x.len() != p.dim() {
        return Err(EvalError::DimensionMismatch { expected: p.dim(), got: x.len() }.into());
    }
    match p.constraint_values(x) {
        Ok(values) => {
            let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if max > tol.eps_feas {
                Err(GeometryError::Infeasible { max_violation: Some(max), domain_error: None })
            } else {
                Ok(values)
            }
        }
        Err(e) => Err(GeometryError::Infeasible { max_violation: None, domain_error: Some(e.to_string()) }),
    }
}

/// Largest `t >= 0` keeping `origin + t·direction` inside the box.
fn ray_extent(p: &Problem, origin: &[f64], direction: &[f64]) -> f64 {
    p.bounds()
        .iter()
        .zip(origin.iter().zip(direction))
        .filter(|(_, (_, &d))| d != 0.0)
        .map(|(b, (&o, &d))| if d > 0.0 { (b.hi - o) / d } else { (b.lo - o) / d })
        .fold(f64::INFINITY, f64::min)
}

fn along(origin: &[f64], direction: &[f64], t: f64) -> Vec<f64> {
    origin.iter().zip(direction).map(|(o, d)| o + t * d).collect()
}

/// Finds the first point where `g_j` activates along
/// `interior + t·direction`, restricted to the box.
///
/// The ray is probed at [`RAY_SCAN_STEPS`] evenly spaced parameters; the
/// first probe where `g_j >= 0` (or `g_j` cannot be evaluated) brackets the
/// crossing, which is then bisected. The returned point is the feasible end
/// of the final bracket, so `-eps_active <= g_j < 0` there. Rays on which
/// another constraint exceeds `eps_feas` first return `None`.
pub fn sample_boundary_point(
    p: &Problem,
    j: usize,
    interior: &[f64],
    direction: &[f64],
    tol: &Tolerances,
) -> Result<Option<Vec<f64>>, GeometryError> {
    let m = p.num_constraints();
    if j >= m {
        return Err(GeometryError::BadIndex { j, m });
    }
    if interior.len() != p.dim() || direction.len() != p.dim() {
        return Err(EvalError::DimensionMismatch { expected: p.dim(), got: interior.len().max(direction.len()) }.into());
    }
    if !direction.iter().all(|d| d.is_finite()) || direction.iter().all(|&d| d == 0.0) {
        return Err(GeometryError::BadDirection);
    }
    if !is_strictly_feasible(p, interior) {
        return Err(GeometryError::NotInterior);
    }

    let t_max = ray_extent(p, interior, direction);
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Ok(None);
    }
    let g_j_bad = |t: f64| match p.constraint_value(j, &along(interior, direction, t)) {
        Ok(g) => g >= 0.0,
        Err(_) => true,
    };
    let others_ok = |x: &[f64]| {
        (0..m)
            .filter(|&k| k != j)
            .all(|k| matches!(p.constraint_value(k, x), Ok(g) if g <= tol.eps_feas))
    };

    let mut bracket = None;
    let mut prev = 0.0;
    for step in 1..=RAY_SCAN_STEPS {
        let t = t_max * step as f64 / RAY_SCAN_STEPS as f64;
        if g_j_bad(t) {
            bracket = Some((prev, t));
            break;
        }
        if !others_ok(&along(interior, direction, t)) {
            return Ok(None);
        }
        prev = t;
    }
    let Some((mut lo, mut hi)) = bracket else {
        return Ok(None);
    };

    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g_j_bad(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let x = along(interior, direction, lo);
    let g = match p.constraint_value(j, &x) {
        Ok(g) => g,
        Err(_) => return Ok(None),
    };
    if g.abs() <= tol.eps_active && g <= tol.eps_feas && others_ok(&x) {
        Ok(Some(x))
    } else {
        Ok(None)
    }
}

pub(crate) fn uniform_in_box<R: Rng>(p: &Problem, rng: &mut R) -> Vec<f64> {
    p.bounds().iter().map(|b| rng.random_range(b.lo..b.hi)).collect()
}

/// Uniform direction on the unit sphere.
pub(crate) fn random_direction<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|a| a / norm).collect();
        }
    }
}

/// Rejection sampling from the box, at most `cap` draws.
pub(crate) fn draw_feasible<R: Rng>(p: &Problem, rng: &mut R, tol: &Tolerances, cap: usize) -> Option<Vec<f64>> {
    (0..cap)
        .map(|_| uniform_in_box(p, rng))
        .find(|x| is_feasible(p, x, tol))
}

/// Uniform rejection sampling over the box; deterministic per seed.
pub fn sample_feasible_point(p: &Problem, seed: u64, tol: &Tolerances) -> Option<Vec<f64>> {
    let mut rng = rng::stream(seed, rng::streams::FEASIBLE);
    draw_feasible(p, &mut rng, tol, FEASIBLE_SAMPLE_CAP)
}
