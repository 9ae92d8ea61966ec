use serde::{Deserialize, Serialize};

use crate::geometry::{draw_feasible, is_feasible, random_direction, sample_boundary_point, FEASIBLE_SAMPLE_CAP};
use crate::linalg::dot;
use crate::model::{ConvexityViolation, Problem, SlaterCertificate, Tolerances};
use crate::rng;

use super::CertifyError;

/// Largest `k` in the witness scan `t = 2^-k`.
pub const WITNESS_SCAN_DEPTH: i32 = 40;

/// Pair with `⟨∇g_j(x), y − x⟩ > eps_kkt` for which no scanned `t` gave
/// `g_j > eps_feas`. Reported, but not counted as a refutation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnconfirmedViolation {
    pub j: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub inner_product: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PairCheck {
    Consistent { inner_product: f64 },
    Violation(ConvexityViolation),
    Unconfirmed(UnconfirmedViolation),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FalsifyReport {
    pub pairs_requested: usize,
    /// Pairs for which a boundary point and a feasible partner were found.
    pub pairs_tested: usize,
    pub violations: Vec<ConvexityViolation>,
    pub unconfirmed: Vec<UnconfirmedViolation>,
}

impl FalsifyReport {
    fn new(pairs_requested: usize) -> Self {
        FalsifyReport { pairs_requested, pairs_tested: 0, violations: Vec::new(), unconfirmed: Vec::new() }
    }

    fn push(&mut self, check: PairCheck) {
        self.pairs_tested += 1;
        match check {
            PairCheck::Consistent { .. } => {}
            PairCheck::Violation(v) => self.violations.push(v),
            PairCheck::Unconfirmed(u) => self.unconfirmed.push(u),
        }
    }
}

/// Tests the supporting-hyperplane inequality `⟨∇g_j(x), y − x⟩ <= 0` for a
/// point `x` with `g_j(x) = 0` and a feasible `y`. A positive inner product
/// is confirmed by scanning `t = 2^-k` for a segment point outside `g_j <= 0`.
pub fn check_pair(p: &Problem, j: usize, x: &[f64], y: &[f64], tol: &Tolerances) -> Result<PairCheck, CertifyError> {
    if j >= p.num_constraints() {
        return Err(CertifyError::BadIndex { j, m: p.num_constraints() });
    }
    for (what, v) in [("boundary point", x), ("partner point", y)] {
        if v.len() != p.dim() {
            return Err(CertifyError::Dimension { what, expected: p.dim(), got: v.len() });
        }
        if !is_feasible(p, v, tol) {
            return Err(CertifyError::Precondition(format!("{what} is not feasible")));
        }
    }
    let gv = p.constraint(j).gradient(x)?;
    if gv.value.abs() > tol.eps_active {
        return Err(CertifyError::Precondition(format!("g{} is not active at the boundary point", j + 1)));
    }
    let dir: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
    let inner_product = dot(&gv.grad, &dir);
    if inner_product <= tol.eps_kkt {
        return Ok(PairCheck::Consistent { inner_product });
    }
    for k in 1..=WITNESS_SCAN_DEPTH {
        let t = 0.5f64.powi(k);
        let w: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + t * d).collect();
        if let Ok(g) = p.constraint_value(j, &w) {
            if g > tol.eps_feas {
                return Ok(PairCheck::Violation(ConvexityViolation {
                    j,
                    x: x.to_vec(),
                    y: y.to_vec(),
                    inner_product,
                    witness_t: t,
                    witness_point: w,
                    witness_gval: g,
                }));
            }
        }
    }
    Ok(PairCheck::Unconfirmed(UnconfirmedViolation { j, x: x.to_vec(), y: y.to_vec(), inner_product }))
}

/// Sampled search for violations of the supporting-hyperplane inequality.
///
/// For each constraint, `pairs` seeded rays from the Slater point give
/// boundary points `x`; each is paired with a rejection-sampled feasible
/// `y`. Finding nothing is evidence, not proof, that the feasible set is
/// convex.
pub fn convexity_falsify(
    p: &Problem,
    slater: &SlaterCertificate,
    pairs: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<FalsifyReport, CertifyError> {
    convexity_falsify_with(p, slater, pairs, seed, &[], tol)
}

/// [`convexity_falsify`] plus extra boundary points (such as a candidate
/// minimizer) tested against the same seeded partners, after the rays.
pub fn convexity_falsify_with(
    p: &Problem,
    slater: &SlaterCertificate,
    pairs: usize,
    seed: u64,
    extra_boundary: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<FalsifyReport, CertifyError> {
    let mut report = FalsifyReport::new(pairs * p.num_constraints());
    for j in 0..p.num_constraints() {
        let mut rays = rng::stream(seed, rng::streams::CONVEXITY_RAYS + j as u64);
        let mut partners = rng::stream(seed, rng::streams::CONVEXITY_PARTNERS + j as u64);
        let extras = extra_boundary.iter().filter(|x| {
            x.len() == p.dim()
                && is_feasible(p, x, tol)
                && matches!(p.constraint_value(j, x), Ok(g) if g.abs() <= tol.eps_active)
        });
        let mut boundary: Vec<Vec<f64>> = Vec::with_capacity(pairs);
        for _ in 0..pairs {
            let d = random_direction(p.dim(), &mut rays);
            if let Some(x) = sample_boundary_point(p, j, &slater.x0, &d, tol)? {
                boundary.push(x);
            }
        }
        let extra_start = boundary.len();
        boundary.extend(extras.cloned());
        for (i, x) in boundary.iter().enumerate() {
            let tries = if i < extra_start { 1 } else { pairs.max(1) };
            for _ in 0..tries {
                let Some(y) = draw_feasible(p, &mut partners, tol, FEASIBLE_SAMPLE_CAP) else { break };
                report.push(check_pair(p, j, x, &y, tol)?);
            }
        }
        if extra_start < boundary.len() {
            report.pairs_requested += pairs.max(1) * (boundary.len() - extra_start);
        }
    }
    Ok(report)
}
