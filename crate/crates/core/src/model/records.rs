use serde::{Deserialize, Serialize};

/// Candidate KKT pair `(x, λ)` with its residuals.
///
/// `lambda[j]` multiplies constraint `j` (0-based). Multipliers of bound rows
/// are ordinary entries of the same vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KktPoint {
    pub x: Vec<f64>,
    pub lambda: Vec<f64>,
    /// `‖∇f(x) + Σ λ_j ∇g_j(x)‖₂`
    pub stationarity_residual: f64,
    /// `max_j |λ_j g_j(x)|`
    pub complementarity_residual: f64,
}

/// Strictly feasible point with `g_j(x0) <= -margin` for every j.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlaterCertificate {
    pub x0: Vec<f64>,
    /// `-max_j g_j(x0)`
    pub margin: f64,
}

/// Boundary point `x` of constraint `j` and feasible `y` such that
/// `⟨∇g_j(x), y − x⟩ > 0`, together with a point on the segment that leaves
/// the feasible set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityViolation {
    /// 0-based constraint index.
    pub j: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub inner_product: f64,
    pub witness_t: f64,
    /// `x + t (y − x)`
    pub witness_point: Vec<f64>,
    /// `g_j(witness_point)`, strictly above `eps_feas`.
    pub witness_gval: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FritzJohnStatus {
    /// Residual vanishes with `λ0 > 0`: a KKT point after rescaling.
    RegularFj,
    /// Residual vanishes only with `λ0 = 0`.
    DegenerateFj,
    /// No nonnegative normalized multipliers make the residual vanish.
    NotFjPoint,
}

/// Minimizer of `‖λ0 ∇f + Σ λ_j ∇g_j‖` over the simplex
/// `λ0 + Σ λ_j = 1`, `λ >= 0`, with `λ` supported on the active set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FritzJohnCertificate {
    pub x: Vec<f64>,
    pub lambda0: f64,
    pub lambda: Vec<f64>,
    pub residual: f64,
    pub status: FritzJohnStatus,
}
