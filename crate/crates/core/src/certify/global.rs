use serde::{Deserialize, Serialize};

use crate::geometry::feasibility;
use crate::model::{
    ConvexityViolation, FritzJohnCertificate, FritzJohnStatus, KktPoint, Problem, SlaterCertificate, Tolerances,
};
use crate::rng::RNG_ALGORITHM;

use super::convexity::{convexity_falsify_with, UnconfirmedViolation};
use super::kkt::{fritz_john_probe, recover_multipliers};
use super::nondegeneracy::{nondegeneracy_at_points, nondegeneracy_check, NondegeneracyReport};
use super::slater::{slater_search, SlaterFailure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyConfig {
    pub seed: u64,
    /// Convexity-falsifier pairs per constraint.
    pub samples: usize,
    /// Boundary rays per constraint for the gradient check.
    pub nondegeneracy_samples: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig { seed: 42, samples: 1000, nondegeneracy_samples: 200 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CertificateStatus {
    /// Every sampled check passed and `x` is a KKT point. Global optimality
    /// then follows, provided the sampled conditions hold everywhere.
    CertifiedModuloSampling,
    RefutedConvexity,
    NondegeneracyFailed,
    DegenerateFj,
    NoSlater,
    KktResidualTooLarge,
}

impl CertificateStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateStatus::CertifiedModuloSampling => "CERTIFIED_MODULO_SAMPLING",
            CertificateStatus::RefutedConvexity => "REFUTED_CONVEXITY",
            CertificateStatus::NondegeneracyFailed => "NONDEGENERACY_FAILED",
            CertificateStatus::DegenerateFj => "DEGENERATE_FJ",
            CertificateStatus::NoSlater => "NO_SLATER",
            CertificateStatus::KktResidualTooLarge => "KKT_RESIDUAL_TOO_LARGE",
        }
    }
}

impl std::fmt::Display for CertificateStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalOptimalityCertificate {
    pub status: CertificateStatus,
    pub candidate: Vec<f64>,
    pub objective_value: Option<f64>,
    pub kkt: Option<KktPoint>,
    pub slater: Option<SlaterCertificate>,
    pub slater_failure: Option<SlaterFailure>,
    pub nondegeneracy: Option<NondegeneracyReport>,
    pub convexity_pairs_tested: usize,
    pub convexity_violations: Vec<ConvexityViolation>,
    pub unconfirmed_violations: Vec<UnconfirmedViolation>,
    pub fritz_john: Option<FritzJohnCertificate>,
    pub notes: Vec<String>,
    pub seed: u64,
    pub samples: usize,
    pub nondegeneracy_samples: usize,
    pub tolerances: Tolerances,
    pub rng: String,
    pub version: String,
}

impl GlobalOptimalityCertificate {
    fn empty(x: &[f64], config: &CertifyConfig, tol: &Tolerances) -> Self {
        GlobalOptimalityCertificate {
            status: CertificateStatus::KktResidualTooLarge,
            candidate: x.to_vec(),
            objective_value: None,
            kkt: None,
            slater: None,
            slater_failure: None,
            nondegeneracy: None,
            convexity_pairs_tested: 0,
            convexity_violations: Vec::new(),
            unconfirmed_violations: Vec::new(),
            fritz_john: None,
            notes: Vec::new(),
            seed: config.seed,
            samples: config.samples,
            nondegeneracy_samples: config.nondegeneracy_samples,
            tolerances: *tol,
            rng: RNG_ALGORITHM.to_string(),
            version: crate::VERSION.to_string(),
        }
    }

    pub fn is_certified(&self) -> bool {
        self.status == CertificateStatus::CertifiedModuloSampling
    }
}

/// Runs every check behind the global-optimality theorem at `x`:
/// Slater search, sampled nondegeneracy, the convexity falsifier and
/// multiplier recovery, then a Fritz–John probe when recovery fails.
///
/// Status priority, first match wins: `NO_SLATER`, `REFUTED_CONVEXITY`,
/// `NONDEGENERACY_FAILED`, `DEGENERATE_FJ`, `KKT_RESIDUAL_TOO_LARGE`.
pub fn certify_global(p: &Problem, x: &[f64], config: &CertifyConfig, tol: &Tolerances) -> GlobalOptimalityCertificate {
    let mut cert = GlobalOptimalityCertificate::empty(x, config, tol);
    if x.len() != p.dim() {
        cert.notes.push(format!("candidate has {} coordinates, problem has {}", x.len(), p.dim()));
        return cert;
    }
    cert.objective_value = p.objective_value(x).ok();

    let slater = match slater_search(p, config.seed, tol) {
        Ok(s) => s,
        Err(fail) => {
            cert.status = CertificateStatus::NoSlater;
            cert.notes.push("no strictly feasible point found".into());
            cert.slater_failure = Some(fail);
            return cert;
        }
    };

    let feas = feasibility(p, x, tol);
    let candidate_points: Vec<Vec<f64>> = if feas.feasible { vec![x.to_vec()] } else { Vec::new() };

    let nondegeneracy = match nondegeneracy_check(p, &slater, config.nondegeneracy_samples, config.seed, tol) {
        Ok(mut r) => {
            r.merge(nondegeneracy_at_points(p, &candidate_points, tol));
            Some(r)
        }
        Err(e) => {
            cert.notes.push(format!("nondegeneracy check failed: {e}"));
            None
        }
    };
    match convexity_falsify_with(p, &slater, config.samples, config.seed, &candidate_points, tol) {
        Ok(r) => {
            cert.convexity_pairs_tested = r.pairs_tested;
            cert.convexity_violations = r.violations;
            cert.unconfirmed_violations = r.unconfirmed;
        }
        Err(e) => cert.notes.push(format!("convexity falsifier failed: {e}")),
    }
    if !cert.unconfirmed_violations.is_empty() {
        cert.notes.push(format!(
            "{} positive inner products without an infeasibility witness",
            cert.unconfirmed_violations.len()
        ));
    }

    let mut kkt_ok = false;
    if feas.feasible {
        match recover_multipliers(p, x, tol) {
            Ok(k) => {
                kkt_ok = k.stationarity_residual <= tol.eps_kkt && k.complementarity_residual <= tol.eps_kkt;
                cert.kkt = Some(k);
            }
            Err(e) => cert.notes.push(format!("multiplier recovery failed: {e}")),
        }
        if !kkt_ok {
            match fritz_john_probe(p, x, tol) {
                Ok(fj) => cert.fritz_john = Some(fj),
                Err(e) => cert.notes.push(format!("Fritz-John probe failed: {e}")),
            }
        }
    } else {
        match (feas.max_violation, feas.domain_error) {
            (_, Some(e)) => cert.notes.push(format!("candidate is not in the domain: {e}")),
            (Some(v), None) => cert.notes.push(format!("candidate is infeasible: max g = {v:e}")),
            (None, None) => {}
        }
    }

    let nondegenerate = nondegeneracy.as_ref().is_some_and(|r| r.passed());
    cert.status = if !cert.convexity_violations.is_empty() {
        CertificateStatus::RefutedConvexity
    } else if !nondegenerate {
        CertificateStatus::NondegeneracyFailed
    } else if cert.fritz_john.as_ref().is_some_and(|fj| fj.status == FritzJohnStatus::DegenerateFj) {
        CertificateStatus::DegenerateFj
    } else if !kkt_ok {
        CertificateStatus::KktResidualTooLarge
    } else {
        CertificateStatus::CertifiedModuloSampling
    };
    cert.slater = Some(slater);
    cert.nondegeneracy = nondegeneracy;
    cert
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::load_problem;

    fn certify(text: &str, x: &[f64]) -> GlobalOptimalityCertificate {
        let p = load_problem(text).unwrap();
        certify_global(&p, x, &CertifyConfig::default(), &Tolerances::default())
    }

    #[test]
    fn hyperbola_minimizer_is_certified() {
        let c = certify(fixtures::HYP1, &[1.0, 1.0]);
        assert_eq!(c.status, CertificateStatus::CertifiedModuloSampling, "{:?}", c.notes);
        assert_eq!(c.kkt.unwrap().lambda, vec![1.0, 0.0, 0.0]);
        assert!(c.slater.unwrap().margin > 0.0);
    }

    #[test]
    fn disk_complement_is_refuted() {
        let c = certify(fixtures::DISK_COMP, &[1.0, 0.0]);
        assert_eq!(c.status, CertificateStatus::RefutedConvexity);
        assert!(c.convexity_violations.iter().any(|v| v.x == vec![1.0, 0.0]));
    }

    #[test]
    fn degen_has_no_slater_point() {
        let c = certify(fixtures::DEGEN, &[0.0]);
        assert_eq!(c.status, CertificateStatus::NoSlater);
        assert!(c.kkt.is_none() && c.slater_failure.is_some());
    }

    #[test]
    fn non_stationary_point_is_rejected() {
        let c = certify(fixtures::HYP1, &[2.0, 2.0]);
        assert_eq!(c.status, CertificateStatus::KktResidualTooLarge);
        assert_eq!(c.fritz_john.unwrap().status, FritzJohnStatus::NotFjPoint);
    }

    #[test]
    fn infeasible_candidate_is_rejected_with_a_note() {
        let c = certify(fixtures::HYP1, &[0.5, 0.5]);
        assert_eq!(c.status, CertificateStatus::KktResidualTooLarge);
        assert!(c.kkt.is_none());
        assert!(c.notes.iter().any(|n| n.contains("infeasible")));
    }

    #[test]
    fn status_serializes_in_upper_snake_case() {
        let s = serde_json::to_string(&CertificateStatus::CertifiedModuloSampling).unwrap();
        assert_eq!(s, "\"CERTIFIED_MODULO_SAMPLING\"");
        assert_eq!(CertificateStatus::NoSlater.to_string(), "NO_SLATER");
    }
}
