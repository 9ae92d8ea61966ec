//! Problem representation, numerical tolerances and the certificate records
//! shared by every other module.

mod load;
mod records;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{EvalError, Expr, ParseError};

pub use load::load_problem;
pub use records::{ConvexityViolation, FritzJohnCertificate, FritzJohnStatus, KktPoint, SlaterCertificate};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `n = <dimension>` line")]
    MissingDimension,
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("missing `minimize:` line")]
    MissingObjective,
    #[error("missing `box = ...` line")]
    MissingBox,
    #[error("problem has no constraints")]
    NoConstraints,
    #[error("box has {got} intervals but the dimension is {expected}")]
    BoxDimension { expected: usize, got: usize },
    #[error("box interval {coord} is [{lo}, {hi}]; need finite lo < hi")]
    BadInterval { coord: usize, lo: f64, hi: f64 },
    #[error("{subject} references x{index} but the dimension is {n}")]
    VariableOutOfRange { subject: String, index: usize, n: usize },
}

/// Closed coordinate interval of the sampling box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Interval {
        Interval { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// `minimize f(x) subject to g_j(x) <= 0`, plus a bounding box.
///
/// The box is metadata for samplers and the grid oracle. It only restricts
/// the feasible set when the bounds are also written as constraints.
#[derive(Clone, Debug)]
pub struct Problem {
    n: usize,
    objective: Expr,
    constraints: Vec<Expr>,
    bounds: Vec<Interval>,
}

impl Problem {
    pub fn new(n: usize, objective: Expr, constraints: Vec<Expr>, bounds: Vec<Interval>) -> Result<Problem, ModelError> {
        if n == 0 {
            return Err(ModelError::ZeroDimension);
        }
        if constraints.is_empty() {
            return Err(ModelError::NoConstraints);
        }
        if bounds.len() != n {
            return Err(ModelError::BoxDimension { expected: n, got: bounds.len() });
        }
        for (coord, b) in bounds.iter().enumerate() {
            if !(b.lo.is_finite() && b.hi.is_finite() && b.lo < b.hi) {
                return Err(ModelError::BadInterval { coord: coord + 1, lo: b.lo, hi: b.hi });
            }
        }
        let check = |subject: String, e: &Expr| {
            let index = e.max_var();
            if index > n {
                Err(ModelError::VariableOutOfRange { subject, index, n })
            } else {
                Ok(())
            }
        };
        check("objective".into(), &objective)?;
        for (j, g) in constraints.iter().enumerate() {
            check(format!("constraint {}", j + 1), g)?;
        }
        Ok(Problem { n, objective, constraints, bounds })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective(&self) -> &Expr {
        &self.objective
    }

    pub fn constraints(&self) -> &[Expr] {
        &self.constraints
    }

    pub fn constraint(&self, j: usize) -> &Expr {
        &self.constraints[j]
    }

    pub fn bounds(&self) -> &[Interval] {
        &self.bounds
    }

    pub fn box_center(&self) -> Vec<f64> {
        self.bounds.iter().map(Interval::center).collect()
    }

    pub fn box_contains(&self, x: &[f64]) -> bool {
        x.len() == self.n && self.bounds.iter().zip(x).all(|(b, &v)| b.contains(v))
    }

    /// Euclidean diameter of the box.
    pub fn box_diameter(&self) -> f64 {
        self.bounds.iter().map(|b| b.width() * b.width()).sum::<f64>().sqrt()
    }

    pub fn objective_value(&self, x: &[f64]) -> Result<f64, EvalError> {
        self.check_len(x)?;
        self.objective.evaluate(x)
    }

    pub fn constraint_value(&self, j: usize, x: &[f64]) -> Result<f64, EvalError> {
        self.check_len(x)?;
        self.constraints[j].evaluate(x)
    }

    pub fn constraint_values(&self, x: &[f64]) -> Result<Vec<f64>, EvalError> {
        self.check_len(x)?;
        self.constraints.iter().map(|g| g.evaluate(x)).collect()
    }

    /// `max_j g_j(x)`.
    pub fn max_constraint(&self, x: &[f64]) -> Result<f64, EvalError> {
        Ok(self
            .constraint_values(x)?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max))
    }

    fn check_len(&self, x: &[f64]) -> Result<(), EvalError> {
        if x.len() != self.n {
            return Err(EvalError::DimensionMismatch { expected: self.n, got: x.len() });
        }
        Ok(())
    }
}

/// Numerical realization of the exact conditions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `|g_j(x)| <= eps_active` marks constraint j active.
    pub eps_active: f64,
    /// Gradient norms below this count as vanishing.
    pub eps_grad: f64,
    /// Bound on stationarity and complementarity residuals.
    pub eps_kkt: f64,
    /// `g_j(x) <= eps_feas` counts as satisfied.
    pub eps_feas: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { eps_active: 1e-6, eps_grad: 1e-6, eps_kkt: 1e-6, eps_feas: 1e-9 }
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("tolerance `{name}` must be strictly positive and finite, got {value}")]
pub struct ToleranceError {
    pub name: &'static str,
    pub value: f64,
}

impl Tolerances {
    pub fn validated(self) -> Result<Tolerances, ToleranceError> {
        for (name, value) in [
            ("eps_active", self.eps_active),
            ("eps_grad", self.eps_grad),
            ("eps_kkt", self.eps_kkt),
            ("eps_feas", self.eps_feas),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ToleranceError { name, value });
            }
        }
        Ok(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub subject: String,
    pub message: String,
}

/// Outcome of [`validate`]: an empty issue list means the problem is usable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub n: usize,
    pub m: usize,
    pub box_center: Vec<f64>,
    pub issues: Vec<Diagnostic>,
}

impl Diagnostics {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Checks index consistency and evaluability of every expression at the box
/// center. Never fails; problems are reported as diagnostics.
pub fn validate(p: &Problem) -> Diagnostics {
    let center = p.box_center();
    let mut issues = Vec::new();
    let named = std::iter::once(("objective".to_string(), p.objective()))
        .chain(p.constraints().iter().enumerate().map(|(j, g)| (format!("constraint {}", j + 1), g)));
    for (subject, e) in named {
        if e.max_var() > p.dim() {
            issues.push(Diagnostic {
                subject: subject.clone(),
                message: format!("references x{} beyond dimension {}", e.max_var(), p.dim()),
            });
        }
        if let Err(err) = e.evaluate(&center) {
            issues.push(Diagnostic { subject, message: format!("not evaluable at box center: {err}") });
        }
    }
    Diagnostics { n: p.dim(), m: p.num_constraints(), box_center: center, issues }
}
