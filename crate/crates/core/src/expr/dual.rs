use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{BinaryOp, Expr, UnaryOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainKind {
    LogNonPositive,
    SqrtNegative,
    DivisionByZero,
    NonFinite,
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainKind::LogNonPositive => "log of a non-positive value",
            DomainKind::SqrtNegative => "sqrt of a negative value",
            DomainKind::DivisionByZero => "division by zero",
            DomainKind::NonFinite => "non-finite result",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EvalError {
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable x{index} is not defined for a point of dimension {dim}")]
    VariableOutOfRange { index: usize, dim: usize },
    #[error("domain violation in `{node}`: {kind}")]
    Domain { node: String, kind: DomainKind },
}

/// Arithmetic shared by plain evaluation and dual-number differentiation.
pub(crate) trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    fn re(self) -> f64;
    fn is_finite(self) -> bool;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn powi(self, k: i32) -> Self;
}

impl Scalar for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn re(self) -> f64 {
        self
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn powi(self, k: i32) -> Self {
        f64::powi(self, k)
    }
}

/// First-order dual number `re + du·ε`, `ε² = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dual {
    pub re: f64,
    pub du: f64,
}

impl Dual {
    /// Leaf for coordinate `index` when differentiating along `direction`.
    pub fn leaf(index: usize, value: f64, direction: usize) -> Dual {
        Dual {
            re: value,
            du: if index == direction { 1.0 } else { 0.0 },
        }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual { re: self.re + o.re, du: self.du + o.du }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual { re: self.re - o.re, du: self.du - o.du }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual {
            re: self.re * o.re,
            du: self.du * o.re + self.re * o.du,
        }
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual {
            re: self.re / o.re,
            du: (self.du * o.re - self.re * o.du) / (o.re * o.re),
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual { re: -self.re, du: -self.du }
    }
}

impl Scalar for Dual {
    fn constant(c: f64) -> Self {
        Dual { re: c, du: 0.0 }
    }
    fn re(self) -> f64 {
        self.re
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.du.is_finite()
    }
    fn exp(self) -> Self {
        let e = self.re.exp();
        Dual { re: e, du: self.du * e }
    }
    fn ln(self) -> Self {
        Dual { re: self.re.ln(), du: self.du / self.re }
    }
    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        Dual { re: s, du: self.du / (2.0 * s) }
    }
    fn powi(self, k: i32) -> Self {
        let du = if k == 0 {
            0.0
        } else {
            f64::from(k) * self.re.powi(k - 1) * self.du
        };
        Dual { re: self.re.powi(k), du }
    }
}

/// Evaluates `e` in scalar type `S`; `leaf(i, x[i])` builds coordinate `i`.
pub(crate) fn eval_generic<S: Scalar>(
    e: &Expr,
    x: &[f64],
    leaf: &dyn Fn(usize, f64) -> S,
) -> Result<S, EvalError> {
    eval_node(e, x, leaf)
}

fn eval_node<S: Scalar>(e: &Expr, x: &[f64], leaf: &dyn Fn(usize, f64) -> S) -> Result<S, EvalError> {
    let out = match e {
        Expr::Const(c) => S::constant(*c),
        Expr::Var(i) => {
            if *i == 0 || *i > x.len() {
                return Err(EvalError::VariableOutOfRange { index: *i, dim: x.len() });
            }
            leaf(*i - 1, x[*i - 1])
        }
        Expr::Unary(op, a) => {
            let a = eval_node(a, x, leaf)?;
            match op {
                UnaryOp::Neg => -a,
                UnaryOp::Exp => a.exp(),
                UnaryOp::Log => {
                    if a.re() <= 0.0 {
                        return Err(domain(e, DomainKind::LogNonPositive));
                    }
                    a.ln()
                }
                UnaryOp::Sqrt => {
                    if a.re() < 0.0 {
                        return Err(domain(e, DomainKind::SqrtNegative));
                    }
                    a.sqrt()
                }
            }
        }
        Expr::Binary(op, a, b) => {
            let a = eval_node(a, x, leaf)?;
            let b = eval_node(b, x, leaf)?;
            match op {
                BinaryOp::Add => a + b,
                BinaryOp::Sub => a - b,
                BinaryOp::Mul => a * b,
                BinaryOp::Div => {
                    if b.re() == 0.0 {
                        return Err(domain(e, DomainKind::DivisionByZero));
                    }
                    a / b
                }
            }
        }
        Expr::Pow(a, k) => {
            let a = eval_node(a, x, leaf)?;
            if *k < 0 && a.re() == 0.0 {
                return Err(domain(e, DomainKind::DivisionByZero));
            }
            a.powi(*k)
        }
    };
    if !out.is_finite() {
        return Err(domain(e, DomainKind::NonFinite));
    }
    Ok(out)
}

fn domain(e: &Expr, kind: DomainKind) -> EvalError {
    EvalError::Domain { node: e.to_string(), kind }
}
