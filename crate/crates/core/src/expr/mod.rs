//! Scalar expressions over `x1..xn`: parsing, evaluation and exact
//! forward-mode gradients.
//!
//! Expressions are immutable trees. Every operation is a pure function of the
//! tree and the point, so a single [`Expr`] can be shared across threads.

mod dual;
mod parse;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use dual::{DomainKind, EvalError};
pub use parse::{ParseError, ParseErrorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnaryOp {
    Neg,
    Exp,
    Log,
    Sqrt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Expression tree. Variables are 1-based (`Var(1)` is `x1`).
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    /// Integer power with a constant exponent.
    Pow(Box<Expr>, i32),
}

/// Value and gradient of an expression at a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientVector {
    pub point: Vec<f64>,
    pub value: f64,
    pub grad: Vec<f64>,
}

impl Expr {
    /// Parses `text` as an expression over `x1..xn`.
    pub fn parse(text: &str, n: usize) -> Result<Expr, ParseError> {
        parse::parse(text, n)
    }

    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn var(index: usize) -> Expr {
        Expr::Var(index)
    }

    pub fn unary(op: UnaryOp, arg: Expr) -> Expr {
        Expr::Unary(op, Box::new(arg))
    }

    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn pow(base: Expr, exponent: i32) -> Expr {
        Expr::Pow(Box::new(base), exponent)
    }

    /// Largest variable index referenced, or 0 for a constant expression.
    pub fn max_var(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => *i,
            Expr::Unary(_, a) | Expr::Pow(a, _) => a.max_var(),
            Expr::Binary(_, a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Unary(_, a) | Expr::Pow(a, _) => 1 + a.size(),
            Expr::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    /// IEEE double evaluation. Domain violations are errors, never NaN.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64, EvalError> {
        dual::eval_generic::<f64>(self, x, &|_, v| v)
    }

    /// Exact gradient by forward-mode dual numbers, one pass per coordinate.
    ///
    /// The `value` field comes from the same arithmetic as [`Expr::evaluate`]
    /// and is bitwise identical to it.
    pub fn gradient(&self, x: &[f64]) -> Result<GradientVector, EvalError> {
        let n = x.len();
        let mut grad = vec![0.0; n];
        let mut value = None;
        for (i, slot) in grad.iter_mut().enumerate() {
            let d = dual::eval_generic(self, x, &|j, v| dual::Dual::leaf(j, v, i))?;
            value.get_or_insert(d.re);
            *slot = d.du;
        }
        let value = match value {
            Some(v) => v,
            None => self.evaluate(x)?,
        };
        Ok(GradientVector {
            point: x.to_vec(),
            value,
            grad,
        })
    }
}

fn unary_name(op: UnaryOp) -> &'static str {
    match op {
        UnaryOp::Neg => "-",
        UnaryOp::Exp => "exp",
        UnaryOp::Log => "log",
        UnaryOp::Sqrt => "sqrt",
    }
}

fn binary_symbol(op: BinaryOp) -> char {
    match op {
        BinaryOp::Add => '+',
        BinaryOp::Sub => '-',
        BinaryOp::Mul => '*',
        BinaryOp::Div => '/',
    }
}

/// Canonical serializer: fully parenthesized, re-parses to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if c.is_sign_negative() => write!(f, "(-{})", -c),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::Unary(UnaryOp::Neg, a) => write!(f, "(-{a})"),
            Expr::Unary(op, a) => write!(f, "{}({a})", unary_name(*op)),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", binary_symbol(*op)),
            Expr::Pow(a, k) => write!(f, "({a}^{k})"),
        }
    }
}

impl Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Expr {
        Expr::parse(s, n).unwrap()
    }

    #[test]
    fn evaluates_hyperbola_constraint() {
        let e = p("1 - x1*x2", 2);
        assert_eq!(e.evaluate(&[1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(e.evaluate(&[2.0, 3.0]).unwrap(), -5.0);
    }

    #[test]
    fn log_of_zero_is_a_domain_error() {
        let e = p("log(x1)", 1);
        match e.evaluate(&[0.0]) {
            Err(EvalError::Domain { node, kind }) => {
                assert_eq!(kind, DomainKind::LogNonPositive);
                assert_eq!(node, "log(x1)");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn division_by_zero_and_sqrt_of_negative() {
        assert!(matches!(
            p("1/x1", 1).evaluate(&[0.0]),
            Err(EvalError::Domain { kind: DomainKind::DivisionByZero, .. })
        ));
        assert!(matches!(
            p("sqrt(x1)", 1).evaluate(&[-1.0]),
            Err(EvalError::Domain { kind: DomainKind::SqrtNegative, .. })
        ));
        assert!(matches!(
            p("x1^-1", 1).evaluate(&[0.0]),
            Err(EvalError::Domain { kind: DomainKind::DivisionByZero, .. })
        ));
    }

    #[test]
    fn overflow_is_reported_not_propagated() {
        assert!(matches!(
            p("exp(x1)", 1).evaluate(&[1000.0]),
            Err(EvalError::Domain { kind: DomainKind::NonFinite, .. })
        ));
    }

    #[test]
    fn sqrt_at_zero_has_value_but_no_gradient() {
        let e = p("sqrt(x1)", 1);
        assert_eq!(e.evaluate(&[0.0]).unwrap(), 0.0);
        assert!(e.gradient(&[0.0]).is_err());
    }

    #[test]
    fn gradient_of_hyperbola_constraint() {
        let g = p("1 - x1*x2", 2).gradient(&[2.0, 3.0]).unwrap();
        assert_eq!(g.value, -5.0);
        assert_eq!(g.grad, vec![-3.0, -2.0]);
        assert_eq!(g.point, vec![2.0, 3.0]);
    }

    #[test]
    fn gradient_at_stationary_point() {
        let g = p("x1^2", 1).gradient(&[0.0]).unwrap();
        assert_eq!(g.value, 0.0);
        assert_eq!(g.grad, vec![0.0]);
    }

    #[test]
    fn gradient_of_transcendental_terms() {
        let g = p("exp(x1) * log(x2) + sqrt(x1*x2)", 2)
            .gradient(&[1.0, 4.0])
            .unwrap();
        let e1 = 1f64.exp();
        let want0 = e1 * 4f64.ln() + 0.5 * 4.0 / 2.0;
        let want1 = e1 / 4.0 + 0.5 * 1.0 / 2.0;
        assert!((g.grad[0] - want0).abs() < 1e-14);
        assert!((g.grad[1] - want1).abs() < 1e-14);
    }

    #[test]
    fn zero_dimensional_gradient_still_has_value() {
        let g = p("2 + 3", 0).gradient(&[]).unwrap();
        assert_eq!(g.value, 5.0);
        assert!(g.grad.is_empty());
    }

    #[test]
    fn canonical_print() {
        assert_eq!(p("1 - x1*x2", 2).to_string(), "(1 - (x1 * x2))");
        assert_eq!(p("-x1^2", 1).to_string(), "(-(x1^2))");
        assert_eq!(p("exp(x1)/2", 1).to_string(), "(exp(x1) / 2)");
        assert_eq!(p("x1^-3", 1).to_string(), "(x1^-3)");
    }

    #[test]
    fn max_var_and_size() {
        let e = p("x1 + 3*x4", 4);
        assert_eq!(e.max_var(), 4);
        assert_eq!(e.size(), 5);
        assert_eq!(p("7", 3).max_var(), 0);
    }
}
