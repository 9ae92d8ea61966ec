//! Line-oriented problem files.
//!
//! ```text
//! # comment
//! n = 2
//! box = [0,10] x [0,10]
//! minimize: x1 + x2
//! subject_to:
//!   1 - x1*x2 <= 0
//!   -x1 <= 0
//! ```

use crate::expr::Expr;

use super::{Interval, ModelError, Problem};

pub fn load_problem(text: &str) -> Result<Problem, ModelError> {
    let mut n: Option<usize> = None;
    let mut bounds: Option<(usize, Vec<Interval>)> = None;
    let mut objective: Option<(usize, String)> = None;
    let mut constraints: Vec<(usize, String)> = Vec::new();
    let mut in_constraints = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| ModelError::Syntax { line, message };

        if let Some(rest) = content.strip_prefix("minimize:") {
            objective = Some((line, rest.trim().to_string()));
            in_constraints = false;
        } else if content == "subject_to:" {
            in_constraints = true;
        } else if let Some((key, value)) = keyed(content) {
            in_constraints = false;
            match key {
                "n" => {
                    let v: usize = value
                        .parse()
                        .map_err(|_| syntax(format!("invalid dimension `{value}`")))?;
                    n = Some(v);
                }
                "box" => bounds = Some((line, parse_box(value).map_err(syntax)?)),
                other => return Err(syntax(format!("unknown key `{other}`"))),
            }
        } else if in_constraints {
            let (lhs, rhs) = content
                .rsplit_once("<=")
                .ok_or_else(|| syntax("constraint must have the form `<expr> <= 0`".into()))?;
            match rhs.trim().parse::<f64>() {
                Ok(z) if z == 0.0 => {}
                _ => return Err(syntax("constraint right-hand side must be 0".into())),
            }
            constraints.push((line, lhs.trim().to_string()));
        } else {
            return Err(syntax(format!("unexpected line `{content}`")));
        }
    }

    let n = n.ok_or(ModelError::MissingDimension)?;
    if n == 0 {
        return Err(ModelError::ZeroDimension);
    }
    let (objective_line, objective_text) = objective.ok_or(ModelError::MissingObjective)?;
    let (box_line, bounds) = bounds.ok_or(ModelError::MissingBox)?;
    if bounds.len() != n {
        return Err(ModelError::Syntax {
            line: box_line,
            message: format!("box has {} intervals but n = {n}", bounds.len()),
        });
    }
    if constraints.is_empty() {
        return Err(ModelError::NoConstraints);
    }
    let parse = |line: usize, text: &str| Expr::parse(text, n).map_err(|source| ModelError::Parse { line, source });
    let objective = parse(objective_line, &objective_text)?;
    let constraints = constraints
        .iter()
        .map(|(line, text)| parse(*line, text))
        .collect::<Result<Vec<_>, _>>()?;
    Problem::new(n, objective, constraints, bounds)
}

/// `key = value` where key is a bare identifier.
fn keyed(content: &str) -> Option<(&str, &str)> {
    let (key, value) = content.split_once('=')?;
    let key = key.trim();
    if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') || value.starts_with('=') {
        return None;
    }
    Some((key, value.trim()))
}

/// `[lo,hi] x [lo,hi] x ...`
fn parse_box(text: &str) -> Result<Vec<Interval>, String> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    loop {
        let body = rest
            .strip_prefix('[')
            .ok_or_else(|| format!("expected `[` in box at `{rest}`"))?;
        let (inner, after) = body.split_once(']').ok_or("unterminated `[` in box")?;
        let (lo, hi) = inner.split_once(',').ok_or("box interval must be `[lo,hi]`")?;
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid box bound `{}`", s.trim()))
        };
        let (lo, hi) = (num(lo)?, num(hi)?);
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(format!("box interval [{lo}, {hi}] needs finite lo < hi"));
        }
        out.push(Interval::new(lo, hi));
        rest = after.trim();
        if rest.is_empty() {
            return Ok(out);
        }
        rest = rest
            .strip_prefix('x')
            .ok_or_else(|| format!("expected `x` between box intervals at `{rest}`"))?
            .trim();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn loads_hyp1() {
        let p = load_problem(fixtures::HYP1).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.num_constraints(), 3);
        assert_eq!(p.bounds(), &[Interval::new(0.0, 10.0), Interval::new(0.0, 10.0)]);
        assert_eq!(p.objective().to_string(), "(x1 + x2)");
    }

    #[test]
    fn loads_degen() {
        let p = load_problem(fixtures::DEGEN).unwrap();
        assert_eq!((p.dim(), p.num_constraints()), (1, 1));
    }

    #[test]
    fn rejects_problem_without_constraints() {
        let err = load_problem("n = 1\nbox = [0,1]\nminimize: x1\nsubject_to:\n").unwrap_err();
        assert!(matches!(err, ModelError::NoConstraints));
    }

    #[test]
    fn rejects_missing_objective() {
        let err = load_problem("n = 1\nbox = [0,1]\nsubject_to:\n -x1 <= 0\n").unwrap_err();
        assert!(matches!(err, ModelError::MissingObjective));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "n = 2\nbox = [0,1] x [0,1]\nminimize: x1 +\nsubject_to:\n -x1 <= 0\n";
        match load_problem(text).unwrap_err() {
            ModelError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other}"),
        }
        let text = "n = 2\nbox = [0,1] x [0,1]\nminimize: x1\nsubject_to:\n -x3 <= 0\n";
        match load_problem(text).unwrap_err() {
            ModelError::Parse { line, .. } => assert_eq!(line, 5),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn malformed_boxes() {
        for bad in ["[0,1] x", "[1,0]", "[0;1]", "0,1", "[0,1] [0,1]", "[a,1]"] {
            assert!(parse_box(bad).is_err(), "{bad}");
        }
        let text = "n = 2\nbox = [0,1]\nminimize: x1\nsubject_to:\n -x1 <= 0\n";
        assert!(matches!(load_problem(text).unwrap_err(), ModelError::Syntax { line: 2, .. }));
    }

    #[test]
    fn constraint_rhs_must_be_zero() {
        let text = "n = 1\nbox = [0,1]\nminimize: x1\nsubject_to:\n x1 <= 1\n";
        assert!(matches!(load_problem(text).unwrap_err(), ModelError::Syntax { line: 5, .. }));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\nn = 1   # dim\nbox = [-1, 1]\nminimize: x1 # obj\nsubject_to:\n\n  x1^2 <= 0  # only one\n";
        let p = load_problem(text).unwrap();
        assert_eq!(p.num_constraints(), 1);
    }
}
