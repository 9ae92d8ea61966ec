//! Barrier homotopy for KKT points and a brute-force grid oracle.

mod barrier;
mod oracle;

use thiserror::Error;

use crate::expr::EvalError;

pub use barrier::{
    barrier_solve, barrier_solve_traced, Iterate, Schedule, SolveResult, StageStop, StageTrace, MAX_STAGE_ITERATIONS,
};
pub use oracle::{brute_force_oracle, OracleResult, MAX_GRID_POINTS, MAX_ORACLE_DIM};

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    #[error("starting point is not strictly feasible")]
    NotInterior,
    #[error("invalid barrier schedule {0:?}: need mu0 > 0 and 0 < factor < 1")]
    BadSchedule(Schedule),
    #[error("oracle supports n <= {MAX_ORACLE_DIM}, got n = {n}")]
    OracleDimension { n: usize },
    #[error("oracle grid of {points_per_axis} points per axis in {n} dimensions is out of range")]
    OracleGrid { points_per_axis: usize, n: usize },
    #[error("no feasible grid point with {points_per_axis} points per axis; try a finer grid")]
    OracleInfeasible { points_per_axis: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// One JSON object per stage, newline-terminated.
pub fn trace_json_lines(result: &SolveResult) -> String {
    let mut out = String::new();
    for s in &result.stages {
        out.push_str(&serde_json::to_string(s).expect("stage trace serializes"));
        out.push('\n');
    }
    out
}
