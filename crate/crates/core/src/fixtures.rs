//! Problem files shipped with the crate.

/// `min x1 + x2` over `{1 - x1 x2 <= 0, x >= 0}`; optimum `(1, 1)`, value 2.
pub const HYP1: &str = include_str!("../fixtures/hyp1.prob");
/// HYP1 with the hyperbola constraint scaled by 2.
pub const HYP1_SCALED: &str = include_str!("../fixtures/hyp1_scaled.prob");
/// `min x1 + 2 x2` over the HYP1 set with bound rows; optimum `(√2, √2/2)`.
pub const HYP2: &str = include_str!("../fixtures/hyp2.prob");
/// Outside of the unit disk, a nonconvex feasible set.
pub const DISK_COMP: &str = include_str!("../fixtures/diskcomp.prob");
/// `min x1` over `{x1² <= 0}`: feasible set `{0}`, no Slater point.
pub const DEGEN: &str = include_str!("../fixtures/degen.prob");
/// Projection onto a triangle; all constraints affine; optimum `(1, 1)`.
pub const AFFINE: &str = include_str!("../fixtures/affine.prob");
/// Infeasible problem.
pub const EMPTY: &str = include_str!("../fixtures/empty.prob");

/// Fixtures whose feasible set is convex with a Slater point.
pub const CONVEX_SETS: &[(&str, &str)] = &[
    ("hyp1", HYP1),
    ("hyp1_scaled", HYP1_SCALED),
    ("hyp2", HYP2),
    ("affine", AFFINE),
];
