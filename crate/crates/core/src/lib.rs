//! Real polyhedral homotopy solver.
//!
//! Finds the real torus solutions of a square sparse polynomial system by
//! tracking the real roots of binomial start systems, one per mixed cell of the
//! subdivision induced by the coefficient lifting `w(a) = ln|c_a|`.
//!
//! Pipeline:
//!
//! - [`patchwork::certify_patchwork`] decides whether the lifting is far enough
//!   inside its mixed cell cone that every real solution is reached.
//! - [`binomial::generate_binomials`] builds the start systems, and
//!   [`binomial::solve_binomial_real`] solves them over the reals through the
//!   Smith normal form of the exponent matrix.
//! - [`tracking::rph_track`] follows every real start point to `t = 1` and,
//!   optionally, certifies the endpoints with the Krawczyk operator
//!   ([`certify`]).

// Index loops mirror the matrix formulas; negated comparisons reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod binomial;
pub mod certify;
pub mod error;
pub mod exact;
pub mod interval;
pub mod linalg;
pub mod mixed_cells;
pub mod patchwork;
pub mod poly;
pub mod snf;
pub mod tracking;

#[cfg(test)]
pub(crate) mod fixtures;

pub use binomial::{
    count_binomial_real, generate_binomials, generate_binomials_scaled, solve_binomial_real,
    BinomialSystem,
};
pub use certify::{certify_solution_set, krawczyk_test, CertificateOutcome};
pub use error::{Result, RphError};
pub use interval::{Interval, IntervalBox};
pub use mixed_cells::{
    cayley, dual_cone_generators, enumerate_mixed_cells, integerize, mixed_volume,
    mixed_volume_seeded, CayleyConfiguration, DualConeGenerator, IntegerLifting, MixedCell,
};
pub use patchwork::{certify_patchwork, certify_patchwork_scaled, PatchworkCertificate};
pub use poly::{parse_system, Lifting, SparsePolynomial, SparseSystem};
pub use snf::{smith_normal_form, IntMatrix, SmithDecomposition};
pub use tracking::{
    rph_track, rph_track_scaled, PathResult, PathStatus, RealPolyhedralHomotopy, SolveReport,
    TrackerOptions,
};
