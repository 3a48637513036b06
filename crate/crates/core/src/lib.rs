//! Bound states of the one-dimensional stationary Gross–Pitaevskii equation
//! treated as quasi-time dynamics of a spinor `(ψ, ψ')`.
//!
//! Closed forms cover a single delta defect and a finite square well (via
//! Jacobi elliptic functions); general piecewise potentials use ordered
//! transfer-matrix products with a Lie–Trotter split for the cubic term. An
//! independent RK4 shooting integrator serves as the reference.

// negated comparisons are how NaN is rejected throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod delta_defect;
pub mod elliptic;
pub mod model;
pub mod oracle;
pub mod propagator;
pub mod quad;
pub mod roots;
pub mod square_well;
