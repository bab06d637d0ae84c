//! Jacobi-preconditioned conjugate gradients and a Cholesky
//! positive-definiteness test.

mod cg;
mod cholesky;

pub use cg::{cg_solve, CgSettings, DiagonalPreconditioner, Preconditioner, SolveReport};
pub use cholesky::{
    cholesky_spd_test, reverse_cuthill_mckee, CholeskySettings, Ordering, PivotFailure, SpdVerdict,
    DEFAULT_ENTRY_LIMIT, PIVOT_TOLERANCE,
};
