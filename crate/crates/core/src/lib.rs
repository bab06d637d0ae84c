//! Superposed-mesh finite elements for the 3D Poisson problem.
//!
//! A coarse global mesh covers the whole box and a fine local mesh of
//! Lagrange hexahedra is laid over a sub-box; the discrete solution is the
//! sum of the two fields inside the sub-box. The global mesh either uses
//! Lagrange bases (the conventional scheme) or open uniform B-splines, whose
//! `C^{p-1}` smoothness keeps the coupling integrands smooth and the two
//! bases linearly independent.
//!
//! Module map:
//!
//! * [`quadrature`]: Gauss-Legendre rules and tensor products.
//! * [`basis`]: Lagrange and B-spline bases in 1D and 3D.
//! * [`mesh`]: structured global/local meshes and the explicit point location.
//! * [`assembly`]: block stiffness matrix and load vector with Dirichlet elimination.
//! * [`solver`]: diagonally scaled CG and the Cholesky definiteness test.
//! * [`verify`]: manufactured solution, L2 errors and the study drivers.

pub mod assembly;
pub mod basis;
pub mod error;
pub mod mesh;
pub mod quadrature;
pub mod solver;
mod util;
pub mod verify;

pub use error::{Error, Result};
