//! Numerical machinery for nonlocal problems for the Poisson equation in
//! plane angles.
//!
//! - [`geometry`]: rays, sectors and the polar grid.
//! - [`difference_ops`]: the difference operator `R_K`, its matrix `R_1`,
//!   spectrum, inverse and adjoint.
//! - [`pencil`]: the operator pencil on the arc, closed-form and numeric
//!   eigenvalues, the adjoint transmission pencil, and solvability
//!   certificates for weighted scales.
//! - [`sector_solver`]: finite differences for `-Δ R_K w + R_K w = f` and
//!   for the nonlocal Poisson problem through `u = u_g + R_K w`.
//! - [`green_check`]: quadrature verification of the nonlocal Green formulas.
//! - [`weighted_norms`]: discrete `E_a^l` and `H_a^l` norms and a trace probe.

pub mod difference_ops;
pub mod error;
pub mod geometry;
pub mod green_check;
pub mod pencil;
pub mod sector_solver;
pub mod weighted_norms;

pub use error::{Error, Result};
