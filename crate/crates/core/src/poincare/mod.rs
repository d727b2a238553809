//! The on-orbit Poincaré algebra: a normal-ordering engine for polynomials
//! in `x, p, n, ∂n`, closure of the `M_n` algebra on the unit shell,
//! Pauli-Lubanski checks and the `n(p)` Jacobian.

mod algebra;
mod expr;
mod numeric;

pub use algebra::*;
pub use expr::*;
pub use numeric::*;
