//! Induced representations of the Lorentz group on the orbit of a timelike
//! stability vector.
//!
//! The crate is organised bottom-up:
//!
//! * [`minkowski`]: metric, four-vectors, Lorentz matrices, the `h` projector
//!   and the Levi-Civita symbol.
//! * [`sl2c`]: the covering group, the vector/matrix map and spinor boosts.
//! * [`little_group`]: Wigner rotations `D(Λ, n)` and the induced field law.
//! * [`angular`]: exact Clebsch-Gordan, Racah and 9j coefficients, N-spin
//!   decomposition, democratic coupling and coupling trees.
//! * [`tensors`]: direct products of Wigner rotations and their reduction.
//! * [`dirac`]: gamma algebra, spinor assembly and the n-projected algebra.
//! * [`poincare`]: a normal-ordering engine for the on-orbit Poincaré algebra.
//! * [`fields`]: the quaternionic field calculus for vector potentials.
//! * [`verify`]: the property batteries behind `orbitrep verify`.
//!
//! Conventions: signature `(-,+,+,+)`, `ħ = c = 1`, `ε_{0123} = +1`.

pub mod angular;
pub mod dirac;
pub mod error;
pub mod fields;
pub mod little_group;
pub mod minkowski;
pub mod poincare;
pub mod sl2c;
pub mod tensors;
pub mod verify;

pub use error::{OrbitError, Result};
pub use little_group::{OrbitPoint, WignerRotation};
pub use minkowski::{FourVector, LorentzMatrix};
pub use sl2c::Sl2cElement;

/// Complex double used by every numeric module.
pub type C64 = num_complex::Complex64;

/// Default cap on the dimension `2^N` of N-spin product spaces.
pub const DEFAULT_STATE_CAP: usize = 1024;

/// Environment variable overriding [`DEFAULT_STATE_CAP`].
pub const CAP_ENV_VAR: &str = "ORBITREP_CAP";

/// Largest admissible product-space dimension, honouring `ORBITREP_CAP`.
pub fn state_cap() -> usize {
    std::env::var(CAP_ENV_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v >= 2)
        .unwrap_or(DEFAULT_STATE_CAP)
}

/// Rejects `n_spins` whose product space `2^n_spins` exceeds `cap`.
pub fn check_spin_count(n_spins: usize, cap: usize) -> Result<()> {
    if n_spins == 0 {
        return Err(OrbitError::InvalidArgument("need at least one spin".into()));
    }
    if n_spins >= usize::BITS as usize - 1 || (1usize << n_spins) > cap {
        return Err(OrbitError::CapExceeded { n_spins, cap });
    }
    Ok(())
}
