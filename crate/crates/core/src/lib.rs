//! Multiplier-lattice calculus for partial *-algebras of function spaces.
//!
//! * [`exponent`]: exact Lebesgue exponents and their enriched `p±` decorations.
//! * [`space`]: the `L^p` chain, the `L^(p,q)` square and amalgam spaces.
//! * [`galois`]: finite compatibility relations and their closure lattices.
//! * [`numerics`]: sampled functions, norms and inequality checks.
//! * [`lhs`]: a truncated lattice of Hilbert spaces and its operators.
//! * [`verify`]: the verification suites shared by tests and the CLI.

pub mod exponent;
pub mod space;
pub mod galois;
pub mod numerics;
pub mod lhs;
pub mod verify;
