//! Exact psi-class intersection numbers on the moduli spaces of stable
//! curves.
//!
//! The primary evaluator ([`mr::MrEngine`]) sums traces of products of the
//! coefficient matrices of an explicit 2×2 resolvent over permutations and
//! lattice points. [`virasoro::VirasoroOracle`] recomputes the same numbers
//! from the Virasoro constraints, and [`asymptotics`] reconstructs the exact
//! rational dependence on the genus and its `1/g` expansion.

pub mod arith;
pub mod asymptotics;
pub mod coefficients;
pub mod error;
pub mod index;
pub mod mr;
pub mod source;
pub mod store;
pub mod verify;
pub mod virasoro;

pub use arith::Rational;
pub use error::{Error, Result};
pub use index::{CorrelatorKey, MultiIndex};
pub use source::{CorrelatorSource, Producer};
