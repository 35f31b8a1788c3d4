//! Exact computations in higher-level q-deformed Fock spaces.
//!
//! The crate implements q-wedge straightening and normal ordering, the bar
//! involution, boson and Schur-type operators, and a triangular solver for
//! the canonical bases `G±(λ; s)`. The [`verify`] module checks the
//! higher-level product theorem `G⁻(λ; s) = S_λ̌ G⁻(λ̃; s)` on small blocks.

pub mod canonical;
pub mod coeff;
pub mod combinatorics;
pub mod error;
pub mod fock;
pub mod verify;
pub mod wedge;

pub use coeff::{Lattice, LaurentRat};
pub use combinatorics::{Multipartition, Partition, RibbonStep};
pub use error::{Error, Result};
