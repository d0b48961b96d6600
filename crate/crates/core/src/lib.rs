//! Finite-space toolkit for essential distances, e⁰-metrics and fixed points
//! of multivalued maps.
//!
//! Everything here works on finite metric spaces, where convergence means
//! eventual constancy and every nonempty subset is closed and bounded. Under
//! those semantics the generalized-distance axioms, the hyperspace metric
//! `D_κ`, the MT(λ) characterizations and the contraction-type hypotheses of
//! the fixed-point theorems all become exactly decidable, and this crate
//! decides them.
//!
//! The crate is `no_std` (it needs `alloc`). Parsing, file formats and the
//! command-line front end live in the `edist` crate.
//!
//! Module map:
//!
//! - [`spaces`]: finite metric spaces, candidate distances κ, axiom checkers.
//! - [`mt`]: piecewise-linear gauges and the ten MT(λ) characterizations.
//! - [`hyperspace`]: `ξ_κ`, `D_κ`, the Hausdorff metric and their properties.
//! - [`solver`]: multivalued maps, hypothesis checkers, orbits, theorem runs.
//! - [`gen`]: seeded instance generation and mutation.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod gen;
pub mod hyperspace;
pub mod instance;
pub mod matrix;
pub mod mt;
pub mod report;
pub mod solver;
pub mod spaces;

pub use error::Error;
pub use instance::Instance;
pub use matrix::SquareMatrix;
pub use mt::PiecewiseLinearGauge;
pub use report::{Rule, Verdict, Witness};
pub use spaces::{DistanceFunction, FiniteMetricSpace, FiniteSubset};

/// Crate-wide result alias.
pub type Result<T, E = Error> = core::result::Result<T, E>;
