//! Exact verification laboratory for Toeplitz/Hankel τ-functions.
//!
//! The crate builds τ-functions as determinants of time-deformed moment
//! matrices over a ring of weighted truncated power series, and checks them
//! against brute-force combinatorics of longest increasing subsequences, the
//! Toda/Toeplitz lattice equations, Virasoro constraints and three Painlevé V
//! equations.

pub mod closed_forms;
pub mod combinatorics;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod painleve;
pub mod scalar;
pub mod schur;
pub mod report;
pub mod series;
pub mod suites;
pub mod tau;
pub mod virasoro;

pub use error::{Error, Result};
pub use scalar::PiRational;
pub use series::{VariableTable, WeightedSeries};
