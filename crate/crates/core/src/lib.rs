//! Exact verification toolkit for the mirror of the Grassmannian `Gr_{n-k}(C^n)`.
//!
//! The A-side (small quantum cohomology connection) and the B-side
//! (Pluecker-coordinate superpotential, its torus and Richardson charts,
//! cluster charts and the vector fields acting on the superpotential) are
//! built from the same exact arithmetic so that identities between them can
//! be checked with zero tolerance.

pub mod cluster;
pub mod connection;
pub mod ehx;
pub mod error;
pub mod exact;
pub mod exec;
pub mod fields;
pub mod plucker;
pub mod report;
pub mod richardson;
pub mod rng;
pub mod schubert;

pub use error::{Error, Result};
pub use exact::{Jet, LaurentPoly, Matrix, QSeries, Rational, Ring};
pub use exec::Exec;
pub use schubert::{GrassCtx, KSubset, Partition};
