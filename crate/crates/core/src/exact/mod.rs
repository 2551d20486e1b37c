//! Exact arithmetic: rationals, sparse Laurent polynomials, dense matrices,
//! truncated q-series and first-order jets.

mod jet;
mod laurent;
mod matrix;
mod ring;
mod series;

pub use jet::Jet;
pub use laurent::{make_vars, LaurentPoly, TermJson, Vars};
pub use matrix::Matrix;
pub use ring::{parse_rational, rat, rat_int, Rational, Ring};
pub use series::QSeries;
