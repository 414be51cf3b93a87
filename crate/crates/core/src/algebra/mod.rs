//! Exact coefficient arithmetic.

pub mod laurent;
pub mod linsolve;
pub mod tseries;

pub use laurent::{integer, rational, LaurentPoly, Rational};
pub use linsolve::{determinant, inverse, solve_linear};
pub use tseries::{Novikov, TSeries, TermKey, DEFAULT_ORDER};
