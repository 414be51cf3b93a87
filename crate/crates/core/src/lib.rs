//! Exact equivariant K-theory and cohomology of flag varieties `G/P`,
//! Gromov–Witten invariants of line degrees, and big quantum K-theory
//! modulo line degrees.

pub mod algebra;
pub mod cartan;
pub mod error;
pub mod gkm;
pub mod hgkm;
pub mod kgkm;
pub mod lines;
pub mod qkbig;

pub use algebra::{LaurentPoly, Novikov, Rational, TSeries};
pub use cartan::{CartanType, Family, FlagVariety, Limits, ParabolicSubset, RootSystem, WeylGroup};
pub use error::{Error, Result};
