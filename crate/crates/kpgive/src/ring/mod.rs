//! Exact coefficient rings and the truncated series algebra.

pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod series;
pub mod subst;

pub use matrix::{Mat, MatrixSeries, PolyMatrix};
pub use poly::{Monomial, Restriction, TruncPoly, Var};
pub use scalar::{DualScalar, Ring, Scalar};
pub use series::ZSeries;
pub use subst::{invert_coordinate_map, linear_part, substitute_series};
