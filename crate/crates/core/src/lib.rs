//! Numerical toolkit for BMOA-type spaces of analytic functions on the unit
//! disc: norm and Carleson-measure estimates, composition semigroups and
//! Volterra-type integration operators.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod quadrature;
pub mod sampling;
pub mod semigroup;
pub mod spaces;
pub mod volterra;

pub use analytic::{AnalyticFn, CatalogSymbol, PointMap};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use quadrature::{CarlesonBox, GridSpec, IntegralResult, QuadPoint};
