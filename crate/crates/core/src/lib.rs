//! Exact tautological relations on moduli spaces of curves from the `r = 1/2`
//! specialization of spin Witten classes, and reductions built on them.

pub mod acceptance;
pub mod error;
pub mod graphs;
pub mod intersect;
pub mod poly;
pub mod qp;
pub mod reduce;
pub mod relation;
pub mod scalar;
pub mod taut;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Rational = num_rational::BigRational;
pub type UniPoly = poly::Poly<Rational>;
pub type RationalBiPoly = poly::BiPoly<Rational>;
