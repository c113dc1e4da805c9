//! Universal node polynomials of polarized surfaces, computed exactly.
//!
//! Pipeline: torus localization on Hilbert schemes of points of toric
//! surfaces ([`hilb_localize`]) evaluates the Euler characteristics of
//! relative Hilbert schemes of the universal curve; exact interpolation
//! ([`universal_fit`]) turns those into universal polynomials in
//! `(x, y, z, t) = (L², L.K, K², c₂)`; the BPS inversion ([`bps`]) extracts
//! the δ-nodal count ([`nodepoly`]).
//!
//! Everything is generic over an exact [`Scalar`]; the aliases below fix it to
//! arbitrary-precision rationals, which is what the pipeline uses.

pub mod algebra;
pub mod bps;
pub mod config;
pub mod error;
pub mod hilb_localize;
pub mod json;
pub mod nodepoly;
pub mod toric;
pub mod universal_fit;
pub mod validation;

pub use algebra::{Monomial, MultiPoly, Ring, Scalar, TruncSeries, Var};
pub use config::Config;
pub use error::NodalError;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub type Rational = BigRational;
pub type Poly = MultiPoly<Rational>;
pub type RationalSeries = TruncSeries<Rational>;
pub type PolySeries = TruncSeries<Poly>;

pub type Result<T, E = NodalError> = std::result::Result<T, E>;
