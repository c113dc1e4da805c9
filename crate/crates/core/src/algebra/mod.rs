//! Exact arithmetic substrate: rationals, multivariate polynomials and
//! truncated power series over a pluggable coefficient ring.

mod multipoly;
mod ring;
mod series;

use thiserror::Error;

pub use multipoly::{Monomial, MultiPoly, Var, NUM_VARS};
pub use ring::{binomial, factorial, rat, ratio, Ring, Scalar};
pub use series::{binomial_series, TruncSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("series mismatch: {left} vs {right}")]
    Mismatch { left: String, right: String },
    #[error("constant term is not invertible")]
    NotInvertible,
    #[error("{0}")]
    Precondition(String),
}

/// Cauchy product of two series of the same variable and order.
pub fn series_mul<R: Ring>(
    a: &TruncSeries<R>,
    b: &TruncSeries<R>,
) -> Result<TruncSeries<R>, AlgebraError> {
    a.try_mul(b)
}

pub fn series_invert<R: Ring>(a: &TruncSeries<R>) -> Result<TruncSeries<R>, AlgebraError> {
    a.invert()
}

pub fn series_reversion<R: Ring>(a: &TruncSeries<R>) -> Result<TruncSeries<R>, AlgebraError> {
    a.reversion()
}

/// `(1 - q)^(a·g + b)` through `q^order`, coefficients polynomial in `g`.
pub fn binom_symbolic<S: Scalar>(
    genus_coeff: &S,
    constant: &S,
    order: usize,
) -> TruncSeries<MultiPoly<S>> {
    let exponent = MultiPoly::var(Var::G).scale_by(genus_coeff) + MultiPoly::constant(constant.clone());
    binomial_series("q", &exponent, order)
}
