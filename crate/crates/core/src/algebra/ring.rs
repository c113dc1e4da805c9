//! Coefficient rings shared by the polynomial and series kernels.
//!
//! Two layers:
//! - [`Scalar`]: exact fields built on `num-traits` (`BigRational`, `Rational64`).
//! - [`Ring`]: anything a [`TruncSeries`](super::TruncSeries) can carry as a
//!   coefficient. Scalars, multivariate polynomials and truncated series
//!   themselves all implement it, so series nest (`ω` over `ε` over `Q`).
//!
//! Ring elements need not have a context-free zero (a truncated series must
//! know its order), hence `zero_like`/`one_like` instead of `num_traits::Zero`.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Exact scalar field usable as polynomial coefficient.
pub trait Scalar:
    Num + Signed + Clone + PartialEq + Debug + Display + FromPrimitive + Send + Sync + 'static
{
    /// Converts an arbitrary-precision rational. Panics if the value does not
    /// fit the representation.
    fn from_big(r: &BigRational) -> Self;

    fn to_big(&self) -> BigRational;
}

impl Scalar for BigRational {
    fn from_big(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_big(&self) -> BigRational {
        self.clone()
    }
}

impl Scalar for Rational64 {
    fn from_big(r: &BigRational) -> Self {
        let num = r.numer().to_i64().expect("numerator exceeds i64");
        let den = r.denom().to_i64().expect("denominator exceeds i64");
        Rational64::new(num, den)
    }

    fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

/// Commutative ring with unit, as seen by the series and polynomial kernels.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplicative inverse, if the element is a unit.
    fn try_inv(&self) -> Option<Self>;
    /// Multiplies by a rational constant.
    fn scale(&self, c: &BigRational) -> Self;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    /// Embeds a rational constant next to `self`.
    fn constant_like(&self, c: &BigRational) -> Self {
        self.one_like().scale(c)
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self = self.add_ref(rhs);
    }

    fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }
}

macro_rules! scalar_ring {
    ($t:ty) => {
        impl Ring for $t {
            fn zero_like(&self) -> Self {
                <$t>::zero()
            }
            fn one_like(&self) -> Self {
                <$t>::one()
            }
            fn is_zero(&self) -> bool {
                Zero::is_zero(self)
            }
            fn add_ref(&self, rhs: &Self) -> Self {
                self + rhs
            }
            fn sub_ref(&self, rhs: &Self) -> Self {
                self - rhs
            }
            fn mul_ref(&self, rhs: &Self) -> Self {
                self * rhs
            }
            fn neg_ref(&self) -> Self {
                -self
            }
            fn try_inv(&self) -> Option<Self> {
                if Zero::is_zero(self) {
                    None
                } else {
                    Some(self.recip())
                }
            }
            fn scale(&self, c: &BigRational) -> Self {
                self * <$t as Scalar>::from_big(c)
            }
        }
    };
}

scalar_ring!(BigRational);
scalar_ring!(Rational64);

/// Integers, for fraction-free series work. Only `±1` is invertible, and
/// scaling by a non-integral rational is a logic error.
impl Ring for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Option<Self> {
        (self.abs() == BigInt::one()).then(|| self.clone())
    }
    fn scale(&self, c: &BigRational) -> Self {
        let p = self * c.numer();
        assert!(
            Zero::is_zero(&(&p % c.denom())),
            "integer scaled by non-integral factor"
        );
        p / c.denom()
    }
}

/// `n!` as an arbitrary-precision integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Ordinary binomial coefficient `C(n, k)` for non-negative integers.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Shorthand for the integer `n` as a rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for `n / d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_ring_units() {
        let two = BigInt::from(2);
        assert_eq!(two.try_inv(), None);
        assert_eq!(BigInt::from(-1).try_inv(), Some(BigInt::from(-1)));
        assert_eq!(two.scale(&BigRational::new(3.into(), 2.into())), BigInt::from(3));
    }

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(factorial(0), BigInt::one());
    }

    #[test]
    fn rational64_round_trips_through_big() {
        let r = Rational64::new(-3, 8);
        assert_eq!(Rational64::from_big(&r.to_big()), r);
        assert_eq!(r.try_inv(), Some(Rational64::new(-8, 3)));
        assert_eq!(Rational64::zero().try_inv(), None);
    }

    #[test]
    fn pow_by_squaring() {
        assert_eq!(ratio(2, 3).pow(5), ratio(32, 243));
        assert_eq!(rat(7).pow(0), rat(1));
    }
}
