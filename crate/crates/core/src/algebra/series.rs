//! Power series in one formal variable, truncated at a fixed order `N`
//! (coefficients of `v^0 .. v^N` are kept).
//!
//! Binary operations require the same variable and the same order; the
//! `try_*` methods report a mismatch, the operator impls panic on it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::ring::Ring;
use super::AlgebraError;

#[derive(Clone, PartialEq)]
pub struct TruncSeries<R: Ring> {
    var: &'static str,
    coeffs: Vec<R>,
}

impl<R: Ring> TruncSeries<R> {
    /// Builds a series from its leading coefficients, zero-padding or
    /// truncating to `order`. `coeffs` must be non-empty so the ring's zero is
    /// known.
    pub fn from_coeffs(var: &'static str, order: usize, mut coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "need at least one coefficient");
        let zero = coeffs[0].zero_like();
        coeffs.resize(order + 1, zero);
        TruncSeries { var, coeffs }
    }

    pub fn constant(var: &'static str, order: usize, c: R) -> Self {
        Self::from_coeffs(var, order, vec![c])
    }

    /// `c · v^k`, zero if `k > order`.
    pub fn monomial(var: &'static str, order: usize, c: R, k: usize) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero; order + 1];
        if k <= order {
            coeffs[k] = c;
        }
        TruncSeries { var, coeffs }
    }

    /// The series `v` itself over the ring of `template`.
    pub fn variable(var: &'static str, order: usize, template: &R) -> Self {
        Self::monomial(var, order, template.one_like(), 1)
    }

    pub fn var(&self) -> &'static str {
        self.var
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &R {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    /// Re-truncates (or zero-extends) to a new order.
    pub fn with_order(&self, order: usize) -> Self {
        Self::from_coeffs(self.var, order, self.coeffs.clone())
    }

    pub fn map<F: Fn(&R) -> R>(&self, f: F) -> Self {
        TruncSeries {
            var: self.var,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.var != other.var || self.order() != other.order() {
            return Err(AlgebraError::Mismatch {
                left: format!("{}^{}", self.var, self.order()),
                right: format!("{}^{}", other.var, other.order()),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_compatible(other)?;
        Ok(TruncSeries {
            var: self.var,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add_ref(b))
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_compatible(other)?;
        Ok(TruncSeries {
            var: self.var,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.sub_ref(b))
                .collect(),
        })
    }

    /// Cauchy product truncated at the common order.
    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_compatible(other)?;
        let n = self.order();
        let mut coeffs: Vec<R> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc: Option<R> = None;
            for i in 0..=k {
                let (a, b) = (&self.coeffs[i], &other.coeffs[k - i]);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let p = a.mul_ref(b);
                acc = Some(match acc {
                    Some(s) => s.add_ref(&p),
                    None => p,
                });
            }
            coeffs.push(acc.unwrap_or_else(|| self.coeffs[0].zero_like()));
        }
        Ok(TruncSeries {
            var: self.var,
            coeffs,
        })
    }

    /// Multiplies every coefficient by a ring element.
    pub fn mul_coeff(&self, c: &R) -> Self {
        self.map(|a| a.mul_ref(c))
    }

    pub fn scale_rational(&self, c: &BigRational) -> Self {
        self.map(|a| a.scale(c))
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn invert(&self) -> Result<Self, AlgebraError> {
        let inv0 = self.coeffs[0]
            .try_inv()
            .ok_or(AlgebraError::NotInvertible)?;
        let n = self.order();
        let mut out: Vec<R> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = inv0.zero_like();
            for i in 1..=k {
                if self.coeffs[i].is_zero() {
                    continue;
                }
                acc = acc.add_ref(&self.coeffs[i].mul_ref(&out[k - i]));
            }
            out.push(acc.mul_ref(&inv0).neg_ref());
        }
        Ok(TruncSeries {
            var: self.var,
            coeffs: out,
        })
    }

    /// `self / other`, with `other` invertible.
    pub fn try_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_mul(&other.invert()?)
    }

    /// Composition `self(inner(v))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self, AlgebraError> {
        self.check_compatible(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(AlgebraError::Precondition(
                "inner series of a composition must have zero constant term".into(),
            ));
        }
        let n = self.order();
        let mut acc = Self::constant(self.var, n, self.coeffs[n].clone());
        for k in (0..n).rev() {
            acc = acc.try_mul(inner)?;
            acc.coeffs[0] = acc.coeffs[0].add_ref(&self.coeffs[k]);
        }
        Ok(acc)
    }

    /// Compositional inverse `r` with `self(r(v)) = v` through order `N`.
    /// Needs zero constant term and a unit linear coefficient.
    pub fn reversion(&self) -> Result<Self, AlgebraError> {
        let n = self.order();
        if !self.coeffs[0].is_zero() {
            return Err(AlgebraError::Precondition(
                "reversion needs a zero constant term".into(),
            ));
        }
        if n == 0 {
            return Ok(self.clone());
        }
        let inv1 = self.coeffs[1].try_inv().ok_or_else(|| {
            AlgebraError::Precondition("reversion needs a unit linear coefficient".into())
        })?;
        let zero = inv1.zero_like();
        let mut rev = Self::monomial(self.var, n, inv1.clone(), 1);
        // Each pass fixes one more coefficient: the defect at v^k is linear in
        // rev_k with slope a_1.
        for k in 2..=n {
            let comp = self.compose(&rev)?;
            let defect = comp.coeffs[k].clone();
            rev.coeffs[k] = zero.sub_ref(&defect.mul_ref(&inv1));
        }
        Ok(rev)
    }

    pub fn derivative(&self) -> Self {
        let n = self.order();
        let zero = self.coeffs[0].zero_like();
        let mut coeffs = vec![zero; n + 1];
        for k in 1..=n {
            coeffs[k - 1] = self.coeffs[k].scale(&BigRational::from_integer(BigInt::from(k)));
        }
        TruncSeries {
            var: self.var,
            coeffs,
        }
    }

    /// Formal antiderivative with zero constant term; the top coefficient is
    /// dropped by truncation.
    pub fn integral(&self) -> Self {
        let n = self.order();
        let zero = self.coeffs[0].zero_like();
        let mut coeffs = vec![zero; n + 1];
        for k in 1..=n {
            coeffs[k] = self.coeffs[k - 1].scale(&BigRational::new(
                BigInt::from(1),
                BigInt::from(k),
            ));
        }
        TruncSeries {
            var: self.var,
            coeffs,
        }
    }

    /// `exp(self)` for a series with zero constant term.
    pub fn exp(&self) -> Result<Self, AlgebraError> {
        if !self.coeffs[0].is_zero() {
            return Err(AlgebraError::Precondition(
                "exp needs a zero constant term".into(),
            ));
        }
        let n = self.order();
        let one = self.coeffs[0].one_like();
        let mut out: Vec<R> = Vec::with_capacity(n + 1);
        out.push(one);
        // k e_k = sum_{j=1..k} j f_j e_{k-j}
        for k in 1..=n {
            let mut acc = self.coeffs[0].zero_like();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                let term = self.coeffs[j]
                    .mul_ref(&out[k - j])
                    .scale(&BigRational::from_integer(BigInt::from(j)));
                acc = acc.add_ref(&term);
            }
            out.push(acc.scale(&BigRational::new(BigInt::from(1), BigInt::from(k))));
        }
        Ok(TruncSeries {
            var: self.var,
            coeffs: out,
        })
    }

    /// `log(self)` for a series with constant term one.
    pub fn log(&self) -> Result<Self, AlgebraError> {
        if !self.coeffs[0].is_one() {
            return Err(AlgebraError::Precondition(
                "log needs constant term one".into(),
            ));
        }
        Ok(self.derivative().try_div(self)?.integral())
    }
}

impl<R: Ring> Ring for TruncSeries<R> {
    fn zero_like(&self) -> Self {
        self.map(Ring::zero_like)
    }
    fn one_like(&self) -> Self {
        Self::constant(self.var, self.order(), self.coeffs[0].one_like())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Ring::is_zero)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("series mismatch")
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.try_sub(rhs).expect("series mismatch")
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("series mismatch")
    }
    fn neg_ref(&self) -> Self {
        self.map(Ring::neg_ref)
    }
    fn try_inv(&self) -> Option<Self> {
        self.invert().ok()
    }
    fn scale(&self, c: &BigRational) -> Self {
        self.scale_rational(c)
    }
}

impl<'a, R: Ring> Add<&'a TruncSeries<R>> for &'a TruncSeries<R> {
    type Output = TruncSeries<R>;
    fn add(self, rhs: &'a TruncSeries<R>) -> TruncSeries<R> {
        self.add_ref(rhs)
    }
}

impl<'a, R: Ring> Sub<&'a TruncSeries<R>> for &'a TruncSeries<R> {
    type Output = TruncSeries<R>;
    fn sub(self, rhs: &'a TruncSeries<R>) -> TruncSeries<R> {
        self.sub_ref(rhs)
    }
}

impl<'a, R: Ring> Mul<&'a TruncSeries<R>> for &'a TruncSeries<R> {
    type Output = TruncSeries<R>;
    fn mul(self, rhs: &'a TruncSeries<R>) -> TruncSeries<R> {
        self.mul_ref(rhs)
    }
}

impl<R: Ring> Neg for TruncSeries<R> {
    type Output = TruncSeries<R>;
    fn neg(self) -> TruncSeries<R> {
        self.neg_ref()
    }
}

impl<R: Ring> fmt::Debug for TruncSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncSeries[{}; O({}^{})](", self.var, self.var, self.order() + 1)?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c:?}")?;
        }
        write!(f, ")")
    }
}

/// Coefficients of `(1 - v)^e` through order `order`, computed as
/// `exp(e · log(1 - v))`. `e` may be any ring element, e.g. a polynomial in
/// the genus.
pub fn binomial_series<R: Ring>(
    var: &'static str,
    exponent: &R,
    order: usize,
) -> TruncSeries<R> {
    let one = exponent.one_like();
    let log_one_minus = TruncSeries::from_coeffs(var, order, vec![one.clone(), one.neg_ref()])
        .log()
        .expect("constant term is one");
    log_one_minus
        .mul_coeff(exponent)
        .exp()
        .expect("log has zero constant term")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ring::{rat, ratio};
    use crate::{Poly, RationalSeries, Var};
    use num_rational::Rational64;

    fn series(cs: &[i64], order: usize) -> RationalSeries {
        TruncSeries::from_coeffs("q", order, cs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn product_truncates() {
        let a = series(&[1, 1], 2);
        let b = series(&[1, -1], 2);
        assert_eq!(a.try_mul(&b).unwrap(), series(&[1, 0, -1], 2));
    }

    #[test]
    fn geometric_inverse_pair() {
        let a = series(&[1, -1], 5);
        let inv = a.invert().unwrap();
        assert_eq!(inv, series(&[1, 1, 1, 1, 1, 1], 5));
        assert!(a.try_mul(&inv).unwrap().is_one());
        assert_eq!(series(&[1, 2], 2).invert().unwrap(), series(&[1, -2, 4], 2));
    }

    #[test]
    fn mismatches_are_usage_errors() {
        let a = series(&[1, 1], 2);
        let b = series(&[1, 1], 3);
        assert!(matches!(a.try_mul(&b), Err(AlgebraError::Mismatch { .. })));
        let c = TruncSeries::from_coeffs("w", 2, vec![rat(1)]);
        assert!(matches!(a.try_add(&c), Err(AlgebraError::Mismatch { .. })));
    }

    #[test]
    fn singular_inverse() {
        assert_eq!(series(&[0, 1], 3).invert(), Err(AlgebraError::NotInvertible));
    }

    #[test]
    fn reversion_preconditions() {
        assert!(matches!(
            series(&[1, 1], 3).reversion(),
            Err(AlgebraError::Precondition(_))
        ));
        assert!(matches!(
            series(&[0, 0, 1], 3).reversion(),
            Err(AlgebraError::Precondition(_))
        ));
    }

    #[test]
    fn identity_reverses_to_itself() {
        for n in 1..6 {
            let id = series(&[0, 1], n);
            assert_eq!(id.reversion().unwrap(), id);
        }
    }

    #[test]
    fn reversion_of_q_plus_q2() {
        // q + q^2 reverts to the Catalan series q - q^2 + 2q^3 - 5q^4 + 14q^5
        let a = series(&[0, 1, 1], 5);
        let r = a.reversion().unwrap();
        assert_eq!(r, series(&[0, 1, -1, 2, -5, 14], 5));
        assert_eq!(a.compose(&r).unwrap(), series(&[0, 1], 5));
    }

    #[test]
    fn reversion_of_bps_substitution() {
        // u = q/(1-q)^2 reverts to q(u) with q(u(q)) = q
        let n = 7;
        let u = series(&[0, 1], n).try_div(&series(&[1, -2, 1], n)).unwrap();
        let r = u.reversion().unwrap();
        assert_eq!(u.compose(&r).unwrap(), series(&[0, 1], n));
        assert_eq!(r.compose(&u).unwrap(), series(&[0, 1], n));
    }

    #[test]
    fn genus_zero_binomial() {
        let s = binomial_series("q", &rat(-2), 3);
        assert_eq!(s, series(&[1, 2, 3, 4], 3));
    }

    #[test]
    fn symbolic_exponent_linear_coefficient() {
        let g = Poly::var(Var::G);
        let e = &g.scale_by(&rat(2)) - &Poly::constant(rat(2));
        let s = binomial_series("q", &e, 4);
        assert_eq!(*s.coeff(1), -e.clone());
        // inverse pair: (1-q)^{2g-2} (1-q)^{2-2g} = 1
        let t = binomial_series("q", &(-e), 4);
        let prod = s.try_mul(&t).unwrap();
        assert!(prod.is_one());
    }

    #[test]
    fn exp_log_round_trip() {
        let a = TruncSeries::from_coeffs("q", 5, vec![rat(1), ratio(1, 2), rat(-3), rat(0), ratio(2, 7)]);
        let back = a.log().unwrap().exp().unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn nested_series_ring() {
        // coefficients of 1/(1 + w + e x) as a series in w over series in e
        let inner = |cs: Vec<i64>| TruncSeries::from_coeffs("e", 2, cs.into_iter().map(rat).collect());
        let one = inner(vec![1]);
        let d = TruncSeries::from_coeffs("w", 2, vec![inner(vec![1, 3]), one.clone()]);
        let inv = d.invert().unwrap();
        assert!(d.try_mul(&inv).unwrap().is_one());
        assert_eq!(*inv.coeff(0), inner(vec![1, -3, 9]));
    }

    #[test]
    fn works_over_machine_rationals() {
        let a = TruncSeries::from_coeffs(
            "q",
            4,
            vec![Rational64::new(2, 1), Rational64::new(1, 3)],
        );
        let inv = a.invert().unwrap();
        assert!(a.try_mul(&inv).unwrap().is_one());
        assert_eq!(*inv.coeff(1), Rational64::new(-1, 12));
    }
}
