//! Sparse multivariate polynomials over a fixed five-variable universe.
//!
//! The variables are the four Chern numbers of a polarized surface plus the
//! arithmetic genus of the curves in the linear system:
//! `x = L²`, `y = L.K`, `z = K²`, `t = c₂`, `g`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use super::ring::{Ring, Scalar};

pub const NUM_VARS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Z,
    T,
    G,
}

impl Var {
    pub const ALL: [Var; NUM_VARS] = [Var::X, Var::Y, Var::Z, Var::T, Var::G];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
            Var::T => "t",
            Var::G => "g",
        }
    }
}

/// Dense exponent vector over `(x, y, z, t, g)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub [u32; NUM_VARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NUM_VARS]);

    pub fn var(v: Var) -> Self {
        let mut e = [0; NUM_VARS];
        e[v.index()] = 1;
        Monomial(e)
    }

    /// Monomial in the Chern variables only, `x^a y^b z^c t^d`.
    pub fn chern(exps: [u32; 4]) -> Self {
        Monomial([exps[0], exps[1], exps[2], exps[3], 0])
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        Monomial(e)
    }

    /// Evaluates the monomial at a point, one value per variable.
    pub fn evaluate<S: Scalar>(&self, point: &[S; NUM_VARS]) -> S {
        let mut acc = S::one();
        for (base, &e) in point.iter().zip(self.0.iter()) {
            for _ in 0..e {
                acc = acc * base.clone();
            }
        }
        acc
    }
}

/// Polynomial with exact coefficients; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly<S: Scalar> {
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> MultiPoly<S> {
    pub fn zero() -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Monomial::var(v), S::one())
    }

    pub fn monomial(m: Monomial, c: S) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, S)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing = existing.clone() + c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&Monomial::ONE)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    pub fn scale_by(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (*m, v.clone() * c.clone()))
                .collect(),
        }
    }

    /// Replaces `v` by `value` everywhere.
    pub fn substitute(&self, v: Var, value: &MultiPoly<S>) -> Self {
        let max = self.degree_in(v) as usize;
        let mut powers = Vec::with_capacity(max + 1);
        powers.push(Self::one());
        for k in 1..=max {
            powers.push(&powers[k - 1] * value);
        }
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut rest = *m;
            let e = rest.0[v.index()] as usize;
            rest.0[v.index()] = 0;
            let term = Self::monomial(rest, c.clone());
            out = out + &term * &powers[e];
        }
        out
    }

    pub fn evaluate(&self, point: &[S; NUM_VARS]) -> S {
        self.terms
            .iter()
            .fold(S::zero(), |acc, (m, c)| acc + c.clone() * m.evaluate(point))
    }

    /// Converts coefficients to another scalar type.
    pub fn map_scalar<T: Scalar>(&self) -> MultiPoly<T> {
        MultiPoly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (*m, T::from_big(&c.to_big()))),
        )
    }
}

impl<S: Scalar> Default for MultiPoly<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a, S: Scalar> Add<&'a MultiPoly<S>> for &'a MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn add(self, rhs: &'a MultiPoly<S>) -> MultiPoly<S> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<S: Scalar> Add for MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn add(mut self, rhs: MultiPoly<S>) -> MultiPoly<S> {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<'a, S: Scalar> Sub<&'a MultiPoly<S>> for &'a MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn sub(self, rhs: &'a MultiPoly<S>) -> MultiPoly<S> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn sub(self, rhs: MultiPoly<S>) -> MultiPoly<S> {
        &self - &rhs
    }
}

impl<'a, S: Scalar> Mul<&'a MultiPoly<S>> for &'a MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn mul(self, rhs: &'a MultiPoly<S>) -> MultiPoly<S> {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<S: Scalar> Mul for MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn mul(self, rhs: MultiPoly<S>) -> MultiPoly<S> {
        &self * &rhs
    }
}

impl<S: Scalar> Neg for MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn neg(self) -> MultiPoly<S> {
        MultiPoly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<S: Scalar> Ring for MultiPoly<S> {
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn one_like(&self) -> Self {
        Self::one()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
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
        -self.clone()
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_constant() && !self.is_zero() {
            Some(Self::constant(S::one() / self.constant_term()))
        } else {
            None
        }
    }
    fn scale(&self, c: &BigRational) -> Self {
        self.scale_by(&S::from_big(c))
    }
}

impl<S: Scalar> fmt::Display for MultiPoly<S> {
    /// Terms by descending total degree, then `x` before `y` before `z` ...,
    /// e.g. `3*x + 2*y + t` or `1/2*t^2 - 7/2*t + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            b.total_degree()
                .cmp(&a.total_degree())
                .then_with(|| b.0.cmp(&a.0))
        });
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = Var::ALL
                .iter()
                .filter(|v| m.exponent(**v) > 0)
                .map(|v| match m.exponent(*v) {
                    1 => v.name().to_string(),
                    e => format!("{}^{}", v.name(), e),
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for MultiPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ring::{rat, ratio};
    use crate::Poly;

    fn x() -> Poly {
        Poly::var(Var::X)
    }
    fn t() -> Poly {
        Poly::var(Var::T)
    }
    fn g() -> Poly {
        Poly::var(Var::G)
    }

    #[test]
    fn display_orders_by_degree_then_variable() {
        let p = Poly::var(Var::Y).scale_by(&rat(2)) + t() + x().scale_by(&rat(3));
        assert_eq!(p.to_string(), "3*x + 2*y + t");
        let q = (&t() * &t()).scale_by(&ratio(1, 2)) - t().scale_by(&ratio(7, 2)) + Poly::one();
        assert_eq!(q.to_string(), "1/2*t^2 - 7/2*t + 1");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!((-x()).to_string(), "-x");
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = &(&x() + &t()) - &x();
        assert_eq!(p, t());
        assert_eq!(p.num_terms(), 1);
        assert!((&x() - &x()).is_zero());
        assert_eq!((&x() - &x()).total_degree(), None);
    }

    #[test]
    fn genus_substitution() {
        // 2(2g - 2) with g = 1 + (x + y)/2 is 2x + 2y
        let expr = (g().scale_by(&rat(2)) - Poly::constant(rat(2))).scale_by(&rat(2));
        let genus = Poly::one() + (x() + Poly::var(Var::Y)).scale_by(&ratio(1, 2));
        let sub = expr.substitute(Var::G, &genus);
        assert_eq!(sub, (x() + Poly::var(Var::Y)).scale_by(&rat(2)));
        assert_eq!(sub.degree_in(Var::G), 0);
    }

    #[test]
    fn evaluate_and_degree() {
        let p = &(&x() * &t()) + &Poly::constant(rat(5));
        assert_eq!(p.total_degree(), Some(2));
        let point = [rat(2), rat(0), rat(0), rat(3), rat(0)];
        assert_eq!(p.evaluate(&point), rat(11));
    }

    #[test]
    fn only_constants_are_units() {
        assert_eq!(
            Poly::constant(rat(4)).try_inv(),
            Some(Poly::constant(ratio(1, 4)))
        );
        assert_eq!(x().try_inv(), None);
        assert_eq!(Poly::zero().try_inv(), None);
    }
}
