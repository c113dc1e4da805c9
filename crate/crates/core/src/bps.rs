//! BPS calculus for Hilbert schemes of points on curves.
//!
//! A curve (or a family of curves over a δ-dimensional linear system) of
//! arithmetic genus `g` with Euler characteristics `e_i = e(C^[i])` has
//!
//! ```text
//! q^{1-g} Σ_i e_i q^i  =  Σ_{r=g-δ}^{g} n_r q^{1-r} (1-q)^{2r-2}
//! ```
//!
//! i.e. it behaves like a disjoint union of `n_r` smooth curves of genus `r`.
//! The spectrum is triangular in the `e_i`; its bottom entry `n_{g-δ}` counts
//! the δ-nodal curves of the family.
//!
//! The genus lives in the coefficient ring: a concrete rational, or the
//! polynomial variable `g` when working with universal polynomials.

use num_rational::BigRational;

use crate::algebra::{binomial, binomial_series, rat, ratio, AlgebraError, Ring, TruncSeries, Var};
use crate::Poly;

/// Euler characteristics `e_0 .. e_δ` together with the arithmetic genus.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerSeries<R: Ring> {
    pub genus: R,
    pub values: Vec<R>,
}

impl<R: Ring> EulerSeries<R> {
    pub fn new(genus: R, values: Vec<R>) -> Self {
        assert!(!values.is_empty(), "need at least e_0");
        EulerSeries { genus, values }
    }

    pub fn delta(&self) -> usize {
        self.values.len() - 1
    }
}

/// `n_{g-s}` for `s = 0 ..= δ`, stored by offset `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct BpsSpectrum<R: Ring> {
    pub genus: R,
    entries: Vec<R>,
}

impl<R: Ring> BpsSpectrum<R> {
    pub fn from_entries(genus: R, entries: Vec<R>) -> Self {
        BpsSpectrum { genus, entries }
    }

    pub fn delta(&self) -> usize {
        self.entries.len() - 1
    }

    /// `n_{g-s}`.
    pub fn at_offset(&self, s: usize) -> &R {
        &self.entries[s]
    }

    /// `n_g`.
    pub fn top(&self) -> &R {
        &self.entries[0]
    }

    /// `n_{g-δ}`, the δ-nodal count.
    pub fn node_count(&self) -> &R {
        &self.entries[self.delta()]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &R)> {
        self.entries.iter().enumerate()
    }
}

fn twice_minus_two<R: Ring>(r: &R) -> R {
    r.scale(&rat(2)).sub_ref(&r.constant_like(&rat(2)))
}

/// `(1-q)^{2r-2}` through `q^order`: the Hilbert-scheme series of a smooth
/// genus-`r` curve with the `q^{1-r}` prefactor stripped.
fn smooth_curve_series<R: Ring>(r: &R, order: usize) -> TruncSeries<R> {
    binomial_series("q", &twice_minus_two(r), order)
}

/// `e(Sym^k Σ_r) = [q^k] (1-q)^{2r-2}`, symbolic in `r` when `r` is.
pub fn sym_euler<R: Ring>(k: usize, r: &R) -> R {
    smooth_curve_series(r, k).coeff(k).clone()
}

/// The genus `g - s` one level down the spectrum.
fn lowered_genus<R: Ring>(g: &R, s: usize) -> R {
    g.sub_ref(&g.constant_like(&rat(s as i64)))
}

/// Solves for the spectrum by the triangular recursion
/// `n_{g-r} = e_r - Σ_{s<r} n_{g-s} e(Sym^{r-s} Σ_{g-s})`.
pub fn bps_transform<R: Ring>(input: &EulerSeries<R>) -> BpsSpectrum<R> {
    let delta = input.delta();
    let g = &input.genus;
    let smooth: Vec<TruncSeries<R>> = (0..=delta)
        .map(|s| smooth_curve_series(&lowered_genus(g, s), delta))
        .collect();
    let mut entries: Vec<R> = Vec::with_capacity(delta + 1);
    for r in 0..=delta {
        let mut n = input.values[r].clone();
        for (s, n_s) in entries.iter().enumerate() {
            n = n.sub_ref(&n_s.mul_ref(smooth[s].coeff(r - s)));
        }
        entries.push(n);
    }
    BpsSpectrum {
        genus: g.clone(),
        entries,
    }
}

/// Second derivation of the spectrum. Multiplying by `(1-q)^{2-2g}` turns the
/// right-hand side into `Σ_s n_{g-s} u^s` with `u = q (1-q)^{-2}`, so the
/// spectrum is read off after re-expanding in `u` through the reversion of
/// `u(q)`.
pub fn bps_transform_by_substitution<R: Ring>(
    input: &EulerSeries<R>,
) -> Result<BpsSpectrum<R>, AlgebraError> {
    let delta = input.delta();
    let g = &input.genus;
    let template = &input.values[0];
    if delta == 0 {
        return Ok(BpsSpectrum {
            genus: g.clone(),
            entries: input.values.clone(),
        });
    }
    let e = TruncSeries::from_coeffs("q", delta, input.values.clone());
    let untwist = binomial_series("q", &twice_minus_two(g).neg_ref(), delta);
    let a = e.try_mul(&untwist)?;
    let q = TruncSeries::variable("q", delta, template);
    let one_minus_q_sq = binomial_series("q", &template.constant_like(&rat(2)), delta);
    let u = q.try_div(&one_minus_q_sq)?;
    let q_of_u = u.reversion()?;
    let in_u = a.compose(&q_of_u)?;
    Ok(BpsSpectrum {
        genus: g.clone(),
        entries: in_u.into_coeffs(),
    })
}

/// Rebuilds `e_0 .. e_order` from a spectrum:
/// `Σ_s n_{g-s} q^s (1-q)^{2(g-s)-2}`.
pub fn reexpand<R: Ring>(spectrum: &BpsSpectrum<R>, order: usize) -> Vec<R> {
    let g = &spectrum.genus;
    let template = spectrum.top();
    let mut acc = TruncSeries::constant("q", order, template.zero_like());
    for (s, n) in spectrum.entries() {
        if s > order {
            break;
        }
        let shifted = TruncSeries::monomial("q", order, n.clone(), s);
        acc = acc.add_ref(&shifted.mul_ref(&smooth_curve_series(&lowered_genus(g, s), order)));
    }
    acc.into_coeffs()
}

/// Model Euler characteristics `e(C^[k])`, `k = 0 ..= order`, of a δ-nodal
/// curve of arithmetic genus `g`:
/// `e(C^[k]) = Σ_j C(δ, j) e(Sym^{k-j} Σ_{g-j})`.
pub fn nodal_model_series<R: Ring>(g: &R, delta: usize, order: usize) -> Vec<R> {
    let mut out = vec![g.zero_like(); order + 1];
    for j in 0..=delta.min(order) {
        let weight = BigRational::from_integer(binomial(delta as u32, j as u32));
        let smooth = smooth_curve_series(&lowered_genus(g, j), order);
        for k in j..=order {
            out[k] = out[k].add_ref(&smooth.coeff(k - j).scale(&weight));
        }
    }
    out
}

/// Arithmetic genus of curves in `|L|`: `g = 1 + (L² + L.K)/2`.
pub fn genus_polynomial() -> Poly {
    Poly::one() + (Poly::var(Var::X) + Poly::var(Var::Y)).scale_by(&ratio(1, 2))
}

/// The δ-nodal count `n_{g-δ}` of a family whose relative Hilbert-scheme
/// Euler characteristics are polynomials in `(x, y, z, t)` and whose genus is
/// the symbol `g`; `g` is eliminated through `g = 1 + (x + y)/2` only at the
/// end.
pub fn extract_node_count(e: &EulerSeries<Poly>) -> Poly {
    bps_transform(e)
        .node_count()
        .substitute(Var::G, &genus_polynomial())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn g() -> Poly {
        Poly::var(Var::G)
    }

    fn c(n: i64) -> Poly {
        Poly::constant(rat(n))
    }

    #[test]
    fn sym_euler_small_cases() {
        assert_eq!(sym_euler(0, &g()), c(1));
        assert_eq!(sym_euler(1, &g()), c(2) - g().scale_by(&rat(2)));
        assert_eq!(sym_euler(2, &rat(0)), rat(3));
        // Sym^2 of an elliptic curve has Euler characteristic 0
        assert_eq!(sym_euler(2, &rat(1)), rat(0));
    }

    #[test]
    fn smooth_curve_has_only_top_entry() {
        let values: Vec<Poly> = (0..=3).map(|k| sym_euler(k, &g())).collect();
        let spec = bps_transform(&EulerSeries::new(g(), values));
        assert_eq!(*spec.top(), c(1));
        for s in 1..=3 {
            assert!(spec.at_offset(s).is_zero());
        }
    }

    #[test]
    fn two_nodal_model() {
        let values = nodal_model_series(&g(), 2, 2);
        let spec = bps_transform(&EulerSeries::new(g(), values));
        let got: Vec<Poly> = spec.entries().map(|(_, n)| n.clone()).collect();
        assert_eq!(got, vec![c(1), c(2), c(1)]);
    }

    #[test]
    fn one_nodal_genus_two_curve() {
        let input = EulerSeries::new(rat(2), vec![rat(1), rat(-1)]);
        let spec = bps_transform(&input);
        assert_eq!(*spec.node_count(), rat(1));
    }

    #[test]
    fn nodal_model_low_orders() {
        let delta = 3;
        let vals = nodal_model_series(&g(), delta, 1);
        assert_eq!(vals[0], c(1));
        assert_eq!(vals[1], c(2) - g().scale_by(&rat(2)) + c(delta as i64));
    }

    #[test]
    fn node_count_degree_zero_and_one() {
        assert_eq!(extract_node_count(&EulerSeries::new(g(), vec![c(1)])), c(1));
        let e1 = Poly::var(Var::T) + Poly::var(Var::X);
        let n1 = extract_node_count(&EulerSeries::new(g(), vec![c(2), e1]));
        let expected = Poly::var(Var::X).scale_by(&rat(3))
            + Poly::var(Var::Y).scale_by(&rat(2))
            + Poly::var(Var::T);
        assert_eq!(n1, expected);
    }

    #[test]
    fn substitution_route_matches_recursion() {
        for delta in 0..=5 {
            let values = nodal_model_series(&g(), delta, delta);
            let input = EulerSeries::new(g(), values);
            assert_eq!(
                bps_transform_by_substitution(&input).unwrap(),
                bps_transform(&input)
            );
        }
    }

    #[test]
    fn negative_and_fractional_genus_accepted() {
        for genus in [rat(-3), ratio(5, 2)] {
            let values = nodal_model_series(&genus, 2, 2);
            let spec = bps_transform(&EulerSeries::new(genus.clone(), values));
            let got: Vec<Rational> = spec.entries().map(|(_, n)| n.clone()).collect();
            assert_eq!(got, vec![rat(1), rat(2), rat(1)]);
        }
    }
}
