//! Tautological integrals on Hilbert schemes of points of toric surfaces by
//! torus localization.
//!
//! For a surface `S` and `k ≥ 0` define the ω-polynomial
//!
//! ```text
//! f_S(k; ω) = ∫_{S^[k]} c(T S^[k]) · Π_j (ω + x_j) / Π_j (1 + ω + x_j)
//! ```
//!
//! where `x_j` are the Chern roots of `L^[k]`, so that the numerator is
//! `c_k(L^[k](1))` and the denominator `c(L^[k](1))` on `S^[k] × ℙ^δ`. The
//! Euler characteristic of the relative Hilbert scheme of the universal curve
//! over a general `ℙ^δ ⊂ |L|` is then
//!
//! ```text
//! e(Hilb^i(𝒞/ℙ^δ)) = [ω^δ] (1+ω)^{δ+1} Σ_{k_1+..+k_m=i} Π_α f_{S_α}(k_α; ω)
//! ```
//!
//! for `S = S_1 ⊔ .. ⊔ S_m`.
//!
//! Fixed points of `S^[k]` are tuples of partitions, one per vertex of the
//! polygon. The equivariant parameters are specialized to random integers
//! `(s, t)` and the cohomological degree is tracked by an auxiliary series
//! variable `ε` (every weight `w` enters as `ε w`); the integral is the
//! `ε^{2k}` coefficient of the fixed-point sum. Every result is recomputed at
//! several samples and must agree exactly.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{binomial, Ring, TruncSeries};
use crate::config::Config;
use crate::error::NodalError;
use crate::toric::{Lattice, PolarizedToricSurface, SurfaceInstance, VertexChart};
use crate::{Rational, RationalSeries};

/// Integer partition with weakly decreasing positive parts. Part `j` is the
/// row `{(a, j) : a < λ_j}` of boxes; `a` runs along the first coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.0.first().copied().unwrap_or(0);
        Partition(
            (0..width)
                .map(|a| self.0.iter().filter(|&&p| p > a).count())
                .collect(),
        )
    }

    /// Boxes `(a, b)`, row by row.
    pub fn boxes(&self) -> Vec<(usize, usize)> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(b, &len)| (0..len).map(move |a| (a, b)))
            .collect()
    }

    /// All partitions of `n`, largest first part first.
    pub fn all_of(n: usize) -> Vec<Partition> {
        fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(prefix.clone()));
                return;
            }
            for p in (1..=n.min(max)).rev() {
                prefix.push(p);
                rec(n - p, p, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

/// One partition per fixed point of the surface.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionTuple(pub Vec<Partition>);

impl PartitionTuple {
    pub fn size(&self) -> usize {
        self.0.iter().map(Partition::size).sum()
    }
}

/// Torus-fixed points of `S^[n]` in lexicographic order of the size vector,
/// then of the partitions at each vertex.
pub fn fixed_points(
    surface: &PolarizedToricSurface,
    n: usize,
) -> impl Iterator<Item = PartitionTuple> {
    let vertices = surface.num_fixed_points();
    let by_size: Vec<Vec<Partition>> = (0..=n).map(Partition::all_of).collect();
    let mut out = Vec::new();
    let mut sizes = vec![0usize; vertices];
    fn compositions(
        pos: usize,
        remaining: usize,
        sizes: &mut Vec<usize>,
        by_size: &[Vec<Partition>],
        out: &mut Vec<PartitionTuple>,
    ) {
        if pos + 1 == sizes.len() {
            sizes[pos] = remaining;
            expand(0, sizes, by_size, &mut Vec::new(), out);
            return;
        }
        for m in 0..=remaining {
            sizes[pos] = m;
            compositions(pos + 1, remaining - m, sizes, by_size, out);
        }
    }
    fn expand(
        pos: usize,
        sizes: &[usize],
        by_size: &[Vec<Partition>],
        prefix: &mut Vec<Partition>,
        out: &mut Vec<PartitionTuple>,
    ) {
        if pos == sizes.len() {
            out.push(PartitionTuple(prefix.clone()));
            return;
        }
        for p in &by_size[sizes[pos]] {
            prefix.push(p.clone());
            expand(pos + 1, sizes, by_size, prefix, out);
            prefix.pop();
        }
    }
    if vertices > 0 {
        compositions(0, n, &mut sizes, &by_size, &mut out);
    }
    out.into_iter()
}

/// Weights at one fixed point, as characters (integer linear forms in the
/// equivariant parameters).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    /// `2n` weights of the tangent space of `S^[n]`.
    pub tangent: Vec<Lattice>,
    /// `n` weights of the fibre of `L^[n]`.
    pub taut: Vec<Lattice>,
}

fn combo(p: i64, u: Lattice, q: i64, v: Lattice) -> Lattice {
    [p * u[0] + q * v[0], p * u[1] + q * v[1]]
}

/// Weights of `T S^[n]` and `L^[n]` at the monomial ideal `λ` in the chart.
///
/// With coordinate characters `e1, e2` and `L`-character `χ`, the box
/// `(a, b)` spans the section `χ · x^a y^b` of weight `χ + a e1 + b e2`, and
/// contributes the two tangent weights `-(arm+1) e1 + leg e2` and
/// `arm e1 - (leg+1) e2`.
pub fn weight_system(chart: &VertexChart, lambda: &Partition) -> WeightSystem {
    let [e1, e2] = chart.coords;
    let conj = lambda.conjugate();
    let mut tangent = Vec::with_capacity(2 * lambda.size());
    let mut taut = Vec::with_capacity(lambda.size());
    for (a, b) in lambda.boxes() {
        let arm = (lambda.0[b] - a - 1) as i64;
        let leg = (conj.0[a] - b - 1) as i64;
        tangent.push(combo(-(arm + 1), e1, leg, e2));
        tangent.push(combo(arm, e1, -(leg + 1), e2));
        let shift = combo(a as i64, e1, b as i64, e2);
        taut.push([chart.character[0] + shift[0], chart.character[1] + shift[1]]);
    }
    WeightSystem { tangent, taut }
}

/// A specialization of the equivariant parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Sample {
    pub s: i64,
    pub t: i64,
}

impl Sample {
    pub fn eval_int(&self, c: Lattice) -> BigInt {
        BigInt::from(c[0] as i128 * self.s as i128 + c[1] as i128 * self.t as i128)
    }

    pub fn eval(&self, c: Lattice) -> Rational {
        Rational::from_integer(self.eval_int(c))
    }

    /// True if no character `p e1 + q e2` with `|p|, |q| ≤ bound` vanishes at
    /// this sample for any chart; this covers every tangent weight of
    /// `S^[n]`, `n ≤ bound`.
    pub fn is_generic_for(&self, surface: &PolarizedToricSurface, bound: usize) -> bool {
        let b = bound.max(1) as i64;
        surface.charts().iter().all(|chart| {
            let [e1, e2] = chart.coords;
            (-b..=b).all(|p| {
                (-b..=b).all(|q| {
                    (p == 0 && q == 0) || !Zero::is_zero(&self.eval(combo(p, e1, q, e2)))
                })
            })
        })
    }
}

/// Coefficients of `ω^0 .. ω^δ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OmegaPolynomial(pub Vec<Rational>);

impl OmegaPolynomial {
    pub fn constant(c: Rational, delta: usize) -> Self {
        let mut v = vec![Rational::zero(); delta + 1];
        v[0] = c;
        OmegaPolynomial(v)
    }

    pub fn delta(&self) -> usize {
        self.0.len() - 1
    }

    pub fn coeff(&self, j: usize) -> &Rational {
        &self.0[j]
    }

    pub fn truncate(&self, delta: usize) -> Self {
        let mut v = self.0.clone();
        v.resize(delta + 1, Rational::zero());
        OmegaPolynomial(v)
    }

    fn as_series(&self) -> RationalSeries {
        TruncSeries::from_coeffs("ω", self.delta(), self.0.clone())
    }
}

/// The localization sample hit a vanishing tangent weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Degenerate;

/// Series in `ω` whose coefficients are series in the degree-tracking `ε`.
type Bivariate = TruncSeries<RationalSeries>;

fn eps_series(order: usize, c0: Rational, c1: Rational) -> RationalSeries {
    TruncSeries::from_coeffs("ε", order, vec![c0, c1])
}

/// `Π (1 + ε w)/w` over tangent weights times `Π (ω + ε x)/(1 + ω + ε x)`
/// over taut weights.
fn weight_factor(
    weights: &WeightSystem,
    sample: &Sample,
    delta: usize,
    eps_order: usize,
) -> Result<Bivariate, Degenerate> {
    let one = Rational::one();
    let mut tangent = eps_series(eps_order, one.clone(), Rational::zero());
    for &w in &weights.tangent {
        let value = sample.eval(w);
        if Zero::is_zero(&value) {
            return Err(Degenerate);
        }
        let inv = value.recip();
        tangent = tangent.mul_ref(&eps_series(eps_order, inv, one.clone()));
    }
    let eps_one = eps_series(eps_order, one.clone(), Rational::zero());
    let mut acc: Bivariate = TruncSeries::constant("ω", delta, tangent);
    for &x in &weights.taut {
        let ex = eps_series(eps_order, Rational::zero(), sample.eval(x));
        let num = TruncSeries::from_coeffs("ω", delta, vec![ex.clone(), eps_one.clone()]);
        let den = TruncSeries::from_coeffs(
            "ω",
            delta,
            vec![eps_one.add_ref(&ex), eps_one.clone()],
        );
        let ratio = num
            .try_div(&den)
            .expect("denominator has constant term one");
        acc = acc.mul_ref(&ratio);
    }
    Ok(acc)
}

fn eps_coefficient(b: &Bivariate, degree: usize, delta: usize) -> OmegaPolynomial {
    OmegaPolynomial(
        (0..=delta)
            .map(|j| b.coeff(j).coeff(degree).clone())
            .collect(),
    )
}

type IntSeries = TruncSeries<BigInt>;
type IntBivariate = TruncSeries<IntSeries>;

/// `(ω + εx)/(1 + ω + εx)` with integer coefficients
/// `[ω^j ε^r] = [j = r = 0] - (-1)^{j+r} C(j+r, r) x^r`.
fn taut_series(x: &BigInt, delta: usize, eps_order: usize) -> IntBivariate {
    let mut powers = Vec::with_capacity(eps_order + 1);
    let mut p = BigInt::one();
    for _ in 0..=eps_order {
        powers.push(p.clone());
        p *= x;
    }
    let coeffs = (0..=delta)
        .map(|j| {
            let eps: Vec<BigInt> = (0..=eps_order)
                .map(|r| {
                    let c = binomial((j + r) as u32, r as u32) * &powers[r];
                    let term = if (j + r) % 2 == 0 { -c } else { c };
                    if j == 0 && r == 0 {
                        term + 1
                    } else {
                        term
                    }
                })
                .collect();
            TruncSeries::from_coeffs("ε", eps_order, eps)
        })
        .collect();
    TruncSeries::from_coeffs("ω", delta, coeffs)
}

/// A bivariate series with integer coefficients over a positive denominator.
#[derive(Clone, Debug)]
struct Scaled {
    num: IntBivariate,
    den: BigInt,
}

impl Scaled {
    /// Divides numerator and denominator by their common content.
    fn reduced(self) -> Scaled {
        let mut g = self.den.clone();
        for s in self.num.coeffs() {
            for v in s.coeffs() {
                if One::is_one(&g) {
                    return self;
                }
                g = g.gcd(v);
            }
        }
        if One::is_one(&g) {
            return self;
        }
        Scaled {
            num: self.num.map(|s| s.map(|v| v / &g)),
            den: &self.den / &g,
        }
    }
}

/// `Σ_i num_i / den_i` over the least common denominator.
fn sum_scaled(parts: Vec<(IntBivariate, BigInt)>) -> Scaled {
    let den = parts
        .iter()
        .fold(BigInt::one(), |acc, (_, d)| acc.lcm(d));
    let mut iter = parts.into_iter();
    let (first, d0) = iter.next().expect("non-empty sum");
    let mut num = first.map(|s| s.map(|v| v * (&den / &d0)));
    for (n, d) in iter {
        let f = &den / &d;
        num = num.add_ref(&n.map(|s| s.map(|v| v * &f)));
    }
    Scaled { num, den }.reduced()
}

/// Numerator and signed denominator `Π w` of one fixed-point factor.
fn partition_term(
    chart: &VertexChart,
    lambda: &Partition,
    sample: &Sample,
    delta: usize,
    eps_order: usize,
) -> Result<(IntBivariate, BigInt), Degenerate> {
    let weights = weight_system(chart, lambda);
    // Π (1 + ε w), built one linear factor at a time
    let mut tangent = vec![BigInt::zero(); eps_order + 1];
    tangent[0] = BigInt::one();
    let mut den = BigInt::one();
    for &w in &weights.tangent {
        let value = sample.eval_int(w);
        if Zero::is_zero(&value) {
            return Err(Degenerate);
        }
        for r in (1..=eps_order).rev() {
            let carry = &tangent[r - 1] * &value;
            tangent[r] += carry;
        }
        den *= value;
    }
    let tangent = TruncSeries::from_coeffs("ε", eps_order, tangent);
    let mut acc: Option<IntBivariate> = None;
    for &x in &weights.taut {
        let f = taut_series(&sample.eval_int(x), delta, eps_order);
        acc = Some(match acc {
            Some(a) => a.mul_ref(&f),
            None => f,
        });
    }
    let num = match acc {
        Some(a) => a.mul_coeff(&tangent),
        None => TruncSeries::constant("ω", delta, tangent),
    };
    if den.is_negative() {
        Ok((num.neg_ref(), -den))
    } else {
        Ok((num, den))
    }
}

/// Per-chart generating series `Σ_λ factor(λ) u^{|λ|}`, `|λ| ≤ max_k`.
fn chart_series(
    chart: &VertexChart,
    sample: &Sample,
    max_k: usize,
    delta: usize,
) -> Result<Vec<Scaled>, Degenerate> {
    (0..=max_k)
        .map(|m| {
            let parts = Partition::all_of(m)
                .iter()
                .map(|lambda| partition_term(chart, lambda, sample, delta, 2 * max_k))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(sum_scaled(parts))
        })
        .collect()
}

/// Product of two `u`-series of scaled coefficients.
fn multiply_u(a: &[Scaled], b: &[Scaled]) -> Vec<Scaled> {
    (0..a.len())
        .map(|k| {
            let parts = (0..=k)
                .map(|m| {
                    let (x, y) = (&a[m], &b[k - m]);
                    (x.num.mul_ref(&y.num), &x.den * &y.den)
                })
                .collect();
            sum_scaled(parts)
        })
        .collect()
}

/// `f_S(k; ω)` for all `k ≤ max_k` at one sample, truncated at `ω^δ`.
///
/// The fixed points of `S^[k]` are products over vertices, so the
/// fixed-point sum factors as a product of per-vertex generating series in an
/// auxiliary variable `u` marking `k`. Each factor is an integer series over
/// the product of its tangent weights; fractions are only formed at the end.
pub fn local_factors(
    surface: &PolarizedToricSurface,
    max_k: usize,
    delta: usize,
    sample: &Sample,
) -> Result<Vec<OmegaPolynomial>, Degenerate> {
    let mut product: Option<Vec<Scaled>> = None;
    for chart in surface.charts() {
        let s = chart_series(&chart, sample, max_k, delta)?;
        product = Some(match product {
            Some(p) => multiply_u(&p, &s),
            None => s,
        });
    }
    let product = product.expect("a polygon has vertices");
    Ok(product
        .iter()
        .enumerate()
        .map(|(k, term)| {
            OmegaPolynomial(
                (0..=delta)
                    .map(|j| Rational::new(term.num.coeff(j).coeff(2 * k).clone(), term.den.clone()))
                    .collect(),
            )
        })
        .collect())
}

/// `f_S(k; ω)` truncated at `ω^δ`, at one sample.
pub fn local_factor(
    surface: &PolarizedToricSurface,
    k: usize,
    delta: usize,
    sample: &Sample,
) -> Result<OmegaPolynomial, Degenerate> {
    Ok(local_factors(surface, k, delta, sample)?.swap_remove(k))
}

fn tuple_contribution(
    charts: &[VertexChart],
    tuple: &PartitionTuple,
    sample: &Sample,
    k: usize,
    delta: usize,
) -> Result<Bivariate, Degenerate> {
    let mut acc: Option<Bivariate> = None;
    for (chart, lambda) in charts.iter().zip(&tuple.0) {
        if lambda.size() == 0 {
            continue;
        }
        let f = weight_factor(&weight_system(chart, lambda), sample, delta, 2 * k)?;
        acc = Some(match acc {
            Some(a) => a.mul_ref(&f),
            None => f,
        });
    }
    Ok(acc.unwrap_or_else(|| {
        TruncSeries::constant(
            "ω",
            delta,
            eps_series(2 * k, Rational::one(), Rational::zero()),
        )
    }))
}

/// `f_S(k; ω)` as an explicit sum over the fixed-point stream, reduced in
/// parallel. Agrees exactly with [`local_factor`].
pub fn local_factor_by_fixed_points(
    surface: &PolarizedToricSurface,
    k: usize,
    delta: usize,
    sample: &Sample,
) -> Result<OmegaPolynomial, Degenerate> {
    let charts = surface.charts();
    let tuples: Vec<PartitionTuple> = fixed_points(surface, k).collect();
    let parts: Vec<OmegaPolynomial> = tuples
        .par_iter()
        .map(|tuple| {
            tuple_contribution(&charts, tuple, sample, k, delta)
                .map(|b| eps_coefficient(&b, 2 * k, delta))
        })
        .collect::<Result<_, _>>()?;
    let mut total = vec![Rational::zero(); delta + 1];
    for p in parts {
        for (acc, c) in total.iter_mut().zip(p.0) {
            *acc += c;
        }
    }
    Ok(OmegaPolynomial(total))
}

/// Per-fixed-point contributions to `f_S(k; ω)`, for diagnostics.
pub fn fixed_point_contributions(
    surface: &PolarizedToricSurface,
    k: usize,
    delta: usize,
    sample: &Sample,
) -> Result<Vec<(PartitionTuple, OmegaPolynomial)>, Degenerate> {
    let charts = surface.charts();
    fixed_points(surface, k)
        .map(|tuple| {
            let b = tuple_contribution(&charts, &tuple, sample, k, delta)?;
            Ok((tuple, eps_coefficient(&b, 2 * k, delta)))
        })
        .collect()
}

/// `∫_{S^[n]} c_{2n}(T S^[n])` by localization, with every `L`-dependent
/// factor set to one.
pub fn top_chern_integral(
    surface: &PolarizedToricSurface,
    n: usize,
    sample: &Sample,
) -> Result<Rational, Degenerate> {
    let mut total = Rational::zero();
    for tuple in fixed_points(surface, n) {
        let mut term = eps_series(2 * n, Rational::one(), Rational::zero());
        for (chart, lambda) in surface.charts().iter().zip(&tuple.0) {
            for w in weight_system(chart, lambda).tangent {
                let value = sample.eval(w);
                if Zero::is_zero(&value) {
                    return Err(Degenerate);
                }
                term = term.mul_ref(&eps_series(2 * n, value.recip(), Rational::one()));
            }
        }
        total += term.coeff(2 * n).clone();
    }
    Ok(total)
}

/// Number of fixed points of `S^[n]` for a surface with `e` fixed points:
/// `[q^n] Π_{m≥1} (1 - q^m)^{-e}`.
pub fn fixed_point_count(e: usize, n: usize) -> BigInt {
    // (1 - q^m)^{-e} = Σ_j C(e + j - 1, j) q^{mj}
    let mut acc = vec![BigInt::zero(); n + 1];
    acc[0] = BigInt::one();
    for m in 1..=n {
        let mut next = vec![BigInt::zero(); n + 1];
        for (deg, c) in acc.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            let mut j = 0;
            while deg + m * j <= n {
                next[deg + m * j] += c * binomial((e + j).saturating_sub(1) as u32, j as u32);
                j += 1;
            }
        }
        acc = next;
    }
    acc[n].clone()
}

/// Verified `f_S(k; ω)`, `k = 0 ..= max_k`, for one connected surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentFactors {
    pub factors: Vec<OmegaPolynomial>,
    pub samples: Vec<Sample>,
}

fn surface_seed(base: u64, surface: &PolarizedToricSurface) -> u64 {
    // FNV-1a over the canonical vertex list
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ base;
    for v in surface.vertices() {
        for c in v {
            for byte in c.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
    }
    h
}

const MAX_SAMPLE_ATTEMPTS: usize = 100;
const SAMPLE_RANGE: i64 = 10_000;

/// Localization driver: draws verified samples and checks agreement.
#[derive(Clone, Debug)]
pub struct Localizer {
    config: Config,
    sample_range: i64,
}

impl Localizer {
    pub fn new(config: Config) -> Self {
        Localizer {
            config,
            sample_range: SAMPLE_RANGE,
        }
    }

    /// Restricts samples to `[-range, range]²`; tiny ranges exercise the
    /// resampling path.
    pub fn with_sample_range(mut self, range: i64) -> Self {
        self.sample_range = range.max(1);
        self
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    /// Deterministic per-surface samples, independent of evaluation order.
    pub fn samples_for(
        &self,
        surface: &PolarizedToricSurface,
        max_k: usize,
    ) -> Result<Vec<Sample>, NodalError> {
        let mut rng = ChaCha8Rng::seed_from_u64(surface_seed(self.config.rng_seed, surface));
        let mut out: Vec<Sample> = Vec::new();
        let mut attempts = 0;
        while out.len() < self.config.sample_count {
            if attempts == MAX_SAMPLE_ATTEMPTS {
                return Err(NodalError::ResampleExhausted { attempts });
            }
            attempts += 1;
            let r = self.sample_range;
            let sample = Sample {
                s: rng.gen_range(-r..=r),
                t: rng.gen_range(-r..=r),
            };
            if sample.is_generic_for(surface, max_k) && !out.contains(&sample) {
                out.push(sample);
            }
        }
        Ok(out)
    }

    /// `f_S(k; ω)` for `k ≤ max_k`, truncated at `ω^max_delta`, required to
    /// agree across all samples.
    pub fn component_factors(
        &self,
        surface: &PolarizedToricSurface,
        max_k: usize,
        max_delta: usize,
    ) -> Result<ComponentFactors, NodalError> {
        let samples = self.samples_for(surface, max_k)?;
        let mut reference: Option<Vec<OmegaPolynomial>> = None;
        for sample in &samples {
            let factors = local_factors(surface, max_k, max_delta, sample)
                .map_err(|_| {
                    NodalError::Inconsistency(format!(
                        "vanishing tangent weight at verified sample {sample:?}"
                    ))
                })?;
            match &reference {
                None => reference = Some(factors),
                Some(r) if *r == factors => {}
                Some(_) => {
                    return Err(NodalError::Inconsistency(format!(
                        "localization of {surface} disagrees between samples {:?} and {sample:?}",
                        samples[0]
                    )))
                }
            }
        }
        Ok(ComponentFactors {
            factors: reference.expect("sample_count >= 1"),
            samples,
        })
    }

    /// Factors for every distinct component of `instances`, computed in
    /// parallel.
    pub fn factor_table(
        &self,
        instances: &[SurfaceInstance],
        max_k: usize,
        max_delta: usize,
    ) -> Result<FactorTable, NodalError> {
        let mut distinct: Vec<PolarizedToricSurface> = instances
            .iter()
            .flat_map(|inst| inst.components().iter().cloned())
            .collect();
        distinct.sort();
        distinct.dedup();
        let computed: Vec<(PolarizedToricSurface, ComponentFactors)> = self.config.install(|| {
            distinct
                .par_iter()
                .map(|s| Ok((s.clone(), self.component_factors(s, max_k, max_delta)?)))
                .collect::<Result<_, NodalError>>()
        })?;
        Ok(FactorTable {
            max_k,
            max_delta,
            factors: computed.into_iter().collect(),
        })
    }

    pub fn relative_hilb_euler(
        &self,
        instance: &SurfaceInstance,
        i: usize,
        delta: usize,
    ) -> Result<Rational, NodalError> {
        self.factor_table(std::slice::from_ref(instance), i, delta)?
            .relative_hilb_euler(instance, i, delta)
    }
}

/// Verified local factors keyed by connected component.
#[derive(Clone, Debug)]
pub struct FactorTable {
    max_k: usize,
    max_delta: usize,
    factors: HashMap<PolarizedToricSurface, ComponentFactors>,
}

impl FactorTable {
    pub fn max_k(&self) -> usize {
        self.max_k
    }

    pub fn max_delta(&self) -> usize {
        self.max_delta
    }

    pub fn get(&self, surface: &PolarizedToricSurface) -> Option<&ComponentFactors> {
        self.factors.get(surface)
    }

    /// `e(Hilb^i(𝒞/ℙ^δ))` for the instance.
    pub fn relative_hilb_euler(
        &self,
        instance: &SurfaceInstance,
        i: usize,
        delta: usize,
    ) -> Result<Rational, NodalError> {
        if i > self.max_k || delta > self.max_delta {
            return Err(NodalError::Inconsistency(format!(
                "factor table covers i ≤ {}, δ ≤ {}; asked for i = {i}, δ = {delta}",
                self.max_k, self.max_delta
            )));
        }
        // Σ over compositions of i = [u^i] Π_α (Σ_k f_α(k; ω) u^k)
        let omega_one = TruncSeries::constant("ω", delta, Rational::one());
        let mut total: TruncSeries<RationalSeries> =
            TruncSeries::constant("u", i, omega_one.clone());
        for comp in instance.components() {
            let cf = self.factors.get(comp).ok_or_else(|| {
                NodalError::Inconsistency(format!("no local factors for component {comp}"))
            })?;
            let series = TruncSeries::from_coeffs(
                "u",
                i,
                cf.factors[..=i]
                    .iter()
                    .map(|f| f.truncate(delta).as_series())
                    .collect(),
            );
            total = total.mul_ref(&series);
        }
        let plus = TruncSeries::from_coeffs(
            "ω",
            delta,
            (0..=delta)
                .map(|j| {
                    let c = binomial(delta as u32 + 1, j as u32);
                    Rational::from_integer(c)
                })
                .collect(),
        );
        let integrand = total.coeff(i).mul_ref(&plus);
        Ok(integrand.coeff(delta).clone())
    }
}

/// `e(Hilb^i(𝒞/ℙ^δ))` for a surface instance, verified across the configured
/// number of samples.
pub fn relative_hilb_euler(
    config: &Config,
    instance: &SurfaceInstance,
    i: usize,
    delta: usize,
) -> Result<Rational, NodalError> {
    Localizer::new(config.clone()).relative_hilb_euler(instance, i, delta)
}
