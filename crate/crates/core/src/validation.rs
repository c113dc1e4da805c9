//! Self-checks run by `nodal check`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{binomial, factorial, ratio, Monomial, Var};
use crate::bps::{bps_transform, nodal_model_series, reexpand, EulerSeries};
use crate::error::NodalError;
use crate::hilb_localize::{fixed_point_count, top_chern_integral, Localizer};
use crate::nodepoly::{node_polynomial_with, NodePolynomial};
use crate::toric::{LibraryVariant, PolarizedToricSurface, SurfaceInstance};
use crate::universal_fit::UniversalFitter;
use crate::{Config, Poly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn from_result(name: &str, r: Result<String, String>) -> Self {
        match r {
            Ok(detail) => CheckResult::new(name, true, detail),
            Err(detail) => CheckResult::new(name, false, detail),
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {failed} failed", self.checks.len())
    }
}

fn err_string(e: NodalError) -> String {
    e.to_string()
}

/// `bps_transform` of the δ-nodal model is the binomial spectrum, `δ ≤ 6`.
pub fn check_binomial_law() -> CheckResult {
    let g = Poly::var(Var::G);
    let r = (0..=6usize).try_for_each(|delta| {
        let spec = bps_transform(&EulerSeries::new(g.clone(), nodal_model_series(&g, delta, delta)));
        for (s, n) in spec.entries() {
            let expected = Poly::constant(Rational::from_integer(binomial(delta as u32, s as u32)));
            if *n != expected {
                return Err(format!("δ = {delta}: n_(g-{s}) = {n}, expected {expected}"));
            }
        }
        Ok(())
    });
    CheckResult::from_result("bps binomial law", r.map(|_| "δ = 0..6".into()))
}

fn n1_expected() -> Poly {
    Poly::var(Var::X).scale_by(&ratio(3, 1)) + Poly::var(Var::Y).scale_by(&ratio(2, 1)) + Poly::var(Var::T)
}

fn node_polys(fitter: &UniversalFitter, max: usize) -> Result<Vec<NodePolynomial>, NodalError> {
    (0..=max).map(|d| node_polynomial_with(fitter, d, None)).collect()
}

/// Component factors for `k ≤ max_k` agree across samples on a few surfaces.
pub fn check_sample_independence(config: &Config, max_k: usize) -> CheckResult {
    let loc = Localizer::new(config.clone());
    let surfaces = [
        PolarizedToricSurface::projective_plane(2),
        PolarizedToricSurface::p1_times_p1(1, 2),
        PolarizedToricSurface::projective_plane(3)
            .cut_corner(0, 1)
            .expect("corner cut fits"),
    ];
    let r = surfaces.iter().try_for_each(|s| {
        loc.component_factors(s, max_k, max_k)
            .map(|_| ())
            .map_err(err_string)
    });
    CheckResult::from_result(
        "sample independence",
        r.map(|_| format!("{} surfaces, k ≤ {max_k}, {} samples", surfaces.len(), config.sample_count)),
    )
}

/// `∫ c_{2n}(T S^[n])` equals the number of fixed points.
pub fn check_top_chern(config: &Config, max_n: usize) -> CheckResult {
    let surfaces = [
        PolarizedToricSurface::projective_plane(1),
        PolarizedToricSurface::p1_times_p1(1, 1),
        PolarizedToricSurface::projective_plane(2).cut_corner(0, 1).expect("fits"),
        PolarizedToricSurface::p1_times_p1(2, 3).cut_corner(2, 1).expect("fits"),
        PolarizedToricSurface::p1_times_p1(3, 3)
            .cut_corner(2, 1)
            .and_then(|s| s.cut_corner(0, 1))
            .expect("fits"),
    ];
    let loc = Localizer::new(config.clone());
    let r = surfaces.iter().try_for_each(|s| {
        let samples = loc.samples_for(s, max_n).map_err(err_string)?;
        for n in 0..=max_n {
            let expected = Rational::from_integer(fixed_point_count(s.num_fixed_points(), n));
            for sample in &samples {
                let got = top_chern_integral(s, n, sample)
                    .map_err(|_| format!("degenerate sample {sample:?}"))?;
                if got != expected {
                    return Err(format!("{s}, n = {n}: {got} vs {expected}"));
                }
            }
        }
        Ok(())
    });
    CheckResult::from_result(
        "top Chern class",
        r.map(|_| format!("{} surfaces, n ≤ {max_n}", surfaces.len())),
    )
}

/// Pencil identity `e(Hilb^1(𝒞/ℙ^1)) = x + t` on every connected library
/// surface, and integrality of all `e(Hilb^i(𝒞/ℙ^δ))` on them.
pub fn check_pencil_and_integrality(fitter: &UniversalFitter) -> CheckResult {
    let degree = fitter.degree();
    let r = fitter
        .library()
        .all()
        .filter(|s| s.is_connected())
        .try_for_each(|inst: &SurfaceInstance| {
            let c = inst.chern_numbers();
            if degree >= 1 {
                let e = fitter.table().relative_hilb_euler(inst, 1, 1).map_err(err_string)?;
                if e != Rational::from_integer((c.x + c.t).into()) {
                    return Err(format!("{}: e(Hilb^1) = {e}, x + t = {}", inst.name, c.x + c.t));
                }
            }
            for delta in 0..=degree {
                for i in 0..=delta {
                    let e = fitter.table().relative_hilb_euler(inst, i, delta).map_err(err_string)?;
                    if !e.is_integer() {
                        return Err(format!("{}: e(Hilb^{i}) at δ = {delta} is {e}", inst.name));
                    }
                }
            }
            Ok(())
        });
    CheckResult::from_result(
        "pencil identity and integrality",
        r.map(|_| format!("connected library surfaces, δ ≤ {degree}")),
    )
}

/// Degree and leading `t`-coefficients of the fitted polynomials.
pub fn check_leading_terms(fitter: &UniversalFitter, polys: &[NodePolynomial]) -> CheckResult {
    let r = (|| {
        for n in polys {
            let d = n.delta;
            let lead = n.polynomial.coeff(&Monomial::chern([0, 0, 0, d as u32]));
            if n.polynomial.total_degree().unwrap_or(0) as usize != d
                || lead != Rational::new(1.into(), factorial(d as u32))
            {
                return Err(format!("N_{d} fails degree or leading coefficient"));
            }
            for i in 0..=d {
                let e = fitter.polynomial(i, d, None).map_err(err_string)?;
                let c = e.coeff(&Monomial::chern([0, 0, 0, i as u32]));
                let expected = Rational::new(((d - i + 1) as i64).into(), factorial(i as u32));
                if c != expected {
                    return Err(format!("e_{i} at δ = {d}: t^{i} coefficient {c}"));
                }
            }
        }
        Ok(format!("δ ≤ {}", polys.len().saturating_sub(1)))
    })();
    CheckResult::from_result("leading terms", r)
}

/// Bit-identical node polynomials from the two disjoint libraries.
pub fn check_fit_stability(primary: &[NodePolynomial], alternate: &[NodePolynomial]) -> CheckResult {
    let bad = primary
        .iter()
        .zip(alternate)
        .find(|(a, b)| a.polynomial != b.polynomial);
    match bad {
        None => CheckResult::new(
            "fit stability",
            primary.len() == alternate.len(),
            format!("δ ≤ {} identical across libraries", primary.len().saturating_sub(1)),
        ),
        Some((a, b)) => CheckResult::new("fit stability", false, format!("{a} vs {b}")),
    }
}

fn random_poly(rng: &mut ChaCha8Rng) -> Poly {
    let mut p = Poly::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let m = Monomial([
            rng.gen_range(0..=2),
            0,
            0,
            rng.gen_range(0..=1),
            rng.gen_range(0..=3),
        ]);
        p = p + Poly::monomial(m, ratio(rng.gen_range(-20..=20), rng.gen_range(1..=6)));
    }
    p
}

/// Re-expanding the spectrum reproduces random symbolic-genus inputs.
pub fn check_reexpansion(cases: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Poly::var(Var::G);
    let r = (0..cases).try_for_each(|case| {
        let delta = rng.gen_range(0..=6);
        let values: Vec<Poly> = (0..=delta).map(|_| random_poly(&mut rng)).collect();
        let input = EulerSeries::new(g.clone(), values.clone());
        let back = reexpand(&bps_transform(&input), delta);
        if back != values {
            return Err(format!("case {case}, δ = {delta}: re-expansion differs"));
        }
        Ok(())
    });
    CheckResult::from_result("bps re-expansion", r.map(|_| format!("{cases} random inputs")))
}

/// Runs the suite. `Quick` covers the BPS law, `N_1` and sample independence
/// for `i ≤ 2`; `Full` adds every acceptance check up to `config.max_delta`.
pub fn run(level: Level, config: &Config) -> Report {
    let mut checks = vec![check_binomial_law()];
    match UniversalFitter::new(config, 1, LibraryVariant::Primary)
        .and_then(|f| node_polynomial_with(&f, 1, None))
    {
        Ok(n) => checks.push(CheckResult::new(
            "N_1 identity",
            n.polynomial == n1_expected(),
            n.to_string(),
        )),
        Err(e) => checks.push(CheckResult::new("N_1 identity", false, e.to_string())),
    }
    checks.push(check_sample_independence(config, 2));
    if level == Level::Full {
        let d = config.max_delta;
        checks.push(check_top_chern(config, d.min(4)));
        checks.push(check_reexpansion(100, config.rng_seed));
        let primary = UniversalFitter::new(config, d, LibraryVariant::Primary);
        let alternate = UniversalFitter::new(config, d, LibraryVariant::Alternate);
        match (primary, alternate) {
            (Ok(p), Ok(a)) => {
                checks.push(check_pencil_and_integrality(&p));
                match (node_polys(&p, d), node_polys(&a, d)) {
                    (Ok(np), Ok(na)) => {
                        checks.push(check_leading_terms(&p, &np));
                        checks.push(check_fit_stability(&np, &na));
                    }
                    (Err(e), _) | (_, Err(e)) => {
                        checks.push(CheckResult::new("node polynomials", false, e.to_string()))
                    }
                }
            }
            (Err(e), _) | (_, Err(e)) => {
                checks.push(CheckResult::new("generator libraries", false, e.to_string()))
            }
        }
    }
    Report { checks }
}
