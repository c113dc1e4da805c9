//! Acceptance criteria 1-8. Runs without the libtest harness so every
//! criterion prints one PASS/FAIL line; exits nonzero if any fails.

use std::time::{Duration, Instant};

use nodal_core::algebra::{binomial, factorial, rat};
use nodal_core::bps::{bps_transform, nodal_model_series, reexpand, EulerSeries};
use nodal_core::hilb_localize::{fixed_point_count, local_factors, top_chern_integral, Localizer};
use nodal_core::nodepoly::{node_polynomial_with, NodePolynomial};
use nodal_core::toric::{ChernTuple, LibraryVariant, PolarizedToricSurface};
use nodal_core::universal_fit::UniversalFitter;
use nodal_core::{Config, Monomial, Poly, Rational, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn report(id: u32, title: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let (ok, detail) = match outcome {
        Ok(d) if elapsed <= budget => (true, d),
        Ok(d) => (false, format!("{d}; took {elapsed:.2?}, budget {budget:.0?}")),
        Err(e) => (false, e),
    };
    println!(
        "criterion {id}: {} | {title} | {detail} ({elapsed:.2?})",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn classical_n1() -> Poly {
    // c2 + L² + 2 L.(L + K)
    Poly::var(Var::T) + Poly::var(Var::X) + (Poly::var(Var::X) + Poly::var(Var::Y)).scale_by(&rat(2))
}

fn t_pow(k: usize) -> Monomial {
    Monomial::chern([0, 0, 0, k as u32])
}

fn inv_fact(k: usize) -> Rational {
    Rational::new(1.into(), factorial(k as u32))
}

fn node_polys(fitter: &UniversalFitter, max: usize) -> Result<Vec<NodePolynomial>, String> {
    (0..=max)
        .map(|d| node_polynomial_with(fitter, d, None).map_err(|e| e.to_string()))
        .collect()
}

fn eval(p: &Poly, c: ChernTuple) -> Rational {
    p.evaluate(&[c.x, c.y, c.z, c.t, 0].map(rat))
}

fn oracle_surfaces() -> Vec<PolarizedToricSurface> {
    vec![
        PolarizedToricSurface::projective_plane(1),
        PolarizedToricSurface::projective_plane(2),
        PolarizedToricSurface::p1_times_p1(1, 1),
        PolarizedToricSurface::p1_times_p1(2, 2).cut_corner(0, 1).unwrap(),
        PolarizedToricSurface::from_polygon(&[[1, 0], [2, 0], [2, 1], [1, 2], [0, 2], [0, 1]]).unwrap(),
    ]
}

fn main() {
    let config = Config::default();
    let mut all = true;

    all &= report(1, "N_1 = 3x + 2y + t", Duration::from_secs(1), || {
        let fitter = UniversalFitter::new(&config, 1, LibraryVariant::Primary).map_err(|e| e.to_string())?;
        let n1 = node_polynomial_with(&fitter, 1, None).map_err(|e| e.to_string())?;
        ensure(n1.polynomial == classical_n1(), || format!("got {}", n1.polynomial))?;
        Ok(n1.to_string())
    });

    let primary = UniversalFitter::new(&config, 4, LibraryVariant::Primary);
    let mut primary_polys: Option<Vec<NodePolynomial>> = None;

    all &= report(2, "deg N_δ = δ and [t^δ] N_δ = 1/δ!, δ = 1..4", Duration::from_secs(600), || {
        let fitter = primary.as_ref().map_err(|e| e.to_string())?;
        let polys = node_polys(fitter, 4)?;
        for n in &polys[1..] {
            let d = n.delta;
            ensure(n.polynomial.total_degree() == Some(d as u32), || format!("N_{d} degree"))?;
            ensure(n.polynomial.coeff(&t_pow(d)) == inv_fact(d), || format!("N_{d} leading term"))?;
        }
        // literature cross-check: Severi degrees of plane quartics
        let quartic = ChernTuple::new(16, -12, 9, 3);
        let counts: Vec<Rational> = polys.iter().map(|n| eval(&n.polynomial, quartic)).collect();
        ensure(counts == [1, 27, 225, 675, 666].map(rat).to_vec(), || format!("quartics: {counts:?}"))?;
        primary_polys = Some(polys);
        Ok("δ = 1..4; plane quartics 27, 225, 675, 666".into())
    });

    all &= report(3, "[t^i] e(Hilb^i) = (δ-i+1)/i!, 0 ≤ i ≤ δ ≤ 4", Duration::from_secs(600), || {
        let fitter = primary.as_ref().map_err(|e| e.to_string())?;
        let mut count = 0;
        for delta in 0..=4 {
            for i in 0..=delta {
                let fit = fitter.fit(i, delta).map_err(|e| e.to_string())?;
                let expected = inv_fact(i) * rat((delta - i + 1) as i64);
                let got = fit.polynomial.coeff(&t_pow(i));
                ensure(got == expected, || format!("i = {i}, δ = {delta}: {got} vs {expected}"))?;
                ensure(fit.polynomial.total_degree().unwrap_or(0) as usize <= i, || {
                    format!("i = {i}, δ = {delta}: degree too high")
                })?;
                ensure(fit.residual_check.iter().all(|h| h.expected == h.predicted), || {
                    format!("i = {i}, δ = {delta}: held-out residual")
                })?;
                count += 1;
            }
        }
        Ok(format!("{count} fits, held-out residuals zero"))
    });

    all &= report(4, "BPS binomial law for symbolic g, δ ≤ 6", Duration::from_secs(1), || {
        let g = Poly::var(Var::G);
        for delta in 0..=6usize {
            let spec = bps_transform(&EulerSeries::new(g.clone(), nodal_model_series(&g, delta, delta)));
            for s in 0..=delta {
                let expected = Poly::constant(Rational::from_integer(binomial(delta as u32, s as u32)));
                ensure(*spec.at_offset(s) == expected, || format!("δ = {delta}, s = {s}"))?;
            }
            ensure(*spec.node_count() == Poly::one(), || format!("δ = {delta}: n_(g-δ) != 1"))?;
        }
        Ok("δ = 0..6".into())
    });

    all &= report(5, "pencil identity e(Hilb^1(C/P^1)) = x + t; 12 nodal cubics", Duration::from_secs(120), || {
        let mut checked = 0;
        for variant in [LibraryVariant::Primary, LibraryVariant::Alternate] {
            let fitter = UniversalFitter::new(&config, 1, variant).map_err(|e| e.to_string())?;
            for inst in fitter.library().all().filter(|s| s.is_connected()) {
                let c = inst.chern_numbers();
                let e = fitter.table().relative_hilb_euler(inst, 1, 1).map_err(|e| e.to_string())?;
                ensure(e == rat(c.x + c.t), || format!("{}: {e} vs {}", inst.name, c.x + c.t))?;
                checked += 1;
            }
        }
        let cubic = eval(&classical_n1(), ChernTuple::new(9, -9, 9, 3));
        ensure(cubic == rat(12), || format!("nodal cubics: {cubic}"))?;
        let fitter = primary.as_ref().map_err(|e| e.to_string())?;
        let n1 = node_polynomial_with(fitter, 1, None).map_err(|e| e.to_string())?;
        ensure(n1.evaluate(&ChernTuple::new(9, -9, 9, 3)) == rat(12), || "N_1(P2, O(3))".into())?;
        Ok(format!("{checked} connected surfaces"))
    });

    all &= report(6, "localization: sample independence, integrality, c_2n = #fixed points", Duration::from_secs(600), || {
        let fitter = primary.as_ref().map_err(|e| e.to_string())?;
        let loc = Localizer::new(config.clone());
        let mut components: Vec<PolarizedToricSurface> = fitter
            .library()
            .all()
            .flat_map(|s| s.components().iter().cloned())
            .collect();
        components.sort();
        components.dedup();
        for comp in &components {
            let samples = loc.samples_for(comp, 4).map_err(|e| e.to_string())?;
            ensure(samples.len() >= 3, || "fewer than 3 samples".into())?;
            let values: Vec<_> = samples
                .iter()
                .map(|s| local_factors(comp, 4, 4, s).map_err(|_| format!("degenerate sample {s:?}")))
                .collect::<Result<_, _>>()?;
            ensure(values.windows(2).all(|w| w[0] == w[1]), || format!("{comp}: samples disagree"))?;
        }
        let mut integrals = 0;
        for inst in fitter.library().all().filter(|s| s.is_connected()) {
            for delta in 0..=4 {
                for i in 0..=delta {
                    let e = fitter.table().relative_hilb_euler(inst, i, delta).map_err(|e| e.to_string())?;
                    ensure(e.is_integer(), || format!("{}: e(Hilb^{i}) at δ = {delta} is {e}", inst.name))?;
                    integrals += 1;
                }
            }
        }
        let surfaces = oracle_surfaces();
        for s in &surfaces {
            let samples = loc.samples_for(s, 4).map_err(|e| e.to_string())?;
            for n in 0..=4 {
                let expected = Rational::from_integer(fixed_point_count(s.num_fixed_points(), n));
                let got = top_chern_integral(s, n, &samples[0]).map_err(|_| "degenerate".to_string())?;
                ensure(got == expected, || format!("{s}, n = {n}: {got} vs {expected}"))?;
            }
        }
        Ok(format!(
            "{} components x {} samples, {integrals} integer integrals, {} surfaces for c_2n",
            components.len(),
            config.sample_count,
            surfaces.len()
        ))
    });

    all &= report(7, "disjoint libraries give identical N_δ (δ ≤ 3 fast tier, δ = 4 full tier)", Duration::from_secs(600), || {
        let fast_a = UniversalFitter::new(&config, 3, LibraryVariant::Primary).map_err(|e| e.to_string())?;
        let fast_b = UniversalFitter::new(&config, 3, LibraryVariant::Alternate).map_err(|e| e.to_string())?;
        ensure(node_polys(&fast_a, 3)? == node_polys(&fast_b, 3)?, || "fast tier differs".into())?;
        let full_b = UniversalFitter::new(&config, 4, LibraryVariant::Alternate).map_err(|e| e.to_string())?;
        let alt = node_polys(&full_b, 4)?;
        let prim = match &primary_polys {
            Some(p) => p.clone(),
            None => node_polys(primary.as_ref().map_err(|e| e.to_string())?, 4)?,
        };
        ensure(prim == alt, || "full tier differs".into())?;
        Ok("δ ≤ 4 identical".into())
    });

    all &= report(8, "BPS re-expansion reproduces 100 random symbolic-g inputs", Duration::from_secs(5), || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = Poly::var(Var::G);
        for case in 0..100 {
            let delta = rng.gen_range(0..=6);
            let values: Vec<Poly> = (0..=delta)
                .map(|_| {
                    (0..3).fold(Poly::zero(), |acc, _| {
                        let m = Monomial([rng.gen_range(0..3), rng.gen_range(0..2), 0, rng.gen_range(0..2), rng.gen_range(0..4)]);
                        acc + Poly::monomial(m, Rational::new(rng.gen_range(-50..=50).into(), rng.gen_range(1..=9).into()))
                    })
                })
                .collect();
            let back = reexpand(&bps_transform(&EulerSeries::new(g.clone(), values.clone())), delta);
            ensure(back == values, || format!("case {case}"))?;
        }
        Ok("100 inputs, δ ≤ 6".into())
    });

    println!("acceptance: {}", if all { "all criteria passed" } else { "FAILED" });
    if !all {
        std::process::exit(1);
    }
}
