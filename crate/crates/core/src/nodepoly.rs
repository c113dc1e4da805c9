//! Node polynomials `N_δ(x, y, z, t)` and their evaluation.

use std::fmt;

use crate::algebra::{factorial, Monomial, Var};
use crate::bps::{extract_node_count, EulerSeries};
use crate::error::NodalError;
use crate::toric::{
    ampleness_advisory, AmplenessAdvisory, ChernTuple, LibraryVariant, PolarizedToricSurface,
    SurfaceInstance,
};
use crate::universal_fit::{FitCache, UniversalFitter};
use crate::{Config, Poly, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodePolynomial {
    pub delta: usize,
    pub polynomial: Poly,
}

impl NodePolynomial {
    pub fn evaluate(&self, c: &ChernTuple) -> Rational {
        let point = [c.x, c.y, c.z, c.t, 0].map(|v| Rational::from_integer(v.into()));
        self.polynomial.evaluate(&point)
    }
}

impl fmt::Display for NodePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N_{} = {}", self.delta, self.polynomial)
    }
}

fn t_power(k: usize) -> Monomial {
    Monomial::chern([0, 0, 0, k as u32])
}

fn inv_factorial(k: usize) -> Rational {
    Rational::new(1.into(), factorial(k as u32))
}

/// The fitted `e(Hilb^i(𝒞/ℙ^δ))`, `i = 0 ..= δ`, each checked for degree
/// `≤ i` and `t^i`-coefficient `(δ - i + 1)/i!`.
pub fn euler_polynomials(
    fitter: &UniversalFitter,
    delta: usize,
    mut cache: Option<&mut FitCache>,
) -> Result<Vec<Poly>, NodalError> {
    (0..=delta)
        .map(|i| {
            let p = fitter.polynomial(i, delta, cache.as_deref_mut())?;
            let degree = p.total_degree().unwrap_or(0) as usize;
            if degree > i {
                return Err(NodalError::Inconsistency(format!(
                    "e(Hilb^{i}) for δ = {delta} has degree {degree}"
                )));
            }
            let expected = inv_factorial(i) * Rational::from_integer((delta - i + 1).into());
            if p.coeff(&t_power(i)) != expected {
                return Err(NodalError::Inconsistency(format!(
                    "e(Hilb^{i}) for δ = {delta} has t^{i} coefficient {} instead of {expected}",
                    p.coeff(&t_power(i))
                )));
            }
            Ok(p)
        })
        .collect()
}

/// `N_δ` from a fitter whose degree is at least `δ`.
pub fn node_polynomial_with(
    fitter: &UniversalFitter,
    delta: usize,
    cache: Option<&mut FitCache>,
) -> Result<NodePolynomial, NodalError> {
    let values = euler_polynomials(fitter, delta, cache)?;
    let polynomial = extract_node_count(&EulerSeries::new(Poly::var(Var::G), values));
    let degree = polynomial.total_degree().unwrap_or(0) as usize;
    if degree != delta {
        return Err(NodalError::Inconsistency(format!(
            "N_{delta} has total degree {degree}"
        )));
    }
    if polynomial.coeff(&t_power(delta)) != inv_factorial(delta) {
        return Err(NodalError::Inconsistency(format!(
            "N_{delta} has t^{delta} coefficient {}",
            polynomial.coeff(&t_power(delta))
        )));
    }
    Ok(NodePolynomial { delta, polynomial })
}

/// `N_δ` computed from scratch on the primary generator library.
pub fn node_polynomial(config: &Config, delta: usize) -> Result<NodePolynomial, NodalError> {
    config.check_delta(delta)?;
    let fitter = UniversalFitter::new(config, delta, LibraryVariant::Primary)?;
    node_polynomial_with(&fitter, delta, None)
}

/// `N_0 ..= N_δ` sharing one fitter.
pub fn node_polynomials(
    config: &Config,
    max_delta: usize,
    variant: LibraryVariant,
    mut cache: Option<&mut FitCache>,
) -> Result<Vec<NodePolynomial>, NodalError> {
    config.check_delta(max_delta)?;
    let fitter = UniversalFitter::new(config, max_delta, variant)?;
    (0..=max_delta)
        .map(|d| node_polynomial_with(&fitter, d, cache.as_deref_mut()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodalCount {
    pub value: Rational,
    pub advisory: Option<AmplenessAdvisory>,
}

pub fn count_nodal_chern(n: &NodePolynomial, chern: &ChernTuple) -> NodalCount {
    NodalCount {
        value: n.evaluate(chern),
        advisory: None,
    }
}

pub fn count_nodal(n: &NodePolynomial, instance: &SurfaceInstance) -> NodalCount {
    NodalCount {
        value: n.evaluate(&instance.chern_numbers()),
        advisory: Some(ampleness_advisory(instance, n.delta)),
    }
}

/// Built-in families for [`severi_table`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceFamily {
    ProjectivePlane { degrees: Vec<i64> },
    Quadric { bidegrees: Vec<(i64, i64)> },
}

impl SurfaceFamily {
    pub fn instances(&self) -> Vec<SurfaceInstance> {
        match self {
            SurfaceFamily::ProjectivePlane { degrees } => degrees
                .iter()
                .map(|&d| {
                    SurfaceInstance::connected(
                        format!("P2({d})"),
                        PolarizedToricSurface::projective_plane(d),
                    )
                })
                .collect(),
            SurfaceFamily::Quadric { bidegrees } => bidegrees
                .iter()
                .map(|&(a, b)| {
                    SurfaceInstance::connected(
                        format!("P1xP1({a},{b})"),
                        PolarizedToricSurface::p1_times_p1(a, b),
                    )
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeveriRow {
    pub surface: String,
    pub delta: usize,
    pub count: Rational,
    pub advisory: AmplenessAdvisory,
}

/// Counts for every surface of the family and every polynomial supplied.
pub fn severi_table(family: &SurfaceFamily, polys: &[NodePolynomial]) -> Vec<SeveriRow> {
    let mut rows = Vec::new();
    for inst in family.instances() {
        for n in polys {
            let c = count_nodal(n, &inst);
            rows.push(SeveriRow {
                surface: inst.name.clone(),
                delta: n.delta,
                count: c.value,
                advisory: c.advisory.unwrap_or_default(),
            });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn n1() -> NodePolynomial {
        NodePolynomial {
            delta: 1,
            polynomial: Poly::var(Var::X).scale_by(&rat(3))
                + Poly::var(Var::Y).scale_by(&rat(2))
                + Poly::var(Var::T),
        }
    }

    #[test]
    fn first_node_polynomial() {
        let cfg = Config::default();
        assert_eq!(node_polynomial(&cfg, 0).unwrap().polynomial, Poly::one());
        let n = node_polynomial(&cfg, 1).unwrap();
        assert_eq!(n, n1());
        assert_eq!(n.to_string(), "N_1 = 3*x + 2*y + t");
    }

    #[test]
    fn nodal_plane_curves() {
        let n = n1();
        for d in 1..=6i64 {
            assert_eq!(
                count_nodal(&n, &SurfaceFamily::ProjectivePlane { degrees: vec![d] }.instances()[0])
                    .value,
                rat(3 * (d - 1) * (d - 1))
            );
        }
        assert_eq!(count_nodal_chern(&n, &ChernTuple::new(0, 0, 0, 0)).value, rat(0));
        assert_eq!(count_nodal_chern(&n, &ChernTuple::new(9, -9, 9, 3)).value, rat(12));
    }

    #[test]
    fn severi_table_rows() {
        let fam = SurfaceFamily::ProjectivePlane {
            degrees: (1..=5).collect(),
        };
        let rows = severi_table(&fam, &[n1()]);
        let counts: Vec<Rational> = rows.iter().map(|r| r.count.clone()).collect();
        assert_eq!(counts, [0, 3, 12, 27, 48].map(rat).to_vec());
        assert!(severi_table(&fam, &[]).is_empty());
        let n3 = NodePolynomial {
            delta: 3,
            polynomial: Poly::one(),
        };
        let rows = severi_table(&SurfaceFamily::ProjectivePlane { degrees: vec![2] }, &[n3]);
        assert!(!rows[0].advisory.is_clear());
    }

    #[test]
    fn binodal_plane_curves() {
        let cfg = Config::default();
        let n2 = node_polynomial(&cfg, 2).unwrap();
        let plane = |d: i64| {
            SurfaceFamily::ProjectivePlane { degrees: vec![d] }.instances()[0].chern_numbers()
        };
        // Severi degrees N^{d,2}
        assert_eq!(n2.evaluate(&plane(3)), rat(21));
        assert_eq!(n2.evaluate(&plane(4)), rat(225));
        let quadric = SurfaceFamily::Quadric {
            bidegrees: vec![(2, 2)],
        }
        .instances()[0]
            .chern_numbers();
        // (a1² + a2)/2 with a1 = N_1, a2 = -42x - 39y - 6z - 7t
        let (x, y, z, t) = (quadric.x, quadric.y, quadric.z, quadric.t);
        let a1 = 3 * x + 2 * y + t;
        let a2 = -42 * x - 39 * y - 6 * z - 7 * t;
        assert_eq!(n2.evaluate(&quadric), rat((a1 * a1 + a2) / 2));
    }
}
