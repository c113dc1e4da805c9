//! JSON term lists for polynomials in `(x, y, z, t)`.
//!
//! A polynomial is an array of `{"exponents": [a, b, c, d], "coeff_num": "..",
//! "coeff_den": ".."}` with numerator and denominator as decimal strings, terms
//! in the display order of [`MultiPoly`](crate::MultiPoly).

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Monomial, Var};
use crate::error::NodalError;
use crate::{Poly, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub exponents: [u32; 4],
    pub coeff_num: String,
    pub coeff_den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialRecord {
    pub delta: usize,
    pub terms: Vec<TermRecord>,
}

/// Term list of a polynomial free of the genus variable.
pub fn poly_to_terms(p: &Poly) -> Vec<TermRecord> {
    assert_eq!(p.degree_in(Var::G), 0, "genus must be eliminated before export");
    let mut terms: Vec<(&Monomial, &Rational)> = p.terms().collect();
    terms.sort_by(|(a, _), (b, _)| {
        b.total_degree()
            .cmp(&a.total_degree())
            .then_with(|| b.cmp(a))
    });
    terms
        .into_iter()
        .map(|(m, c)| TermRecord {
            exponents: [
                m.exponent(Var::X),
                m.exponent(Var::Y),
                m.exponent(Var::Z),
                m.exponent(Var::T),
            ],
            coeff_num: c.numer().to_string(),
            coeff_den: c.denom().to_string(),
        })
        .collect()
}

fn parse_int(text: &str, field: &str, index: usize) -> Result<BigInt, NodalError> {
    text.parse::<BigInt>().map_err(|e| NodalError::Parse {
        source_name: "term list".into(),
        context: format!("terms[{index}].{field}"),
        message: format!("{text:?} is not a decimal integer: {e}"),
    })
}

pub fn poly_from_terms(terms: &[TermRecord]) -> Result<Poly, NodalError> {
    let mut out = Poly::zero();
    for (index, term) in terms.iter().enumerate() {
        let num = parse_int(&term.coeff_num, "coeff_num", index)?;
        let den = parse_int(&term.coeff_den, "coeff_den", index)?;
        if den.is_zero() || den.is_negative() {
            return Err(NodalError::Parse {
                source_name: "term list".into(),
                context: format!("terms[{index}].coeff_den"),
                message: "denominator must be positive".into(),
            });
        }
        let m = Monomial::chern(term.exponents);
        out = out + Poly::monomial(m, Rational::new(num, den));
    }
    Ok(out)
}

pub fn node_record(delta: usize, p: &Poly) -> PolynomialRecord {
    PolynomialRecord {
        delta,
        terms: poly_to_terms(p),
    }
}

pub fn records_to_string(records: &[PolynomialRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

pub fn records_from_str(text: &str, source_name: &str) -> Result<Vec<PolynomialRecord>, NodalError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| NodalError::Parse {
        source_name: source_name.into(),
        context: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;

    fn sample() -> Poly {
        Poly::var(Var::X).scale_by(&ratio(3, 1))
            + Poly::var(Var::T).scale_by(&ratio(-1, 2))
            + Poly::var(Var::Z) * Poly::var(Var::Y)
            + Poly::constant(ratio(7, 3))
    }

    #[test]
    fn round_trip() {
        let p = sample();
        let terms = poly_to_terms(&p);
        assert_eq!(poly_from_terms(&terms).unwrap(), p);
        let text = records_to_string(&[node_record(2, &p)]);
        let back = records_from_str(&text, "mem").unwrap();
        assert_eq!(back[0].delta, 2);
        assert_eq!(poly_from_terms(&back[0].terms).unwrap(), p);
    }

    #[test]
    fn strings_carry_big_integers() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let p = Poly::constant(Rational::from_integer(big.clone()));
        let terms = poly_to_terms(&p);
        assert_eq!(terms[0].coeff_num, big.to_string());
        assert_eq!(terms[0].exponents, [0, 0, 0, 0]);
    }

    #[test]
    fn highest_degree_first() {
        let terms = poly_to_terms(&sample());
        assert_eq!(terms[0].exponents, [0, 1, 1, 0]);
        assert_eq!(terms.last().unwrap().exponents, [0, 0, 0, 0]);
    }

    #[test]
    fn rejects_bad_fields() {
        let bad = r#"[{"delta": 1, "terms": [{"exponents": [1,0,0,0], "coeff_num": "x", "coeff_den": "1"}]}]"#;
        let recs = records_from_str(bad, "mem").unwrap();
        let err = poly_from_terms(&recs[0].terms).unwrap_err();
        assert!(err.to_string().contains("terms[0].coeff_num"), "{err}");
        let unknown = r#"[{"delta": 1, "terms": [], "extra": 0}]"#;
        let err = records_from_str(unknown, "mem").unwrap_err();
        assert!(matches!(err, NodalError::Parse { .. }));
        let zero_den = vec![TermRecord {
            exponents: [0; 4],
            coeff_num: "1".into(),
            coeff_den: "0".into(),
        }];
        assert!(poly_from_terms(&zero_den).is_err());
    }
}
