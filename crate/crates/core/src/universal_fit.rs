//! Exact interpolation of universal polynomials in `(x, y, z, t)` from their
//! values on a library of toric surfaces.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::Monomial;
use crate::error::NodalError;
use crate::hilb_localize::{FactorTable, Localizer};
use crate::json::{poly_from_terms, poly_to_terms, TermRecord};
use crate::toric::{generator_library, ChernTuple, LibraryVariant, SurfaceInstance, HELD_OUT};
use crate::{Config, Poly, Rational};

/// Monomials `x^a y^b z^c t^d` with `a + b + c + d ≤ D`, ordered by total
/// degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    degree: usize,
    exponents: Vec<[u32; 4]>,
}

impl MonomialBasis {
    pub fn new(degree: usize) -> Self {
        let mut exponents = Vec::new();
        let d = degree as u32;
        for total in 0..=d {
            for a in (0..=total).rev() {
                for b in (0..=total - a).rev() {
                    for c in (0..=total - a - b).rev() {
                        exponents.push([a, b, c, total - a - b - c]);
                    }
                }
            }
        }
        MonomialBasis { degree, exponents }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[[u32; 4]] {
        &self.exponents
    }

    pub fn evaluate(&self, tuple: &ChernTuple) -> Vec<BigInt> {
        let vals = tuple.as_array();
        self.exponents
            .iter()
            .map(|e| {
                (0..4).fold(BigInt::one(), |acc, k| {
                    acc * num_traits::pow(BigInt::from(vals[k]), e[k] as usize)
                })
            })
            .collect()
    }

    pub fn polynomial(&self, coeffs: &[Rational]) -> Poly {
        Poly::from_terms(
            self.exponents
                .iter()
                .zip(coeffs)
                .map(|(e, c)| (Monomial::chern(*e), c.clone())),
        )
    }
}

const MODULUS: u128 = (1 << 61) - 1;

fn to_mod(v: i64) -> u128 {
    (v as i128).rem_euclid(MODULUS as i128) as u128
}

fn pow_mod(mut b: u128, mut e: u128) -> u128 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % MODULUS;
        }
        b = b * b % MODULUS;
        e >>= 1;
    }
    acc
}

/// Greedy choice of tuples whose monomial rows are independent modulo a large
/// prime, in input order. Independence mod p implies independence over ℚ.
pub fn modular_rank_selector(basis: &MonomialBasis, tuples: &[ChernTuple]) -> Vec<usize> {
    let n = basis.len();
    // echelon rows keyed by pivot column, each normalized to pivot 1
    let mut echelon: Vec<Option<Vec<u128>>> = vec![None; n];
    let mut chosen = Vec::new();
    for (idx, tuple) in tuples.iter().enumerate() {
        if chosen.len() == n {
            break;
        }
        let vals = tuple.as_array().map(to_mod);
        let mut row: Vec<u128> = basis
            .exponents()
            .iter()
            .map(|e| {
                (0..4).fold(1u128, |acc, k| acc * pow_mod(vals[k], e[k] as u128) % MODULUS)
            })
            .collect();
        for col in 0..n {
            if row[col] == 0 {
                continue;
            }
            match &echelon[col] {
                Some(pivot_row) => {
                    let f = row[col];
                    for j in col..n {
                        row[j] = (row[j] + MODULUS - f * pivot_row[j] % MODULUS) % MODULUS;
                    }
                }
                None => {
                    let inv = pow_mod(row[col], MODULUS - 2);
                    for v in row.iter_mut().skip(col) {
                        *v = *v * inv % MODULUS;
                    }
                    echelon[col] = Some(row);
                    chosen.push(idx);
                    break;
                }
            }
        }
    }
    chosen
}

/// Row echelon form of an integer matrix by fraction-free elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: Vec<Vec<BigInt>>,
    /// `(row, column)` of each pivot, in order.
    pivots: Vec<(usize, usize)>,
}

impl Echelon {
    /// Eliminates over the first `columns` entries of each row; any further
    /// entries (right-hand sides) are carried along.
    pub fn new(mut rows: Vec<Vec<BigInt>>, columns: usize) -> Result<Self, NodalError> {
        let m = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        let mut prev = BigInt::one();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..columns {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let (head, tail) = rows.split_at_mut(r + 1);
            let pivot_row = &head[r];
            let pivot = pivot_row[col].clone();
            for row in tail.iter_mut() {
                let factor = row[col].clone();
                for j in col + 1..width {
                    let num = &pivot * &row[j] - &factor * &pivot_row[j];
                    let (q, rem) = num.div_rem(&prev);
                    if !rem.is_zero() {
                        return Err(NodalError::Inconsistency(
                            "fraction-free elimination produced a non-exact quotient".into(),
                        ));
                    }
                    row[j] = q;
                }
                row[col] = BigInt::zero();
            }
            prev = pivot;
            pivots.push((r, col));
            r += 1;
        }
        Ok(Echelon { rows, pivots })
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Bit lengths of the pivots.
    pub fn pivot_bits(&self) -> Vec<u64> {
        self.pivots
            .iter()
            .map(|&(r, c)| self.rows[r][c].bits())
            .collect()
    }

    /// Rows below the rank whose carried entries are nonzero.
    pub fn inconsistent_rows(&self, columns: usize) -> usize {
        self.rows[self.rank()..]
            .iter()
            .filter(|row| row[columns..].iter().any(|v| !v.is_zero()))
            .count()
    }

    /// Back substitution for the carried column `columns` (the first
    /// right-hand side). Requires full column rank.
    pub fn back_substitute(&self, columns: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); columns];
        for &(r, c) in self.pivots.iter().rev() {
            let row = &self.rows[r];
            let mut acc = Rational::from_integer(row[columns].clone());
            for j in c + 1..columns {
                acc -= Rational::from_integer(row[j].clone()) * &x[j];
            }
            x[c] = acc / Rational::from_integer(row[c].clone());
        }
        x
    }
}

pub fn exact_rank(matrix: &[Vec<BigInt>]) -> usize {
    let cols = matrix.first().map_or(0, Vec::len);
    Echelon::new(matrix.to_vec(), cols)
        .expect("exact division holds for integer matrices")
        .rank()
}

/// Solves `A c = b` exactly for an overdetermined integer `A` of full column
/// rank and rational `b`.
pub fn solve_exact(a: &[Vec<BigInt>], b: &[Rational]) -> Result<Vec<Rational>, NodalError> {
    let columns = a.first().map_or(0, Vec::len);
    let augmented: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let den = rhs.denom().clone();
            let mut out: Vec<BigInt> = row.iter().map(|v| v * &den).collect();
            out.push(rhs.numer().clone());
            out
        })
        .collect();
    let ech = Echelon::new(augmented, columns)?;
    if ech.rank() < columns {
        return Err(NodalError::InsufficientGenerators {
            rank: ech.rank(),
            required: columns,
        });
    }
    let bad = ech.inconsistent_rows(columns);
    if bad > 0 {
        return Err(NodalError::Inconsistency(format!(
            "{bad} fitting equations contradict the others"
        )));
    }
    Ok(ech.back_substitute(columns))
}

/// Ordered generator library: fitting rows followed by held-out rows.
#[derive(Clone, Debug)]
pub struct Library {
    pub fitting: Vec<SurfaceInstance>,
    pub held_out: Vec<SurfaceInstance>,
}

impl Library {
    pub fn generate(max_degree: usize, variant: LibraryVariant) -> Result<Self, NodalError> {
        Ok(Library::from_ordered(generator_library(max_degree, variant)?))
    }

    /// Splits a list produced by [`generator_library`].
    pub fn from_ordered(mut all: Vec<SurfaceInstance>) -> Self {
        let split = all.len().saturating_sub(HELD_OUT);
        let held_out = all.split_off(split);
        Library {
            fitting: all,
            held_out,
        }
    }

    pub fn all(&self) -> impl Iterator<Item = &SurfaceInstance> {
        self.fitting.iter().chain(&self.held_out)
    }

    /// Stable digest of the library geometry.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (tag, list) in [("fit", &self.fitting), ("held", &self.held_out)] {
            h.update(tag.as_bytes());
            for inst in list.iter() {
                for comp in inst.components() {
                    for v in comp.vertices() {
                        h.update(v[0].to_le_bytes());
                        h.update(v[1].to_le_bytes());
                    }
                    h.update(b";");
                }
                h.update(b"|");
            }
        }
        hex::encode(&h.finalize()[..16])
    }

    fn dedup_fitting(&self) -> (Vec<SurfaceInstance>, usize) {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for inst in &self.fitting {
            if seen.insert(inst.canonical_key()) {
                out.push(inst.clone());
            }
        }
        let removed = self.fitting.len() - out.len();
        (out, removed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeldOutCheck {
    pub name: String,
    pub expected: Rational,
    pub predicted: Rational,
}

impl HeldOutCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.predicted
    }
}

#[derive(Clone, Debug)]
pub struct FitResult {
    pub i: usize,
    pub delta: usize,
    pub polynomial: Poly,
    pub instances_used: Vec<String>,
    pub residual_check: Vec<HeldOutCheck>,
}

#[derive(Clone, Debug)]
pub struct FitReport {
    pub i: usize,
    pub delta: usize,
    pub rank: usize,
    pub required: usize,
    pub pivot_bits: Vec<u64>,
    pub instances: Vec<String>,
    pub duplicates_removed: usize,
    pub inconsistent_rows: usize,
    pub held_out: Vec<HeldOutCheck>,
}

impl FitReport {
    pub fn full_rank(&self) -> bool {
        self.rank == self.required
    }
}

fn rows_and_values(
    i: usize,
    delta: usize,
    instances: &[SurfaceInstance],
    table: &FactorTable,
) -> Result<(MonomialBasis, Vec<Vec<BigInt>>, Vec<Rational>), NodalError> {
    let basis = MonomialBasis::new(i);
    let rows = instances
        .iter()
        .map(|inst| basis.evaluate(&inst.chern_numbers()))
        .collect();
    let values = instances
        .iter()
        .map(|inst| table.relative_hilb_euler(inst, i, delta))
        .collect::<Result<_, _>>()?;
    Ok((basis, rows, values))
}

fn held_out_checks(
    poly: &Poly,
    i: usize,
    delta: usize,
    library: &Library,
    table: &FactorTable,
) -> Result<Vec<HeldOutCheck>, NodalError> {
    library
        .held_out
        .iter()
        .map(|inst| {
            let c = inst.chern_numbers();
            let point = [c.x, c.y, c.z, c.t, 0].map(|v| Rational::from_integer(v.into()));
            Ok(HeldOutCheck {
                name: inst.name.clone(),
                expected: table.relative_hilb_euler(inst, i, delta)?,
                predicted: poly.evaluate(&point),
            })
        })
        .collect()
}

/// The unique polynomial of degree `≤ i` matching `e(Hilb^i(𝒞/ℙ^δ))` on the
/// fitting instances, verified on the held-out ones.
pub fn fit_universal(
    i: usize,
    delta: usize,
    library: &Library,
    table: &FactorTable,
) -> Result<FitResult, NodalError> {
    let (instances, _) = library.dedup_fitting();
    let (basis, rows, values) = rows_and_values(i, delta, &instances, table)?;
    let coeffs = solve_exact(&rows, &values)?;
    let polynomial = basis.polynomial(&coeffs);
    let residual_check = held_out_checks(&polynomial, i, delta, library, table)?;
    if let Some(bad) = residual_check.iter().find(|c| !c.passed()) {
        return Err(NodalError::Inconsistency(format!(
            "held-out instance {} has e(Hilb^{i}) = {} but the fit predicts {}",
            bad.name, bad.expected, bad.predicted
        )));
    }
    if library.held_out.iter().all(SurfaceInstance::is_connected) && !library.held_out.is_empty() {
        log::warn!("held-out set has no disjoint union");
    }
    Ok(FitResult {
        i,
        delta,
        polynomial,
        instances_used: instances.into_iter().map(|s| s.name).collect(),
        residual_check,
    })
}

/// Rank and pivot diagnostics for the `(i, δ)` fit; rank deficiency is
/// reported, not raised.
pub fn fit_report(
    i: usize,
    delta: usize,
    library: &Library,
    table: &FactorTable,
) -> Result<FitReport, NodalError> {
    let (instances, duplicates_removed) = library.dedup_fitting();
    let (basis, rows, values) = rows_and_values(i, delta, &instances, table)?;
    let columns = basis.len();
    let augmented: Vec<Vec<BigInt>> = rows
        .iter()
        .zip(&values)
        .map(|(row, rhs)| {
            let mut out: Vec<BigInt> = row.iter().map(|v| v * rhs.denom()).collect();
            out.push(rhs.numer().clone());
            out
        })
        .collect();
    let ech = Echelon::new(augmented, columns)?;
    let held_out = if ech.rank() == columns {
        let poly = basis.polynomial(&ech.back_substitute(columns));
        held_out_checks(&poly, i, delta, library, table)?
    } else {
        Vec::new()
    };
    Ok(FitReport {
        i,
        delta,
        rank: ech.rank(),
        required: columns,
        pivot_bits: ech.pivot_bits(),
        instances: instances.into_iter().map(|s| s.name).collect(),
        duplicates_removed,
        inconsistent_rows: ech.inconsistent_rows(columns),
        held_out,
    })
}

const CACHE_FORMAT: &str = concat!("nodal-fit-", env!("CARGO_PKG_VERSION"), "-1");

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CacheEntry {
    i: usize,
    delta: usize,
    library: String,
    version: String,
    terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CacheFile {
    entries: Vec<CacheEntry>,
}

/// On-disk store of fitted polynomials keyed by `(i, δ, library, version)`.
#[derive(Clone, Debug)]
pub struct FitCache {
    path: PathBuf,
    entries: BTreeMap<(usize, usize, String, String), Poly>,
}

impl FitCache {
    pub fn open(path: &Path) -> Result<Self, NodalError> {
        let mut entries = BTreeMap::new();
        if path.exists() {
            let text = fs::read_to_string(path).map_err(|source| NodalError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            let de = &mut serde_json::Deserializer::from_str(&text);
            let file: CacheFile =
                serde_path_to_error::deserialize(de).map_err(|e| NodalError::Parse {
                    source_name: path.display().to_string(),
                    context: e.path().to_string(),
                    message: e.inner().to_string(),
                })?;
            for e in file.entries {
                let poly = poly_from_terms(&e.terms)?;
                entries.insert((e.i, e.delta, e.library, e.version), poly);
            }
        }
        Ok(FitCache {
            path: path.to_path_buf(),
            entries,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, delta: usize, library: &str) -> Option<&Poly> {
        self.entries
            .get(&(i, delta, library.to_string(), CACHE_FORMAT.to_string()))
    }

    pub fn insert(&mut self, i: usize, delta: usize, library: &str, poly: Poly) {
        self.entries
            .insert((i, delta, library.to_string(), CACHE_FORMAT.to_string()), poly);
    }

    /// Entries keyed by `(i, δ, library, version)`, in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, String, String), &Poly)> {
        self.entries.iter()
    }

    pub fn save(&self) -> Result<(), NodalError> {
        let file = CacheFile {
            entries: self
                .entries
                .iter()
                .map(|((i, delta, library, version), p)| CacheEntry {
                    i: *i,
                    delta: *delta,
                    library: library.clone(),
                    version: version.clone(),
                    terms: poly_to_terms(p),
                })
                .collect(),
        };
        let io = |source| NodalError::Io {
            path: self.path.clone(),
            source,
        };
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(io)?;
        }
        let text = serde_json::to_string_pretty(&file).expect("cache serializes");
        fs::write(&self.path, text + "\n").map_err(io)
    }

    pub fn clear(path: &Path) -> Result<bool, NodalError> {
        match fs::remove_file(path) {
            Ok(()) => Ok(true),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(false),
            Err(source) => Err(NodalError::Io {
                path: path.to_path_buf(),
                source,
            }),
        }
    }
}

/// A generator library with its verified local factors, able to fit every
/// `(i, δ)` with `i ≤ δ ≤ degree`.
#[derive(Clone, Debug)]
pub struct UniversalFitter {
    library: Library,
    table: FactorTable,
    degree: usize,
}

impl UniversalFitter {
    pub fn new(config: &Config, degree: usize, variant: LibraryVariant) -> Result<Self, NodalError> {
        config.validate()?;
        let library = Library::generate(degree, variant)?;
        Self::with_library(config, degree, library)
    }

    pub fn with_library(config: &Config, degree: usize, library: Library) -> Result<Self, NodalError> {
        let all: Vec<SurfaceInstance> = library.all().cloned().collect();
        let start = std::time::Instant::now();
        let table = Localizer::new(config.clone()).factor_table(&all, degree, degree)?;
        log::info!(
            "local factors for {} instances at degree {degree} in {:.2?}",
            all.len(),
            start.elapsed()
        );
        Ok(UniversalFitter {
            library,
            table,
            degree,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn library(&self) -> &Library {
        &self.library
    }

    pub fn table(&self) -> &FactorTable {
        &self.table
    }

    pub fn fit(&self, i: usize, delta: usize) -> Result<FitResult, NodalError> {
        if i > delta || delta > self.degree {
            return Err(NodalError::DeltaOutOfRange {
                delta,
                max: self.degree,
            });
        }
        fit_universal(i, delta, &self.library, &self.table)
    }

    pub fn report(&self, i: usize, delta: usize) -> Result<FitReport, NodalError> {
        fit_report(i, delta, &self.library, &self.table)
    }

    /// Fitted polynomial, consulting and updating `cache` when given.
    pub fn polynomial(
        &self,
        i: usize,
        delta: usize,
        cache: Option<&mut FitCache>,
    ) -> Result<Poly, NodalError> {
        let key = self.library.hash();
        match cache {
            Some(cache) => {
                if let Some(p) = cache.get(i, delta, &key) {
                    return Ok(p.clone());
                }
                let p = self.fit(i, delta)?.polynomial;
                cache.insert(i, delta, &key, p.clone());
                Ok(p)
            }
            None => Ok(self.fit(i, delta)?.polynomial),
        }
    }
}
