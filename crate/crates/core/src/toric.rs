//! Polarized smooth toric surfaces as lattice polygons.
//!
//! A convex lattice polygon `P` determines a toric surface `S_P` with an ample
//! line bundle `L_P`. Vertices are the torus-fixed points; the lattice point
//! `v` of a vertex is the character of `L` there, and the two primitive edge
//! vectors leaving it are the characters of the local coordinates.
//! Smoothness means every vertex cone is unimodular.

use std::fmt;
use std::ops::Add;
use std::path::Path;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::NodalError;
use crate::universal_fit::{modular_rank_selector, MonomialBasis};

pub type Lattice = [i64; 2];

fn sub(a: Lattice, b: Lattice) -> Lattice {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: Lattice, b: Lattice) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Lattice length of a segment and its primitive direction.
fn primitive(v: Lattice) -> (i64, Lattice) {
    let len = v[0].gcd(&v[1]);
    (len, [v[0] / len, v[1] / len])
}

/// Fixed-point data at one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VertexChart {
    /// Character of `L` at the fixed point.
    pub character: Lattice,
    /// Characters of the two local coordinates (primitive edge directions).
    pub coords: [Lattice; 2],
}

impl VertexChart {
    /// Characters of `T_pS`, dual to the coordinates.
    pub fn tangent_characters(&self) -> [Lattice; 2] {
        let [a, b] = self.coords;
        [[-a[0], -a[1]], [-b[0], -b[1]]]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolarizedToricSurface {
    vertices: Vec<Lattice>,
}

impl PolarizedToricSurface {
    /// Validates a polygon given by its vertices in cyclic order (either
    /// orientation). The stored form is counter-clockwise, starting at the
    /// lexicographically smallest vertex.
    pub fn from_polygon(vertices: &[Lattice]) -> Result<Self, NodalError> {
        let n = vertices.len();
        if n < 3 {
            return Err(NodalError::InvalidPolygon(format!(
                "need at least 3 vertices, got {n}"
            )));
        }
        let twice_area: i64 = (0..n)
            .map(|i| cross(vertices[i], vertices[(i + 1) % n]))
            .sum();
        if twice_area == 0 {
            return Err(NodalError::InvalidPolygon("polygon has zero area".into()));
        }
        let mut vs = vertices.to_vec();
        if twice_area < 0 {
            vs.reverse();
        }
        // strict convexity: every other vertex strictly left of every edge
        for i in 0..n {
            let a = vs[i];
            let b = vs[(i + 1) % n];
            for (j, &p) in vs.iter().enumerate() {
                if j == i || j == (i + 1) % n {
                    continue;
                }
                if cross(sub(b, a), sub(p, a)) <= 0 {
                    return Err(NodalError::InvalidPolygon(format!(
                        "vertex {p:?} is not strictly inside the edge {a:?} -> {b:?}"
                    )));
                }
            }
        }
        let start = (0..n).min_by_key(|&i| vs[i]).expect("non-empty");
        vs.rotate_left(start);
        let surface = PolarizedToricSurface { vertices: vs };
        for chart in surface.charts() {
            let det = cross(chart.coords[0], chart.coords[1]);
            if det.abs() != 1 {
                return Err(NodalError::NonSmoothSurface {
                    vertex: chart.character,
                    det,
                });
            }
        }
        Ok(surface)
    }

    /// `ℙ²` with `𝒪(d)`.
    pub fn projective_plane(d: i64) -> Self {
        Self::from_polygon(&[[0, 0], [d, 0], [0, d]]).expect("valid for d >= 1")
    }

    /// `ℙ¹×ℙ¹` with `𝒪(a, b)`.
    pub fn p1_times_p1(a: i64, b: i64) -> Self {
        Self::from_polygon(&[[0, 0], [a, 0], [a, b], [0, b]]).expect("valid for a, b >= 1")
    }

    pub fn vertices(&self) -> &[Lattice] {
        &self.vertices
    }

    pub fn num_fixed_points(&self) -> usize {
        self.vertices.len()
    }

    /// One chart per vertex, in vertex order.
    pub fn charts(&self) -> Vec<VertexChart> {
        let n = self.vertices.len();
        (0..n)
            .map(|k| {
                let v = self.vertices[k];
                let next = self.vertices[(k + 1) % n];
                let prev = self.vertices[(k + n - 1) % n];
                VertexChart {
                    character: v,
                    coords: [primitive(sub(next, v)).1, primitive(sub(prev, v)).1],
                }
            })
            .collect()
    }

    /// Lattice lengths of the edges `v_k -> v_{k+1}`.
    pub fn edge_lengths(&self) -> Vec<i64> {
        let n = self.vertices.len();
        (0..n)
            .map(|k| primitive(sub(self.vertices[(k + 1) % n], self.vertices[k])).0)
            .collect()
    }

    pub fn twice_area(&self) -> i64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| cross(self.vertices[i], self.vertices[(i + 1) % n]))
            .sum()
    }

    pub fn chern_numbers(&self) -> ChernTuple {
        let t = self.vertices.len() as i64;
        ChernTuple {
            x: self.twice_area(),
            y: -self.edge_lengths().iter().sum::<i64>(),
            z: 12 - t,
            t,
        }
    }

    /// Cuts the corner at vertex `k` by `c` lattice steps along both edges
    /// (a toric blow-up of the fixed point, with `L` twisted by `-cE`).
    pub fn cut_corner(&self, k: usize, c: i64) -> Result<Self, NodalError> {
        let chart = self.charts()[k];
        let lengths = self.edge_lengths();
        let n = self.vertices.len();
        let (out_len, in_len) = (lengths[k], lengths[(k + n - 1) % n]);
        if c <= 0 || c >= out_len || c >= in_len {
            return Err(NodalError::InvalidPolygon(format!(
                "corner cut {c} does not fit edges of length {out_len} and {in_len}"
            )));
        }
        let v = chart.character;
        let along = |e: Lattice| [v[0] + c * e[0], v[1] + c * e[1]];
        let mut vs = Vec::with_capacity(n + 1);
        for (j, &w) in self.vertices.iter().enumerate() {
            if j == k {
                vs.push(along(chart.coords[1]));
                vs.push(along(chart.coords[0]));
            } else {
                vs.push(w);
            }
        }
        Self::from_polygon(&vs)
    }
}

impl PolarizedToricSurface {
    /// [`cut_corner`](Self::cut_corner) at the vertex with the given
    /// coordinates.
    pub fn cut_at(&self, vertex: Lattice, c: i64) -> Result<Self, NodalError> {
        let k = self
            .vertices
            .iter()
            .position(|&v| v == vertex)
            .ok_or_else(|| NodalError::InvalidPolygon(format!("{vertex:?} is not a vertex")))?;
        self.cut_corner(k, c)
    }
}

impl fmt::Display for PolarizedToricSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("({},{})", v[0], v[1]))
            .collect();
        write!(f, "[{}]", pts.join(" "))
    }
}

/// `(L², L.K, K², c₂)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChernTuple {
    pub x: i64,
    pub y: i64,
    pub z: i64,
    pub t: i64,
}

impl ChernTuple {
    pub fn new(x: i64, y: i64, z: i64, t: i64) -> Self {
        ChernTuple { x, y, z, t }
    }

    pub fn as_array(&self) -> [i64; 4] {
        [self.x, self.y, self.z, self.t]
    }
}

impl Add for ChernTuple {
    type Output = ChernTuple;
    fn add(self, o: ChernTuple) -> ChernTuple {
        ChernTuple::new(self.x + o.x, self.y + o.y, self.z + o.z, self.t + o.t)
    }
}

impl fmt::Display for ChernTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.x, self.y, self.z, self.t)
    }
}

/// A finite disjoint union of polarized toric surfaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceInstance {
    pub name: String,
    components: Vec<PolarizedToricSurface>,
}

impl SurfaceInstance {
    pub fn new(
        name: impl Into<String>,
        components: Vec<PolarizedToricSurface>,
    ) -> Result<Self, NodalError> {
        if components.is_empty() {
            return Err(NodalError::InvalidPolygon(
                "a surface instance needs at least one component".into(),
            ));
        }
        Ok(SurfaceInstance {
            name: name.into(),
            components,
        })
    }

    pub fn connected(name: impl Into<String>, surface: PolarizedToricSurface) -> Self {
        SurfaceInstance {
            name: name.into(),
            components: vec![surface],
        }
    }

    pub fn components(&self) -> &[PolarizedToricSurface] {
        &self.components
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn chern_numbers(&self) -> ChernTuple {
        chern_numbers(self)
    }

    /// Identity of the underlying geometry, ignoring the name and the order
    /// of components.
    pub fn canonical_key(&self) -> Vec<PolarizedToricSurface> {
        let mut comps = self.components.clone();
        comps.sort();
        comps
    }
}

/// Componentwise sum of `(2·Area, -#boundary points, 12 - #vertices, #vertices)`.
pub fn chern_numbers(instance: &SurfaceInstance) -> ChernTuple {
    instance
        .components
        .iter()
        .map(PolarizedToricSurface::chern_numbers)
        .fold(ChernTuple::default(), Add::add)
}

pub fn surface_from_polygon(vertices: &[Lattice]) -> Result<PolarizedToricSurface, NodalError> {
    PolarizedToricSurface::from_polygon(vertices)
}

/// Result of the δ-very-ampleness heuristic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AmplenessAdvisory {
    pub warnings: Vec<String>,
}

impl AmplenessAdvisory {
    pub fn is_clear(&self) -> bool {
        self.warnings.is_empty()
    }
}

/// Warns for every polygon edge of lattice length `< δ`. On a smooth toric
/// surface edge lengths `≥ δ` make `L` δ-very ample; shorter edges only mean
/// the enumerative reading of a count is not guaranteed.
pub fn ampleness_advisory(instance: &SurfaceInstance, delta: usize) -> AmplenessAdvisory {
    let mut warnings = Vec::new();
    for (ci, comp) in instance.components.iter().enumerate() {
        let n = comp.vertices.len();
        for (k, len) in comp.edge_lengths().into_iter().enumerate() {
            if (len as usize) < delta {
                warnings.push(format!(
                    "{} component {ci}: edge {:?} -> {:?} has lattice length {len} < δ = {delta}; \
                     L may not be {delta}-very ample",
                    instance.name,
                    comp.vertices[k],
                    comp.vertices[(k + 1) % n]
                ));
            }
        }
    }
    AmplenessAdvisory { warnings }
}

/// Which of the two disjoint generator families to draw from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LibraryVariant {
    Primary,
    Alternate,
}

impl LibraryVariant {
    fn parity(self) -> usize {
        match self {
            LibraryVariant::Primary => 0,
            LibraryVariant::Alternate => 1,
        }
    }
}

pub const MAX_LIBRARY_DEGREE: usize = 6;

fn all_components() -> Vec<(String, PolarizedToricSurface)> {
    let mut out = Vec::new();
    for d in 1..=8 {
        out.push((format!("P2({d})"), PolarizedToricSurface::projective_plane(d)));
    }
    for a in 1..=5 {
        for b in a..=5 {
            out.push((format!("P1xP1({a},{b})"), PolarizedToricSurface::p1_times_p1(a, b)));
        }
    }
    // P2 blown up at one point
    for d in 2..=6 {
        for c in 1..d {
            let s = PolarizedToricSurface::projective_plane(d)
                .cut_corner(0, c)
                .expect("cut fits");
            out.push((format!("F1({d},{c})"), s));
        }
    }
    // P1xP1 blown up at one and two points
    for a in 2..=5 {
        for b in a..=5 {
            for c in 1..a {
                let s = PolarizedToricSurface::p1_times_p1(a, b)
                    .cut_corner(2, c)
                    .expect("cut fits");
                out.push((format!("Bl1P1xP1({a},{b};{c})"), s.clone()));
                if 2 * c < a {
                    if let Ok(s2) = s.cut_corner(0, c) {
                        out.push((format!("Bl2P1xP1({a},{b};{c})"), s2));
                    }
                }
            }
        }
    }
    // P2 blown up at three points, then at further fixed points
    for d in 4..=8 {
        for a in 1..d {
            for (b, c) in [(1, 1), (a, 1), (1, a)] {
                if a + b >= d || b + c >= d || c + a >= d {
                    continue;
                }
                let hex = PolarizedToricSurface::from_polygon(&[
                    [a, 0],
                    [d - b, 0],
                    [d - b, b],
                    [c, d - c],
                    [0, d - c],
                    [0, a],
                ])
                .expect("hexagon is smooth");
                out.push((format!("Bl3P2({d};{a},{b},{c})"), hex.clone()));
                if let Ok(s7) = hex.cut_at([d - b, 0], 1) {
                    out.push((format!("Bl4P2({d};{a},{b},{c})"), s7.clone()));
                    if let Ok(s8) = s7.cut_at([0, d - c], 1) {
                        out.push((format!("Bl5P2({d};{a},{b},{c})"), s8));
                    }
                }
            }
        }
    }
    out
}

fn variant_components(variant: LibraryVariant) -> Vec<(String, PolarizedToricSurface)> {
    let mut seen = std::collections::HashSet::new();
    all_components()
        .into_iter()
        .filter(|(_, s)| seen.insert(s.clone()))
        .enumerate()
        .filter(|(i, _)| i % 2 == variant.parity())
        .map(|(_, c)| c)
        .collect()
}

/// Candidate pool: connected components first, then `m`-fold unions for
/// growing `m`.
fn candidate_pool(max_degree: usize, variant: LibraryVariant) -> Vec<SurfaceInstance> {
    let comps = variant_components(variant);
    let mut pool: Vec<SurfaceInstance> = comps
        .iter()
        .map(|(name, s)| SurfaceInstance::connected(name.clone(), s.clone()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a11_0000 + variant.parity() as u64);
    let max_fold = (max_degree + 1).max(2);
    for m in 2..=max_fold {
        for _ in 0..60 {
            let picks: Vec<&(String, PolarizedToricSurface)> = (0..m)
                .map(|_| comps.choose(&mut rng).expect("non-empty"))
                .collect();
            let name = picks
                .iter()
                .map(|(n, _)| n.as_str())
                .collect::<Vec<_>>()
                .join(" + ");
            let components = picks.iter().map(|(_, s)| s.clone()).collect();
            pool.push(SurfaceInstance {
                name,
                components,
            });
        }
        // a little shuffling inside each fold keeps greedy selection from
        // clustering on the first components
        let start = pool.len() - 60;
        pool[start..].shuffle(&mut rng);
    }
    pool
}

/// Number of held-out instances appended after the fitting rows.
pub const HELD_OUT: usize = 6;

/// Deterministic generator family for fitting polynomials of total degree
/// `≤ max_degree` in `(x, y, z, t)`.
///
/// The result is ordered: first a set whose Chern tuples give a full-rank
/// monomial evaluation matrix, topped up to at least 125% of the number of
/// monomials, then [`HELD_OUT`] further instances (connected and disjoint
/// unions mixed) reserved for verification. Connected rational surfaces all
/// satisfy `z + t = 12`, so `m`-fold unions for `m` up to `max_degree + 1` are
/// needed to separate `z` from `t`.
pub fn generator_library(
    max_degree: usize,
    variant: LibraryVariant,
) -> Result<Vec<SurfaceInstance>, NodalError> {
    if max_degree > MAX_LIBRARY_DEGREE {
        return Err(NodalError::DeltaOutOfRange {
            delta: max_degree,
            max: MAX_LIBRARY_DEGREE,
        });
    }
    let basis = MonomialBasis::new(max_degree);
    let pool = candidate_pool(max_degree, variant);
    let tuples: Vec<ChernTuple> = pool.iter().map(SurfaceInstance::chern_numbers).collect();
    let chosen = modular_rank_selector(&basis, &tuples);
    let target = (basis.len() * 5).div_ceil(4);
    let mut used = vec![false; pool.len()];
    let mut out: Vec<SurfaceInstance> = Vec::new();
    for &i in &chosen {
        used[i] = true;
        out.push(pool[i].clone());
    }
    let mut seen: Vec<ChernTuple> = chosen.iter().map(|&i| tuples[i]).collect();
    // extras: prefer instances with new Chern tuples
    for (i, inst) in pool.iter().enumerate() {
        if out.len() >= target {
            break;
        }
        if !used[i] && !seen.contains(&tuples[i]) {
            used[i] = true;
            seen.push(tuples[i]);
            out.push(inst.clone());
        }
    }
    // held-out: alternate unions and connected surfaces from the back of the
    // pool
    let mut held = Vec::new();
    let mut want_union = true;
    let mut guard = 0;
    while held.len() < HELD_OUT && guard < 4 {
        let pick = pool
            .iter()
            .enumerate()
            .rev()
            .find(|(i, inst)| !used[*i] && inst.is_connected() != want_union);
        match pick {
            Some((i, inst)) => {
                used[i] = true;
                held.push(inst.clone());
                guard = 0;
            }
            None => guard += 1,
        }
        want_union = !want_union;
    }
    out.extend(held);
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceFile {
    name: Option<String>,
    polygon: Option<Vec<Lattice>>,
    union: Option<Vec<Vec<Lattice>>>,
}

/// Parses a surface description:
/// `{"name": .., "polygon": [[x,y],..]}` or `{"name": .., "union": [[[x,y],..],..]}`.
pub fn parse_surface_json(text: &str, source_name: &str) -> Result<SurfaceInstance, NodalError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: SurfaceFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner();
        NodalError::Parse {
            source_name: source_name.to_string(),
            context: format!(
                "line {} column {}, field `{}`",
                inner.line(),
                inner.column(),
                e.path()
            ),
            message: inner.to_string(),
        }
    })?;
    let name = file.name.unwrap_or_else(|| source_name.to_string());
    let is_union = file.union.is_some();
    let polygons = match (file.polygon, file.union) {
        (Some(p), None) => vec![p],
        (None, Some(u)) if !u.is_empty() => u,
        (None, Some(_)) => {
            return Err(NodalError::Parse {
                source_name: source_name.to_string(),
                context: "field `union`".into(),
                message: "union must list at least one polygon".into(),
            })
        }
        _ => {
            return Err(NodalError::Parse {
                source_name: source_name.to_string(),
                context: "top level".into(),
                message: "exactly one of `polygon` or `union` is required".into(),
            })
        }
    };
    let components = polygons
        .iter()
        .enumerate()
        .map(|(i, p)| {
            PolarizedToricSurface::from_polygon(p).map_err(|e| NodalError::Parse {
                source_name: source_name.to_string(),
                context: if is_union {
                    format!("field `union[{i}]`")
                } else {
                    "field `polygon`".into()
                },
                message: e.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    SurfaceInstance::new(name, components)
}

pub fn load_surface_file(path: &Path) -> Result<SurfaceInstance, NodalError> {
    let text = std::fs::read_to_string(path).map_err(|source| NodalError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_surface_json(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_cubic() {
        let s = surface_from_polygon(&[[0, 0], [3, 0], [0, 3]]).unwrap();
        assert_eq!(s.chern_numbers(), ChernTuple::new(9, -9, 9, 3));
        assert_eq!(s.num_fixed_points(), 3);
    }

    #[test]
    fn quadric_and_union() {
        assert_eq!(
            PolarizedToricSurface::p1_times_p1(1, 1).chern_numbers(),
            ChernTuple::new(2, -4, 8, 4)
        );
        let line = PolarizedToricSurface::projective_plane(1);
        let u = SurfaceInstance::new("u", vec![line.clone(), line]).unwrap();
        assert_eq!(chern_numbers(&u), ChernTuple::new(2, -6, 18, 6));
    }

    #[test]
    fn orientation_and_rotation_are_normalized() {
        let a = surface_from_polygon(&[[0, 3], [3, 0], [0, 0]]).unwrap();
        let b = surface_from_polygon(&[[3, 0], [0, 3], [0, 0]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.vertices()[0], [0, 0]);
    }

    #[test]
    fn corner_cut_gives_five_fixed_points() {
        let s = surface_from_polygon(&[[1, 0], [3, 0], [3, 2], [0, 2], [0, 1]]).unwrap();
        let c = s.chern_numbers();
        assert_eq!(c.t, 5);
        assert_eq!(c.z + c.t, 12);
        assert_eq!(
            PolarizedToricSurface::p1_times_p1(3, 2)
                .cut_corner(0, 1)
                .unwrap(),
            s
        );
    }

    #[test]
    fn rejects_bad_polygons() {
        assert!(matches!(
            surface_from_polygon(&[[0, 0], [1, 0]]),
            Err(NodalError::InvalidPolygon(_))
        ));
        // collinear middle point
        assert!(matches!(
            surface_from_polygon(&[[0, 0], [1, 0], [2, 0], [0, 2]]),
            Err(NodalError::InvalidPolygon(_))
        ));
        // reflex vertex
        assert!(matches!(
            surface_from_polygon(&[[0, 0], [4, 0], [1, 1], [0, 4]]),
            Err(NodalError::InvalidPolygon(_))
        ));
        // weighted projective plane P(1,1,2) is singular
        assert!(matches!(
            surface_from_polygon(&[[0, 0], [2, 0], [0, 1]]),
            Err(NodalError::NonSmoothSurface { .. })
        ));
    }

    #[test]
    fn advisory_on_short_edges() {
        let cubic = SurfaceInstance::connected("p2", PolarizedToricSurface::projective_plane(3));
        assert!(ampleness_advisory(&cubic, 3).is_clear());
        let conic = SurfaceInstance::connected("p2", PolarizedToricSurface::projective_plane(2));
        assert!(!ampleness_advisory(&conic, 3).is_clear());
        assert!(ampleness_advisory(&conic, 0).is_clear());
    }

    #[test]
    fn every_component_is_smooth_with_noether() {
        for (_, s) in all_components() {
            let c = s.chern_numbers();
            assert_eq!(c.z + c.t, 12);
            assert!(c.x > 0);
        }
    }

    #[test]
    fn surface_json_round() {
        let s = parse_surface_json(r#"{"name":"p2_d3","polygon":[[0,0],[3,0],[0,3]]}"#, "mem")
            .unwrap();
        assert_eq!(s.chern_numbers(), ChernTuple::new(9, -9, 9, 3));
        let u = parse_surface_json(
            r#"{"name":"two lines","union":[[[0,0],[1,0],[0,1]],[[0,0],[1,0],[0,1]]]}"#,
            "mem",
        )
        .unwrap();
        assert_eq!(u.components().len(), 2);
    }

    #[test]
    fn surface_json_errors_carry_context() {
        let err = parse_surface_json("{\"polygon\": [[0,0],[3,0.5],[0,3]]}", "f.json").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("polygon"), "{msg}");
        assert!(msg.contains("line 1"), "{msg}");
        let err = parse_surface_json("{\"name\": \"x\"}", "f.json").unwrap_err();
        assert!(err.to_string().contains("exactly one"));
        let err = parse_surface_json(r#"{"union":[[[0,0],[2,0],[0,1]]]}"#, "f.json").unwrap_err();
        assert!(err.to_string().contains("union[0]"), "{err}");
    }
}
