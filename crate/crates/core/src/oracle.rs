//! Ground-truth instances for small simple polytopes.
//!
//! An [`Instance`] is given by its vertex-facet incidences; the graph is
//! derived from them (two vertices are adjacent iff they share `d - 1`
//! facets). Faces of every dimension are intersections of facets through a
//! vertex, which is valid because the polytopes are simple.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{
    count_sinks_in_set, histogram_unchecked, topo_unchecked, validate_graph, HVector, Orientation,
    PolytopeGraph, TopoOutcome,
};
use crate::ksystem::SetSystem;

/// A simple polytope at desk scale: graph plus facet incidences, and exact
/// coordinates when the generator knows them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub graph: PolytopeGraph,
    /// Vertex set of every facet, sorted; the list itself is sorted.
    pub facets: Vec<Vec<usize>>,
    pub coords: Option<Vec<Vec<BigRational>>>,
}

impl Instance {
    /// Builds an instance from facet incidences and checks simplicity.
    pub fn from_facets(
        name: impl Into<String>,
        d: usize,
        n: usize,
        facets: Vec<Vec<usize>>,
        coords: Option<Vec<Vec<BigRational>>>,
    ) -> Result<Self> {
        let mut facets: Vec<Vec<usize>> = facets
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect();
        facets.sort();
        if facets.windows(2).any(|w| w[0] == w[1]) || facets.iter().any(|f| f.is_empty()) {
            return Err(Error::NotSimple(
                "facets must be distinct and non-empty".into(),
            ));
        }
        let mut through = vec![Vec::new(); n];
        for (i, f) in facets.iter().enumerate() {
            for &v in f {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                through[v].push(i);
            }
        }
        if let Some(v) = (0..n).find(|&v| through[v].len() != d) {
            return Err(Error::NotSimple(format!(
                "vertex {v} lies in {} facets, expected {d}",
                through[v].len()
            )));
        }
        if let Some(c) = &coords {
            if c.len() != n || c.iter().any(|x| x.len() != d) {
                return Err(Error::InvalidParams(
                    "coordinate table has wrong shape".into(),
                ));
            }
        }
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if common(&through[u], &through[v]) + 1 == d {
                    edges.push((u, v));
                }
            }
        }
        let graph = validate_graph(d, n, &edges).map_err(|e| Error::NotSimple(e.to_string()))?;
        for f in &facets {
            if !induces_connected_regular(&graph, f, d - 1) {
                return Err(Error::NotSimple(format!(
                    "facet {f:?} does not induce a connected {}-regular subgraph",
                    d - 1
                )));
            }
        }
        Ok(Instance {
            name: name.into(),
            graph,
            facets,
            coords,
        })
    }

    pub fn dim(&self) -> usize {
        self.graph.dim()
    }

    /// Indices of the facets containing `v`, ascending.
    pub fn facets_through(&self, v: usize) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&i| self.facets[i].binary_search(&v).is_ok())
            .collect()
    }
}

fn common(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|x| b.contains(x)).count()
}

pub(crate) fn induces_connected_regular(g: &PolytopeGraph, set: &[usize], k: usize) -> bool {
    let mut mask = vec![false; g.vertex_count()];
    for &v in set {
        mask[v] = true;
    }
    if set
        .iter()
        .any(|&v| g.neighbors(v).iter().filter(|&&w| mask[w]).count() != k)
    {
        return false;
    }
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![set[0]];
    seen[set[0]] = true;
    let mut reached = 1;
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            if mask[w] && !seen[w] {
                seen[w] = true;
                reached += 1;
                stack.push(w);
            }
        }
    }
    reached == set.len()
}

/// Polytope families known to the generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Simplex(usize),
    Cube(usize),
    Product(Box<Family>, Box<Family>),
    /// Truncate vertex `v` (an id of the inner instance).
    Truncate(Box<Family>, usize),
    /// The 3-cube with two non-adjacent vertices of one square cut off.
    Fig1,
}

impl Family {
    /// Triangular prism, `cube(1) x simplex(2)`.
    pub fn prism() -> Self {
        Family::Product(Box::new(Family::Cube(1)), Box::new(Family::Simplex(2)))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Simplex(d) => write!(f, "simplex:{d}"),
            Family::Cube(d) => write!(f, "cube:{d}"),
            Family::Product(a, b) => write!(f, "product({a},{b})"),
            Family::Truncate(a, v) => write!(f, "truncate({a},{v})"),
            Family::Fig1 => f.write_str("fig1"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Grammar: `simplex:D | cube:D | fig1 | prism | product(A,B) | truncate(A,V)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown family {s:?}"));
        if s == "fig1" {
            return Ok(Family::Fig1);
        }
        if s == "prism" {
            return Ok(Family::prism());
        }
        if let Some((name, arg)) = s.split_once(':').filter(|_| !s.contains('(')) {
            let d: usize = arg.trim().parse().map_err(|_| bad())?;
            return match name.trim() {
                "simplex" => Ok(Family::Simplex(d)),
                "cube" => Ok(Family::Cube(d)),
                _ => Err(bad()),
            };
        }
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        // split at the top-level comma
        let mut depth = 0i32;
        let mut split = None;
        for (i, c) in inner.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => split = Some(i),
                _ => {}
            }
        }
        let at = split.ok_or_else(bad)?;
        let (a, b) = (&inner[..at], &inner[at + 1..]);
        match name.trim() {
            "product" => Ok(Family::Product(Box::new(a.parse()?), Box::new(b.parse()?))),
            "truncate" => Ok(Family::Truncate(
                Box::new(a.parse()?),
                b.trim().parse().map_err(|_| bad())?,
            )),
            _ => Err(bad()),
        }
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn generate(family: &Family) -> Result<Instance> {
    match family {
        Family::Simplex(d) => simplex(*d),
        Family::Cube(d) => cube(*d),
        Family::Product(a, b) => product(&generate(a)?, &generate(b)?),
        Family::Truncate(a, v) => truncate_vertex(&generate(a)?, *v),
        Family::Fig1 => {
            // Vertices 000 and 110 (ids 0 and 3) of the square z = 0 are not
            // adjacent. After removing vertex 0, old id 3 becomes 2.
            let once = truncate_vertex(&cube(3)?, 0)?;
            let mut inst = truncate_vertex(&once, 2)?;
            inst.name = "fig1".into();
            Ok(inst)
        }
    }
}

fn simplex(d: usize) -> Result<Instance> {
    if d == 0 {
        return Err(Error::InvalidParams("simplex needs d >= 1".into()));
    }
    let n = d + 1;
    let facets = (0..n)
        .map(|skip| (0..n).filter(|&v| v != skip).collect())
        .collect();
    // vertex 0 at the origin, vertex i at e_i
    let coords = (0..n)
        .map(|v| {
            (1..=d)
                .map(|i| if i == v { int(1) } else { int(0) })
                .collect()
        })
        .collect();
    Instance::from_facets(format!("simplex:{d}"), d, n, facets, Some(coords))
}

fn cube(d: usize) -> Result<Instance> {
    if d == 0 || d > 20 {
        return Err(Error::InvalidParams("cube needs 1 <= d <= 20".into()));
    }
    let n = 1usize << d;
    let facets = (0..d)
        .flat_map(|b| [0, 1].map(|side| (0..n).filter(|v| (v >> b) & 1 == side).collect()))
        .collect();
    let coords = (0..n)
        .map(|v| (0..d).map(|b| int(((v >> b) & 1) as i64)).collect())
        .collect();
    Instance::from_facets(format!("cube:{d}"), d, n, facets, Some(coords))
}

/// Cartesian product; vertex `(a, b)` gets id `a * n_b + b`.
pub fn product(a: &Instance, b: &Instance) -> Result<Instance> {
    let (na, nb) = (a.graph.vertex_count(), b.graph.vertex_count());
    let id = |x: usize, y: usize| x * nb + y;
    let mut facets = Vec::new();
    for f in &a.facets {
        facets.push(
            f.iter()
                .flat_map(|&x| (0..nb).map(move |y| id(x, y)))
                .collect(),
        );
    }
    for f in &b.facets {
        facets.push(
            (0..na)
                .flat_map(|x| f.iter().map(move |&y| id(x, y)))
                .collect(),
        );
    }
    let coords = match (&a.coords, &b.coords) {
        (Some(ca), Some(cb)) => Some(
            (0..na)
                .flat_map(|x| (0..nb).map(move |y| (x, y)))
                .map(|(x, y)| ca[x].iter().chain(&cb[y]).cloned().collect())
                .collect(),
        ),
        _ => None,
    };
    Instance::from_facets(
        format!("product({},{})", a.name, b.name),
        a.dim() + b.dim(),
        na * nb,
        facets,
        coords,
    )
}

/// Cuts off vertex `v` combinatorially. Surviving vertices keep their order
/// (ids above `v` shift down by one); the `d` new vertices, one per former
/// neighbor of `v` in neighbor order, are appended. Coordinates are dropped.
pub fn truncate_vertex(inst: &Instance, v: usize) -> Result<Instance> {
    let g = &inst.graph;
    let n = g.vertex_count();
    let d = g.dim();
    if v >= n {
        return Err(Error::InvalidParams(format!(
            "vertex {v} out of range (n = {n})"
        )));
    }
    let through = inst.facets_through(v);
    if through.len() != d {
        return Err(Error::NotSimple(format!(
            "vertex {v} lies in {} facets",
            through.len()
        )));
    }
    let renum = |x: usize| if x > v { x - 1 } else { x };
    let nbrs = g.neighbors(v);
    let new_id = |j: usize| n - 1 + j;
    let mut facets: Vec<Vec<usize>> = Vec::with_capacity(inst.facets.len() + 1);
    for f in &inst.facets {
        let mut nf: Vec<usize> = f.iter().filter(|&&x| x != v).map(|&x| renum(x)).collect();
        if f.binary_search(&v).is_ok() {
            // the edge {v, u} lies in this facet iff u does
            for (j, &u) in nbrs.iter().enumerate() {
                if f.binary_search(&u).is_ok() {
                    nf.push(new_id(j));
                }
            }
        }
        facets.push(nf);
    }
    facets.push((0..d).map(new_id).collect());
    Instance::from_facets(
        format!("truncate({},{v})", inst.name),
        d,
        n - 1 + d,
        facets,
        None,
    )
}

/// The true `F_k`: vertex sets of all k-faces, `0 <= k <= d - 1`.
pub fn faces_from_incidence(inst: &Instance, k: usize) -> Result<SetSystem> {
    let d = inst.dim();
    if k >= d {
        return Err(Error::KOutOfRange {
            k,
            min: 0,
            max: d - 1,
        });
    }
    let g = &inst.graph;
    let mut found = BTreeSet::new();
    for v in 0..g.vertex_count() {
        let through = inst.facets_through(v);
        for subset in through.iter().combinations(d - k) {
            let mut face = inst.facets[*subset[0]].clone();
            for &&i in &subset[1..] {
                face.retain(|x| inst.facets[i].binary_search(x).is_ok());
            }
            found.insert(face);
        }
    }
    for face in &found {
        assert!(
            face.len() > k && induces_connected_regular(g, face, k),
            "face {face:?} of {} is not a connected {k}-regular set; corrupted instance",
            inst.name
        );
    }
    SetSystem::new(g.fingerprint(), k, found.into_iter().collect())
}

/// Orients each edge toward the endpoint with larger `<weights, x>`.
pub fn geometric_aof(inst: &Instance, weights: &[BigRational]) -> Result<Orientation> {
    let coords = inst.coords.as_ref().ok_or(Error::NoCoordinates)?;
    if weights.len() != inst.dim() {
        return Err(Error::InvalidParams(format!(
            "need {} weights, got {}",
            inst.dim(),
            weights.len()
        )));
    }
    let values: Vec<BigRational> = coords
        .iter()
        .map(|x| {
            x.iter()
                .zip(weights)
                .fold(BigRational::zero(), |acc, (a, w)| acc + a * w)
        })
        .collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].cmp(&values[b]));
    if let Some(w) = order.windows(2).find(|w| values[w[0]] == values[w[1]]) {
        return Err(Error::DegenerateWeights(w[0].min(w[1]), w[0].max(w[1])));
    }
    Ok(Orientation::toward_larger(&inst.graph, |v| {
        values[v].clone()
    }))
}

/// `(1, 2, 4, ...)`: generic for every generator family with 0/1 coordinates.
pub fn default_weights(d: usize) -> Vec<BigRational> {
    (0..d)
        .map(|i| BigRational::from_integer(BigInt::one() << i))
        .collect()
}

/// Precomputed faces for repeated AOF tests on one instance.
#[derive(Clone, Debug)]
pub struct AofOracle<'a> {
    inst: &'a Instance,
    /// `faces[k]` for `k = 1..d-1`, with membership masks.
    faces: Vec<(Vec<usize>, Vec<bool>)>,
}

impl<'a> AofOracle<'a> {
    pub fn new(inst: &'a Instance) -> Result<Self> {
        let d = inst.dim();
        let n = inst.graph.vertex_count();
        let mut faces = Vec::new();
        for k in 1..d {
            for f in faces_from_incidence(inst, k)?.sets() {
                let mut mask = vec![false; n];
                for &v in f {
                    mask[v] = true;
                }
                faces.push((f.clone(), mask));
            }
        }
        Ok(AofOracle { inst, faces })
    }

    /// Acyclic with exactly one sink on every non-empty face, the whole
    /// polytope included. Vertices are trivially fine.
    pub fn check(&self, o: &Orientation) -> Result<bool> {
        let g = &self.inst.graph;
        g.check_bound(o.graph_fingerprint())?;
        if !matches!(topo_unchecked(g, o), TopoOutcome::Order(_)) {
            return Ok(false);
        }
        if histogram_unchecked(g, o).0[g.dim()] != 1 {
            return Ok(false);
        }
        Ok(self
            .faces
            .iter()
            .all(|(f, mask)| count_sinks_in_set(g, o, f, mask) == 1))
    }
}

pub fn is_aof_oracle(inst: &Instance, o: &Orientation) -> Result<bool> {
    AofOracle::new(inst)?.check(o)
}

/// f-vector `(f_0, ..., f_{d-1})` from incidences.
pub fn f_vector(inst: &Instance) -> Result<Vec<u64>> {
    (0..inst.dim())
        .map(|k| faces_from_incidence(inst, k).map(|s| s.len() as u64))
        .collect()
}

pub fn aof_h_vector(inst: &Instance) -> Result<HVector> {
    let o = geometric_aof(inst, &default_weights(inst.dim()))?;
    Ok(histogram_unchecked(&inst.graph, &o))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{hk_sum, reverse_orientation, HkMode};

    #[test]
    fn simplex3_counts() {
        let s = generate(&Family::Simplex(3)).unwrap();
        assert_eq!(s.graph.vertex_count(), 4);
        assert_eq!(s.graph.edge_count(), 6);
        assert_eq!(s.facets.len(), 4);
    }

    #[test]
    fn prism_counts() {
        let p = generate(&Family::prism()).unwrap();
        assert_eq!(
            (p.graph.vertex_count(), p.graph.edge_count(), p.facets.len()),
            (6, 9, 5)
        );
    }

    #[test]
    fn fig1_counts_and_face_sizes() {
        let f = generate(&Family::Fig1).unwrap();
        assert_eq!(f_vector(&f).unwrap(), vec![12, 18, 8]);
        let sizes: Vec<usize> = faces_from_incidence(&f, 2)
            .unwrap()
            .sets()
            .iter()
            .map(|s| s.len())
            .sorted()
            .collect();
        // two triangles, four pentagons, the untouched square, the hexagon
        assert_eq!(sizes, vec![3, 3, 4, 5, 5, 5, 5, 6]);
        assert!(f.coords.is_none());
    }

    #[test]
    fn cube3_faces() {
        let c = generate(&Family::Cube(3)).unwrap();
        let f2 = faces_from_incidence(&c, 2).unwrap();
        assert_eq!(f2.len(), 6);
        assert!(f2.sets().iter().all(|s| s.len() == 4));
        assert!(matches!(
            faces_from_incidence(&c, 3),
            Err(Error::KOutOfRange { .. })
        ));
    }

    #[test]
    fn simplex_face_counts() {
        for d in 1..=5 {
            let s = generate(&Family::Simplex(d)).unwrap();
            for k in 0..d {
                let expected = crate::graph::binomial(d + 1, k + 1);
                assert_eq!(faces_from_incidence(&s, k).unwrap().len() as u64, expected);
            }
        }
    }

    #[test]
    fn geometric_aofs() {
        let c = generate(&Family::Cube(3)).unwrap();
        let o = geometric_aof(&c, &default_weights(3)).unwrap();
        assert_eq!(histogram_unchecked(&c.graph, &o), HVector(vec![1, 3, 3, 1]));
        assert!(is_aof_oracle(&c, &o).unwrap());
        assert!(is_aof_oracle(&c, &reverse_orientation(&o)).unwrap());

        let sq = generate(&Family::Cube(2)).unwrap();
        let o = geometric_aof(&sq, &default_weights(2)).unwrap();
        assert_eq!(histogram_unchecked(&sq.graph, &o), HVector(vec![1, 2, 1]));

        let s = generate(&Family::Simplex(4)).unwrap();
        let o = geometric_aof(&s, &[int(3), int(-1), int(7), int(2)]).unwrap();
        assert_eq!(histogram_unchecked(&s.graph, &o), HVector(vec![1; 5]));
    }

    #[test]
    fn degenerate_weights_and_missing_coords() {
        let c = generate(&Family::Cube(3)).unwrap();
        assert!(matches!(
            geometric_aof(&c, &[int(1), int(1), int(4)]),
            Err(Error::DegenerateWeights(_, _))
        ));
        let f = generate(&Family::Fig1).unwrap();
        assert_eq!(
            geometric_aof(&f, &default_weights(3)),
            Err(Error::NoCoordinates)
        );
    }

    #[test]
    fn non_acyclic_is_not_aof() {
        let c = generate(&Family::Cube(2)).unwrap();
        // 4-cycle 0 -> 1 -> 3 -> 2 -> 0
        let g = &c.graph;
        let heads = g
            .edges()
            .iter()
            .map(|&(u, v)| matches!((u, v), (0, 1) | (1, 3)))
            .collect();
        let o = Orientation::new(g, heads).unwrap();
        assert!(!is_aof_oracle(&c, &o).unwrap());
    }

    #[test]
    fn family_parsing() {
        assert_eq!("cube:3".parse::<Family>().unwrap(), Family::Cube(3));
        assert_eq!(
            "product(cube:1,simplex:2)".parse::<Family>().unwrap(),
            Family::prism()
        );
        assert_eq!(
            "truncate(product(cube:1,simplex:2),0)"
                .parse::<Family>()
                .unwrap(),
            Family::Truncate(Box::new(Family::prism()), 0)
        );
        assert!("torus:2".parse::<Family>().is_err());
        let f: Family = "truncate(cube:3,5)".parse().unwrap();
        assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
    }

    #[test]
    fn truncation_bad_vertex() {
        let c = generate(&Family::Cube(3)).unwrap();
        assert!(matches!(
            truncate_vertex(&c, 8),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn aof_hk_matches_f_vector() {
        let c = generate(&Family::Cube(4)).unwrap();
        let h = aof_h_vector(&c).unwrap();
        let f = f_vector(&c).unwrap();
        for (k, fk) in f.iter().enumerate() {
            assert_eq!(hk_sum(&h, HkMode::K(k)).unwrap(), *fk);
        }
        assert_eq!(hk_sum(&h, HkMode::All).unwrap(), f.iter().sum::<u64>() + 1);
    }
}
