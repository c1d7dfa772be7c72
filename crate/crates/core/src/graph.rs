//! Polytope graphs, edge orientations and in-degree statistics.
//!
//! Vertices are dense ids `0..n`. Edges are stored as sorted pairs `(u, v)`
//! with `u < v`, in lexicographic order; an edge's position in that list is
//! its index. An [`Orientation`] stores one bit per edge index and carries the
//! [`Fingerprint`] of the graph it was built for.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// SHA-256 of the canonical graph document `{"d":..,"edges":[[u,v],..],"n":..}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint(pub [u8; 32]);

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fingerprint({self})")
    }
}

impl FromStr for Fingerprint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        if bytes.len() != 64 {
            return Err(Error::Parse(format!(
                "fingerprint must be 64 hex digits, got {:?}",
                s
            )));
        }
        let mut out = [0u8; 32];
        for (i, chunk) in bytes.chunks(2).enumerate() {
            let hex = std::str::from_utf8(chunk).map_err(|e| Error::Parse(e.to_string()))?;
            out[i] = u8::from_str_radix(hex, 16)
                .map_err(|_| Error::Parse(format!("bad hex in fingerprint {:?}", s)))?;
        }
        Ok(Fingerprint(out))
    }
}

/// Vertex-edge graph of a (claimed) simple `d`-polytope.
///
/// Construction through [`validate_graph`] guarantees d-regularity,
/// connectivity and the absence of loops and multi-edges. Nothing here
/// decides whether the graph really is polytopal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeGraph {
    d: usize,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    fingerprint: Fingerprint,
}

pub fn validate_graph(d: usize, n: usize, edge_list: &[(usize, usize)]) -> Result<PolytopeGraph> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidParams(format!(
            "need d >= 1 and n >= 1, got d={d}, n={n}"
        )));
    }
    let mut edges = Vec::with_capacity(edge_list.len());
    for &(a, b) in edge_list {
        for v in [a, b] {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        edges.push((a.min(b), a.max(b)));
    }
    edges.sort_unstable();
    if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateEdge(w[0].0, w[0].1));
    }
    let mut adjacency = vec![Vec::with_capacity(d); n];
    for &(u, v) in &edges {
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    for (vertex, nb) in adjacency.iter_mut().enumerate() {
        if nb.len() != d {
            return Err(Error::NotRegular {
                vertex,
                degree: nb.len(),
                expected: d,
            });
        }
        nb.sort_unstable();
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &w in &adjacency[u] {
            if !seen[w] {
                seen[w] = true;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    if reached != n {
        return Err(Error::Disconnected);
    }
    let fingerprint =
        Fingerprint(Sha256::digest(canonical_graph_json(d, n, &edges).as_bytes()).into());
    Ok(PolytopeGraph {
        d,
        adjacency,
        edges,
        fingerprint,
    })
}

pub(crate) fn canonical_graph_json(d: usize, n: usize, edges: &[(usize, usize)]) -> String {
    let mut s = format!("{{\"d\":{d},\"edges\":[");
    for (i, (u, v)) in edges.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&format!("[{u},{v}]"));
    }
    s.push_str(&format!("],\"n\":{n}}}"));
    s
}

impl PolytopeGraph {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn fingerprint(&self) -> Fingerprint {
        self.fingerprint
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Index of the edge `{u, v}`, if present.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub(crate) fn check_bound(&self, fp: Fingerprint) -> Result<()> {
        if fp != self.fingerprint {
            return Err(Error::FingerprintMismatch {
                expected: self.fingerprint,
                found: fp,
            });
        }
        Ok(())
    }

    /// Membership mask for a vertex subset; errors on out-of-range ids.
    pub(crate) fn mask(&self, w: &[usize]) -> Result<Vec<bool>> {
        let n = self.vertex_count();
        let mut m = vec![false; n];
        for &v in w {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            m[v] = true;
        }
        Ok(m)
    }
}

/// Direction for every edge of one graph. `heads[e]` is `true` when the head
/// of canonical edge `e = (u, v)` is `v` (the larger id) and `false` when it
/// is `u`. Cyclic orientations are representable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orientation {
    heads: Vec<bool>,
    graph_fingerprint: Fingerprint,
}

impl Orientation {
    pub fn new(g: &PolytopeGraph, heads: Vec<bool>) -> Result<Self> {
        if heads.len() != g.edge_count() {
            return Err(Error::Parse(format!(
                "orientation has {} entries, graph has {} edges",
                heads.len(),
                g.edge_count()
            )));
        }
        Ok(Orientation {
            heads,
            graph_fingerprint: g.fingerprint(),
        })
    }

    /// Unchecked constructor for file parsing; binding is validated on use.
    pub fn from_parts(graph_fingerprint: Fingerprint, heads: Vec<bool>) -> Self {
        Orientation {
            heads,
            graph_fingerprint,
        }
    }

    /// Orients each edge toward the endpoint with the larger key.
    pub fn toward_larger<K: PartialOrd>(g: &PolytopeGraph, key: impl Fn(usize) -> K) -> Self {
        let heads = g.edges().iter().map(|&(u, v)| key(v) > key(u)).collect();
        Orientation {
            heads,
            graph_fingerprint: g.fingerprint(),
        }
    }

    pub fn heads(&self) -> &[bool] {
        &self.heads
    }

    pub fn graph_fingerprint(&self) -> Fingerprint {
        self.graph_fingerprint
    }

    /// `(tail, head)` of edge `e` in `g`.
    pub fn arc(&self, g: &PolytopeGraph, e: usize) -> (usize, usize) {
        let (u, v) = g.edges()[e];
        if self.heads[e] {
            (u, v)
        } else {
            (v, u)
        }
    }

    /// Same orientation with edge `e` reversed.
    pub fn with_flipped(&self, e: usize) -> Self {
        let mut o = self.clone();
        o.heads[e] = !o.heads[e];
        o
    }

    pub(crate) fn out_adjacency(&self, g: &PolytopeGraph) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); g.vertex_count()];
        for e in 0..g.edge_count() {
            let (t, h) = self.arc(g, e);
            out[t].push(h);
        }
        out
    }

    pub(crate) fn in_degrees(&self, g: &PolytopeGraph) -> Vec<usize> {
        let mut deg = vec![0; g.vertex_count()];
        for e in 0..g.edge_count() {
            deg[self.arc(g, e).1] += 1;
        }
        deg
    }
}

pub fn reverse_orientation(o: &Orientation) -> Orientation {
    Orientation {
        heads: o.heads.iter().map(|h| !h).collect(),
        graph_fingerprint: o.graph_fingerprint,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopoOutcome {
    /// Every edge points from an earlier to a later vertex.
    Order(Vec<usize>),
    /// A directed cycle `c[0] -> c[1] -> ... -> c[0]`.
    Cycle(Vec<usize>),
}

pub fn topological_order(g: &PolytopeGraph, o: &Orientation) -> Result<TopoOutcome> {
    g.check_bound(o.graph_fingerprint)?;
    Ok(topo_unchecked(g, o))
}

pub(crate) fn topo_unchecked(g: &PolytopeGraph, o: &Orientation) -> TopoOutcome {
    let n = g.vertex_count();
    let out = o.out_adjacency(g);
    let mut indeg = o.in_degrees(g);
    // Kahn with a min-queue would be lexicographically smallest; a FIFO is enough.
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &w in &out[u] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push_back(w);
            }
        }
    }
    if order.len() == n {
        return TopoOutcome::Order(order);
    }
    // Every leftover vertex has an in-edge from another leftover vertex, so
    // walking backwards along such edges must revisit a vertex.
    let leftover: Vec<bool> = indeg.iter().map(|&d| d > 0).collect();
    let mut pred = vec![usize::MAX; n];
    for e in 0..g.edge_count() {
        let (t, h) = o.arc(g, e);
        if leftover[t] && leftover[h] {
            pred[h] = t;
        }
    }
    let start = (0..n).find(|&v| leftover[v]).expect("leftover vertex");
    let mut pos = vec![usize::MAX; n];
    let mut walk = Vec::new();
    let mut v = start;
    while pos[v] == usize::MAX {
        pos[v] = walk.len();
        walk.push(v);
        v = pred[v];
    }
    let mut cycle = walk[pos[v]..].to_vec();
    cycle.reverse();
    TopoOutcome::Cycle(cycle)
}

pub fn is_acyclic(g: &PolytopeGraph, o: &Orientation) -> Result<bool> {
    Ok(matches!(topological_order(g, o)?, TopoOutcome::Order(_)))
}

/// In-degree histogram `(h_0, ..., h_d)` of an orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HVector(pub Vec<u64>);

impl HVector {
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }
}

impl fmt::Display for HVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{h}")?;
        }
        Ok(())
    }
}

impl FromStr for HVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let counts = s
            .split_whitespace()
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad h-vector entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if counts.is_empty() {
            return Err(Error::Parse("empty h-vector".into()));
        }
        Ok(HVector(counts))
    }
}

pub fn indegree_histogram(g: &PolytopeGraph, o: &Orientation) -> Result<HVector> {
    g.check_bound(o.graph_fingerprint)?;
    Ok(histogram_unchecked(g, o))
}

pub(crate) fn histogram_unchecked(g: &PolytopeGraph, o: &Orientation) -> HVector {
    let mut counts = vec![0u64; g.dim() + 1];
    for deg in o.in_degrees(g) {
        counts[deg] += 1;
    }
    HVector(counts)
}

/// Which weighted sum of an h-vector to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HkMode {
    /// `H^k = sum_i h_i * C(i, k)`.
    K(usize),
    /// `H = sum_i h_i * 2^i`.
    All,
}

impl FromStr for HkMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(HkMode::All);
        }
        s.parse::<usize>()
            .map(HkMode::K)
            .map_err(|_| Error::Parse(format!("k must be an integer or 'all', got {s:?}")))
    }
}

impl fmt::Display for HkMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HkMode::K(k) => write!(f, "{k}"),
            HkMode::All => f.write_str("all"),
        }
    }
}

/// Pascal triangle rows `0..=d`.
pub fn binomial_table(d: usize) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let mut row = vec![0u64; d + 1];
        row[0] = 1;
        for j in 1..=i {
            row[j] = rows[i - 1][j - 1] + rows[i - 1][j];
        }
        rows.push(row);
    }
    rows
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    binomial_table(n)[n][k]
}

pub fn hk_sum(h: &HVector, mode: HkMode) -> Result<u64> {
    let d = h.dim();
    match mode {
        HkMode::K(k) => {
            if k > d {
                return Err(Error::KOutOfRange { k, min: 0, max: d });
            }
            let table = binomial_table(d);
            Ok(h.0
                .iter()
                .enumerate()
                .map(|(i, &hi)| hi * table[i][k])
                .sum())
        }
        HkMode::All => Ok(h.0.iter().enumerate().map(|(i, &hi)| hi << i).sum()),
    }
}

/// Sinks of the orientation induced on `g[w]`. Requires an acyclic `o`.
pub fn sinks_in_subset(g: &PolytopeGraph, o: &Orientation, w: &[usize]) -> Result<Vec<usize>> {
    g.check_bound(o.graph_fingerprint)?;
    if w.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mask = g.mask(w)?;
    if !matches!(topo_unchecked(g, o), TopoOutcome::Order(_)) {
        return Err(Error::NotAcyclic);
    }
    Ok(induced_sinks(g, o, &mask))
}

/// Sinks of `g[mask]` under `o`, without acyclicity or binding checks.
pub(crate) fn induced_sinks(g: &PolytopeGraph, o: &Orientation, mask: &[bool]) -> Vec<usize> {
    let mut has_out = vec![false; g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if mask[u] && mask[v] {
            has_out[o.arc(g, e).0] = true;
        }
    }
    (0..g.vertex_count())
        .filter(|&v| mask[v] && !has_out[v])
        .collect()
}

/// Number of sinks of `g[set]` under `o`, computed from the set's vertices only.
pub(crate) fn count_sinks_in_set(
    g: &PolytopeGraph,
    o: &Orientation,
    set: &[usize],
    mask: &[bool],
) -> usize {
    set.iter()
        .filter(|&&v| {
            !g.neighbors(v).iter().any(|&w| {
                mask[w] && {
                    let e = g.edge_index(v, w).expect("adjacent");
                    o.arc(g, e).0 == v
                }
            })
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> PolytopeGraph {
        validate_graph(3, 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn cube3() -> PolytopeGraph {
        let mut edges = Vec::new();
        for v in 0..8usize {
            for b in 0..3 {
                let w = v ^ (1 << b);
                if v < w {
                    edges.push((v, w));
                }
            }
        }
        validate_graph(3, 8, &edges).unwrap()
    }

    #[test]
    fn validates_small_graphs() {
        assert_eq!(k4().edge_count(), 6);
        assert_eq!(cube3().edge_count(), 12);
        let hexagon: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        assert!(matches!(
            validate_graph(3, 6, &hexagon),
            Err(Error::NotRegular { degree: 2, .. })
        ));
    }

    #[test]
    fn rejects_malformed_edges() {
        assert_eq!(validate_graph(1, 2, &[(0, 0)]), Err(Error::SelfLoop(0)));
        assert_eq!(
            validate_graph(1, 2, &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert_eq!(
            validate_graph(1, 4, &[(0, 1), (2, 3)]),
            Err(Error::Disconnected)
        );
        assert!(matches!(
            validate_graph(1, 2, &[(0, 5)]),
            Err(Error::VertexOutOfRange { vertex: 5, .. })
        ));
    }

    #[test]
    fn k4_low_to_high() {
        let g = k4();
        let o = Orientation::toward_larger(&g, |v| v);
        assert_eq!(
            topological_order(&g, &o).unwrap(),
            TopoOutcome::Order(vec![0, 1, 2, 3])
        );
        assert_eq!(
            indegree_histogram(&g, &o).unwrap(),
            HVector(vec![1, 1, 1, 1])
        );
        assert_eq!(sinks_in_subset(&g, &o, &[0, 1, 2, 3]).unwrap(), vec![3]);
        let r = reverse_orientation(&o);
        assert_eq!(
            indegree_histogram(&g, &r).unwrap(),
            HVector(vec![1, 1, 1, 1])
        );
        assert_eq!(reverse_orientation(&r), o);
    }

    #[test]
    fn k4_triangle_cycle() {
        let g = k4();
        // 0 -> 1 -> 2 -> 0, vertex 3 is a sink.
        let mut o = Orientation::toward_larger(&g, |v| v);
        let e = g.edge_index(0, 2).unwrap();
        o = o.with_flipped(e);
        match topological_order(&g, &o).unwrap() {
            TopoOutcome::Cycle(c) => {
                assert_eq!(c.len(), 3);
                for i in 0..3 {
                    let (a, b) = (c[i], c[(i + 1) % 3]);
                    let e = g.edge_index(a, b).unwrap();
                    assert_eq!(o.arc(&g, e), (a, b));
                }
            }
            other => panic!("expected a cycle, got {other:?}"),
        }
        assert_eq!(sinks_in_subset(&g, &o, &[0, 1]), Err(Error::NotAcyclic));
    }

    #[test]
    fn cube_functional_orientation() {
        let g = cube3();
        // x + 2y + 4z with x, y, z the bits of the vertex id.
        let o = Orientation::toward_larger(&g, |v| v);
        match topological_order(&g, &o).unwrap() {
            TopoOutcome::Order(ord) => assert_eq!(ord[0], 0),
            other => panic!("{other:?}"),
        }
        let h = indegree_histogram(&g, &o).unwrap();
        assert_eq!(h, HVector(vec![1, 3, 3, 1]));
        assert_eq!(hk_sum(&h, HkMode::K(2)).unwrap(), 6);
        assert_eq!(hk_sum(&h, HkMode::K(1)).unwrap(), 12);
        let faces: Vec<Vec<usize>> = (0..3)
            .flat_map(|b| {
                [0, 1].map(|side| {
                    (0..8)
                        .filter(|v| (v >> b) & 1 == side)
                        .collect::<Vec<usize>>()
                })
            })
            .collect();
        for f in &faces {
            assert_eq!(sinks_in_subset(&g, &o, f).unwrap().len(), 1);
        }
        assert_eq!(indegree_histogram(&g, &reverse_orientation(&o)).unwrap(), h);
    }

    #[test]
    fn hk_examples() {
        assert_eq!(hk_sum(&HVector(vec![1, 1, 1, 1]), HkMode::All).unwrap(), 15);
        assert_eq!(
            hk_sum(&HVector(vec![1, 3, 3, 1]), HkMode::K(4)),
            Err(Error::KOutOfRange {
                k: 4,
                min: 0,
                max: 3
            })
        );
    }

    #[test]
    fn sinks_of_independent_pair() {
        let g = cube3();
        let o = Orientation::toward_larger(&g, |v| v);
        assert_eq!(sinks_in_subset(&g, &o, &[0, 3]).unwrap(), vec![0, 3]);
        assert_eq!(sinks_in_subset(&g, &o, &[]), Err(Error::EmptySubset));
    }

    #[test]
    fn fingerprint_round_trip() {
        let fp = cube3().fingerprint();
        assert_eq!(fp.to_string().parse::<Fingerprint>().unwrap(), fp);
        assert!("abc".parse::<Fingerprint>().is_err());
    }

    #[test]
    fn binomials() {
        let t = binomial_table(6);
        assert_eq!(t[6][3], 20);
        assert_eq!(binomial(20, 10), 184756);
        assert_eq!(binomial(2, 3), 0);
    }
}
