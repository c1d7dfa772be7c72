//! Verifiers for face certificates, AOF certificates and their refutations,
//! plus reconstruction of the facets from the 2-faces.
//!
//! All checks run in time polynomial in the size of the graph. A verdict of
//! [`Verdict::Verified`] is conclusive under the standing assumption that the
//! graph is the graph of a simple polytope; nothing here checks that.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{
    count_sinks_in_set, histogram_unchecked, hk_sum, topo_unchecked, HkMode, Orientation,
    PolytopeGraph, TopoOutcome,
};
use crate::ksystem::{validate_k_system, SetSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    Refuted(Refutation),
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified)
    }
}

/// Which check of a certificate failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    /// The set family is not a k-system; carries the first defect.
    NotKSystem(String),
    /// The orientation has a directed cycle.
    Cyclic(Vec<usize>),
    /// `|S| != H^k(O)`.
    CountMismatch { sets: u64, hk: u64 },
    /// The proposed larger system is not larger.
    NotLarger { current: usize, proposed: usize },
    /// The proposed better orientation does not have smaller `H^2`.
    NotSmaller { current: u64, proposed: u64 },
    /// Polygon case: more than one global sink.
    MultipleSinks(usize),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Verified => f.write_str("VERIFIED"),
            Verdict::Refuted(r) => write!(f, "REFUTED: {r}"),
        }
    }
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::NotKSystem(why) => write!(f, "not a k-system ({why})"),
            Refutation::Cyclic(c) => write!(f, "orientation has a directed cycle {c:?}"),
            Refutation::CountMismatch { sets, hk } => {
                write!(f, "|S| = {sets} but H^k(O) = {hk}")
            }
            Refutation::NotLarger { current, proposed } => {
                write!(
                    f,
                    "proposed system has {proposed} sets, not more than {current}"
                )
            }
            Refutation::NotSmaller { current, proposed } => {
                write!(f, "proposed H^2 = {proposed} is not below {current}")
            }
            Refutation::MultipleSinks(c) => write!(f, "{c} global sinks"),
        }
    }
}

/// Yes-certificate that a family equals the set of k-face vertex sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceCertificate {
    pub claimed_sets: SetSystem,
    pub witness_orientation: Orientation,
}

impl FaceCertificate {
    pub fn new(claimed_sets: SetSystem, witness_orientation: Orientation) -> Result<Self> {
        if claimed_sets.graph_fingerprint() != witness_orientation.graph_fingerprint() {
            return Err(Error::FingerprintMismatch {
                expected: claimed_sets.graph_fingerprint(),
                found: witness_orientation.graph_fingerprint(),
            });
        }
        Ok(FaceCertificate {
            claimed_sets,
            witness_orientation,
        })
    }

    pub fn k(&self) -> usize {
        self.claimed_sets.k()
    }
}

/// Yes-certificate that an orientation is an AOF-orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AofCertificate {
    pub candidate_orientation: Orientation,
    pub witness_two_system: SetSystem,
}

impl AofCertificate {
    pub fn new(candidate_orientation: Orientation, witness_two_system: SetSystem) -> Result<Self> {
        if witness_two_system.k() != 2 {
            return Err(Error::KMismatch(witness_two_system.k(), 2));
        }
        if candidate_orientation.graph_fingerprint() != witness_two_system.graph_fingerprint() {
            return Err(Error::FingerprintMismatch {
                expected: candidate_orientation.graph_fingerprint(),
                found: witness_two_system.graph_fingerprint(),
            });
        }
        Ok(AofCertificate {
            candidate_orientation,
            witness_two_system,
        })
    }
}

/// Does every member set induce exactly one sink? Returns the index of the
/// first member with two or more sinks otherwise.
pub fn unique_sink_per_set(
    g: &PolytopeGraph,
    o: &Orientation,
    s: &SetSystem,
) -> Result<Option<usize>> {
    g.check_bound(o.graph_fingerprint())?;
    g.check_bound(s.graph_fingerprint())?;
    if !matches!(topo_unchecked(g, o), TopoOutcome::Order(_)) {
        return Err(Error::NotAcyclic);
    }
    for (i, set) in s.sets().iter().enumerate() {
        let mask = g.mask(set)?;
        if count_sinks_in_set(g, o, set, &mask) != 1 {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

fn acyclic_or_cycle(g: &PolytopeGraph, o: &Orientation) -> Option<Vec<usize>> {
    match topo_unchecked(g, o) {
        TopoOutcome::Order(_) => None,
        TopoOutcome::Cycle(c) => Some(c),
    }
}

fn h_k(g: &PolytopeGraph, o: &Orientation, k: usize) -> u64 {
    hk_sum(&histogram_unchecked(g, o), HkMode::K(k)).expect("k <= d")
}

fn check_k(g: &PolytopeGraph, k: usize) -> Result<()> {
    if k < 2 || k + 1 > g.dim() {
        return Err(Error::KOutOfRange {
            k,
            min: 2,
            max: g.dim().saturating_sub(1),
        });
    }
    Ok(())
}

/// Checks `S` is a k-system, `O` is acyclic and `|S| = H^k(O)`.
pub fn verify_face_certificate(g: &PolytopeGraph, c: &FaceCertificate) -> Result<Verdict> {
    g.check_bound(c.claimed_sets.graph_fingerprint())?;
    g.check_bound(c.witness_orientation.graph_fingerprint())?;
    check_k(g, c.k())?;
    let report = validate_k_system(g, &c.claimed_sets)?;
    if !report.is_valid() {
        return Ok(Verdict::Refuted(Refutation::NotKSystem(report.summary())));
    }
    if let Some(cycle) = acyclic_or_cycle(g, &c.witness_orientation) {
        return Ok(Verdict::Refuted(Refutation::Cyclic(cycle)));
    }
    let hk = h_k(g, &c.witness_orientation, c.k());
    let sets = c.claimed_sets.len() as u64;
    if hk != sets {
        return Ok(Verdict::Refuted(Refutation::CountMismatch { sets, hk }));
    }
    Ok(Verdict::Verified)
}

/// No-certificate for `s`: a valid k-system `s_prime` with more members.
pub fn verify_larger_system(
    g: &PolytopeGraph,
    s: &SetSystem,
    s_prime: &SetSystem,
) -> Result<Verdict> {
    g.check_bound(s.graph_fingerprint())?;
    g.check_bound(s_prime.graph_fingerprint())?;
    if s.k() != s_prime.k() {
        return Err(Error::KMismatch(s.k(), s_prime.k()));
    }
    check_k(g, s.k())?;
    let report = validate_k_system(g, s_prime)?;
    if !report.is_valid() {
        return Ok(Verdict::Refuted(Refutation::NotKSystem(report.summary())));
    }
    if s_prime.len() <= s.len() {
        return Ok(Verdict::Refuted(Refutation::NotLarger {
            current: s.len(),
            proposed: s_prime.len(),
        }));
    }
    Ok(Verdict::Verified)
}

/// Checks the witness is a 2-system, the candidate is acyclic and
/// `|S| = H^2(O)`. For polygons (`d = 2`) the witness is ignored and the
/// candidate must be acyclic with one global sink.
pub fn verify_aof_certificate(g: &PolytopeGraph, c: &AofCertificate) -> Result<Verdict> {
    let o = &c.candidate_orientation;
    g.check_bound(o.graph_fingerprint())?;
    g.check_bound(c.witness_two_system.graph_fingerprint())?;
    let d = g.dim();
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    if d == 2 {
        if let Some(cycle) = acyclic_or_cycle(g, o) {
            return Ok(Verdict::Refuted(Refutation::Cyclic(cycle)));
        }
        let sinks = histogram_unchecked(g, o).0[2] as usize;
        if sinks != 1 {
            return Ok(Verdict::Refuted(Refutation::MultipleSinks(sinks)));
        }
        return Ok(Verdict::Verified);
    }
    let cert = FaceCertificate::new(c.witness_two_system.clone(), o.clone())?;
    verify_face_certificate(g, &cert)
}

/// No-certificate for `o`: an acyclic `o_prime` with `H^2(o_prime) < H^2(o)`.
pub fn verify_smaller_h2(
    g: &PolytopeGraph,
    o: &Orientation,
    o_prime: &Orientation,
) -> Result<Verdict> {
    g.check_bound(o.graph_fingerprint())?;
    g.check_bound(o_prime.graph_fingerprint())?;
    if g.dim() < 3 {
        return Err(Error::DimensionTooSmall(g.dim()));
    }
    for x in [o, o_prime] {
        if let Some(cycle) = acyclic_or_cycle(g, x) {
            return Ok(Verdict::Refuted(Refutation::Cyclic(cycle)));
        }
    }
    let (current, proposed) = (h_k(g, o, 2), h_k(g, o_prime, 2));
    if proposed >= current {
        return Ok(Verdict::Refuted(Refutation::NotSmaller {
            current,
            proposed,
        }));
    }
    Ok(Verdict::Verified)
}

/// For every vertex `u` and pair of its neighbors `{a, b}`, the 2-face
/// containing the edges `ua` and `ub`.
struct TwoFaceLookup<'a> {
    faces: &'a [Vec<usize>],
    by_corner: HashMap<(usize, usize, usize), usize>,
}

impl<'a> TwoFaceLookup<'a> {
    fn build(g: &PolytopeGraph, f2: &'a SetSystem) -> Result<Self> {
        let mut by_corner = HashMap::new();
        for (i, face) in f2.sets().iter().enumerate() {
            let mask = g.mask(face)?;
            for &u in face {
                let inside: Vec<usize> = g
                    .neighbors(u)
                    .iter()
                    .copied()
                    .filter(|&w| mask[w])
                    .collect();
                if let [a, b] = inside[..] {
                    by_corner.insert((u, a, b), i);
                }
            }
        }
        Ok(TwoFaceLookup {
            faces: f2.sets(),
            by_corner,
        })
    }

    fn face(&self, u: usize, a: usize, b: usize) -> &[usize] {
        let key = (u, a.min(b), a.max(b));
        &self.faces[self.by_corner[&key]]
    }

    /// The bijection from neighbors of `u` (other than `v`) to neighbors of
    /// `v` (other than `u`) defined by the 2-faces through the edge `uv`.
    fn transport(&self, g: &PolytopeGraph, u: usize, v: usize, a: usize) -> usize {
        let face = self.face(u, a, v);
        g.neighbors(v)
            .iter()
            .copied()
            .find(|&b| b != u && face.binary_search(&b).is_ok())
            .expect("2-face through uv is a cycle")
    }
}

/// Reconstructs the facets from the 2-faces.
///
/// Each facet is grown from a seed `(r, x)`: it contains every edge at `r`
/// except `rx`. Crossing an edge `uv` of the facet, the omitted neighbor of
/// `v` is the image of the omitted neighbor of `u` under the 2-face
/// bijection for `uv`.
pub fn facets_from_2faces(g: &PolytopeGraph, f2: &SetSystem) -> Result<SetSystem> {
    g.check_bound(f2.graph_fingerprint())?;
    if f2.k() != 2 {
        return Err(Error::KMismatch(f2.k(), 2));
    }
    let d = g.dim();
    if d < 3 {
        return Err(Error::DimensionTooSmall(d));
    }
    let report = validate_k_system(g, f2)?;
    if !report.is_valid() {
        return Err(Error::NotKSystem(report.summary()));
    }
    for (i, face) in f2.sets().iter().enumerate() {
        if !crate::oracle::induces_connected_regular(g, face, 2) {
            return Err(Error::NotCycleSystem(i));
        }
    }
    if d == 3 {
        return Ok(f2.clone());
    }
    let lookup = TwoFaceLookup::build(g, f2)?;
    let n = g.vertex_count();
    let mut facets = BTreeSet::new();
    // (vertex, omitted neighbor) pairs already inside some grown facet
    let mut seeded: HashSet<(usize, usize)> = HashSet::new();
    for r in 0..n {
        for &x in g.neighbors(r) {
            if seeded.contains(&(r, x)) {
                continue;
            }
            let mut omitted = vec![usize::MAX; n];
            omitted[r] = x;
            let mut stack = vec![r];
            let mut members = vec![r];
            while let Some(u) = stack.pop() {
                for &v in g.neighbors(u) {
                    if v == omitted[u] {
                        continue;
                    }
                    let y = lookup.transport(g, u, v, omitted[u]);
                    if omitted[v] == usize::MAX {
                        omitted[v] = y;
                        members.push(v);
                        stack.push(v);
                    } else if omitted[v] != y {
                        return Err(Error::InconsistentTransport {
                            vertex: v,
                            first: omitted[v],
                            second: y,
                        });
                    }
                }
            }
            for &m in &members {
                seeded.insert((m, omitted[m]));
            }
            members.sort_unstable();
            facets.insert(members);
        }
    }
    let facets: Vec<Vec<usize>> = facets.into_iter().collect();
    for f in &facets {
        if !crate::oracle::induces_connected_regular(g, f, d - 1) {
            return Err(Error::NotSimple(format!(
                "grown facet {f:?} is not {}-regular",
                d - 1
            )));
        }
    }
    let mut per_vertex = vec![0usize; n];
    for f in &facets {
        for &v in f {
            per_vertex[v] += 1;
        }
    }
    if let Some(v) = (0..n).find(|&v| per_vertex[v] != d) {
        return Err(Error::NotSimple(format!(
            "vertex {v} lies in {} grown facets, expected {d}",
            per_vertex[v]
        )));
    }
    SetSystem::new(g.fingerprint(), d - 1, facets)
}
