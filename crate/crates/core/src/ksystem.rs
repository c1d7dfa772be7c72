//! k-frames and k-systems.
//!
//! A k-frame is a star `K_{1,k}` in the graph: a root with `k` of its
//! neighbors. A k-system is a family of vertex sets, each inducing a
//! k-regular subgraph, such that the node set of every k-frame lies in
//! exactly one member.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{binomial, Fingerprint, PolytopeGraph};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KFrame {
    pub root: usize,
    /// Sorted ascending.
    pub leaves: Vec<usize>,
}

impl fmt::Display for KFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.root, self.leaves.iter().join(","))
    }
}

/// A family of distinct vertex sets tagged with a dimension `k`.
///
/// Sets are stored sorted and the family is sorted lexicographically, so two
/// systems with the same members compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetSystem {
    k: usize,
    sets: Vec<Vec<usize>>,
    graph_fingerprint: Fingerprint,
}

impl SetSystem {
    /// Canonicalizes `sets`. Duplicate sets, repeated vertices and sets with
    /// fewer than `k + 1` vertices are rejected.
    pub fn new(graph_fingerprint: Fingerprint, k: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut canon = Vec::with_capacity(sets.len());
        for (index, mut s) in sets.into_iter().enumerate() {
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::RepeatedVertex(s));
            }
            if s.len() < k + 1 {
                return Err(Error::SetTooSmall {
                    index,
                    size: s.len(),
                    min: k + 1,
                });
            }
            canon.push(s);
        }
        canon.sort();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateSet(w[0].clone()));
        }
        Ok(SetSystem {
            k,
            sets: canon,
            graph_fingerprint,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn graph_fingerprint(&self) -> Fingerprint {
        self.graph_fingerprint
    }

    pub fn contains(&self, set: &[usize]) -> bool {
        let mut s = set.to_vec();
        s.sort_unstable();
        self.sets.binary_search(&s).is_ok()
    }

    /// Copy without member `index`.
    pub fn without(&self, index: usize) -> Self {
        let mut sets = self.sets.clone();
        sets.remove(index);
        SetSystem {
            sets,
            ..self.clone()
        }
    }

    /// Copy with member `index` replaced by `set`.
    pub fn with_replaced(&self, index: usize, set: Vec<usize>) -> Result<Self> {
        let mut sets = self.sets.clone();
        sets[index] = set;
        SetSystem::new(self.graph_fingerprint, self.k, sets)
    }
}

fn check_k_range(g: &PolytopeGraph, k: usize) -> Result<()> {
    let d = g.dim();
    if k < 2 || k + 1 > d {
        return Err(Error::KOutOfRange {
            k,
            min: 2,
            max: d.saturating_sub(1),
        });
    }
    Ok(())
}

/// Every k-frame of `g`, by root then lexicographic leaf set.
pub fn enumerate_k_frames(
    g: &PolytopeGraph,
    k: usize,
) -> Result<impl Iterator<Item = KFrame> + '_> {
    check_k_range(g, k)?;
    Ok((0..g.vertex_count()).flat_map(move |root| {
        g.neighbors(root)
            .iter()
            .copied()
            .combinations(k)
            .map(move |leaves| KFrame { root, leaves })
    }))
}

/// Number of member sets containing each k-frame's node set.
pub fn frame_coverage(g: &PolytopeGraph, s: &SetSystem) -> Result<BTreeMap<KFrame, usize>> {
    g.check_bound(s.graph_fingerprint)?;
    check_k_range(g, s.k)?;
    let mut cov: BTreeMap<KFrame, usize> = enumerate_k_frames(g, s.k)?.map(|f| (f, 0)).collect();
    for set in &s.sets {
        let mask = g.mask(set)?;
        for &root in set {
            // A frame's node set lies in `set` iff its root and leaves do.
            let inside: Vec<usize> = g
                .neighbors(root)
                .iter()
                .copied()
                .filter(|&w| mask[w])
                .collect();
            for leaves in inside.into_iter().combinations(s.k) {
                *cov.get_mut(&KFrame { root, leaves }).expect("frame of g") += 1;
            }
        }
    }
    Ok(cov)
}

/// Outcome of [`validate_k_system`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub k: usize,
    /// Per member set: does it induce a k-regular subgraph?
    pub set_regular: Vec<bool>,
    pub coverage: BTreeMap<KFrame, usize>,
    /// `sum |S|` over members.
    pub frame_sum: u64,
    /// `n * C(d, k)`, the number of k-frames.
    pub frame_count: u64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.set_regular.iter().all(|&r| r) && self.coverage.values().all(|&c| c == 1)
    }

    pub fn irregular_sets(&self) -> impl Iterator<Item = usize> + '_ {
        self.set_regular
            .iter()
            .enumerate()
            .filter(|(_, &r)| !r)
            .map(|(i, _)| i)
    }

    /// Frames whose coverage differs from one.
    pub fn frame_defects(&self) -> impl Iterator<Item = (&KFrame, usize)> + '_ {
        self.coverage
            .iter()
            .filter(|(_, &c)| c != 1)
            .map(|(f, &c)| (f, c))
    }

    /// First problem found, for one-line diagnostics.
    pub fn summary(&self) -> String {
        if let Some(i) = self.irregular_sets().next() {
            return format!("set #{i} not {}-regular", self.k);
        }
        if let Some((f, c)) = self.frame_defects().next() {
            return format!("frame {f} covered {c} times");
        }
        "valid".into()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            writeln!(f, "VALID {}-system", self.k)?;
        } else {
            writeln!(f, "INVALID {}-system", self.k)?;
        }
        for i in self.irregular_sets() {
            writeln!(f, "set #{i} not {}-regular", self.k)?;
        }
        for (frame, c) in self.frame_defects() {
            writeln!(f, "frame {frame} covered {c} times")?;
        }
        Ok(())
    }
}

pub fn validate_k_system(g: &PolytopeGraph, s: &SetSystem) -> Result<ValidationReport> {
    let coverage = frame_coverage(g, s)?;
    let mut set_regular = Vec::with_capacity(s.len());
    for set in &s.sets {
        let mask = g.mask(set)?;
        set_regular.push(
            set.iter()
                .all(|&v| g.neighbors(v).iter().filter(|&&w| mask[w]).count() == s.k),
        );
    }
    Ok(ValidationReport {
        k: s.k,
        set_regular,
        coverage,
        frame_sum: s.sets.iter().map(|x| x.len() as u64).sum(),
        frame_count: g.vertex_count() as u64 * binomial(g.dim(), s.k),
    })
}
