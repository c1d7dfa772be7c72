//! Exhaustive search at desk scale.
//!
//! * Acyclic orientations are enumerated by backtracking over edge
//!   directions in BFS edge order, pruning any partial assignment that
//!   already contains a directed cycle.
//! * k-systems are exact covers of the k-frames by vertex sets that induce
//!   connected k-regular subgraphs.

use std::collections::{HashMap, VecDeque};
use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{
    count_sinks_in_set, histogram_unchecked, hk_sum, HkMode, Orientation, PolytopeGraph,
};
use crate::ksystem::{enumerate_k_frames, validate_k_system, KFrame, SetSystem};
use crate::oracle::{faces_from_incidence, AofOracle, Instance};

pub const DEFAULT_BUDGET: u64 = 1 << 22;
pub const DEFAULT_CANDIDATE_CAP: usize = 1_000_000;
pub const DEFAULT_COUNT_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchCaps {
    pub candidate_cap: usize,
    pub count_cap: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps {
            candidate_cap: DEFAULT_CANDIDATE_CAP,
            count_cap: DEFAULT_COUNT_CAP,
        }
    }
}

fn check_budget(g: &PolytopeGraph, budget: u64) -> Result<()> {
    let m = g.edge_count();
    if m >= 64 || (1u64 << m) > budget {
        return Err(Error::BudgetExceeded { edges: m, budget });
    }
    Ok(())
}

/// Edges in the order their second endpoint is reached by a BFS from vertex 0,
/// so short cycles close as early as possible.
fn bfs_edge_order(g: &PolytopeGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut rank = vec![usize::MAX; n];
    let mut queue = VecDeque::from([0usize]);
    rank[0] = 0;
    let mut next = 1;
    let mut order = Vec::with_capacity(g.edge_count());
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if rank[w] == usize::MAX {
                rank[w] = next;
                next += 1;
                queue.push_back(w);
            }
        }
    }
    let mut by_rank: Vec<usize> = (0..n).collect();
    by_rank.sort_by_key(|&v| rank[v]);
    for &u in &by_rank {
        let mut earlier: Vec<usize> = g
            .neighbors(u)
            .iter()
            .copied()
            .filter(|&w| rank[w] < rank[u])
            .collect();
        earlier.sort_by_key(|&w| rank[w]);
        order.extend(
            earlier
                .into_iter()
                .map(|w| g.edge_index(u, w).expect("edge")),
        );
    }
    order
}

/// Streaming enumerator of acyclic orientations; see
/// [`enumerate_acyclic_orientations`].
pub struct AcyclicOrientations<'g> {
    g: &'g PolytopeGraph,
    order: Vec<usize>,
    /// Options tried so far at each depth (0, 1 or 2).
    tried: Vec<u8>,
    heads: Vec<bool>,
    out: Vec<Vec<usize>>,
    depth: usize,
    /// Depths below this are fixed by a partition prefix.
    floor: usize,
    started: bool,
    done: bool,
    stamp: Vec<u32>,
    epoch: u32,
}

impl<'g> AcyclicOrientations<'g> {
    fn with_prefix(g: &'g PolytopeGraph, order: Vec<usize>, prefix: &[u8]) -> Self {
        let m = g.edge_count();
        let mut it = AcyclicOrientations {
            g,
            order,
            tried: vec![0; m],
            heads: vec![false; m],
            out: vec![Vec::new(); g.vertex_count()],
            depth: 0,
            floor: prefix.len(),
            started: false,
            done: false,
            stamp: vec![0; g.vertex_count()],
            epoch: 0,
        };
        for &choice in prefix {
            it.tried[it.depth] = choice + 1;
            if !it.push(choice) {
                it.done = true;
                break;
            }
        }
        it
    }

    /// Orients the edge at the current depth with option `choice`
    /// (0: toward the larger id) unless that closes a cycle.
    fn push(&mut self, choice: u8) -> bool {
        let e = self.order[self.depth];
        let (u, v) = self.g.edges()[e];
        let (tail, head) = if choice == 0 { (u, v) } else { (v, u) };
        if self.reaches(head, tail) {
            return false;
        }
        self.out[tail].push(head);
        self.heads[e] = choice == 0;
        self.depth += 1;
        true
    }

    fn pop(&mut self) {
        self.depth -= 1;
        let e = self.order[self.depth];
        let (u, v) = self.g.edges()[e];
        let tail = if self.heads[e] { u } else { v };
        self.out[tail].pop();
    }

    fn reaches(&mut self, from: usize, to: usize) -> bool {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let mut stack = vec![from];
        self.stamp[from] = self.epoch;
        while let Some(x) = stack.pop() {
            if x == to {
                return true;
            }
            for &y in &self.out[x] {
                if self.stamp[y] != self.epoch {
                    self.stamp[y] = self.epoch;
                    stack.push(y);
                }
            }
        }
        false
    }
}

impl Iterator for AcyclicOrientations<'_> {
    type Item = Orientation;

    fn next(&mut self) -> Option<Orientation> {
        if self.done {
            return None;
        }
        let m = self.order.len();
        if self.started {
            if self.depth == self.floor {
                // the fully fixed prefix was the only assignment
                self.done = true;
                return None;
            }
            self.pop();
        }
        self.started = true;
        loop {
            if self.depth == m {
                return Some(Orientation::from_parts(
                    self.g.fingerprint(),
                    self.heads.clone(),
                ));
            }
            let t = self.tried[self.depth];
            if t == 2 {
                self.tried[self.depth] = 0;
                if self.depth == self.floor {
                    self.done = true;
                    return None;
                }
                self.pop();
                continue;
            }
            self.tried[self.depth] = t + 1;
            self.push(t);
        }
    }
}

/// Every acyclic orientation of `g` exactly once. Fails when `2^|E|`
/// exceeds `budget`.
pub fn enumerate_acyclic_orientations(
    g: &PolytopeGraph,
    budget: u64,
) -> Result<AcyclicOrientations<'_>> {
    check_budget(g, budget)?;
    Ok(AcyclicOrientations::with_prefix(g, bfs_edge_order(g), &[]))
}

/// Disjoint sub-enumerators whose concatenation, in order, equals the
/// sequential enumeration.
pub fn partitioned_acyclic_orientations(
    g: &PolytopeGraph,
    budget: u64,
    parts: usize,
) -> Result<Vec<AcyclicOrientations<'_>>> {
    check_budget(g, budget)?;
    let order = bfs_edge_order(g);
    let mut bits = 0;
    while (1usize << bits) < parts && bits < order.len() {
        bits += 1;
    }
    Ok((0..1usize << bits)
        .map(|p| {
            let prefix: Vec<u8> = (0..bits)
                .map(|i| ((p >> (bits - 1 - i)) & 1) as u8)
                .collect();
            AcyclicOrientations::with_prefix(g, order.clone(), &prefix)
        })
        .collect())
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParams(e.to_string()))
}

/// All acyclic orientations in enumeration order, using `jobs` workers.
pub fn collect_acyclic_orientations(
    g: &PolytopeGraph,
    budget: u64,
    jobs: usize,
) -> Result<Vec<Orientation>> {
    if jobs <= 1 {
        return Ok(enumerate_acyclic_orientations(g, budget)?.collect());
    }
    let parts = partitioned_acyclic_orientations(g, budget, jobs * 4)?;
    let chunks: Vec<Vec<Orientation>> =
        pool(jobs)?.install(|| parts.into_par_iter().map(|p| p.collect()).collect());
    Ok(chunks.into_iter().flatten().collect())
}

fn hk_of(g: &PolytopeGraph, o: &Orientation, mode: HkMode) -> u64 {
    hk_sum(&histogram_unchecked(g, o), mode).expect("mode checked")
}

/// Minimum of `H^k` (or `H`) over all acyclic orientations, with the first
/// minimizer in enumeration order.
pub fn minimize_hk(g: &PolytopeGraph, mode: HkMode, budget: u64) -> Result<(u64, Orientation)> {
    minimize_hk_jobs(g, mode, budget, 1)
}

pub fn minimize_hk_jobs(
    g: &PolytopeGraph,
    mode: HkMode,
    budget: u64,
    jobs: usize,
) -> Result<(u64, Orientation)> {
    if let HkMode::K(k) = mode {
        if k > g.dim() {
            return Err(Error::KOutOfRange {
                k,
                min: 0,
                max: g.dim(),
            });
        }
    }
    let best_of = |it: AcyclicOrientations<'_>| -> Option<(u64, Orientation)> {
        let mut best: Option<(u64, Orientation)> = None;
        for o in it {
            let v = hk_of(g, &o, mode);
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, o));
            }
        }
        best
    };
    let results: Vec<Option<(u64, Orientation)>> = if jobs <= 1 {
        vec![best_of(enumerate_acyclic_orientations(g, budget)?)]
    } else {
        let parts = partitioned_acyclic_orientations(g, budget, jobs * 4)?;
        pool(jobs)?.install(|| parts.into_par_iter().map(best_of).collect())
    };
    let mut best: Option<(u64, Orientation)> = None;
    for (v, o) in results.into_iter().flatten() {
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, o));
        }
    }
    Ok(best.expect("every graph has an acyclic orientation"))
}

/// Vertex sets inducing connected k-regular subgraphs, sorted.
///
/// Each set is grown from its smallest vertex by deciding, one neighbor of
/// the current set at a time, whether it joins. A branch dies as soon as a
/// member exceeds degree `k` or can no longer reach it.
pub fn regular_induced_candidates(
    g: &PolytopeGraph,
    k: usize,
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    if k < 2 || k + 1 > g.dim() {
        return Err(Error::KOutOfRange {
            k,
            min: 2,
            max: g.dim().saturating_sub(1),
        });
    }
    let n = g.vertex_count();
    let mut out = Vec::new();
    for root in 0..n {
        let mut grow = Grow {
            g,
            k,
            status: (0..n)
                .map(|v| {
                    if v < root {
                        Status::Out
                    } else {
                        Status::Undecided
                    }
                })
                .collect(),
            members: vec![root],
            out: &mut out,
            cap,
        };
        grow.status[root] = Status::In;
        if grow.avail(root) >= k {
            grow.rec()?;
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Undecided,
    In,
    Out,
}

struct Grow<'a> {
    g: &'a PolytopeGraph,
    k: usize,
    status: Vec<Status>,
    members: Vec<usize>,
    out: &'a mut Vec<Vec<usize>>,
    cap: usize,
}

impl Grow<'_> {
    fn deg_in(&self, v: usize) -> usize {
        self.g
            .neighbors(v)
            .iter()
            .filter(|&&w| self.status[w] == Status::In)
            .count()
    }

    fn avail(&self, v: usize) -> usize {
        self.g
            .neighbors(v)
            .iter()
            .filter(|&&w| self.status[w] != Status::Out)
            .count()
    }

    fn rec(&mut self) -> Result<()> {
        let branch = self
            .members
            .iter()
            .flat_map(|&u| self.g.neighbors(u).iter().copied())
            .find(|&z| self.status[z] == Status::Undecided);
        let Some(z) = branch else {
            if self.members.iter().all(|&v| self.deg_in(v) == self.k) {
                if self.out.len() >= self.cap {
                    return Err(Error::CandidateCapExceeded(self.cap));
                }
                let mut set = self.members.clone();
                set.sort_unstable();
                self.out.push(set);
            }
            return Ok(());
        };
        let k = self.k;
        self.status[z] = Status::In;
        let ok = self.deg_in(z) <= k
            && self.avail(z) >= k
            && self
                .g
                .neighbors(z)
                .iter()
                .all(|&y| self.status[y] != Status::In || self.deg_in(y) <= k);
        if ok {
            self.members.push(z);
            self.rec()?;
            self.members.pop();
        }
        self.status[z] = Status::Out;
        let ok = self
            .g
            .neighbors(z)
            .iter()
            .all(|&y| self.status[y] != Status::In || self.avail(y) >= k);
        if ok {
            self.rec()?;
        }
        self.status[z] = Status::Undecided;
        Ok(())
    }
}

/// Exact cover of items `0..items` by options, each option a list of items.
///
/// Algorithm X over plain arrays: pick the uncovered item with the fewest
/// live options (lowest index on ties), try its options in order.
pub struct ExactCover {
    options: Vec<Vec<usize>>,
    item_options: Vec<Vec<usize>>,
    covered: Vec<bool>,
    blocked: Vec<u32>,
    live: Vec<u32>,
    chosen: Vec<usize>,
}

impl ExactCover {
    pub fn new(items: usize, options: Vec<Vec<usize>>) -> Self {
        let mut item_options = vec![Vec::new(); items];
        for (c, opt) in options.iter().enumerate() {
            for &i in opt {
                item_options[i].push(c);
            }
        }
        let live = item_options.iter().map(|v| v.len() as u32).collect();
        ExactCover {
            blocked: vec![0; options.len()],
            options,
            item_options,
            covered: vec![false; items],
            live,
            chosen: Vec::new(),
        }
    }

    /// Calls `visit` with the chosen option indices of every exact cover.
    pub fn solve<F: FnMut(&[usize]) -> ControlFlow<()>>(&mut self, mut visit: F) {
        let _ = self.rec(&mut visit);
    }

    fn rec<F: FnMut(&[usize]) -> ControlFlow<()>>(&mut self, visit: &mut F) -> ControlFlow<()> {
        let pick = (0..self.covered.len())
            .filter(|&i| !self.covered[i])
            .min_by_key(|&i| (self.live[i], i));
        let Some(item) = pick else {
            return visit(&self.chosen);
        };
        if self.live[item] == 0 {
            return ControlFlow::Continue(());
        }
        let opts = self.item_options[item].clone();
        for c in opts {
            if self.blocked[c] != 0 {
                continue;
            }
            self.select(c);
            self.chosen.push(c);
            let flow = self.rec(visit);
            self.chosen.pop();
            self.deselect(c);
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn select(&mut self, c: usize) {
        for idx in 0..self.options[c].len() {
            let item = self.options[c][idx];
            self.covered[item] = true;
            for j in 0..self.item_options[item].len() {
                let c2 = self.item_options[item][j];
                self.blocked[c2] += 1;
                if self.blocked[c2] == 1 {
                    for &i2 in &self.options[c2] {
                        self.live[i2] -= 1;
                    }
                }
            }
        }
    }

    fn deselect(&mut self, c: usize) {
        for idx in (0..self.options[c].len()).rev() {
            let item = self.options[c][idx];
            for j in (0..self.item_options[item].len()).rev() {
                let c2 = self.item_options[item][j];
                if self.blocked[c2] == 1 {
                    for &i2 in &self.options[c2] {
                        self.live[i2] += 1;
                    }
                }
                self.blocked[c2] -= 1;
            }
            self.covered[item] = false;
        }
    }
}

/// Visits k-systems made of connected members, in deterministic order, until
/// `count_cap` have been seen or `visit` breaks.
pub fn for_each_k_system<F>(
    g: &PolytopeGraph,
    k: usize,
    caps: SearchCaps,
    mut visit: F,
) -> Result<usize>
where
    F: FnMut(SetSystem) -> ControlFlow<()>,
{
    let candidates = regular_induced_candidates(g, k, caps.candidate_cap)?;
    let frame_ids: HashMap<KFrame, usize> = enumerate_k_frames(g, k)?
        .enumerate()
        .map(|(i, f)| (f, i))
        .collect();
    let options: Vec<Vec<usize>> = candidates
        .iter()
        .map(|set| {
            let mask = g.mask(set).expect("in range");
            set.iter()
                .map(|&root| {
                    let leaves = g
                        .neighbors(root)
                        .iter()
                        .copied()
                        .filter(|&w| mask[w])
                        .collect();
                    frame_ids[&KFrame { root, leaves }]
                })
                .collect()
        })
        .collect();
    let mut solver = ExactCover::new(frame_ids.len(), options);
    let mut count = 0;
    let mut failure = None;
    solver.solve(|chosen| {
        let sets = chosen.iter().map(|&c| candidates[c].clone()).collect();
        let system = match SetSystem::new(g.fingerprint(), k, sets) {
            Ok(s) => s,
            Err(e) => {
                failure = Some(e);
                return ControlFlow::Break(());
            }
        };
        debug_assert!(validate_k_system(g, &system)
            .map(|r| r.is_valid())
            .unwrap_or(false));
        count += 1;
        let flow = visit(system);
        if count >= caps.count_cap {
            return ControlFlow::Break(());
        }
        flow
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(count),
    }
}

pub fn enumerate_k_systems(
    g: &PolytopeGraph,
    k: usize,
    caps: SearchCaps,
) -> Result<Vec<SetSystem>> {
    let mut out = Vec::new();
    for_each_k_system(g, k, caps, |s| {
        out.push(s);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// A k-system of maximum cardinality among those enumerated under `caps`;
/// ties go to the first one found.
pub fn max_k_system(g: &PolytopeGraph, k: usize, caps: SearchCaps) -> Result<Option<SetSystem>> {
    let mut best: Option<SetSystem> = None;
    for_each_k_system(g, k, caps, |s| {
        if best.as_ref().is_none_or(|b| s.len() > b.len()) {
            best = Some(s);
        }
        ControlFlow::Continue(())
    })?;
    Ok(best)
}

/// An acyclic orientation with exactly one sink on every k-face that is not
/// an AOF-orientation, if one exists within `budget`.
pub fn search_k_sink_counterexample(
    inst: &Instance,
    k: usize,
    budget: u64,
) -> Result<Option<Orientation>> {
    let g = &inst.graph;
    let d = g.dim();
    if k < 2 || k + 1 > d {
        return Err(Error::KOutOfRange {
            k,
            min: 2,
            max: d.saturating_sub(1),
        });
    }
    let faces = faces_from_incidence(inst, k)?;
    let masks: Vec<Vec<bool>> = faces
        .sets()
        .iter()
        .map(|f| g.mask(f))
        .collect::<Result<_>>()?;
    let oracle = AofOracle::new(inst)?;
    for o in enumerate_acyclic_orientations(g, budget)? {
        let unique = faces
            .sets()
            .iter()
            .zip(&masks)
            .all(|(f, m)| count_sinks_in_set(g, &o, f, m) == 1);
        if unique && !oracle.check(&o)? {
            return Ok(Some(o));
        }
    }
    Ok(None)
}
