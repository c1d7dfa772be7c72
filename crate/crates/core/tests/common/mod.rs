//! Helpers shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use ksystem::graph::PolytopeGraph;
use ksystem::oracle::{generate, Family, Instance};

pub fn inst(spec: &str) -> Instance {
    generate(&spec.parse::<Family>().unwrap()).unwrap()
}

/// Number of acyclic orientations as `|chi(G, -1)|`, by memoized
/// deletion-contraction on simple graphs. Independent of the enumerator.
pub fn acyclic_orientation_count(g: &PolytopeGraph) -> u64 {
    let edges: BTreeSet<(usize, usize)> = g.edges().iter().copied().collect();
    let mut memo = HashMap::new();
    chi_minus_one(g.vertex_count(), edges, &mut memo).unsigned_abs() as u64
}

type Key = (usize, Vec<(usize, usize)>);

fn chi_minus_one(n: usize, edges: BTreeSet<(usize, usize)>, memo: &mut HashMap<Key, i128>) -> i128 {
    let Some(&(u, v)) = edges.iter().next_back() else {
        return if n.is_multiple_of(2) { 1 } else { -1 };
    };
    let key = (n, edges.iter().copied().collect::<Vec<_>>());
    if let Some(&x) = memo.get(&key) {
        return x;
    }
    let mut deleted = edges.clone();
    deleted.remove(&(u, v));
    // contract v into u, then relabel the last vertex into v's slot
    let last = n - 1;
    let relabel = |x: usize| {
        if x == v {
            u
        } else if x == last {
            v
        } else {
            x
        }
    };
    let contracted: BTreeSet<(usize, usize)> = deleted
        .iter()
        .map(|&(a, b)| (relabel(a), relabel(b)))
        .filter(|(a, b)| a != b)
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    let r = chi_minus_one(n, deleted, memo) - chi_minus_one(n - 1, contracted, memo);
    memo.insert(key, r);
    r
}
