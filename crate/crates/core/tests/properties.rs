mod common;

use std::collections::HashSet;

use common::inst;
use ksystem::certificate::unique_sink_per_set;
use ksystem::format::{
    graph_from_value, graph_to_value, instance_from_value, instance_to_value,
    orientation_from_value, orientation_to_value, parse_value, set_system_from_value,
    set_system_to_value, to_canonical_string,
};
use ksystem::graph::{
    hk_sum, indegree_histogram, is_acyclic, reverse_orientation, sinks_in_subset,
    topological_order, HkMode, Orientation, TopoOutcome,
};
use ksystem::ksystem::validate_k_system;
use ksystem::oracle::{f_vector, faces_from_incidence, geometric_aof, is_aof_oracle, Instance};
use ksystem::search::{
    collect_acyclic_orientations, enumerate_k_systems, minimize_hk, SearchCaps, DEFAULT_BUDGET,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const SPECS: &[&str] = &[
    "simplex:2",
    "simplex:3",
    "simplex:4",
    "simplex:5",
    "cube:2",
    "cube:3",
    "cube:4",
    "prism",
    "fig1",
    "product(simplex:2,simplex:2)",
    "truncate(cube:3,5)",
    "truncate(simplex:4,0)",
];

fn instance() -> impl Strategy<Value = Instance> {
    prop::sample::select(SPECS).prop_map(inst)
}

fn with_orientation() -> impl Strategy<Value = (Instance, Orientation)> {
    instance().prop_flat_map(|i| {
        let m = i.graph.edge_count();
        (Just(i), prop::collection::vec(any::<bool>(), m)).prop_map(|(i, heads)| {
            let o = Orientation::new(&i.graph, heads).unwrap();
            (i, o)
        })
    })
}

/// Acyclic orientation from a random vertex ranking.
fn with_acyclic() -> impl Strategy<Value = (Instance, Orientation)> {
    instance().prop_flat_map(|i| {
        let n = i.graph.vertex_count();
        (Just(i), Just((0..n).collect::<Vec<_>>()).prop_shuffle()).prop_map(|(i, rank)| {
            let o = Orientation::toward_larger(&i.graph, |v| rank[v]);
            (i, o)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn histogram_totals((i, o) in with_orientation()) {
        let g = &i.graph;
        let h = indegree_histogram(g, &o).unwrap();
        prop_assert_eq!(h.0.len(), g.dim() + 1);
        prop_assert_eq!(h.total(), g.vertex_count() as u64);
        prop_assert_eq!(hk_sum(&h, HkMode::K(0)).unwrap(), g.vertex_count() as u64);
        prop_assert_eq!(hk_sum(&h, HkMode::K(1)).unwrap(), g.edge_count() as u64);
        let by_k: u64 = (0..=g.dim()).map(|k| hk_sum(&h, HkMode::K(k)).unwrap()).sum();
        prop_assert_eq!(hk_sum(&h, HkMode::All).unwrap(), by_k);
    }

    #[test]
    fn reversal_mirrors_histogram((i, o) in with_orientation()) {
        let g = &i.graph;
        let mut h = indegree_histogram(g, &o).unwrap().0;
        h.reverse();
        let r = reverse_orientation(&o);
        prop_assert_eq!(indegree_histogram(g, &r).unwrap().0, h);
        prop_assert_eq!(is_acyclic(g, &r).unwrap(), is_acyclic(g, &o).unwrap());
        prop_assert_eq!(reverse_orientation(&r), o);
    }

    #[test]
    fn topological_outcome_is_a_witness((i, o) in with_orientation()) {
        let g = &i.graph;
        match topological_order(g, &o).unwrap() {
            TopoOutcome::Order(order) => {
                let mut pos = vec![0; g.vertex_count()];
                for (p, &v) in order.iter().enumerate() {
                    pos[v] = p;
                }
                for e in 0..g.edge_count() {
                    let (t, h) = o.arc(g, e);
                    prop_assert!(pos[t] < pos[h]);
                }
            }
            TopoOutcome::Cycle(c) => {
                prop_assert!(c.len() >= 3);
                let arcs: HashSet<(usize, usize)> = (0..g.edge_count()).map(|e| o.arc(g, e)).collect();
                for w in 0..c.len() {
                    prop_assert!(arcs.contains(&(c[w], c[(w + 1) % c.len()])));
                }
            }
        }
    }

    #[test]
    fn acyclic_orientations_bound_face_counts((i, o) in with_acyclic()) {
        let g = &i.graph;
        let h = indegree_histogram(g, &o).unwrap();
        prop_assert!(h.0[0] >= 1 && h.0[g.dim()] >= 1);
        let f = f_vector(&i).unwrap();
        for (k, &fk) in f.iter().enumerate() {
            prop_assert!(hk_sum(&h, HkMode::K(k)).unwrap() >= fk);
        }
        let total: u64 = f.iter().sum::<u64>() + 1;
        prop_assert!(hk_sum(&h, HkMode::All).unwrap() >= total);
    }

    #[test]
    fn every_face_of_an_aof_has_one_sink((i, o) in with_acyclic()) {
        let g = &i.graph;
        let aof = is_aof_oracle(&i, &o).unwrap();
        let h = indegree_histogram(g, &o).unwrap();
        let f = f_vector(&i).unwrap();
        let tight = hk_sum(&h, HkMode::All).unwrap() == f.iter().sum::<u64>() + 1;
        prop_assert_eq!(aof, tight);
        if aof {
            for k in 1..g.dim() {
                for face in faces_from_incidence(&i, k).unwrap().sets() {
                    prop_assert_eq!(sinks_in_subset(g, &o, face).unwrap().len(), 1);
                }
            }
        }
    }

    #[test]
    fn generic_linear_functions_give_aofs(
        i in instance().prop_filter("needs coordinates", |i| i.coords.is_some()),
        w in prop::collection::vec(1i64..10_000, 6),
    ) {
        let weights: Vec<BigRational> =
            w[..i.dim()].iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        if let Ok(o) = geometric_aof(&i, &weights) {
            prop_assert!(is_aof_oracle(&i, &o).unwrap());
            let h = indegree_histogram(&i.graph, &o).unwrap();
            prop_assert!(h.is_palindromic());
            for (k, &fk) in f_vector(&i).unwrap().iter().enumerate() {
                prop_assert_eq!(hk_sum(&h, HkMode::K(k)).unwrap(), fk);
            }
        }
    }

    #[test]
    fn documents_round_trip((i, o) in with_orientation()) {
        let docs = [
            to_canonical_string(&graph_to_value(&i.graph)),
            to_canonical_string(&orientation_to_value(&o)),
            to_canonical_string(&instance_to_value(&i)),
        ];
        let g2 = graph_from_value(&parse_value(&docs[0]).unwrap()).unwrap();
        prop_assert_eq!(to_canonical_string(&graph_to_value(&g2)), docs[0].clone());
        prop_assert_eq!(g2.fingerprint(), i.graph.fingerprint());
        let o2 = orientation_from_value(&parse_value(&docs[1]).unwrap()).unwrap();
        prop_assert_eq!(to_canonical_string(&orientation_to_value(&o2)), docs[1].clone());
        let i2 = instance_from_value(&parse_value(&docs[2]).unwrap()).unwrap();
        prop_assert_eq!(to_canonical_string(&instance_to_value(&i2)), docs[2].clone());
        for k in 2..i.dim() {
            let s = faces_from_incidence(&i, k).unwrap();
            let text = to_canonical_string(&set_system_to_value(&s));
            let s2 = set_system_from_value(&parse_value(&text).unwrap()).unwrap();
            prop_assert_eq!(to_canonical_string(&set_system_to_value(&s2)), text);
        }
    }
}

#[test]
fn enumerated_k_systems_are_valid_and_distinct() {
    for (spec, k) in [
        ("cube:3", 2),
        ("simplex:3", 2),
        ("simplex:4", 2),
        ("simplex:4", 3),
        ("prism", 2),
        ("fig1", 2),
    ] {
        let i = inst(spec);
        let g = &i.graph;
        let systems = enumerate_k_systems(g, k, SearchCaps::default()).unwrap();
        assert!(!systems.is_empty());
        let n = g.vertex_count();
        let want = n * ksystem::graph::binomial(g.dim(), k) as usize;
        let mut seen = HashSet::new();
        for s in &systems {
            assert!(validate_k_system(g, s).unwrap().is_valid(), "{spec} k={k}");
            assert_eq!(
                s.sets().iter().map(Vec::len).sum::<usize>(),
                want,
                "{spec} k={k}"
            );
            assert!(
                seen.insert(s.sets().to_vec()),
                "{spec} k={k}: duplicate system"
            );
        }
    }
}

#[test]
fn min_h_witnesses_are_aofs() {
    for spec in [
        "simplex:3",
        "simplex:4",
        "cube:3",
        "prism",
        "fig1",
        "truncate(simplex:3,0)",
    ] {
        let i = inst(spec);
        let (value, o) = minimize_hk(&i.graph, HkMode::All, DEFAULT_BUDGET).unwrap();
        assert_eq!(
            value,
            f_vector(&i).unwrap().iter().sum::<u64>() + 1,
            "{spec}"
        );
        assert!(is_aof_oracle(&i, &o).unwrap(), "{spec}");
    }
}

#[test]
fn h2_minimizers_unique_sinks_and_aofs_coincide() {
    for spec in [
        "simplex:3",
        "simplex:4",
        "prism",
        "truncate(simplex:3,0)",
        "product(simplex:2,simplex:2)",
    ] {
        let i = inst(spec);
        let g = &i.graph;
        let f2 = faces_from_incidence(&i, 2).unwrap();
        let all = collect_acyclic_orientations(g, DEFAULT_BUDGET, 2).unwrap();
        let h2: Vec<u64> = all
            .iter()
            .map(|o| hk_sum(&indegree_histogram(g, o).unwrap(), HkMode::K(2)).unwrap())
            .collect();
        let min = *h2.iter().min().unwrap();
        assert_eq!(min, f2.len() as u64, "{spec}");
        for (o, &v) in all.iter().zip(&h2) {
            let unique = unique_sink_per_set(g, o, &f2).unwrap().is_none();
            let aof = is_aof_oracle(&i, o).unwrap();
            assert_eq!(v == min, unique, "{spec}");
            assert_eq!(unique, aof, "{spec}");
        }
    }
}
