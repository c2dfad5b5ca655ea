mod common;

use std::collections::BTreeMap;

use ext63_core::chordal::check_chordal;
use ext63_core::forbidden::{catalog, find_occurrences, is_extended_class, template, ForbiddenKind, Membership};
use ext63_core::generate::{random_chordal, random_gnp, random_permutation, rng};
use ext63_core::marker::{attach_gadgets, decode_gadget, encode_gadget, GadgetCode, RoundCounts, CATEGORIES};
use ext63_core::oracle::{find_isomorphism, find_isomorphism_coloured};
use ext63_core::{booth_reduce, eliminate_forbidden, to_extended, EdgeList, Graph, ReduceOptions, VertexSet};
use proptest::prelude::*;

fn any_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0f64..1.0, any::<u64>()).prop_map(|(n, p, s)| random_gnp(n, p, &mut rng(s)))
}

fn any_code() -> impl Strategy<Value = GadgetCode> {
    prop::collection::vec(prop::array::uniform7(0u32..4), 1..4).prop_map(GadgetCode::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn booth_size_law(g in any_graph(12)) {
        let b = booth_reduce(&g);
        let (n, m) = (g.n(), g.m());
        prop_assert_eq!(b.graph.n(), n + m);
        prop_assert_eq!(b.graph.m(), 2 * m + n * (n - 1) / 2);
        prop_assert!(check_chordal(&b.graph).is_chordal());
    }

    #[test]
    fn detector_matches_brute_force(n in 6usize..=8, p in 0.2f64..0.8, s in any::<u64>()) {
        prop_assert!(common::detector_agrees(&random_gnp(n, p, &mut rng(s))));
    }

    #[test]
    fn gadget_round_trip(code in any_code()) {
        let t = encode_gadget(&code);
        prop_assert_eq!(t.n(), code.tree_size());
        prop_assert_eq!(t.m(), t.n() - 1);
        prop_assert_eq!(decode_gadget(&t, 0).unwrap(), code);
    }

    #[test]
    fn rooted_shape_determines_code(a in any_code(), b in any_code()) {
        let (ta, tb) = (encode_gadget(&a), encode_gadget(&b));
        let root = |t: &Graph| (0..t.n()).map(|v| (v == 0) as u32).collect::<Vec<_>>();
        let iso = ta.n() == tb.n() && find_isomorphism_coloured(&ta, &root(&ta), &tb, &root(&tb)).is_some();
        prop_assert_eq!(iso, a == b);
    }

    #[test]
    fn attaching_gadgets_keeps_chordality(n in 1usize..12, s in any::<u64>(), code in any_code()) {
        let mut r = rng(s);
        let host = random_chordal(n, &mut r);
        let mut codes = BTreeMap::new();
        codes.insert(0, code.clone());
        codes.insert(n - 1, code);
        let mg = attach_gadgets(&host, &codes, host.edge_list());
        prop_assert!(check_chordal(&mg.graph).is_chordal());
        prop_assert!(mg.check_invariants().is_ok());
    }

    #[test]
    fn elimination_reaches_members(n in 1usize..=9, s in any::<u64>()) {
        let g = random_chordal(n, &mut rng(s));
        let (mg, trace) = eliminate_forbidden(ext63_core::marker::MarkedGraph::plain(g.clone()), ReduceOptions::unmarked()).unwrap();
        prop_assert!(trace.rounds.len() <= n * n.saturating_sub(1) / 2);
        prop_assert_eq!(trace.final_member, is_extended_class(&mg.graph).is_member());
        prop_assert!(g.edges().all(|(u, v)| mg.graph.has_edge(u, v)));
        prop_assert_eq!(mg.graph.m(), g.m() + trace.added_edge_count());
    }
}

#[test]
fn templates_are_pairwise_distinct_and_detected() {
    let cat = catalog();
    assert_eq!(cat.len(), 5);
    for (i, a) in cat.iter().enumerate() {
        for b in &cat[i + 1..] {
            assert!(find_isomorphism(&a.pattern, &b.pattern).is_none(), "{} vs {}", a.kind, b.kind);
        }
        let occ = find_occurrences(&a.pattern, &VertexSet::new(6));
        assert_eq!(occ.len(), 1);
        assert_eq!(occ[0].kind, a.kind);
    }
}

#[test]
fn fix_sets_of_h1_and_h2_yield_members() {
    for kind in [ForbiddenKind::H1NoDashed, ForbiddenKind::H1OneDashed, ForbiddenKind::H1BothDashed, ForbiddenKind::H2] {
        assert_eq!(is_extended_class(&template(kind).fixed()), Membership::Member, "{kind}");
    }
    assert!(matches!(is_extended_class(&template(ForbiddenKind::H3).fixed()), Membership::NotChordal(h) if h.len() == 4));
}

#[test]
fn excluded_vertices_are_skipped() {
    let g = template(ForbiddenKind::H2).pattern.clone();
    let mut ex = VertexSet::new(6);
    ex.insert(3);
    assert!(find_occurrences(&g, &ex).is_empty());
}

#[test]
fn marked_reduction_is_relabeling_invariant() {
    let mut r = rng(11);
    for _ in 0..8 {
        let g = random_gnp(6, 0.5, &mut r);
        let pi = random_permutation(6, &mut r);
        let (a, ta) = to_extended(&g, ReduceOptions::default()).unwrap();
        let (b, tb) = to_extended(&g.permuted(&pi), ReduceOptions::default()).unwrap();
        assert_eq!(ta.final_member, tb.final_member);
        assert_eq!(ta.added_edge_count(), tb.added_edge_count());
        assert!(find_isomorphism(&a.graph, &b.graph).is_some());
    }
}

#[test]
fn trace_replays() {
    let mut r = rng(5);
    for _ in 0..10 {
        let g = random_gnp(7, 0.4, &mut r);
        let (mg, trace) = to_extended(&g, ReduceOptions::default()).unwrap();
        assert_eq!(trace.replay(&g, ReduceOptions::default()).unwrap().graph, mg.graph);
    }
}

#[test]
fn marked_graph_roles() {
    let mut codes = BTreeMap::new();
    let mut counts: RoundCounts = [0; CATEGORIES];
    counts[2] = 1;
    codes.insert(1, GadgetCode::new(vec![counts]));
    let host = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
    let mut orig = EdgeList::new();
    orig.push(0, 1);
    let mg = attach_gadgets(&host, &codes, orig);
    assert!(mg.has_gadgets());
    assert_eq!(mg.gadget_vertices().len(), codes[&1].tree_size());
    assert_eq!(mg.original_graph().m(), 1);
    let (tree, root) = mg.gadget_of(1).unwrap();
    assert_eq!(decode_gadget(&tree, root).unwrap(), codes[&1]);
}
