use ext63_core::generate::{path, random_chordal, random_permutation, rng, spider};
use ext63_core::oracle::{automorphism_orbits, enumerate_graphs};
use ext63_core::chordal::check_chordal;
use ext63_core::partition::{
    classify_cell_pair, coarsest_regular_simplicial_partition, coarsest_simplicial_partition, is_regular_simplicial,
    is_simplicial_partition, partition_signature, verify_babel_lemmas, CellPairStructure, OrderedPartition,
};
use ext63_core::{Error, Graph};
use proptest::prelude::*;

fn chordal(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>()).prop_map(|(n, s)| random_chordal(n, &mut rng(s)))
}

proptest! {
    #[test]
    fn outputs_are_regular_simplicial(g in chordal(30)) {
        let s = coarsest_simplicial_partition(&g).unwrap();
        prop_assert!(is_simplicial_partition(&g, &s));
        let p = coarsest_regular_simplicial_partition(&g).unwrap();
        prop_assert!(is_regular_simplicial(&g, &p));
        prop_assert!(p.len() >= s.len());
    }

    #[test]
    fn partition_commutes_with_relabeling(g in chordal(20), s in any::<u64>()) {
        let pi = random_permutation(g.n(), &mut rng(s));
        let p = coarsest_regular_simplicial_partition(&g).unwrap();
        let q = coarsest_regular_simplicial_partition(&g.permuted(&pi)).unwrap();
        prop_assert_eq!(&q, &p.permuted(&pi));
        let h = g.permuted(&pi);
        prop_assert_eq!(partition_signature(&g, &p).unwrap(), partition_signature(&h, &q).unwrap());
    }

    #[test]
    fn cells_are_unions_of_orbits(n in 1usize..=10, s in any::<u64>()) {
        let g = random_chordal(n, &mut rng(s));
        let p = coarsest_regular_simplicial_partition(&g).unwrap();
        let cell_of = p.cell_of();
        for orbit in automorphism_orbits(&g).unwrap().cells() {
            prop_assert!(orbit.iter().all(|&v| cell_of[v] == cell_of[orbit[0]]));
        }
    }
}

#[test]
fn p4_partition_and_signature() {
    let g = path(4);
    let p = coarsest_regular_simplicial_partition(&g).unwrap();
    assert_eq!(p.cells(), &[vec![0, 3], vec![1, 2]]);
    assert_eq!(partition_signature(&g, &p).unwrap().count_matrix(), vec![vec![0, 1], vec![1, 1]]);
}

#[test]
fn rejects_non_chordal_input() {
    let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
    assert!(matches!(coarsest_simplicial_partition(&c4), Err(Error::NotChordal { .. })));
}

#[test]
fn spider_duality() {
    for t in 3..=8 {
        for thin in [true, false] {
            let g = spider(t, thin);
            let p = OrderedPartition::new(2 * t, vec![(0..t).collect(), (t..2 * t).collect()]).unwrap();
            let want = if thin { CellPairStructure::SpiderThin { t } } else { CellPairStructure::SpiderThick { t } };
            assert_eq!(classify_cell_pair(&g, &p, 0, 1).unwrap(), want);
            let c = g.complement();
            let q = OrderedPartition::new(2 * t, vec![(t..2 * t).collect(), (0..t).collect()]).unwrap();
            let dual = if thin { CellPairStructure::SpiderThick { t } } else { CellPairStructure::SpiderThin { t } };
            assert_eq!(classify_cell_pair(&c, &q, 0, 1).unwrap(), dual, "t = {t}, thin = {thin}");
        }
    }
}

#[test]
fn lemmas_hold_on_small_chordal_graphs() {
    for n in 1..=6 {
        for g in enumerate_graphs(n).unwrap().filter(|g| check_chordal(g).is_chordal()) {
            let p = coarsest_regular_simplicial_partition(&g).unwrap();
            let r = verify_babel_lemmas(&g, &p).unwrap();
            if ext63_core::forbidden::is_extended_class(&g).is_member() {
                assert!(r.passed(), "{}", g.to_edge_list_text());
            }
        }
    }
}
