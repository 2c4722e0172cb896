use proptest::prelude::*;
use symdiam::abgraph::{read_catalog, write_catalog, ABGraph, CatalogEntry, Edge};
use symdiam::perm::{Generator, Word};
use symdiam::treenum::{all_ab_trees, w0_trees};

fn shuffle(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut symdiam::rng::from_seed(seed));
    p
}

proptest! {
    #[test]
    fn certificate_ignores_labelling(idx in 0usize..64, seed in any::<u64>()) {
        let trees = all_ab_trees(4);
        let g = &trees[idx % trees.len()];
        let h = g.relabel(&shuffle(g.vcount(), seed));
        prop_assert_eq!(g.canonical_certificate(), h.canonical_certificate());
        prop_assert_eq!(g.automorphism_order(), h.automorphism_order());
        prop_assert_eq!(g.stats(&Word::w0()).fixed_count, h.stats(&Word::w0()).fixed_count);
    }
}

#[test]
fn distinct_trees_have_distinct_certificates() {
    let trees = all_ab_trees(4);
    let mut certs: Vec<Vec<u8>> = trees.iter().map(ABGraph::canonical_certificate).collect();
    let len = certs.len();
    certs.sort();
    certs.dedup();
    assert_eq!(certs.len(), len);
}

#[test]
fn drawn_trees_are_valid_and_admit_their_star() {
    for (g, star) in w0_trees() {
        assert!(g.validate().is_ok());
        assert!(g.is_ab_tree());
        assert_eq!(g.admission(&Word::w0()), vec![star]);
        assert_eq!(g.automorphism_order(), 1);
    }
}

#[test]
fn single_edge_exponents() {
    let g = ABGraph::with_implied_loops(2, vec![Edge::new(0, 1, Generator::Alpha)]);
    assert_eq!(g.delta_exponents(), (1, 2));
    assert_eq!(g.max_path_vertices(), 2);
    assert!(g.cycle_lengths().is_empty());
}

#[test]
fn two_cycle_is_detected() {
    let g = ABGraph::with_implied_loops(2, vec![Edge::new(0, 1, Generator::Alpha), Edge::new(1, 0, Generator::Alpha)]);
    assert_eq!(g.cycle_lengths().into_iter().collect::<Vec<_>>(), vec![2]);
    assert_eq!(g.automorphism_order(), 2);
}

#[test]
fn invalid_graphs_rejected() {
    // Two α-edges out of vertex 0.
    let g = ABGraph::new(
        3,
        vec![
            Edge::new(0, 1, Generator::Alpha),
            Edge::new(0, 2, Generator::Alpha),
            Edge::new(0, 0, Generator::Beta),
            Edge::new(1, 1, Generator::Beta),
            Edge::new(2, 2, Generator::Beta),
        ],
    );
    assert!(g.validate().is_err());
}

#[test]
fn catalog_round_trip() {
    let entries: Vec<CatalogEntry> = w0_trees()
        .iter()
        .map(|(g, star)| CatalogEntry::new(g, vec![*star], g.automorphism_order(), 1))
        .collect();
    let text = write_catalog(&entries);
    let back = read_catalog(&text).unwrap();
    assert_eq!(back, entries);
    assert_eq!(write_catalog(&back), text);
    for (i, (e, (g, _))) in back.iter().zip(w0_trees()).enumerate() {
        assert_eq!(e.graph(i).unwrap().canonical_certificate(), g.canonical_certificate());
    }
    assert!(read_catalog("[{\"vcount\":1}]").is_err());
}
