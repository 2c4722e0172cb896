use std::collections::BTreeMap;

use crate::abgraph::{ABGraph, Edge};
use crate::perm::{Generator, Word};

use super::TreeRecord;

/// All partial injections of `0..n` into itself, as `map[i] = Some(j)`.
fn partial_injections(n: usize) -> Vec<Vec<Option<usize>>> {
    fn go(i: usize, n: usize, used: &mut Vec<bool>, cur: &mut Vec<Option<usize>>, out: &mut Vec<Vec<Option<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        cur.push(None);
        go(i + 1, n, used, cur, out);
        cur.pop();
        for j in 0..n {
            if !used[j] {
                used[j] = true;
                cur.push(Some(j));
                go(i + 1, n, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut vec![false; n], &mut Vec::new(), &mut out);
    out
}

fn touches_every_vertex(map: &[Option<usize>]) -> bool {
    let mut hit = vec![false; map.len()];
    for (i, m) in map.iter().enumerate() {
        if let Some(j) = *m {
            hit[i] = true;
            hit[j] = true;
        }
    }
    hit.into_iter().all(|h| h)
}

/// Every αβ-tree on at most `max_vertices` vertices, one per isomorphism
/// class, by exhaustive generation of all edge sets meeting the degree and
/// coverage rules.
pub fn all_ab_trees(max_vertices: usize) -> Vec<ABGraph> {
    let mut unique: BTreeMap<Vec<u8>, ABGraph> = BTreeMap::new();
    for n in 1..=max_vertices {
        let maps: Vec<Vec<Option<usize>>> =
            partial_injections(n).into_iter().filter(|m| touches_every_vertex(m)).collect();
        for ma in &maps {
            for mb in &maps {
                let mut edges = Vec::new();
                for (maps, label) in [(ma, Generator::Alpha), (mb, Generator::Beta)] {
                    for (i, m) in maps.iter().enumerate() {
                        if let Some(j) = m {
                            edges.push(Edge::new(i, *j, label));
                        }
                    }
                }
                let g = ABGraph::new(n, edges);
                if g.validate().is_err() || !g.is_ab_tree() {
                    continue;
                }
                unique.entry(g.canonical_certificate()).or_insert(g);
            }
        }
    }
    unique.into_values().collect()
}

/// Independent reference for the enumerator: every αβ-tree without
/// monochromatic cycles on at most `max_vertices` (at most 5) vertices
/// admitting `base^e` for some `e | max_power`, in certificate order.
/// Trees with cycles are available through [`oracle_from`] over
/// [`all_ab_trees`].
pub fn brute_force_oracle(base: &Word, max_vertices: usize, max_power: u64) -> Vec<TreeRecord> {
    assert!(max_vertices <= 5, "exhaustive generation is limited to 5 vertices");
    let acyclic: Vec<ABGraph> =
        all_ab_trees(max_vertices).into_iter().filter(|g| g.cycle_lengths().is_empty()).collect();
    oracle_from(&acyclic, base, max_power)
}

/// The oracle over a precomputed tree list.
pub fn oracle_from(trees: &[ABGraph], base: &Word, max_power: u64) -> Vec<TreeRecord> {
    trees.iter().filter_map(|g| TreeRecord::measure(g, base, max_power)).collect()
}
