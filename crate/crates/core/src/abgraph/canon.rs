use std::collections::VecDeque;

use super::{ABGraph, Adjacency};

const NONE: u32 = u32::MAX;

impl ABGraph {
    /// Breadth-first numbering from `start`, exploring α-out, α-in, β-out,
    /// β-in in that order. Returns `order[new] = old`.
    fn bfs_order(&self, adj: &Adjacency, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.vcount];
        let mut order = Vec::with_capacity(self.vcount);
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for g in 0..2 {
                for nb in [adj.out[g][v], adj.inn[g][v]].into_iter().flatten() {
                    if !seen[nb.0] {
                        seen[nb.0] = true;
                        queue.push_back(nb.0);
                    }
                }
            }
        }
        order
    }

    fn encode(&self, adj: &Adjacency, order: &[usize]) -> Vec<u8> {
        let mut pos = vec![NONE; self.vcount];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i as u32;
        }
        let mut words = vec![self.vcount as u32, self.edges.len() as u32];
        for &v in order {
            for g in 0..2 {
                words.push(adj.out[g][v].map_or(NONE, |(d, _)| pos[d]));
            }
        }
        words.iter().flat_map(|w| w.to_be_bytes()).collect()
    }

    /// Isomorphism invariant: the lexicographically least traversal encoding
    /// over all start vertices. Requires a valid (connected) graph.
    pub fn canonical_certificate(&self) -> Vec<u8> {
        self.canonical_parts().0
    }

    /// Relabelled copy in canonical vertex order with sorted edges.
    pub fn canonical_form(&self) -> ABGraph {
        let order = self.canonical_parts().1;
        let mut perm = vec![0; self.vcount];
        for (new, &old) in order.iter().enumerate() {
            perm[old] = new;
        }
        self.relabel(&perm)
    }

    /// Certificate plus the vertex order realizing it.
    pub(crate) fn canonical_parts(&self) -> (Vec<u8>, Vec<usize>) {
        let adj = self.adjacency();
        (0..self.vcount)
            .map(|s| {
                let order = self.bfs_order(&adj, s);
                (self.encode(&adj, &order), order)
            })
            .min()
            .expect("graph has a vertex")
    }

    /// Order of the group of label- and direction-preserving bijections.
    /// An automorphism of a connected graph is fixed by the image of vertex 0.
    pub fn automorphism_order(&self) -> u64 {
        let adj = self.adjacency();
        (0..self.vcount).filter(|&t| self.extends_to_automorphism(&adj, t).is_some()).count() as u64
    }

    /// All automorphisms, as image tables.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        (0..self.vcount).filter_map(|t| self.extends_to_automorphism(&adj, t)).collect()
    }

    fn extends_to_automorphism(&self, adj: &Adjacency, t: usize) -> Option<Vec<usize>> {
        let n = self.vcount;
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        map[0] = t;
        used[t] = true;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            let w = map[v];
            for g in 0..2 {
                for (mine, theirs) in [(adj.out[g][v], adj.out[g][w]), (adj.inn[g][v], adj.inn[g][w])] {
                    match (mine, theirs) {
                        (None, None) => {}
                        (Some((x, _)), Some((y, _))) => {
                            if map[x] == usize::MAX {
                                if used[y] {
                                    return None;
                                }
                                map[x] = y;
                                used[y] = true;
                                stack.push(x);
                            } else if map[x] != y {
                                return None;
                            }
                        }
                        _ => return None,
                    }
                }
            }
        }
        map.iter().all(|&m| m != usize::MAX).then_some(map)
    }
}
