use crate::abgraph::{ABGraph, Edge};
use crate::perm::Generator::{Alpha, Beta};

/// The five trees admitting `w₀` itself, as drawn (loops implied), each
/// with its fixed vertex.
pub fn w0_trees() -> Vec<(ABGraph, usize)> {
    let t = ABGraph::with_implied_loops;
    vec![
        (ABGraph::single_vertex(), 0),
        (t(2, vec![Edge::new(0, 1, Alpha)]), 1),
        (t(3, vec![Edge::new(1, 2, Beta), Edge::new(2, 0, Beta)]), 2),
        (t(4, vec![Edge::new(0, 3, Alpha), Edge::new(2, 1, Alpha), Edge::new(2, 0, Beta)]), 1),
        (t(4, vec![Edge::new(2, 0, Alpha), Edge::new(1, 3, Alpha), Edge::new(3, 0, Beta)]), 0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Word;

    #[test]
    fn drawn_trees_are_valid_and_starred_vertex_is_fixed() {
        for (g, star) in w0_trees() {
            assert!(g.validate().is_ok() && g.is_ab_tree());
            assert_eq!(g.admission(&Word::w0()), vec![star]);
        }
    }
}
