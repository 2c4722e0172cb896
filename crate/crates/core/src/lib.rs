//! Fixed points of commutator words in symmetric groups: αβ-tree
//! enumeration, fixed-point polynomials and their contraction dynamics,
//! lazy random walks on tuple graphs, and iterated support reduction.

pub mod abgraph;
pub mod cli;
pub mod perm;
pub mod reducer;
pub mod rng;
pub mod spectrum;
pub mod treenum;
pub mod walks;
pub mod verify;
