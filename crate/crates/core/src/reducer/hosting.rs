use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::ReduceError;
use crate::abgraph::{ABGraph, Label};
use crate::perm::{Perm, Word};
use crate::treenum::TreeRecord;

fn follows(tree: &ABGraph, iota: &[u32], a: &Perm, b: &Perm) -> bool {
    tree.edges().iter().all(|e| {
        let g = if e.label == Label::Alpha { a } else { b };
        g.image(iota[e.src]) == iota[e.dst]
    })
}

/// Every injection `ι : V → {1..n}` with `ι(v)^a = ι(w)` for each α-edge
/// `v → w` and likewise for β, found by trying all injections.
pub fn hosting_injections(tree: &ABGraph, a: &Perm, b: &Perm) -> Vec<Vec<u32>> {
    let n = a.n() as u32;
    let v = tree.vcount();
    let mut out = Vec::new();
    let mut iota: Vec<u32> = Vec::with_capacity(v);
    let mut used = vec![false; n as usize + 1];
    fn rec(
        tree: &ABGraph,
        a: &Perm,
        b: &Perm,
        n: u32,
        iota: &mut Vec<u32>,
        used: &mut [bool],
        out: &mut Vec<Vec<u32>>,
    ) {
        if iota.len() == tree.vcount() {
            if follows(tree, iota, a, b) {
                out.push(iota.clone());
            }
            return;
        }
        for x in 1..=n {
            if !used[x as usize] {
                used[x as usize] = true;
                iota.push(x);
                rec(tree, a, b, n, iota, used, out);
                iota.pop();
                used[x as usize] = false;
            }
        }
    }
    if v as u32 <= n {
        rec(tree, a, b, n, &mut iota, &mut used, &mut out);
    }
    out
}

/// Same set as [`hosting_injections`] for a connected tree: `ι` is forced
/// by `ι(0)` along the edges.
pub fn hosting_by_propagation(tree: &ABGraph, a: &Perm, b: &Perm) -> Vec<Vec<u32>> {
    let n = a.n() as u32;
    let v = tree.vcount();
    let (ai, bi) = (a.inverse(), b.inverse());
    let mut out = Vec::new();
    'start: for x in 1..=n {
        let mut iota = vec![0u32; v];
        iota[0] = x;
        let mut changed = true;
        while changed {
            changed = false;
            for e in tree.edges() {
                let (g, gi) = if e.label == Label::Alpha { (a, &ai) } else { (b, &bi) };
                match (iota[e.src], iota[e.dst]) {
                    (0, 0) => {}
                    (s, 0) => {
                        iota[e.dst] = g.image(s);
                        changed = true;
                    }
                    (0, d) => {
                        iota[e.src] = gi.image(d);
                        changed = true;
                    }
                    (s, d) => {
                        if g.image(s) != d {
                            continue 'start;
                        }
                    }
                }
            }
        }
        let mut seen = iota.clone();
        seen.sort_unstable();
        if seen.contains(&0) || seen.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        out.push(iota);
    }
    out.sort();
    out
}

/// `Σ_j |I_j| · fixed(T_j) / |Aut(T_j)|` over a catalog.
pub fn hosted_fixed_bound(catalog: &[TreeRecord], a: &Perm, b: &Perm) -> BigRational {
    catalog.iter().fold(BigRational::zero(), |acc, t| {
        let hosts = hosting_injections(&t.graph, a, b).len();
        acc + BigRational::new((hosts * t.fixed.len()).into(), t.stats.aut_order.into())
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedBoundReport {
    pub n: usize,
    pub a: String,
    pub trees: usize,
    pub conjugators: usize,
    pub violations: usize,
    /// Conjugators where the bound is attained.
    pub tight: usize,
    /// Smallest `|fix| - bound`.
    pub min_slack: f64,
    pub propagation_agrees: bool,
    pub passed: bool,
}

/// All permutations of `{1..n}` in lexicographic order of image tables.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut cur: Vec<u32> = (1..=n as u32).collect();
    let mut out = Vec::new();
    loop {
        out.push(Perm::from_images(&cur).expect("permutation"));
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Checks `|fix(w(a, a^r))| ≥ Σ_j |I_j|·fixed(T_j)/|Aut(T_j)|` for every
/// `r ∈ Sym(n)`, with `I_j` the hosting injections of `T_j` by `(a, a^r)`.
pub fn check_fixed_bound(catalog: &[TreeRecord], word: &Word, a: &Perm) -> Result<FixedBoundReport, ReduceError> {
    let n = a.n();
    if n > 8 {
        return Err(ReduceError::Parameter(format!("exhaustive conjugator search needs n <= 8, got {n}")));
    }
    let rows: Vec<(BigRational, usize, bool)> = all_perms(n)
        .par_iter()
        .map(|r| {
            let b = a.conjugate(r)?;
            let fix = word.evaluate(a, &b)?.fixed_count();
            let agree = catalog.iter().all(|t| hosting_injections(&t.graph, a, &b) == hosting_by_propagation(&t.graph, a, &b));
            Ok((hosted_fixed_bound(catalog, a, &b), fix, agree))
        })
        .collect::<Result<_, ReduceError>>()?;
    let mut violations = 0;
    let mut tight = 0;
    let mut min_slack = f64::INFINITY;
    for (bound, fix, _) in &rows {
        let slack = BigRational::from_integer((*fix).into()) - bound;
        if slack < BigRational::zero() {
            violations += 1;
        } else if slack.is_zero() {
            tight += 1;
        }
        let s = num_traits::ToPrimitive::to_f64(&slack).unwrap_or(f64::NAN);
        min_slack = min_slack.min(s);
    }
    let propagation_agrees = rows.iter().all(|r| r.2);
    Ok(FixedBoundReport {
        n,
        a: a.to_string(),
        trees: catalog.len(),
        conjugators: rows.len(),
        violations,
        tight,
        min_slack,
        propagation_agrees,
        passed: violations == 0 && propagation_agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgraph::Edge;
    use crate::perm::Generator;

    #[test]
    fn perms_enumerated() {
        let ps = all_perms(4);
        assert_eq!(ps.len(), 24);
        assert!(ps[0].is_identity());
        assert!(ps.windows(2).all(|w| w[0].images() < w[1].images()));
    }

    #[test]
    fn single_vertex_hosted_by_common_fixed_points() {
        let t = ABGraph::single_vertex();
        let a = Perm::parse_cycles(5, "(1,2)").unwrap();
        let b = Perm::parse_cycles(5, "(2,3)").unwrap();
        let hosts = hosting_injections(&t, &a, &b);
        assert_eq!(hosts, vec![vec![4], vec![5]]);
        assert_eq!(hosting_by_propagation(&t, &a, &b), hosts);
    }

    #[test]
    fn edge_hosting() {
        // 0 -α-> 1, β-loops at both.
        let t = ABGraph::new(
            2,
            vec![
                Edge::new(0, 1, Generator::Alpha),
                Edge::new(1, 0, Generator::Alpha),
                Edge::new(0, 0, Generator::Beta),
                Edge::new(1, 1, Generator::Beta),
            ],
        );
        let a = Perm::parse_cycles(4, "(1,2)(3,4)").unwrap();
        let b = Perm::parse_cycles(4, "(3,4)").unwrap();
        let hosts = hosting_injections(&t, &a, &b);
        assert_eq!(hosts, vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(hosting_by_propagation(&t, &a, &b), hosts);
    }
}
