//! Enumeration of αβ-trees admitting powers of a base word.
//!
//! The search traces the base word from vertex 0 over a partially built
//! graph. A present edge is followed; a missing one is branched over every
//! existing vertex (ascending) and one fresh vertex. A candidate is accepted
//! at its first return to 0 on a repetition boundary, which pins the period
//! of 0; duplicates are removed by canonical certificate.

mod oracle;
mod tables;

pub use oracle::{all_ab_trees, brute_force_oracle, oracle_from};
pub use tables::w0_trees;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::abgraph::{ABGraph, CatalogEntry, Edge, TreeStats, LABELS};
use crate::perm::Word;

/// Hard limit on vertices per tree (state is kept in fixed arrays).
pub const MAX_VERTICES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleRule {
    /// No monochromatic cycles of length at least two.
    Forbid,
    /// Every monochromatic cycle has exactly this length.
    Exactly(usize),
}

impl fmt::Display for CycleRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleRule::Forbid => f.write_str("none"),
            CycleRule::Exactly(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for CycleRule {
    type Err = EnumError;

    fn from_str(s: &str) -> Result<Self, EnumError> {
        match s.trim() {
            "none" | "forbid" => Ok(CycleRule::Forbid),
            t => t
                .parse()
                .map(CycleRule::Exactly)
                .map_err(|_| EnumError::Constraints(format!("cycle mode {s:?} is neither 'none' nor an integer"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumConstraints {
    pub kappa: usize,
    /// Maximum number of vertices on a monochromatic path.
    pub max_path: usize,
    pub cycles: CycleRule,
    pub max_power: u64,
    /// Keep only trees whose least admitted power is at most this.
    pub power_limit: Option<u64>,
}

impl EnumConstraints {
    pub fn new(kappa: usize, max_path: usize, cycles: CycleRule, max_power: u64) -> Self {
        EnumConstraints { kappa, max_path, cycles, max_power, power_limit: None }
    }

    pub fn with_power_limit(mut self, limit: u64) -> Self {
        self.power_limit = Some(limit);
        self
    }

    pub fn check(&self) -> Result<(), EnumError> {
        let bad = |m: String| Err(EnumError::Constraints(m));
        if self.kappa == 0 || self.kappa > MAX_VERTICES {
            return bad(format!("kappa must lie in 1..={MAX_VERTICES}, got {}", self.kappa));
        }
        if self.max_path == 0 {
            return bad("max_path must be at least 1".into());
        }
        if self.max_power == 0 {
            return bad("max_power must be positive".into());
        }
        if let CycleRule::Exactly(n) = self.cycles {
            if n < 2 {
                return bad(format!("cycle length must be at least 2, got {n}"));
            }
            if self.max_path >= n {
                return bad(format!("max_path {} must be below the cycle length {n}", self.max_path));
            }
        }
        Ok(())
    }

    /// Whether a complete graph meets the size, path and cycle limits.
    pub fn admits_shape(&self, g: &ABGraph) -> bool {
        if g.vcount() > self.kappa || g.max_path_vertices() > self.max_path {
            return false;
        }
        let lens = g.cycle_lengths();
        match self.cycles {
            CycleRule::Forbid => lens.is_empty(),
            CycleRule::Exactly(n) => lens.iter().all(|&l| l == n),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("invalid constraints: {0}")]
    Constraints(String),
}

/// An enumerated tree in canonical labelling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeRecord {
    pub graph: ABGraph,
    pub certificate: Vec<u8>,
    pub stats: TreeStats,
    /// Fixed vertices for `base^max_power`.
    pub fixed: Vec<usize>,
    pub min_power: u64,
}

impl TreeRecord {
    /// Canonicalizes `g` and measures it against `base^max_power`.
    pub fn measure(g: &ABGraph, base: &Word, max_power: u64) -> Option<TreeRecord> {
        let (certificate, _) = g.canonical_parts();
        let graph = g.canonical_form();
        let fixed = graph.admission_power(base, max_power as usize);
        if fixed.is_empty() {
            return None;
        }
        let min_power = divisors(max_power)
            .into_iter()
            .find(|&e| !graph.admission_power(base, e as usize).is_empty())
            .expect("max_power itself is admitted");
        assert_eq!(max_power % min_power, 0);
        let mut stats = graph.stats_power(base, max_power as usize);
        stats.fixed_count = fixed.len();
        Some(TreeRecord { graph, certificate, stats, fixed, min_power })
    }

    pub fn to_entry(&self) -> CatalogEntry {
        CatalogEntry::new(&self.graph, self.fixed.clone(), self.stats.aut_order, self.min_power)
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

const NONE: u8 = u8::MAX;

#[derive(Clone)]
struct State {
    nv: u8,
    out: [[u8; MAX_VERTICES]; 2],
    inn: [[u8; MAX_VERTICES]; 2],
    uf: [u8; MAX_VERTICES],
    pos: u16,
    v: u8,
    reps: u16,
}

impl State {
    fn root() -> Self {
        let mut uf = [0u8; MAX_VERTICES];
        for (i, x) in uf.iter_mut().enumerate() {
            *x = i as u8;
        }
        State { nv: 1, out: [[NONE; MAX_VERTICES]; 2], inn: [[NONE; MAX_VERTICES]; 2], uf, pos: 0, v: 0, reps: 0 }
    }

    fn find(&self, mut x: u8) -> u8 {
        while self.uf[x as usize] != x {
            x = self.uf[x as usize];
        }
        x
    }

    fn tail(&self, s: usize, mut x: u8) -> u8 {
        let start = x;
        while self.out[s][x as usize] != NONE {
            x = self.out[s][x as usize];
            if x == start {
                break;
            }
        }
        x
    }

    fn head(&self, s: usize, mut x: u8) -> u8 {
        let start = x;
        while self.inn[s][x as usize] != NONE {
            x = self.inn[s][x as usize];
            if x == start {
                break;
            }
        }
        x
    }

    /// Length of the cycle through `x`, if `x` lies on one.
    fn cycle_len(&self, s: usize, x: u8) -> Option<usize> {
        let mut y = x;
        let mut len = 0;
        loop {
            y = self.out[s][y as usize];
            len += 1;
            if y == NONE {
                return None;
            }
            if y == x {
                return Some(len);
            }
        }
    }

    fn chain_len(&self, s: usize, x: u8) -> usize {
        let mut y = self.head(s, x);
        let mut len = 1;
        while self.out[s][y as usize] != NONE {
            y = self.out[s][y as usize];
            len += 1;
        }
        len
    }

    fn graph(&self) -> Option<ABGraph> {
        let nv = self.nv as usize;
        let mut edges = Vec::new();
        for label in LABELS {
            let s = label.index();
            for x in 0..nv {
                if self.out[s][x] == NONE && self.inn[s][x] == NONE {
                    return None;
                }
                if self.out[s][x] != NONE {
                    edges.push(Edge::new(x, self.out[s][x] as usize, label));
                }
            }
        }
        Some(ABGraph::new(nv, edges))
    }
}

enum Advance {
    Accept,
    Dead,
    Need,
}

struct Search {
    base: Vec<(usize, bool)>,
    kappa: usize,
    chain_limit: usize,
    cycles: CycleRule,
    max_power: u64,
    rep_bound: u64,
}

impl Search {
    fn new(base: &Word, c: &EnumConstraints) -> Self {
        let chain_limit = match c.cycles {
            CycleRule::Forbid => c.max_path,
            CycleRule::Exactly(n) => c.max_path.max(n),
        };
        Search {
            base: base.letters().iter().map(|l| (l.gen.index(), l.inverse)).collect(),
            kappa: c.kappa,
            chain_limit,
            cycles: c.cycles,
            max_power: c.max_power,
            rep_bound: c.max_power.min(c.kappa as u64),
        }
    }

    fn advance(&self, st: &mut State) -> Advance {
        let len = self.base.len() as u16;
        loop {
            if st.pos == len {
                st.reps += 1;
                st.pos = 0;
                if st.v == 0 {
                    return if self.max_power % st.reps as u64 == 0 { Advance::Accept } else { Advance::Dead };
                }
                if st.reps as u64 >= self.rep_bound {
                    return Advance::Dead;
                }
            }
            let (s, inv) = self.base[st.pos as usize];
            let nxt = if inv { st.inn[s][st.v as usize] } else { st.out[s][st.v as usize] };
            if nxt == NONE {
                return Advance::Need;
            }
            st.v = nxt;
            st.pos += 1;
        }
    }

    /// Branches on the missing edge at the current position.
    fn children(&self, st: &State) -> Vec<State> {
        let (s, inv) = self.base[st.pos as usize];
        let v = st.v;
        let fresh = (st.nv as usize) < self.kappa;
        let mut kids = Vec::new();
        for u in 0..st.nv + fresh as u8 {
            let is_new = u == st.nv;
            let (src, dst) = if inv { (u, v) } else { (v, u) };
            if !is_new {
                if st.out[s][src as usize] != NONE || st.inn[s][dst as usize] != NONE {
                    continue;
                }
                if src != dst && st.tail(s, dst) != src && st.find(src) == st.find(dst) {
                    continue;
                }
            }
            let mut kid = st.clone();
            if is_new {
                kid.nv += 1;
            }
            kid.out[s][src as usize] = dst;
            kid.inn[s][dst as usize] = src;
            let (ra, rb) = (kid.find(src), kid.find(dst));
            if ra != rb {
                kid.uf[ra as usize] = rb;
            }
            if src != dst && !self.shape_ok(&mut kid, s, src) {
                continue;
            }
            kid.pos += 1;
            kid.v = u;
            kids.push(kid);
        }
        kids
    }

    /// Checks the γ-component through `x` after an edge was added, closing a
    /// chain that reached the required cycle length.
    fn shape_ok(&self, st: &mut State, s: usize, x: u8) -> bool {
        if let Some(len) = st.cycle_len(s, x) {
            return matches!(self.cycles, CycleRule::Exactly(n) if n == len);
        }
        let len = st.chain_len(s, x);
        if len > self.chain_limit {
            return false;
        }
        if let CycleRule::Exactly(n) = self.cycles {
            if len == n {
                let (h, t) = (st.head(s, x), st.tail(s, x));
                st.out[s][t as usize] = h;
                st.inn[s][h as usize] = t;
            }
        }
        true
    }

    fn expand(&self, mut st: State, found: &mut Vec<ABGraph>) -> Vec<State> {
        match self.advance(&mut st) {
            Advance::Accept => {
                found.extend(st.graph());
                Vec::new()
            }
            Advance::Dead => Vec::new(),
            Advance::Need => self.children(&st),
        }
    }

    fn dfs(&self, root: State) -> Vec<ABGraph> {
        let mut found = Vec::new();
        let mut stack = vec![root];
        while let Some(st) = stack.pop() {
            let mut kids = self.expand(st, &mut found);
            kids.reverse();
            stack.extend(kids);
        }
        found
    }
}

/// Raw accepted graphs, before canonical dedup and shape filtering.
fn search_raw(base: &Word, c: &EnumConstraints) -> Vec<ABGraph> {
    let search = Search::new(base, c);
    let mut found = Vec::new();
    let mut frontier = vec![State::root()];
    let target = 4 * rayon::current_num_threads().max(16);
    for _ in 0..64 {
        if frontier.len() >= target || frontier.is_empty() {
            break;
        }
        frontier = frontier.into_iter().flat_map(|st| search.expand(st, &mut found)).collect();
    }
    let rest: Vec<Vec<ABGraph>> = frontier.into_par_iter().map(|st| search.dfs(st)).collect();
    found.extend(rest.into_iter().flatten());
    found
}

/// Every αβ-tree satisfying `c` that admits `base^e` for some `e | max_power`,
/// once per isomorphism class, in certificate order.
pub fn enumerate_admitting_trees(base: &Word, c: &EnumConstraints) -> Result<Vec<TreeRecord>, EnumError> {
    c.check()?;
    let mut unique: BTreeMap<Vec<u8>, ABGraph> = BTreeMap::new();
    for g in search_raw(base, c) {
        if !c.admits_shape(&g) {
            continue;
        }
        unique.entry(g.canonical_certificate()).or_insert(g);
    }
    let graphs: Vec<ABGraph> = unique.into_values().collect();
    let records: Vec<TreeRecord> = graphs
        .par_iter()
        .map(|g| {
            debug_assert!(g.validate().is_ok() && g.is_ab_tree());
            TreeRecord::measure(g, base, c.max_power).expect("accepted trees admit base^max_power at vertex 0")
        })
        .collect();
    Ok(records.into_iter().filter(|r| c.power_limit.is_none_or(|lim| r.min_power <= lim)).collect())
}

/// The constraint set whose catalog aggregates exactly to the generic
/// polynomial `f`: trees of at most 17 vertices, monochromatic paths of at
/// most 5 vertices, no cycles, admitting `w₀^e` with `e ≤ 5`.
pub fn generic_family() -> EnumConstraints {
    EnumConstraints::new(17, 5, CycleRule::Forbid, 60).with_power_limit(5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_one_gives_single_vertex() {
        let c = EnumConstraints::new(1, 1, CycleRule::Forbid, 60);
        let cat = enumerate_admitting_trees(&Word::w0(), &c).unwrap();
        assert_eq!(cat.len(), 1);
        assert_eq!(cat[0].graph, ABGraph::single_vertex());
        assert_eq!(cat[0].min_power, 1);
    }

    #[test]
    fn w0_trees_by_min_power() {
        let c = EnumConstraints::new(4, 4, CycleRule::Forbid, 1);
        let cat = enumerate_admitting_trees(&Word::w0(), &c).unwrap();
        assert_eq!(cat.len(), 5);
        assert!(cat.iter().all(|r| r.stats.aut_order == 1 && r.fixed.len() == 1));
    }

    #[test]
    fn constraint_validation() {
        assert!(EnumConstraints::new(0, 1, CycleRule::Forbid, 60).check().is_err());
        assert!(EnumConstraints::new(5, 2, CycleRule::Exactly(2), 60).check().is_err());
        assert!(EnumConstraints::new(5, 1, CycleRule::Exactly(1), 60).check().is_err());
        assert!(EnumConstraints::new(5, 1, CycleRule::Exactly(2), 60).check().is_ok());
        assert_eq!("none".parse::<CycleRule>().unwrap(), CycleRule::Forbid);
        assert_eq!("3".parse::<CycleRule>().unwrap(), CycleRule::Exactly(3));
    }
}
