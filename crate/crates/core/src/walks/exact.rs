use super::{WalkError, WalkSpec};

/// Largest state space handled at all.
pub const MAX_STATES: usize = 100_000;
/// Largest state space for which the dense transition matrix is squared.
const DENSE_STATES: usize = 400;
/// Work cap for step-by-step propagation (`length · states · moves`).
const MAX_WORK: u128 = 20_000_000_000;

/// Ordered `k`-tuples of distinct points of `{0..n-1}`, ranked in
/// lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TupleSpace {
    pub n: usize,
    pub k: usize,
    size: usize,
}

impl TupleSpace {
    pub fn new(n: usize, k: usize) -> Result<Self, WalkError> {
        if k == 0 || k > n {
            return Err(WalkError::Arity { n, k });
        }
        let mut size: u128 = 1;
        for j in 0..k {
            size *= (n - j) as u128;
            if size > MAX_STATES as u128 {
                let rest: u128 = (j + 1..k).map(|i| (n - i) as u128).product();
                return Err(WalkError::StateSpace(size.saturating_mul(rest)));
            }
        }
        Ok(TupleSpace { n, k, size: size as usize })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rank(&self, tuple: &[usize]) -> usize {
        let mut used = vec![false; self.n];
        let mut idx = 0;
        for (i, &x) in tuple.iter().enumerate() {
            let r = (0..x).filter(|&y| !used[y]).count();
            used[x] = true;
            idx = idx * (self.n - i) + r;
        }
        idx
    }

    pub fn unrank(&self, mut idx: usize) -> Vec<usize> {
        let mut digits = vec![0; self.k];
        for i in (0..self.k).rev() {
            let base = self.n - i;
            digits[i] = idx % base;
            idx /= base;
        }
        let mut free: Vec<usize> = (0..self.n).collect();
        digits.into_iter().map(|r| free.remove(r)).collect()
    }
}

fn successors(spec: &WalkSpec, space: &TupleSpace) -> Vec<Vec<usize>> {
    (0..space.size())
        .map(|s| {
            let t = space.unrank(s);
            spec.moves()
                .iter()
                .map(|g| space.rank(&t.iter().map(|&x| g.apply0(x)).collect::<Vec<_>>()))
                .collect()
        })
        .collect()
}

fn mat_mul(a: &[f64], b: &[f64], m: usize) -> Vec<f64> {
    let mut c = vec![0.0; m * m];
    for i in 0..m {
        for k in 0..m {
            let x = a[i * m + k];
            if x == 0.0 {
                continue;
            }
            let row = &b[k * m..(k + 1) * m];
            let out = &mut c[i * m..(i + 1) * m];
            for (o, &y) in out.iter_mut().zip(row) {
                *o += x * y;
            }
        }
    }
    c
}

/// Row-stochastic lazy transition matrix, dense and row-major.
fn transition(spec: &WalkSpec, space: &TupleSpace) -> Vec<f64> {
    let m = space.size();
    let d = spec.moves().len() as f64;
    let mut p = vec![0.0; m * m];
    for (s, nbrs) in successors(spec, space).into_iter().enumerate() {
        p[s * m + s] += 0.5;
        for t in nbrs {
            p[s * m + t] += 0.5 / d;
        }
    }
    p
}

/// `P^length` for the lazy walk on `k`-tuples; row `s` is the law of the
/// walk started at tuple `s`.
pub fn exact_walk_matrix(spec: &WalkSpec) -> Result<Vec<Vec<f64>>, WalkError> {
    let space = TupleSpace::new(spec.n(), spec.k)?;
    let m = space.size();
    if m > DENSE_STATES {
        return Err(WalkError::StateSpace(m as u128));
    }
    let mut base = transition(spec, &space);
    let mut acc: Vec<f64> = (0..m * m).map(|i| if i / m == i % m { 1.0 } else { 0.0 }).collect();
    let mut e = spec.length;
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &base, m);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base, m);
        }
    }
    Ok(acc.chunks(m).map(<[f64]>::to_vec).collect())
}

/// Law of the lazy walk after `spec.length` steps from a 1-based start
/// tuple, indexed by `TupleSpace` rank.
pub fn exact_walk_distribution(spec: &WalkSpec, start: &[u32]) -> Result<Vec<f64>, WalkError> {
    let space = TupleSpace::new(spec.n(), spec.k)?;
    if start.len() != spec.k {
        return Err(WalkError::Start(format!("expected {} points, got {}", spec.k, start.len())));
    }
    let mut t0 = Vec::with_capacity(start.len());
    for &x in start {
        if x == 0 || x as usize > spec.n() || t0.contains(&(x as usize - 1)) {
            return Err(WalkError::Start(format!("{start:?} is not a tuple of distinct points of 1..={}", spec.n())));
        }
        t0.push(x as usize - 1);
    }
    let s0 = space.rank(&t0);
    let m = space.size();
    if m <= DENSE_STATES {
        return Ok(exact_walk_matrix(spec)?.swap_remove(s0));
    }
    let work = spec.length as u128 * m as u128 * spec.moves().len() as u128;
    if work > MAX_WORK {
        return Err(WalkError::StateSpace(m as u128));
    }
    let succ = successors(spec, &space);
    let share = 0.5 / spec.moves().len() as f64;
    let mut p = vec![0.0; m];
    p[s0] = 1.0;
    for _ in 0..spec.length {
        let mut q: Vec<f64> = p.iter().map(|x| 0.5 * x).collect();
        for (s, nbrs) in succ.iter().enumerate() {
            if p[s] == 0.0 {
                continue;
            }
            for &t in nbrs {
                q[t] += share * p[s];
            }
        }
        p = q;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;

    #[test]
    fn rank_round_trip() {
        let sp = TupleSpace::new(5, 3).unwrap();
        assert_eq!(sp.size(), 60);
        for i in 0..60 {
            assert_eq!(sp.rank(&sp.unrank(i)), i);
        }
        assert_eq!(sp.unrank(0), vec![0, 1, 2]);
        assert!(TupleSpace::new(20, 8).is_err());
    }

    #[test]
    fn zero_length_is_point_mass() {
        let spec = WalkSpec::new(vec![Perm::parse_cycles(4, "(1,2,3,4)").unwrap()], 2, 0).unwrap();
        let p = exact_walk_distribution(&spec, &[2, 3]).unwrap();
        let sp = TupleSpace::new(4, 2).unwrap();
        assert_eq!(p[sp.rank(&[1, 2])], 1.0);
        assert_eq!(p.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn dense_and_sparse_paths_agree() {
        let gens = vec![Perm::parse_cycles(7, "(1,2)").unwrap(), Perm::parse_cycles(7, "(1,2,3,4,5,6,7)").unwrap()];
        // 7·6·5 = 210 states: dense. Compare against explicit propagation.
        let spec = WalkSpec::new(gens, 3, 37).unwrap();
        let dense = exact_walk_distribution(&spec, &[1, 2, 3]).unwrap();
        let space = TupleSpace::new(7, 3).unwrap();
        let succ = successors(&spec, &space);
        let mut p = vec![0.0; space.size()];
        p[space.rank(&[0, 1, 2])] = 1.0;
        for _ in 0..37 {
            let mut q: Vec<f64> = p.iter().map(|x| 0.5 * x).collect();
            for (s, nb) in succ.iter().enumerate() {
                for &t in nb {
                    q[t] += p[s] / 6.0;
                }
            }
            p = q;
        }
        for (a, b) in dense.iter().zip(&p) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
