use num_bigint::BigUint;
use rand::Rng as _;
use serde::Serialize;

use super::ReduceError;
use crate::perm::Perm;
use crate::rng;

/// Consecutive trivial sifts after which the chain is accepted.
const SIFT_STREAK: usize = 40;
const MAX_N: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupClass {
    Sym,
    Alt,
    Proper,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenerationReport {
    pub class: GroupClass,
    #[serde(serialize_with = "decimal")]
    pub order: BigUint,
    /// Indices (0-based) of an irredundant generating subset, when requested.
    pub trimmed: Option<Vec<usize>>,
}

fn decimal<S: serde::Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}

/// One level of a stabilizer chain: base point, orbit and Schreier vector
/// (for each orbit point, the index of the strong generator that reached it).
struct Level {
    base: u32,
    label: Vec<Option<usize>>,
    orbit: Vec<u32>,
}

struct Chain {
    n: usize,
    /// Strong generators with the first level whose group contains them.
    strong: Vec<(Perm, usize)>,
    inverses: Vec<Perm>,
    levels: Vec<Level>,
}

impl Chain {
    fn new(n: usize) -> Self {
        Chain { n, strong: Vec::new(), inverses: Vec::new(), levels: Vec::new() }
    }

    fn rebuild_orbit(&mut self, i: usize) {
        let n = self.n;
        let gens: Vec<usize> = (0..self.strong.len()).filter(|&j| self.strong[j].1 >= i).collect();
        let lvl = &mut self.levels[i];
        lvl.label = vec![None; n];
        lvl.label[lvl.base as usize] = Some(usize::MAX);
        lvl.orbit = vec![lvl.base];
        let mut head = 0;
        while head < lvl.orbit.len() {
            let x = lvl.orbit[head];
            head += 1;
            for &j in &gens {
                let y = self.strong[j].0.apply0(x as usize);
                if lvl.label[y].is_none() {
                    lvl.label[y] = Some(j);
                    lvl.orbit.push(y as u32);
                }
            }
        }
    }

    /// Strips `g` through the chain; returns the residue and the level where
    /// it stopped.
    fn sift(&self, g: &Perm) -> (Vec<u32>, usize) {
        let mut img: Vec<u32> = g.images0().to_vec();
        for (i, lvl) in self.levels.iter().enumerate() {
            let mut y = img[lvl.base as usize] as usize;
            if lvl.label[y].is_none() {
                return (img, i);
            }
            // img ← img · u_y⁻¹, walking y back to the base point.
            while let Some(j) = lvl.label[y].filter(|&j| j != usize::MAX) {
                let inv = &self.inverses[j];
                for x in img.iter_mut() {
                    *x = inv.apply0(*x as usize) as u32;
                }
                y = inv.apply0(y);
            }
        }
        (img, self.levels.len())
    }

    /// Adds a residue that stopped at `level`: it fixes the earlier base
    /// points and moves the base point of `level`.
    fn add(&mut self, residue: Vec<u32>, level: usize) {
        let h = Perm::from_images0_unchecked(residue);
        if level == self.levels.len() {
            let moved = (0..self.n).find(|&x| h.apply0(x) != x).expect("nontrivial residue");
            self.levels.push(Level { base: moved as u32, label: Vec::new(), orbit: Vec::new() });
        }
        self.inverses.push(h.inverse());
        self.strong.push((h, level));
        for i in 0..=level {
            self.rebuild_orbit(i);
        }
    }

    fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| acc * l.orbit.len())
    }
}

/// Product-replacement random elements.
struct Replacer {
    slots: Vec<Perm>,
    acc: Perm,
    rng: rng::Rng,
}

impl Replacer {
    fn new(gens: &[Perm], seed: u64) -> Self {
        let n = gens[0].n();
        let mut slots: Vec<Perm> = gens.to_vec();
        while slots.len() < 10 {
            slots.push(gens[slots.len() % gens.len()].clone());
        }
        let mut r = Replacer { slots, acc: Perm::identity(n), rng: rng::from_seed(seed) };
        for _ in 0..50 {
            r.next();
        }
        r
    }

    fn next(&mut self) -> Perm {
        let k = self.slots.len();
        let i = self.rng.random_range(0..k);
        let mut j = self.rng.random_range(0..k - 1);
        if j >= i {
            j += 1;
        }
        let s = if self.rng.random::<bool>() { self.slots[j].clone() } else { self.slots[j].inverse() };
        self.slots[i] = if self.rng.random::<bool>() { self.slots[i].then(&s) } else { s.then(&self.slots[i]) };
        self.acc = self.acc.then(&self.slots[i]);
        self.acc.clone()
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * k)
}

fn is_even(p: &Perm) -> bool {
    p.cycle_type().iter().filter(|&&l| l % 2 == 0).count() % 2 == 0
}

/// Randomized order of `⟨gens⟩`; a lower bound that is exact with
/// overwhelming probability.
pub fn group_order(gens: &[Perm], seed: u64) -> Result<BigUint, ReduceError> {
    let n = match gens.first() {
        Some(g) => g.n(),
        None => return Ok(BigUint::from(1u32)),
    };
    if n > MAX_N {
        return Err(ReduceError::Parameter(format!("n = {n} exceeds {MAX_N}")));
    }
    if let Some(g) = gens.iter().find(|g| g.n() != n) {
        return Err(ReduceError::Parameter(format!("generators on {n} and {} points", g.n())));
    }
    let mut chain = Chain::new(n);
    for g in gens {
        let (res, lvl) = chain.sift(g);
        if res.iter().enumerate().any(|(i, &x)| i as u32 != x) {
            chain.add(res, lvl);
        }
    }
    if gens.iter().all(Perm::is_identity) {
        return Ok(BigUint::from(1u32));
    }
    let mut rep = Replacer::new(gens, seed);
    let mut streak = 0;
    while streak < SIFT_STREAK {
        let g = rep.next();
        let (res, lvl) = chain.sift(&g);
        if res.iter().enumerate().all(|(i, &x)| i as u32 == x) {
            streak += 1;
        } else {
            chain.add(res, lvl);
            streak = 0;
        }
    }
    Ok(chain.order())
}

fn classify(gens: &[Perm], n: usize, seed: u64) -> Result<(GroupClass, BigUint), ReduceError> {
    let order = group_order(gens, seed)?;
    let full = factorial(n);
    let class = if order == full && n >= 2 {
        GroupClass::Sym
    } else if n >= 3 && order == &full / 2u32 && gens.iter().all(is_even) {
        GroupClass::Alt
    } else {
        GroupClass::Proper
    };
    Ok((class, order))
}

/// Decides whether `gens` generates `Sym(n)`, `Alt(n)` or a proper subgroup.
/// With `trim`, also drops generators greedily while the class is kept.
pub fn check_generates(gens: &[Perm], trim: bool, seed: u64) -> Result<GenerationReport, ReduceError> {
    let n = gens.first().ok_or_else(|| ReduceError::Parameter("empty generating set".into()))?.n();
    let (class, order) = classify(gens, n, seed)?;
    let trimmed = if trim && class != GroupClass::Proper {
        let mut keep: Vec<usize> = (0..gens.len()).collect();
        let mut i = 0;
        while i < keep.len() {
            let trial: Vec<usize> = keep.iter().copied().filter(|&k| k != keep[i]).collect();
            let sub: Vec<Perm> = trial.iter().map(|&k| gens[k].clone()).collect();
            if !sub.is_empty() && classify(&sub, n, rng::derive(seed, keep[i] as u64))?.0 == class {
                keep = trial;
            } else {
                i += 1;
            }
        }
        Some(keep)
    } else {
        None
    };
    Ok(GenerationReport { class, order, trimmed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn classic_generators() {
        for n in [2usize, 3, 5, 8, 12] {
            let cyc = format!("({})", (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(","));
            let r = check_generates(&[p(n, "(1,2)"), p(n, &cyc)], false, 1).unwrap();
            assert_eq!(r.class, GroupClass::Sym, "n={n}");
            assert_eq!(r.order, factorial(n));
        }
    }

    #[test]
    fn proper_and_alt() {
        assert_eq!(check_generates(&[p(5, "(1,2,3)")], false, 1).unwrap().class, GroupClass::Proper);
        let r = check_generates(&[p(7, "(1,2,3)"), p(7, "(3,4,5)"), p(7, "(5,6,7)")], false, 2).unwrap();
        assert_eq!(r.class, GroupClass::Alt);
        assert_eq!(r.order, BigUint::from(2520u32));
        let d = check_generates(&[p(4, "(1,2,3,4)"), p(4, "(1,3)")], false, 3).unwrap();
        assert_eq!((d.class, d.order), (GroupClass::Proper, BigUint::from(8u32)));
        let m = check_generates(&[p(11, "(1,2,3,4,5,6,7,8,9,10,11)"), p(11, "(3,7,11,8)(4,10,5,6)")], false, 4).unwrap();
        assert_eq!(m.order, BigUint::from(7920u32));
    }

    #[test]
    fn trimming_is_irredundant() {
        let gens = [p(6, "(1,2)"), p(6, "(2,3)"), p(6, "(1,2,3,4,5,6)"), p(6, "(3,4)"), p(6, "(4,5)"), p(6, "(5,6)")];
        let r = check_generates(&gens, true, 9).unwrap();
        let keep = r.trimmed.unwrap();
        assert!(keep.len() <= 5);
        let sub: Vec<Perm> = keep.iter().map(|&k| gens[k].clone()).collect();
        assert_eq!(check_generates(&sub, false, 10).unwrap().class, GroupClass::Sym);
    }
}
