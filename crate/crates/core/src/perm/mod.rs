//! Permutations of `{1..n}` acting on the right, words in two generators,
//! and structured random permutations.

mod sample;
mod word;

pub use sample::{random_uniform, random_with_support, CycleMode};
pub use word::{Generator, Letter, Word};

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("domain size mismatch: {left} vs {right}")]
    DomainMismatch { left: usize, right: usize },
    #[error("domain size must be positive")]
    EmptyDomain,
    #[error("point {point} outside 1..={n}")]
    PointOutOfRange { point: u64, n: usize },
    #[error("image sequence is not a bijection (value {0} repeated)")]
    NotBijection(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("order {order} has the form 2^x 3^y; the order-2/3 branch applies")]
    SpecialCase { order: BigUint },
    #[error("support {support} is infeasible on n={n} with {mode}")]
    Infeasible { n: usize, support: usize, mode: String },
}

/// A permutation stored as a 0-based image table. All public I/O is 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleStructure {
    /// All cycles including fixed points, each starting at its smallest point,
    /// ordered by that point. Points are 1-based.
    pub cycles: Vec<Vec<u32>>,
    pub support_size: usize,
    pub fixed_count: usize,
}

impl CycleStructure {
    pub fn lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.cycles.iter().filter(|c| c.len() > 1)
    }

    pub fn fixed_points(&self) -> Vec<u32> {
        self.cycles.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect()
    }
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { images: (0..n as u32).collect() }
    }

    /// Builds from 0-based images; caller guarantees bijectivity.
    pub(crate) fn from_images0_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(is_bijection(&images).is_ok());
        Perm { images }
    }

    pub fn from_images0(images: Vec<u32>) -> Result<Self, PermError> {
        if images.is_empty() {
            return Err(PermError::EmptyDomain);
        }
        is_bijection(&images)?;
        Ok(Perm { images })
    }

    /// Builds from 1-based images (`images[i-1]` is the image of `i`).
    pub fn from_images(images: &[u32]) -> Result<Self, PermError> {
        let n = images.len();
        let mut v = Vec::with_capacity(n);
        for &x in images {
            if x == 0 || x as usize > n {
                return Err(PermError::PointOutOfRange { point: x as u64, n });
            }
            v.push(x - 1);
        }
        Self::from_images0(v)
    }

    /// Builds from disjoint 1-based cycles; unlisted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<u32>]) -> Result<Self, PermError> {
        if n == 0 {
            return Err(PermError::EmptyDomain);
        }
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut seen = vec![false; n];
        for cyc in cycles {
            for &x in cyc {
                if x == 0 || x as usize > n {
                    return Err(PermError::PointOutOfRange { point: x as u64, n });
                }
                if seen[x as usize - 1] {
                    return Err(PermError::NotBijection(x));
                }
                seen[x as usize - 1] = true;
            }
            for (i, &x) in cyc.iter().enumerate() {
                let y = cyc[(i + 1) % cyc.len()];
                images[x as usize - 1] = y - 1;
            }
        }
        Ok(Perm { images })
    }

    /// Parses cycle notation such as `(1,2)(3,4,5)`; `()` is the identity.
    pub fn parse_cycles(n: usize, s: &str) -> Result<Self, PermError> {
        let mut cycles = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| PermError::Parse(format!("expected '(' in {s:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| PermError::Parse(format!("unclosed cycle in {s:?}")))?;
            let inner = body[..close].trim();
            if !inner.is_empty() {
                let cyc = inner
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.parse::<u32>()
                            .map_err(|_| PermError::Parse(format!("bad point {t:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                cycles.push(cyc);
            }
            rest = body[close + 1..].trim_start();
        }
        Self::from_cycles(n, &cycles)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `x`.
    pub fn image(&self, x: u32) -> u32 {
        self.images[x as usize - 1] + 1
    }

    #[inline]
    pub(crate) fn apply0(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub(crate) fn images0(&self) -> &[u32] {
        &self.images
    }

    pub fn images(&self) -> Vec<u32> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    fn check_same(&self, other: &Perm) -> Result<(), PermError> {
        if self.n() != other.n() {
            return Err(PermError::DomainMismatch { left: self.n(), right: other.n() });
        }
        Ok(())
    }

    /// `self` then `other`: the image of `i` is `other(self(i))`.
    pub fn compose(&self, other: &Perm) -> Result<Perm, PermError> {
        self.check_same(other)?;
        Ok(self.then(other))
    }

    pub(crate) fn then(&self, other: &Perm) -> Perm {
        Perm { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    /// `r⁻¹ self r`.
    pub fn conjugate(&self, r: &Perm) -> Result<Perm, PermError> {
        self.check_same(r)?;
        let mut out = vec![0u32; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            out[r.images[i] as usize] = r.images[x as usize];
        }
        Ok(Perm { images: out })
    }

    /// Raises to an integer power via the cycle decomposition.
    pub fn pow(&self, k: i64) -> Perm {
        let mut out = vec![0u32; self.n()];
        for cyc in self.cycles0() {
            let len = cyc.len() as i64;
            let shift = k.rem_euclid(len) as usize;
            for (i, &x) in cyc.iter().enumerate() {
                out[x as usize] = cyc[(i + shift) % cyc.len()];
            }
        }
        Perm { images: out }
    }

    /// Cycles on 0-based points, fixed points included.
    pub(crate) fn cycles0(&self) -> Vec<Vec<u32>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x as u32);
                x = self.images[x] as usize;
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_structure(&self) -> CycleStructure {
        let cycles: Vec<Vec<u32>> = self
            .cycles0()
            .into_iter()
            .map(|c| c.into_iter().map(|x| x + 1).collect())
            .collect();
        let support_size = self.support_size();
        CycleStructure { cycles, support_size, fixed_count: self.n() - support_size }
    }

    pub fn support_size(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &x)| i as u32 != x).count()
    }

    pub fn fixed_count(&self) -> usize {
        self.n() - self.support_size()
    }

    /// Sorted multiset of cycle lengths, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.cycles0().iter().map(Vec::len).collect();
        v.sort_unstable();
        v
    }

    pub fn has_cycle_of_len(&self, len: usize) -> bool {
        self.cycles0().iter().any(|c| c.len() == len)
    }

    /// Number of points lying in cycles of length `2..=max_len`.
    pub fn points_in_short_cycles(&self, max_len: usize) -> usize {
        self.cycles0().iter().map(Vec::len).filter(|&l| l >= 2 && l <= max_len).sum()
    }

    /// Number of points lying in cycles of length `1..=max_len`.
    pub fn points_in_cycles_at_most(&self, max_len: usize) -> usize {
        self.cycles0().iter().map(Vec::len).filter(|&l| l <= max_len).sum()
    }

    pub fn order(&self) -> BigUint {
        self.cycles0()
            .iter()
            .fold(BigUint::from(1u32), |acc, c| acc.lcm(&BigUint::from(c.len())))
    }

    /// Replaces the element by `a^k` with `k = 2^e1 3^e2` the {2,3}-part of its
    /// order, leaving an element of order coprime to 6. Fails when the order
    /// is itself of the form `2^x 3^y`.
    pub fn power_coprime6(&self) -> Result<(Perm, u64), PermError> {
        let order = self.order();
        let (k, e3) = split_23(&order);
        if e3 == BigUint::from(1u32) {
            return Err(PermError::SpecialCase { order });
        }
        let k = u64::try_from(&k).expect("2,3-part of an order fits in u64 for n < 2^32");
        Ok((self.pow(k as i64), k))
    }

    pub fn to_cycle_string(&self) -> String {
        let cs = self.cycle_structure();
        let mut s = String::new();
        for c in cs.nontrivial() {
            s.push('(');
            let parts: Vec<String> = c.iter().map(u32::to_string).collect();
            s.push_str(&parts.join(","));
            s.push(')');
        }
        if s.is_empty() {
            s.push_str("()");
        }
        s
    }
}

/// Splits `m` into its {2,3}-part and the cofactor coprime to 6.
pub(crate) fn split_23(m: &BigUint) -> (BigUint, BigUint) {
    let mut rest = m.clone();
    let mut part = BigUint::from(1u32);
    for p in [2u32, 3] {
        let p = BigUint::from(p);
        while (&rest % &p) == BigUint::from(0u32) {
            rest /= &p;
            part *= &p;
        }
    }
    (part, rest)
}

fn is_bijection(images: &[u32]) -> Result<(), PermError> {
    let n = images.len();
    let mut seen = vec![false; n];
    for &x in images {
        if x as usize >= n {
            return Err(PermError::PointOutOfRange { point: x as u64 + 1, n });
        }
        if seen[x as usize] {
            return Err(PermError::NotBijection(x + 1));
        }
        seen[x as usize] = true;
    }
    Ok(())
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[n={}]{}", self.n(), self.to_cycle_string())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PermJson {
    Cycles { n: usize, cycles: Vec<Vec<u32>> },
    Images { n: usize, images: Vec<u32> },
}

impl Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let cycles = self.cycle_structure().nontrivial().cloned().collect();
        PermJson::Cycles { n: self.n(), cycles }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match PermJson::deserialize(d)? {
            PermJson::Cycles { n, cycles } => Perm::from_cycles(n, &cycles).map_err(D::Error::custom),
            PermJson::Images { n, images } => {
                if images.len() != n {
                    return Err(D::Error::custom(format!("images has length {} but n={n}", images.len())));
                }
                Perm::from_images(&images).map_err(D::Error::custom)
            }
        }
    }
}

/// Reads a generator file: a mandatory `n=` header then one permutation per
/// line in cycle notation. Blank lines and `#` comments are skipped.
pub fn parse_generator_file(text: &str) -> Result<Vec<Perm>, PermError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| PermError::Parse("empty generator file".into()))?;
    let n: usize = header
        .strip_prefix("n=")
        .or_else(|| header.strip_prefix("n ="))
        .ok_or_else(|| PermError::Parse("missing n= header".into()))?
        .trim()
        .parse()
        .map_err(|_| PermError::Parse(format!("bad header {header:?}")))?;
    lines.map(|l| Perm::parse_cycles(n, l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(p(3, "(1,2,3)").compose(&p(3, "(1,2)")).unwrap(), p(3, "(2,3)"));
        let q = p(5, "(1,4)(2,5,3)");
        assert_eq!(Perm::identity(5).compose(&q).unwrap(), q);
        assert!(p(2, "(1,2)").compose(&p(2, "(1,2)")).unwrap().is_identity());
        assert!(matches!(
            p(3, "(1,2)").compose(&p(4, "(1,2)")),
            Err(PermError::DomainMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn inverse_and_conjugate() {
        assert_eq!(p(3, "(1,2,3)").inverse(), p(3, "(1,3,2)"));
        assert_eq!(p(4, "(1,2,3)").conjugate(&p(4, "(1,4)")).unwrap(), p(4, "(4,2,3)"));
        assert_eq!(p(2, "(1,2)").conjugate(&p(2, "(1,2)")).unwrap(), p(2, "(1,2)"));
        let a = p(6, "(1,5)(2,3,4)");
        assert_eq!(a.conjugate(&Perm::identity(6)).unwrap(), a);
    }

    #[test]
    fn cycle_structure_counts() {
        let cs = Perm::identity(10).cycle_structure();
        assert_eq!((cs.support_size, cs.fixed_count), (0, 10));
        let cs = p(6, "(1,2)(3,4,5)").cycle_structure();
        assert_eq!(cs.lengths(), vec![2, 3, 1]);
        assert_eq!((cs.support_size, cs.fixed_count), (5, 1));
        let cs = p(7, "(1,2,3,4,5)").cycle_structure();
        assert_eq!(cs.fixed_points(), vec![6, 7]);
    }

    #[test]
    fn power_coprime6_cases() {
        let (r, k) = p(9, "(1,2)(3,4,5,6,7,8,9)").power_coprime6().unwrap();
        assert_eq!(k, 2);
        assert_eq!(r.cycle_type(), vec![1, 1, 7]);
        let a = p(5, "(1,2,3,4,5)");
        assert_eq!(a.power_coprime6().unwrap(), (a.clone(), 1));
        assert!(matches!(p(5, "(1,2,3)(4,5)").power_coprime6(), Err(PermError::SpecialCase { .. })));
    }

    #[test]
    fn pow_matches_repeated_composition() {
        let a = p(9, "(1,2,3,4)(5,6,7)");
        let mut acc = Perm::identity(9);
        for k in 0..15 {
            assert_eq!(a.pow(k), acc);
            acc = acc.then(&a);
        }
        assert_eq!(a.pow(-1), a.inverse());
    }

    #[test]
    fn json_round_trip() {
        let a = p(6, "(1,5)(2,3,4)");
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"n":6,"cycles":[[1,5],[2,3,4]]}"#);
        assert_eq!(serde_json::from_str::<Perm>(&s).unwrap(), a);
        let b: Perm = serde_json::from_str(r#"{"n":3,"images":[2,3,1]}"#).unwrap();
        assert_eq!(b, p(3, "(1,2,3)"));
        assert!(serde_json::from_str::<Perm>(r#"{"n":3,"images":[1,1,2]}"#).is_err());
    }

    #[test]
    fn generator_file() {
        let g = parse_generator_file("n=5\n(1,2)\n# comment\n(1,2,3,4,5)\n").unwrap();
        assert_eq!(g.len(), 2);
        assert!(parse_generator_file("(1,2)\n").is_err());
    }
}
