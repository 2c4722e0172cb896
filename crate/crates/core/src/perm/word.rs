use std::fmt;
use std::str::FromStr;

use super::{Perm, PermError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Alpha,
    Beta,
}

impl Generator {
    pub fn index(self) -> usize {
        match self {
            Generator::Alpha => 0,
            Generator::Beta => 1,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Generator::Alpha => Generator::Beta,
            Generator::Beta => Generator::Alpha,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Generator::Alpha => 'a',
            Generator::Beta => 'b',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: Generator,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(gen: Generator, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

/// A freely reduced word over `{α, α⁻¹, β, β⁻¹}`.
///
/// Text form uses `a`/`b` for the generators and `A`/`B` for their inverses,
/// so `w₀ = [α,β⁻¹][α,β]` is `AbaBABab`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

const A: Letter = Letter::new(Generator::Alpha, false);
const AI: Letter = Letter::new(Generator::Alpha, true);
const B: Letter = Letter::new(Generator::Beta, false);
const BI: Letter = Letter::new(Generator::Beta, true);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self, PermError> {
        if let Some(i) = letters.windows(2).position(|w| w[0].cancels(w[1])) {
            return Err(PermError::Parse(format!("word not reduced at position {i}")));
        }
        Ok(Word { letters })
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last().is_some_and(|&t| t.cancels(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letter(gen: Generator, inverse: bool) -> Self {
        Word { letters: vec![Letter::new(gen, inverse)] }
    }

    /// `α⁻¹βαβ⁻¹α⁻¹β⁻¹αβ`.
    pub fn w0() -> Self {
        Word { letters: vec![AI, B, A, BI, AI, BI, A, B] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::reduce(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn pow(&self, k: usize) -> Word {
        let mut out = Word::empty();
        for _ in 0..k {
            out = out.concat(self);
        }
        out
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    /// Cyclic rotation by `k` letters; the result is reduced as a linear word
    /// only when `self` is cyclically reduced.
    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.letters.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        Word::reduce(v)
    }

    pub fn swap_generators(&self) -> Word {
        Word {
            letters: self.letters.iter().map(|l| Letter::new(l.gen.other(), l.inverse)).collect(),
        }
    }

    /// Replaces `gen` by its inverse throughout.
    pub fn flip(&self, gen: Generator) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .map(|&l| if l.gen == gen { l.inv() } else { l })
                .collect(),
        }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&f), Some(&l)) if self.letters.len() > 1 => !l.cancels(f),
            _ => true,
        }
    }

    /// Substitutes `a` for α and `b` for β and multiplies left to right.
    pub fn evaluate(&self, a: &Perm, b: &Perm) -> Result<Perm, PermError> {
        a.check_same(b)?;
        let n = a.n();
        let ai = a.inverse();
        let bi = b.inverse();
        let table = |l: &Letter| match (l.gen, l.inverse) {
            (Generator::Alpha, false) => a,
            (Generator::Alpha, true) => &ai,
            (Generator::Beta, false) => b,
            (Generator::Beta, true) => &bi,
        };
        let mut images: Vec<u32> = (0..n as u32).collect();
        for l in &self.letters {
            let g = table(l);
            for x in images.iter_mut() {
                *x = g.images[*x as usize];
            }
        }
        Ok(Perm::from_images0_unchecked(images))
    }

    /// Evaluates `self^k` as the `k`-th power of the evaluated base word.
    pub fn evaluate_power(&self, k: u64, a: &Perm, b: &Perm) -> Result<Perm, PermError> {
        Ok(self.evaluate(a, b)?.pow(k as i64))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for l in &self.letters {
            let c = l.gen.symbol();
            let c = if l.inverse { c.to_ascii_uppercase() } else { c };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = PermError;

    /// Accepts `AbaB`-style text, primes or `^-1` for inverses (`a'b`,
    /// `a^-1b`), the names `w0`/`w₀`, and a trailing `^k` power on `w0`.
    fn from_str(s: &str) -> Result<Self, PermError> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("w0").or_else(|| s.strip_prefix("w₀")) {
            let rest = rest.trim();
            if rest.is_empty() {
                return Ok(Word::w0());
            }
            let k: usize = rest
                .strip_prefix('^')
                .and_then(|t| t.trim().parse().ok())
                .ok_or_else(|| PermError::Parse(format!("bad power in {s:?}")))?;
            return Ok(Word::w0().pow(k));
        }
        if s == "1" {
            return Ok(Word::empty());
        }
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        let mut letters = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let (gen, mut inverse) = match chars[i] {
                'a' | 'α' => (Generator::Alpha, false),
                'A' => (Generator::Alpha, true),
                'b' | 'β' => (Generator::Beta, false),
                'B' => (Generator::Beta, true),
                c => return Err(PermError::Parse(format!("unexpected {c:?} in word {s:?}"))),
            };
            i += 1;
            if i < chars.len() && chars[i] == '\'' {
                inverse = !inverse;
                i += 1;
            } else if chars[i..].starts_with(&['^', '-', '1']) {
                inverse = !inverse;
                i += 3;
            } else if chars[i..].starts_with(&['⁻', '¹']) {
                inverse = !inverse;
                i += 2;
            }
            letters.push(Letter::new(gen, inverse));
        }
        Word::new(letters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn parse_forms_agree() {
        let w0 = Word::w0();
        assert_eq!(w0.to_string(), "AbaBABab");
        assert_eq!("AbaBABab".parse::<Word>().unwrap(), w0);
        assert_eq!("a'ba b'a'b'ab".parse::<Word>().unwrap(), w0);
        assert_eq!("a^-1 b a b^-1 a^-1 b^-1 a b".parse::<Word>().unwrap(), w0);
        assert_eq!("w0^3".parse::<Word>().unwrap().len(), 24);
        assert!("aA".parse::<Word>().is_err());
    }

    #[test]
    fn w0_matches_explicit_compositions() {
        let a = p(7, "(1,2,3,4,5,6,7)");
        let b = p(7, "(1,5)(2,6,3)");
        let (ai, bi) = (a.inverse(), b.inverse());
        let explicit = [&ai, &b, &a, &bi, &ai, &bi, &a, &b]
            .iter()
            .fold(Perm::identity(7), |acc, g| acc.then(g));
        assert_eq!(Word::w0().evaluate(&a, &b).unwrap(), explicit);
    }

    #[test]
    fn w0_collapses_on_equal_arguments() {
        let a = p(8, "(1,4,2)(5,8)");
        assert!(Word::w0().evaluate(&a, &a).unwrap().is_identity());
        assert_eq!(Word::letter(Generator::Alpha, false).evaluate(&a, &Perm::identity(8)).unwrap(), a);
    }

    #[test]
    fn anchor_recipe_long_cycle() {
        let h = p(7, "(1,2,3,4,5,6,7)");
        let b = h.conjugate(&p(7, "(1,3,7)")).unwrap();
        let c = Word::w0().evaluate(&h, &b).unwrap();
        let cyc = c.cycle_structure().cycles.into_iter().find(|c| c.len() == 7).unwrap();
        assert_eq!(cyc, vec![1, 7, 5, 3, 6, 4, 2]);
    }

    #[test]
    fn power_paths_agree() {
        let a = p(9, "(1,2,3,4,5,6,7)");
        let b = p(9, "(2,8,9,4)(5,6)");
        let w = Word::w0();
        for k in [1, 2, 5, 60] {
            assert_eq!(w.pow(k).evaluate(&a, &b).unwrap(), w.evaluate_power(k as u64, &a, &b).unwrap());
        }
        assert_eq!(w.pow(60).len(), 480);
    }
}
