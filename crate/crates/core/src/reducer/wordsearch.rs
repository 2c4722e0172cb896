use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::ReduceError;
use crate::perm::{random_uniform, random_with_support, CycleMode, Generator, Letter, Word};
use crate::rng;

/// Cycles of at most this length count as short.
pub const SHORT_CYCLE: usize = 6;

/// Reduced words of length `len` whose letters alternate between α^{±1}
/// and β^{±1} and contain each of α, α⁻¹, β, β⁻¹ exactly `len/4` times.
pub fn balanced_alternating_words(len: usize) -> Vec<Word> {
    if len == 0 || len % 4 != 0 {
        return Vec::new();
    }
    let half = len / 2;
    let q = len / 4;
    // Sign patterns of one generator: `half` slots, `q` of them inverted.
    let patterns: Vec<Vec<bool>> = (0u32..1 << half)
        .filter(|m| m.count_ones() as usize == q)
        .map(|m| (0..half).map(|i| m >> i & 1 == 1).collect())
        .collect();
    let mut out = Vec::new();
    for first in [Generator::Alpha, Generator::Beta] {
        for pa in &patterns {
            for pb in &patterns {
                let letters = (0..len).map(|i| {
                    let (gen, inv) = if i % 2 == 0 { (first, pa[i / 2]) } else { (first.other(), pb[i / 2]) };
                    Letter::new(gen, inv)
                });
                out.push(Word::new(letters.collect()).expect("alternating words are reduced"));
            }
        }
    }
    out.sort_by_key(Word::to_string);
    out
}

/// The orbit of `w` under cyclic rotation, inversion, α↔β swap and the
/// sign flips α ↦ α⁻¹, β ↦ β⁻¹; all of these leave the law of the cycle
/// type of `w(a,b)` unchanged when `a`, `b` are independent and uniform on
/// one conjugacy class.
pub fn symmetry_class(w: &Word) -> BTreeSet<String> {
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut stack = vec![w.clone()];
    seen.insert(w.to_string());
    while let Some(x) = stack.pop() {
        let moves = [
            x.rotate(1),
            x.inverse(),
            x.swap_generators(),
            x.flip(Generator::Alpha),
            x.flip(Generator::Beta),
        ];
        for y in moves {
            if seen.insert(y.to_string()) {
                stack.push(y);
            }
        }
    }
    seen
}

/// Smallest spelling in the symmetry class.
pub fn canonical_representative(w: &Word) -> String {
    symmetry_class(w).into_iter().next().expect("class contains w")
}

#[derive(Debug, Clone, Serialize)]
pub struct WordScore {
    /// Smallest spelling in the class.
    pub word: String,
    pub length: usize,
    pub class_size: usize,
    /// Candidates from the input that fell in this class.
    pub members: Vec<String>,
    pub mean: f64,
    pub std_err: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WordSearchConfig {
    pub n: usize,
    pub delta: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Scores one representative per symmetry class of `candidates` on common
/// samples `(a, a^r)` with `a = random_with_support(n, round(δn), min 7)`
/// and `r` uniform. Returns the classes by decreasing mean.
pub fn score_words(candidates: &[Word], cfg: &WordSearchConfig) -> Result<Vec<WordScore>, ReduceError> {
    if cfg.samples == 0 {
        return Err(ReduceError::Parameter("samples must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&cfg.delta) {
        return Err(ReduceError::Parameter(format!("delta {} not in [0,1]", cfg.delta)));
    }
    let mut classes: BTreeMap<String, (Word, usize, Vec<String>)> = BTreeMap::new();
    for w in candidates {
        let class = symmetry_class(w);
        let rep = class.iter().next().expect("nonempty").clone();
        let entry = classes.entry(rep.clone()).or_insert_with(|| (rep.parse().expect("spelling parses"), class.len(), Vec::new()));
        let s = w.to_string();
        if !entry.2.contains(&s) {
            entry.2.push(s);
        }
    }
    let reps: Vec<&Word> = classes.values().map(|(w, _, _)| w).collect();
    let support = (cfg.delta * cfg.n as f64).round() as usize;
    let rows: Vec<Vec<usize>> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::child(cfg.seed, i);
            let a = random_with_support(cfg.n, support, CycleMode::MinCycleLen(7), &mut rng)?;
            let r = random_uniform(cfg.n, &mut rng);
            let b = a.conjugate(&r)?;
            reps.iter()
                .map(|w| Ok(w.evaluate(&a, &b)?.points_in_cycles_at_most(SHORT_CYCLE)))
                .collect::<Result<Vec<usize>, ReduceError>>()
        })
        .collect::<Result<_, ReduceError>>()?;
    let m = cfg.samples as f64;
    let mut scores: Vec<WordScore> = classes
        .into_iter()
        .enumerate()
        .map(|(j, (rep, (w, size, members)))| {
            let xs: Vec<f64> = rows.iter().map(|r| r[j] as f64).collect();
            let mean = xs.iter().sum::<f64>() / m;
            let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0) } else { 0.0 };
            WordScore { word: rep, length: w.len(), class_size: size, members, mean, std_err: (var / m).sqrt() }
        })
        .collect();
    scores.sort_by(|x, y| y.mean.total_cmp(&x.mean).then_with(|| x.word.cmp(&y.word)));
    Ok(scores)
}

/// Balanced alternating words of every length `4, 8, ..., max_len`, scored
/// by [`score_words`].
pub fn word_search(max_len: usize, cfg: &WordSearchConfig) -> Result<Vec<WordScore>, ReduceError> {
    if max_len > 20 || max_len < 4 || max_len % 4 != 0 {
        return Err(ReduceError::Parameter(format!("max_len {max_len} must be a multiple of 4 in 4..=20")));
    }
    let words: Vec<Word> = (1..=max_len / 4).flat_map(|q| balanced_alternating_words(4 * q)).collect();
    score_words(&words, cfg)
}

/// Gap between the top class and the runner-up, in units of
/// `sqrt(se₁² + se₂²)`.
pub fn top_margin(scores: &[WordScore]) -> Option<f64> {
    let (a, b) = (scores.first()?, scores.get(1)?);
    let se = (a.std_err.powi(2) + b.std_err.powi(2)).sqrt();
    Some(if se > 0.0 { (a.mean - b.mean) / se } else { f64::INFINITY })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_counts() {
        assert_eq!(balanced_alternating_words(4).len(), 8);
        assert_eq!(balanced_alternating_words(8).len(), 72);
        assert!(balanced_alternating_words(6).is_empty());
        let w8 = balanced_alternating_words(8);
        assert!(w8.contains(&Word::w0()));
    }

    #[test]
    fn classes_partition() {
        let w4 = balanced_alternating_words(4);
        let reps: BTreeSet<String> = w4.iter().map(canonical_representative).collect();
        assert_eq!(reps.len(), 1);
        let w8 = balanced_alternating_words(8);
        let reps8: BTreeSet<String> = w8.iter().map(canonical_representative).collect();
        let total: usize = reps8.iter().map(|r| symmetry_class(&r.parse().unwrap()).len()).sum();
        assert_eq!(total, 72);
        assert!(symmetry_class(&Word::w0()).contains(&Word::w0().rotate(2).to_string()));
    }

    #[test]
    fn zero_samples_rejected() {
        let cfg = WordSearchConfig { n: 50, delta: 0.6, samples: 0, seed: 1 };
        assert!(word_search(8, &cfg).is_err());
        let cfg = WordSearchConfig { samples: 5, ..cfg };
        assert!(word_search(6, &cfg).is_err());
        let s = word_search(8, &cfg).unwrap();
        assert!(s.windows(2).all(|w| w[0].mean >= w[1].mean));
    }
}
