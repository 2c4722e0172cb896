use std::fmt;

use rand::seq::{index, SliceRandom};
use rand::Rng;

use super::{Perm, PermError};

/// Cycle-length restriction on the support of a sampled permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleMode {
    /// Every non-trivial cycle has length at least `m`.
    MinCycleLen(usize),
    /// Every non-trivial cycle has length exactly `N`.
    AllCyclesLen(usize),
}

impl fmt::Display for CycleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleMode::MinCycleLen(m) => write!(f, "min cycle length {m}"),
            CycleMode::AllCyclesLen(k) => write!(f, "all cycles of length {k}"),
        }
    }
}

pub fn random_uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Perm {
    let mut images: Vec<u32> = (0..n as u32).collect();
    images.shuffle(rng);
    Perm::from_images0_unchecked(images)
}

/// Samples a cycle type uniformly among the partitions of `s` allowed by
/// `mode`, then a uniform permutation of `{1..n}` with that type.
pub fn random_with_support<R: Rng + ?Sized>(
    n: usize,
    s: usize,
    mode: CycleMode,
    rng: &mut R,
) -> Result<Perm, PermError> {
    let infeasible = || PermError::Infeasible { n, support: s, mode: mode.to_string() };
    if s > n || n == 0 {
        return Err(infeasible());
    }
    let parts = match mode {
        CycleMode::AllCyclesLen(k) => {
            if k < 2 || s % k != 0 {
                return Err(infeasible());
            }
            vec![k; s / k]
        }
        CycleMode::MinCycleLen(m) => {
            let m = m.max(2);
            if s != 0 && s < m {
                return Err(infeasible());
            }
            PartitionSampler::new(s, m).sample(rng)
        }
    };
    let mut pts: Vec<u32> = index::sample(rng, n, s).into_iter().map(|i| i as u32).collect();
    pts.shuffle(rng);
    let mut images: Vec<u32> = (0..n as u32).collect();
    let mut off = 0;
    for len in parts {
        let cyc = &pts[off..off + len];
        for i in 0..len {
            images[cyc[i] as usize] = cyc[(i + 1) % len];
        }
        off += len;
    }
    Ok(Perm::from_images0_unchecked(images))
}

/// Uniform sampler for partitions of `total` into parts `>= min_part`,
/// using the divisor-sum recurrence `n p(n) = sum_{d, j} d p(n - j d)`.
/// Counts are kept as `p(n) e^{-c n}` so they stay within `f64` range.
struct PartitionSampler {
    min_part: usize,
    scale: f64,
    counts: Vec<f64>,
}

impl PartitionSampler {
    fn new(total: usize, min_part: usize) -> Self {
        let scale = if total == 0 {
            0.0
        } else {
            std::f64::consts::PI * (2.0 / (3.0 * total as f64)).sqrt()
        };
        let mut counts = vec![0.0; total + 1];
        counts[0] = 1.0;
        for d in min_part..=total {
            let w = (-scale * d as f64).exp();
            for k in d..=total {
                counts[k] += counts[k - d] * w;
            }
        }
        PartitionSampler { min_part, scale, counts }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut parts = Vec::new();
        let mut rem = self.counts.len() - 1;
        while rem > 0 {
            let mut choices = Vec::new();
            let mut total = 0.0;
            for d in self.min_part..=rem {
                let mut j = 1;
                while j * d <= rem {
                    let w = d as f64 * self.counts[rem - j * d] * (-self.scale * (j * d) as f64).exp();
                    if w > 0.0 {
                        total += w;
                        choices.push((total, j, d));
                    }
                    j += 1;
                }
            }
            let u = rng.random::<f64>() * total;
            let &(_, j, d) = choices
                .iter()
                .find(|c| c.0 > u)
                .unwrap_or_else(|| choices.last().expect("feasible remainder has a move"));
            parts.extend(std::iter::repeat_n(d, j));
            rem -= j * d;
        }
        parts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    #[test]
    fn identity_when_support_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for mode in [CycleMode::MinCycleLen(7), CycleMode::AllCyclesLen(3)] {
            assert!(random_with_support(10, 0, mode, &mut rng).unwrap().is_identity());
        }
    }

    #[test]
    fn forced_and_min_modes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_with_support(14, 14, CycleMode::AllCyclesLen(7), &mut rng).unwrap();
        assert_eq!(a.cycle_type(), vec![7, 7]);
        for _ in 0..50 {
            let a = random_with_support(100, 63, CycleMode::MinCycleLen(7), &mut rng).unwrap();
            assert_eq!(a.support_size(), 63);
            assert!(a.cycle_type().iter().all(|&l| l == 1 || l >= 7));
        }
        assert!(random_with_support(10, 9, CycleMode::AllCyclesLen(2), &mut rng).is_err());
        assert!(random_with_support(10, 5, CycleMode::MinCycleLen(7), &mut rng).is_err());
        assert!(random_with_support(10, 11, CycleMode::MinCycleLen(2), &mut rng).is_err());
    }

    #[test]
    fn partition_distribution_is_uniform() {
        // partitions of 12 into parts >= 3: 12, 9+3, 8+4, 7+5, 6+6, 6+3+3, 5+4+3, 4+4+4, 3+3+3+3
        let sampler = PartitionSampler::new(12, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut freq: HashMap<Vec<usize>, usize> = HashMap::new();
        let draws = 45_000;
        for _ in 0..draws {
            let mut p = sampler.sample(&mut rng);
            p.sort_unstable();
            *freq.entry(p).or_default() += 1;
        }
        assert_eq!(freq.len(), 9);
        for (p, c) in freq {
            let f = c as f64 / draws as f64;
            assert!((f - 1.0 / 9.0).abs() < 0.01, "{p:?} {f}");
        }
    }
}
