//! Lazy random walks on the graphs of ordered `k`-tuples of distinct points.

mod exact;
mod logfix;

pub use exact::{exact_walk_distribution, exact_walk_matrix, TupleSpace};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use thiserror::Error;

use crate::perm::{Perm, PermError};

/// Longest walk executed step by step.
pub const MAX_EXECUTED_LENGTH: u64 = 1 << 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("walk needs at least one generator")]
    NoGenerators,
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("tuple arity {k} invalid for n={n}")]
    Arity { n: usize, k: usize },
    #[error("length {0} is too long to execute; use mixing_length for the symbolic bound")]
    TooLong(u64),
    #[error("state space of {0} tuples is too large to materialize")]
    StateSpace(u128),
    #[error("invalid start tuple: {0}")]
    Start(String),
    #[error("invalid anchor: {0}")]
    Anchor(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

#[derive(Debug, Clone)]
pub struct WalkSpec {
    gens: Vec<Perm>,
    /// `S ∪ S⁻¹` without repeats, in first-seen order.
    moves: Vec<Perm>,
    pub k: usize,
    pub length: u64,
}

impl WalkSpec {
    pub fn new(gens: Vec<Perm>, k: usize, length: u64) -> Result<Self, WalkError> {
        let first = gens.first().ok_or(WalkError::NoGenerators)?;
        let n = first.n();
        for g in &gens {
            if g.n() != n {
                return Err(PermError::DomainMismatch { left: n, right: g.n() }.into());
            }
        }
        if k == 0 || k > n {
            return Err(WalkError::Arity { n, k });
        }
        let mut moves: Vec<Perm> = Vec::new();
        for g in gens.iter().flat_map(|g| [g.clone(), g.inverse()]) {
            if !moves.contains(&g) {
                moves.push(g);
            }
        }
        Ok(WalkSpec { gens, moves, k, length })
    }

    pub fn n(&self) -> usize {
        self.gens[0].n()
    }

    pub fn gens(&self) -> &[Perm] {
        &self.gens
    }

    /// `S ∪ S⁻¹` as a set.
    pub fn moves(&self) -> &[Perm] {
        &self.moves
    }
}

/// `⌈2 n^{2k+1} ln(n^k / ε)⌉`, with the logarithm in 256-bit fixed point.
pub fn mixing_length(n: u64, k: u32, eps: f64) -> Result<BigUint, WalkError> {
    if n < 2 || k == 0 || k as u64 >= n || !(eps > 0.0 && eps < 1.0) {
        return Err(WalkError::Parameter(format!("need n >= 2, 1 <= k < n, 0 < eps < 1; got ({n}, {k}, {eps})")));
    }
    let log = logfix::ln_ratio_pow(n, k, eps);
    let power = BigUint::from(n).pow(2 * k + 1);
    Ok(logfix::ceil_mul(&(power * 2u32), &log))
}

/// One lazy step: `None` to stay, `Some(i)` to apply `moves()[i]`.
pub fn lazy_steps<R: Rng + ?Sized>(spec: &WalkSpec, rng: &mut R) -> Result<Vec<Option<usize>>, WalkError> {
    if spec.length > MAX_EXECUTED_LENGTH {
        return Err(WalkError::TooLong(spec.length));
    }
    let d = spec.moves.len();
    Ok((0..spec.length)
        .map(|_| if rng.random::<bool>() { Some(rng.random_range(0..d)) } else { None })
        .collect())
}

/// Realizes `r = Π_{i∈J} g_i` for a lazy walk of `spec.length` steps:
/// `|J| ~ Bin(length, 1/2)` and the `g_i` are uniform on `S ∪ S⁻¹`.
/// Returns `r` and `|J|`.
pub fn realize_lazy_walk<R: Rng + ?Sized>(spec: &WalkSpec, rng: &mut R) -> Result<(Perm, u64), WalkError> {
    if spec.length > MAX_EXECUTED_LENGTH {
        return Err(WalkError::TooLong(spec.length));
    }
    let moves = Binomial::new(spec.length, 0.5).expect("p = 1/2 is valid").sample(rng);
    let d = spec.moves.len();
    let n = spec.n();
    let mut images: Vec<u32> = (0..n as u32).collect();
    for _ in 0..moves {
        let g = &spec.moves[rng.random_range(0..d)];
        for x in images.iter_mut() {
            *x = g.apply0(*x as usize) as u32;
        }
    }
    Ok((Perm::from_images0_unchecked(images), moves))
}

/// Product of the chosen moves of a step sequence.
pub fn product_of_steps(spec: &WalkSpec, steps: &[Option<usize>]) -> Perm {
    steps
        .iter()
        .flatten()
        .fold(Perm::identity(spec.n()), |acc, &i| acc.then(&spec.moves[i]))
}

/// Moves a 1-based tuple along a step sequence.
pub fn walk_tuple(spec: &WalkSpec, steps: &[Option<usize>], tuple: &[u32]) -> Vec<u32> {
    let mut t = tuple.to_vec();
    for &i in steps.iter().flatten() {
        for x in t.iter_mut() {
            *x = spec.moves[i].image(*x);
        }
    }
    t
}

/// Points `Λ` together with a permutation `g` of them, given as the image
/// of each listed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anchor {
    points: Vec<u32>,
    images: Vec<u32>,
}

impl Anchor {
    pub fn new(points: Vec<u32>, images: Vec<u32>) -> Result<Self, WalkError> {
        if points.len() != images.len() {
            return Err(WalkError::Anchor("points and images differ in length".into()));
        }
        let mut a = points.clone();
        a.sort_unstable();
        if a.windows(2).any(|w| w[0] == w[1]) {
            return Err(WalkError::Anchor("repeated point".into()));
        }
        let mut b = images.clone();
        b.sort_unstable();
        if a != b {
            return Err(WalkError::Anchor("g does not permute the anchor points".into()));
        }
        Ok(Anchor { points, images })
    }

    /// Restriction of `g` to `points`; `g` must leave the set invariant.
    pub fn from_perm(points: Vec<u32>, g: &Perm) -> Result<Self, WalkError> {
        let images = points.iter().map(|&x| g.image(x)).collect();
        Anchor::new(points, images)
    }

    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `g` as a permutation of `{1..n}` fixing everything off the anchor.
    pub fn to_perm(&self, n: usize) -> Result<Perm, WalkError> {
        let mut images: Vec<u32> = (1..=n as u32).collect();
        for (&x, &y) in self.points.iter().zip(&self.images) {
            if x as usize > n || x == 0 {
                return Err(WalkError::Anchor(format!("point {x} outside 1..={n}")));
            }
            images[x as usize - 1] = y;
        }
        Ok(Perm::from_images(&images)?)
    }
}

/// Uniform `r ∈ Sym(n)` subject to `r|_Λ = g`.
pub fn sample_conditioned<R: Rng + ?Sized>(n: usize, anchor: &Anchor, rng: &mut R) -> Result<Perm, WalkError> {
    let mut images = vec![u32::MAX; n];
    let mut on_anchor = vec![false; n];
    for (&x, &y) in anchor.points.iter().zip(&anchor.images) {
        if x == 0 || x as usize > n {
            return Err(WalkError::Anchor(format!("point {x} outside 1..={n}")));
        }
        images[x as usize - 1] = y - 1;
        on_anchor[x as usize - 1] = true;
    }
    let rest: Vec<u32> = (0..n as u32).filter(|&i| !on_anchor[i as usize]).collect();
    let mut targets = rest.clone();
    targets.shuffle(rng);
    for (&x, &y) in rest.iter().zip(&targets) {
        images[x as usize] = y;
    }
    Ok(Perm::from_images0(images)?)
}
