//! Polynomials in `δ` and `1 - δ` with exact rational coefficients, the
//! reference fixed-point polynomials, and the contraction dynamics.

mod dynamics;
mod reference;

pub use dynamics::{iterate_map, monotone_scan, sign_changes, solve_threshold, solve_threshold_in, SignChange};
pub use reference::{reference_polys, ReferencePolys};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abgraph::CatalogEntry;
use crate::treenum::TreeRecord;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("no contraction-to-expansion crossing of s*poly(δ) = 1-δ on the scan grid")]
    NoCrossing,
    #[error("{0} contraction-to-expansion crossings; the root is not unique")]
    MultipleCrossings(usize),
    #[error("iterate {step} left [0,1]: {value}")]
    LeftUnitInterval { step: usize, value: f64 },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("coefficient at ({p},{l}) does not fit in 64 bits")]
    Overflow { p: usize, l: usize },
}

/// `Σ c_{p,l} δ^p (1-δ)^l` with nonzero exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DeltaPoly {
    terms: BTreeMap<(usize, usize), BigRational>,
}

impl DeltaPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// From integer-coefficient `(p, l, c)` triples.
    pub fn from_ints(terms: &[(usize, usize, i64)]) -> Self {
        let mut out = Self::zero();
        for &(p, l, c) in terms {
            out.add_term(p, l, BigRational::from_integer(c.into()));
        }
        out
    }

    pub fn add_term(&mut self, p: usize, l: usize, c: BigRational) {
        let slot = self.terms.entry((p, l)).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(p, l));
        }
    }

    pub fn coeff(&self, p: usize, l: usize) -> BigRational {
        self.terms.get(&(p, l)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, delta: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(p, l), c)| c.to_f64().unwrap_or(f64::NAN) * delta.powi(p as i32) * (1.0 - delta).powi(l as i32))
            .sum()
    }

    pub fn scaled(&self, s: &BigRational) -> DeltaPoly {
        let mut out = DeltaPoly::zero();
        for (&(p, l), c) in &self.terms {
            out.add_term(p, l, c * s);
        }
        out
    }

    pub fn sub(&self, other: &DeltaPoly) -> DeltaPoly {
        let mut out = self.clone();
        for (&(p, l), c) in &other.terms {
            out.add_term(p, l, -c.clone());
        }
        out
    }

    /// Splits `self - other` into its positive part (surplus) and the
    /// negated negative part (deficit).
    pub fn diff(&self, other: &DeltaPoly) -> (DeltaPoly, DeltaPoly) {
        let d = self.sub(other);
        let mut surplus = DeltaPoly::zero();
        let mut deficit = DeltaPoly::zero();
        for (&(p, l), c) in &d.terms {
            if c.is_positive() {
                surplus.add_term(p, l, c.clone());
            } else {
                deficit.add_term(p, l, -c.clone());
            }
        }
        (surplus, deficit)
    }

    /// True when every coefficient of `other` is at most the matching one here.
    pub fn dominates(&self, other: &DeltaPoly) -> bool {
        self.diff(other).1.is_zero()
    }

    /// Coefficients in the power basis `Σ a_k δ^k`, for comparing two
    /// representations of the same function.
    pub fn monomial_coeffs(&self) -> Vec<BigRational> {
        let deg = self.terms.keys().map(|&(p, l)| p + l).max().unwrap_or(0);
        let mut out = vec![BigRational::zero(); deg + 1];
        for (&(p, l), c) in &self.terms {
            let mut binom = BigInt::one();
            for j in 0..=l {
                let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                out[p + j] += c * BigRational::from_integer(&binom * sign);
                binom = binom * BigInt::from(l - j) / BigInt::from(j + 1);
            }
        }
        while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        out
    }

    pub fn to_json(&self) -> Result<serde_json::Value, SpectrumError> {
        let mut terms = Vec::new();
        for (&(p, l), c) in &self.terms {
            let num = c.numer().to_i64().ok_or(SpectrumError::Overflow { p, l })?;
            let den = c.denom().to_i64().ok_or(SpectrumError::Overflow { p, l })?;
            terms.push(TermJson { p, l, num, den });
        }
        Ok(serde_json::to_value(PolyJson { terms }).expect("plain struct"))
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, SpectrumError> {
        let parsed: PolyJson =
            serde_json::from_value(v.clone()).map_err(|e| SpectrumError::Argument(e.to_string()))?;
        let mut out = DeltaPoly::zero();
        for t in parsed.terms {
            if t.den == 0 {
                return Err(SpectrumError::Argument(format!("zero denominator at ({},{})", t.p, t.l)));
            }
            out.add_term(t.p, t.l, BigRational::new(t.num.into(), t.den.into()));
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    p: usize,
    l: usize,
    num: i64,
    den: i64,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    terms: Vec<TermJson>,
}

impl fmt::Display for DeltaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&(p, l), c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            if !c.is_one() || (p == 0 && l == 0) {
                factors.push(c.to_string());
            }
            match p {
                0 => {}
                1 => factors.push("d".into()),
                _ => factors.push(format!("d^{p}")),
            }
            match l {
                0 => {}
                1 => factors.push("(1-d)".into()),
                _ => factors.push(format!("(1-d)^{l}")),
            }
            f.write_str(&factors.join(" "))?;
        }
        Ok(())
    }
}

/// [`aggregate_poly`] over catalog entries read back from JSON.
pub fn aggregate_entries(entries: &[CatalogEntry]) -> DeltaPoly {
    let mut out = DeltaPoly::zero();
    for e in entries {
        out.add_term(e.p, e.l, BigRational::new(BigInt::from(e.fixed.len()), BigInt::from(e.aut)));
    }
    out
}

/// `Σ_T δ_T · fixed(T) / |Aut(T)|` over a catalog.
pub fn aggregate_poly(catalog: &[TreeRecord]) -> DeltaPoly {
    let mut out = DeltaPoly::zero();
    for r in catalog {
        let s = &r.stats;
        let w = BigRational::new(BigInt::from(s.fixed_count), BigInt::from(s.aut_order));
        out.add_term(s.p_total(), s.l_total(), w);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_order() {
        let mut p = DeltaPoly::from_ints(&[(3, 2, 2), (0, 2, 1)]);
        p.add_term(2, 2, BigRational::new(1.into(), 2.into()));
        let v = p.to_json().unwrap();
        assert_eq!(
            v.to_string(),
            r#"{"terms":[{"p":0,"l":2,"num":1,"den":1},{"p":2,"l":2,"num":1,"den":2},{"p":3,"l":2,"num":2,"den":1}]}"#
        );
        assert_eq!(DeltaPoly::from_json(&v).unwrap(), p);
    }

    #[test]
    fn zero_coefficients_vanish() {
        let mut p = DeltaPoly::from_ints(&[(1, 1, 3)]);
        p.add_term(1, 1, BigRational::from_integer((-3).into()));
        assert!(p.is_zero());
        assert!(aggregate_poly(&[]).is_zero());
    }

    #[test]
    fn monomial_expansion() {
        // δ(1-δ)^2 = δ - 2δ^2 + δ^3
        let p = DeltaPoly::from_ints(&[(1, 2, 1)]);
        let ints: Vec<i64> = p.monomial_coeffs().iter().map(|c| c.to_integer().try_into().unwrap()).collect();
        assert_eq!(ints, vec![0, 1, -2, 1]);
        // (1-δ) + δ = 1
        let one = DeltaPoly::from_ints(&[(0, 1, 1), (1, 0, 1)]);
        assert_eq!(one.monomial_coeffs(), vec![BigRational::one()]);
    }

    #[test]
    fn display() {
        assert_eq!(DeltaPoly::from_ints(&[(0, 2, 1), (3, 2, 2)]).to_string(), "(1-d)^2 + 2 d^3 (1-d)^2");
    }
}
