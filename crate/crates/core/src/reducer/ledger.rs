use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize, Serializer};

/// One update of the word-length bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum LedgerOp {
    /// `a ↦ a^k`: the bound is multiplied by `k`.
    Power { exponent: u64 },
    /// `a ↦ w(a, a^r)` for a word with `letters` letters, half of them in
    /// the conjugate: `L ↦ letters·L + letters·walk` since each conjugate
    /// letter costs `L + 2·walk`.
    Assemble {
        letters: u64,
        #[serde(serialize_with = "as_decimal", deserialize_with = "from_decimal")]
        walk: BigUint,
    },
}

fn as_decimal<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}

fn from_decimal<'de, D: serde::Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}

impl LedgerOp {
    pub fn apply(&self, bound: &BigUint) -> BigUint {
        match self {
            LedgerOp::Power { exponent } => bound * *exponent,
            LedgerOp::Assemble { letters, walk } => bound * *letters + walk * *letters,
        }
    }
}

/// Bound on the length of the current element as a word in `S ∪ S⁻¹ ∪ {1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ledger {
    #[serde(serialize_with = "as_decimal")]
    pub length_bound: BigUint,
    pub history: Vec<LedgerOp>,
}

impl Default for Ledger {
    fn default() -> Self {
        Ledger { length_bound: BigUint::one(), history: Vec::new() }
    }
}

impl Ledger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, op: LedgerOp) {
        self.length_bound = op.apply(&self.length_bound);
        self.history.push(op);
    }

    /// Recomputes the bound from 1 through the history.
    pub fn replay(history: &[LedgerOp]) -> BigUint {
        history.iter().fold(BigUint::one(), |b, op| op.apply(&b))
    }

    pub fn replays(&self) -> bool {
        Ledger::replay(&self.history) == self.length_bound
    }

    /// `log_n` of the bound.
    pub fn exponent_in(&self, n: u64) -> f64 {
        let shift = self.length_bound.bits().saturating_sub(53);
        let top = (&self.length_bound >> shift).to_f64().unwrap_or(f64::INFINITY);
        (top.log2() + shift as f64) / (n as f64).log2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replay_matches() {
        let mut l = Ledger::new();
        l.push(LedgerOp::Power { exponent: 6 });
        l.push(LedgerOp::Assemble { letters: 480, walk: BigUint::from(100u32) });
        assert_eq!(l.length_bound, BigUint::from(480u32 * 6 + 48_000));
        assert!(l.replays());
        let json = serde_json::to_string(&l).unwrap();
        assert!(json.contains(r#""op":"assemble","letters":480,"walk":"100""#), "{json}");
        let back: Vec<LedgerOp> =
            serde_json::from_value(serde_json::to_value(&l).unwrap()["history"].clone()).unwrap();
        assert_eq!(Ledger::replay(&back), l.length_bound);
    }

    #[test]
    fn exponent_estimate() {
        let mut l = Ledger::new();
        l.push(LedgerOp::Power { exponent: 1 });
        let n = 490u64;
        l.length_bound = BigUint::from(n).pow(54);
        assert!((l.exponent_in(n) - 54.0).abs() < 1e-9);
    }
}
