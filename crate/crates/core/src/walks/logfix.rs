//! Natural logarithms in binary fixed point.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, Zero};

const PREC: usize = 256;

/// `2·atanh(p/q)` scaled by `2^PREC`, for `0 <= p/q <= 1/3`.
fn two_atanh(p: &BigInt, q: &BigInt) -> BigInt {
    let mut term = (p << PREC) / q;
    let q2 = q * q;
    let p2 = p * p;
    let mut sum = BigInt::zero();
    let mut i = 0u64;
    while !term.is_zero() {
        sum += &term / BigInt::from(2 * i + 1);
        term = term * &p2 / &q2;
        i += 1;
    }
    sum * 2
}

fn ln2() -> BigInt {
    two_atanh(&BigInt::from(1), &BigInt::from(3))
}

/// `ln m` for a positive integer.
fn ln_int(m: &BigUint) -> BigInt {
    let e = m.bits() - 1;
    let base = BigUint::from(1u32) << e;
    let p = BigInt::from_biguint(Sign::Plus, m - &base);
    let q = BigInt::from_biguint(Sign::Plus, m + &base);
    ln2() * BigInt::from(e) + two_atanh(&p, &q)
}

/// `ln x` for a positive finite double, using its exact binary value.
fn ln_f64(x: f64) -> BigInt {
    let bits = x.to_bits();
    let exponent = ((bits >> 52) & 0x7ff) as i64;
    let fraction = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if exponent == 0 { (fraction, -1074) } else { (fraction | (1 << 52), exponent - 1075) };
    ln_int(&BigUint::from(mant)) + ln2() * BigInt::from(exp)
}

/// `ln(n^k / eps)` in fixed point.
pub(super) fn ln_ratio_pow(n: u64, k: u32, eps: f64) -> BigInt {
    ln_int(&BigUint::from(n)) * BigInt::from(k) - ln_f64(eps)
}

/// `⌈a · x⌉` for a fixed-point `x >= 0`.
pub(super) fn ceil_mul(a: &BigUint, x: &BigInt) -> BigUint {
    assert!(!x.is_negative());
    let prod = BigInt::from_biguint(Sign::Plus, a.clone()) * x;
    let floor = &prod >> PREC;
    let exact = (&floor << PREC) == prod;
    let r = if exact { floor } else { floor + 1 };
    r.to_biguint().expect("nonnegative")
}
