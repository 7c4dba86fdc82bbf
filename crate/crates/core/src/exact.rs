//! Exact non-negative integers with a `u64` fast path.
//!
//! Every value that fits in a `u64` is stored inline; anything larger lives
//! in a `BigUint`. Arithmetic on the inline form is checked and escalates to
//! the big form on overflow, so results are never truncated.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(u64),
    // invariant: value > u64::MAX
    Big(BigUint),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactInt(Repr);

impl ExactInt {
    pub const ZERO: ExactInt = ExactInt(Repr::Small(0));
    pub const ONE: ExactInt = ExactInt(Repr::Small(1));

    fn from_big(b: BigUint) -> Self {
        match b.to_u64() {
            Some(v) => ExactInt(Repr::Small(v)),
            None => ExactInt(Repr::Big(b)),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0))
    }

    /// The value as a `u64`, if it fits.
    pub fn to_u64(&self) -> Option<u64> {
        match &self.0 {
            Repr::Small(v) => Some(*v),
            Repr::Big(_) => None,
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        match &self.0 {
            Repr::Small(v) => BigUint::from(*v),
            Repr::Big(b) => b.clone(),
        }
    }

    /// Nearest `f64`; may lose precision for values above 2^53.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(v) => *v as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::INFINITY),
        }
    }

    /// Natural logarithm, `-inf` for zero.
    pub fn ln(&self) -> f64 {
        match &self.0 {
            Repr::Small(0) => f64::NEG_INFINITY,
            Repr::Small(v) => (*v as f64).ln(),
            Repr::Big(b) => {
                // keep the top 64 bits and account for the dropped ones
                let bits = b.bits();
                let shift = bits.saturating_sub(64);
                let top = (b >> shift).to_f64().unwrap_or(f64::MAX);
                top.ln() + shift as f64 * std::f64::consts::LN_2
            }
        }
    }

    /// Number of significant bits (0 for zero).
    pub fn bits(&self) -> u64 {
        match &self.0 {
            Repr::Small(v) => 64 - v.leading_zeros() as u64,
            Repr::Big(b) => b.bits(),
        }
    }

    /// Division that must leave no remainder. Returns `None` when the
    /// divisor is zero or the division is inexact.
    pub fn div_exact(&self, divisor: &ExactInt) -> Option<ExactInt> {
        match (&self.0, &divisor.0) {
            (_, Repr::Small(0)) => None,
            (Repr::Small(a), Repr::Small(b)) => (a % b == 0).then(|| ExactInt(Repr::Small(a / b))),
            _ => {
                let a = self.to_biguint();
                let b = divisor.to_biguint();
                let r = &a % &b;
                r.is_zero().then(|| ExactInt::from_big(a / b))
            }
        }
    }

    pub fn checked_sub(&self, rhs: &ExactInt) -> Option<ExactInt> {
        match (&self.0, &rhs.0) {
            (Repr::Small(a), Repr::Small(b)) => a.checked_sub(*b).map(|v| ExactInt(Repr::Small(v))),
            _ => {
                let (a, b) = (self.to_biguint(), rhs.to_biguint());
                (a >= b).then(|| ExactInt::from_big(a - b))
            }
        }
    }

    pub fn pow(&self, exp: u32) -> ExactInt {
        match &self.0 {
            Repr::Small(v) => match v.checked_pow(exp) {
                Some(p) => ExactInt(Repr::Small(p)),
                None => ExactInt::from_big(BigUint::from(*v).pow(exp)),
            },
            Repr::Big(b) => ExactInt::from_big(b.pow(exp)),
        }
    }
}

impl Default for ExactInt {
    fn default() -> Self {
        ExactInt::ZERO
    }
}

impl From<u64> for ExactInt {
    fn from(v: u64) -> Self {
        ExactInt(Repr::Small(v))
    }
}

impl From<u32> for ExactInt {
    fn from(v: u32) -> Self {
        ExactInt(Repr::Small(v as u64))
    }
}

impl From<usize> for ExactInt {
    fn from(v: usize) -> Self {
        ExactInt(Repr::Small(v as u64))
    }
}

impl From<u128> for ExactInt {
    fn from(v: u128) -> Self {
        match u64::try_from(v) {
            Ok(s) => ExactInt(Repr::Small(s)),
            Err(_) => ExactInt(Repr::Big(BigUint::from(v))),
        }
    }
}

impl From<BigUint> for ExactInt {
    fn from(b: BigUint) -> Self {
        ExactInt::from_big(b)
    }
}

impl PartialEq<u64> for ExactInt {
    fn eq(&self, other: &u64) -> bool {
        matches!(self.0, Repr::Small(v) if v == *other)
    }
}

impl Ord for ExactInt {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            (Repr::Small(_), Repr::Big(_)) => Ordering::Less,
            (Repr::Big(_), Repr::Small(_)) => Ordering::Greater,
            (Repr::Big(a), Repr::Big(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ExactInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl AddAssign<&ExactInt> for ExactInt {
    fn add_assign(&mut self, rhs: &ExactInt) {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(s) = a.checked_add(*b) {
                self.0 = Repr::Small(s);
                return;
            }
        }
        let sum = self.to_biguint() + rhs.to_biguint();
        *self = ExactInt::from_big(sum);
    }
}

impl Add<&ExactInt> for &ExactInt {
    type Output = ExactInt;

    fn add(self, rhs: &ExactInt) -> ExactInt {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Mul<&ExactInt> for &ExactInt {
    type Output = ExactInt;

    fn mul(self, rhs: &ExactInt) -> ExactInt {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(p) = a.checked_mul(*b) {
                return ExactInt(Repr::Small(p));
            }
        }
        ExactInt::from_big(self.to_biguint() * rhs.to_biguint())
    }
}

impl std::iter::Sum for ExactInt {
    fn sum<I: Iterator<Item = ExactInt>>(iter: I) -> Self {
        let mut acc = ExactInt::ZERO;
        for v in iter {
            acc += &v;
        }
        acc
    }
}

impl<'a> std::iter::Sum<&'a ExactInt> for ExactInt {
    fn sum<I: Iterator<Item = &'a ExactInt>>(iter: I) -> Self {
        let mut acc = ExactInt::ZERO;
        for v in iter {
            acc += v;
        }
        acc
    }
}

impl fmt::Display for ExactInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(v) => write!(f, "{v}"),
            Repr::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for ExactInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(s, "expected a non-negative decimal integer"));
        }
        match s.parse::<u64>() {
            Ok(v) => Ok(ExactInt(Repr::Small(v))),
            Err(_) => BigUint::from_str(s)
                .map(ExactInt::from_big)
                .map_err(|e| Error::parse(s, e.to_string())),
        }
    }
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
///
/// Uses the multiplicative formula in `u128` while it fits and finishes in
/// `BigUint` otherwise. Each partial product `C(n, i)` is itself an integer
/// so every intermediate division is exact.
pub fn binomial(n: u64, k: u64) -> ExactInt {
    if k > n {
        return ExactInt::ZERO;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    let mut i = 0u64;
    while i < k {
        match acc.checked_mul((n - i) as u128) {
            Some(p) => {
                acc = p / (i as u128 + 1);
                i += 1;
            }
            None => break,
        }
    }
    if i == k {
        return ExactInt::from(acc);
    }
    let mut big = BigUint::from(acc);
    while i < k {
        big = big * BigUint::from(n - i) / BigUint::from(i + 1);
        i += 1;
    }
    ExactInt::from_big(big)
}

/// `C(n, k)` as a `u64`, or `None` if it does not fit.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    binomial(n, k).to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal_row(n: usize) -> Vec<BigUint> {
        let mut row = vec![BigUint::from(1u32)];
        for _ in 0..n {
            let mut next = vec![BigUint::from(1u32); row.len() + 1];
            for k in 1..row.len() {
                next[k] = &row[k - 1] + &row[k];
            }
            row = next;
        }
        row
    }

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(4, 2), 6u64);
        assert_eq!(binomial(0, 0), 1u64);
        assert_eq!(binomial(3, 5), 0u64);
        assert_eq!(binomial(30, 6), 593_775u64);
    }

    #[test]
    fn binomial_106_8_matches_pascal() {
        let row = pascal_row(106);
        assert_eq!(binomial(106, 8).to_biguint(), row[8]);
        assert_eq!(binomial(106, 8), 301_579_589_025u64);
    }

    #[test]
    fn pascal_rule_exhaustive() {
        for n in 1..=120u64 {
            for k in 1..=n {
                let lhs = binomial(n, k);
                let rhs = &binomial(n - 1, k - 1) + &binomial(n - 1, k);
                assert_eq!(lhs, rhs, "C({n},{k})");
            }
        }
    }

    #[test]
    fn row_sums_are_powers_of_two() {
        for n in 0..=60u64 {
            let s: ExactInt = (0..=n).map(|k| binomial(n, k)).sum();
            assert_eq!(s.to_biguint(), BigUint::from(1u32) << n);
        }
    }

    #[test]
    fn big_escalation() {
        // exceeds u128
        let row = pascal_row(200);
        assert_eq!(binomial(200, 100).to_biguint(), row[100]);
        let max = ExactInt::from(u64::MAX);
        let s = &max + &ExactInt::ONE;
        assert_eq!(s.to_u64(), None);
        assert_eq!(s.to_biguint(), BigUint::from(u64::MAX) + 1u32);
        assert_eq!(s.checked_sub(&ExactInt::ONE), Some(max.clone()));
        assert_eq!((&max * &max).to_biguint(), BigUint::from(u64::MAX) * BigUint::from(u64::MAX));
    }

    #[test]
    fn exact_division() {
        assert_eq!(ExactInt::from(6u64).div_exact(&ExactInt::from(3u64)), Some(ExactInt::from(2u64)));
        assert_eq!(ExactInt::from(7u64).div_exact(&ExactInt::from(3u64)), None);
        assert_eq!(ExactInt::from(7u64).div_exact(&ExactInt::ZERO), None);
    }

    #[test]
    fn ln_of_big_values() {
        let big = binomial(300, 150);
        let direct = big.to_f64().ln();
        assert!((big.ln() - direct).abs() < 1e-9);
        assert_eq!(ExactInt::ZERO.ln(), f64::NEG_INFINITY);
    }

    #[test]
    fn parse_and_display() {
        let s = "123456789012345678901234567890";
        let v: ExactInt = s.parse().unwrap();
        assert_eq!(v.to_string(), s);
        assert!("12a".parse::<ExactInt>().is_err());
        assert!("".parse::<ExactInt>().is_err());
    }
}
