//! Counting bounds on the longest message length an m-deck can separate.
//!
//! Every deck entry is an integer in `0..=C(n, m)`, so at most
//! `(C(n, m) + 1)^(2^m)` distinct decks exist; separating all `2^n` strings
//! needs `(C(n, m) + 1)^(2^m) >= 2^n`. The largest `n` satisfying this is an
//! upper bound, decided here in exact integer arithmetic.

use num_bigint::BigUint;
use num_traits::One;

use crate::exact::{binomial, ExactInt};

/// Values established by exhaustive search for `m = 1..=6`.
pub const KNOWN_N: [(usize, u64); 6] = [(1, 1), (2, 3), (3, 6), (4, 11), (5, 15), (6, 29)];

/// Upper bounds from published collisions (collision length minus one).
pub const REPORTED_CAPS: [(usize, u64); 2] = [(7, 53), (8, 105)];

/// Whether `(C(n, m) + 1)^(2^m) >= 2^n`, exactly.
pub fn pigeonhole_holds(n: u64, m: usize) -> bool {
    let base = &binomial(n, m as u64) + &ExactInt::ONE;
    let e = 1u64 << m;
    let bits = base.bits();
    // 2^(bits-1) <= base < 2^bits
    if e * (bits - 1) >= n {
        return true;
    }
    if e * bits <= n {
        return false;
    }
    let mut power: BigUint = base.to_biguint();
    for _ in 0..m {
        power = &power * &power;
    }
    power >= (BigUint::one() << n)
}

/// Length beyond which the left-hand side grows by less than one bit per
/// unit of `n`, so a failure there is permanent:
/// `2^m · log2((n+1)/(n+1-m)) < 1` once `n + 1 - m > m · 2^m / ln 2`.
fn scan_horizon(m: usize) -> u64 {
    // 10000/6931 > 1/ln 2
    let m = m as u64;
    m + (m << m) * 10_000 / 6_931 + 1
}

/// Largest `n >= m` for which `(C(n, m) + 1)^(2^m) >= 2^n`.
///
/// Panics if `m == 0` or if the inequality is found to hold again after
/// failing (it cannot, but the scan asserts it).
pub fn pigeonhole_max_n(m: usize) -> u64 {
    assert!(m >= 1, "pigeonhole bound needs m >= 1");
    assert!(m <= 20, "pigeonhole scan is limited to m <= 20");
    let horizon = scan_horizon(m);
    let mut last = None;
    let mut first_failure = None;
    let mut n = m as u64;
    loop {
        if pigeonhole_holds(n, m) {
            assert!(first_failure.is_none(), "inequality holds at n={n} after failing at {first_failure:?}");
            last = Some(n);
        } else {
            first_failure.get_or_insert(n);
            if n >= horizon {
                break;
            }
        }
        n += 1;
    }
    last.expect("the inequality holds at n = m")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub m: usize,
    pub pigeonhole_upper: u64,
    /// `2m - 1`, proven for `m >= 3`.
    pub linear_lower: Option<u64>,
    pub known: Option<u64>,
    pub reported_cap: Option<u64>,
    /// `lower <= known <= cap <= upper` for every defined pair.
    pub consistent: bool,
}

impl BoundReport {
    pub fn summary_line(&self) -> String {
        let opt = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
        let mut s = format!(
            "lower={} known={} pigeonhole_upper={}",
            opt(self.linear_lower),
            opt(self.known),
            self.pigeonhole_upper
        );
        if let Some(cap) = self.reported_cap {
            s.push_str(&format!(" reported_cap={cap}"));
        }
        s
    }
}

pub fn bound_report(m: usize) -> BoundReport {
    let upper = pigeonhole_max_n(m);
    let lower = (m >= 3).then(|| 2 * m as u64 - 1);
    let known = KNOWN_N.iter().find(|e| e.0 == m).map(|e| e.1);
    let cap = REPORTED_CAPS.iter().find(|e| e.0 == m).map(|e| e.1);
    let chain: Vec<u64> = [lower, known, cap, Some(upper)].into_iter().flatten().collect();
    let consistent = chain.windows(2).all(|w| w[0] <= w[1]);
    BoundReport { m, pigeonhole_upper: upper, linear_lower: lower, known, reported_cap: cap, consistent }
}
