//! Recovering a string from its deck.
//!
//! For `n = 2m - 1` the m-deck determines `x`: the number of ones `k` is read
//! off the 1-deck, one of `k` and `n - k` is below `m` (complement the deck
//! if needed), and in the `(k+1)`-deck the count of `1^j 0 1^(k-j)` is the
//! length of the j-th run of zeros, because every such occurrence uses all
//! `k` ones and one zero from that run.

use rayon::prelude::*;

use crate::bits::BitString;
use crate::collision::search::{next_combination, unrank};
use crate::deck::{compute_deck, Deck, Sweep};
use crate::error::{Error, Result};
use crate::exact::binomial_u64;

/// Enumeration guard for [`invert_deck_bruteforce`].
pub const MAX_BRUTEFORCE_N: usize = 24;

/// A string with `k` ones written as `0^{i0} 1 0^{i1} 1 … 1 0^{ik}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunProfile {
    pub k: usize,
    pub zero_runs: Vec<usize>,
    /// Whether the profile describes the complement of the deck's source.
    pub complemented: bool,
}

impl RunProfile {
    pub fn len(&self) -> usize {
        self.k + self.zero_runs.iter().sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Expands the profile; the complement flag is not applied.
    pub fn expand(&self) -> BitString {
        let mut digits = Vec::with_capacity(self.len());
        for (j, &run) in self.zero_runs.iter().enumerate() {
            if j > 0 {
                digits.push(1);
            }
            digits.extend(std::iter::repeat_n(0, run));
        }
        BitString::new(digits).expect("binary digits")
    }
}

/// Number of ones in the deck's source string, via its 1-deck.
pub fn count_ones_from_deck(d: &Deck) -> Result<usize> {
    if d.m() == 0 {
        return Err(Error::domain("the number of ones is not visible in a 0-deck"));
    }
    // marginalize divides Σ_z counts[z]·ones(z) = k·C(n-1, m-1) exactly
    let ones = d.marginalize(1)?;
    let k = ones.counts()[1]
        .to_u64()
        .ok_or_else(|| Error::integrity("number of ones exceeds the string length"))?;
    Ok(k as usize)
}

/// Reads the run profile of the deck's source (or of its complement, when
/// the source has at least `m` ones).
pub fn run_profile(d: &Deck) -> Result<RunProfile> {
    let (m, n) = (d.m(), d.n());
    if m < 3 || n != 2 * m - 1 {
        return Err(Error::domain(format!("run reconstruction needs m >= 3 and n = 2m - 1, got m={m} n={n}")));
    }
    let k = count_ones_from_deck(d)?;
    let (deck, k, complemented) = if k >= m { (d.transform(true, false), n - k, true) } else { (d.clone(), k, false) };
    if k == 0 {
        return Ok(RunProfile { k: 0, zero_runs: vec![n], complemented });
    }
    let level = deck.marginalize(k + 1)?;
    let mut zero_runs = Vec::with_capacity(k + 1);
    for j in 0..=k {
        // 1^j 0 1^(k-j) as a (k+1)-bit numeral
        let ones_after = (1usize << (k - j)) - 1;
        let ones_before = ((1usize << j) - 1) << (k - j + 1);
        let run = level.counts()[ones_before | ones_after]
            .to_u64()
            .ok_or_else(|| Error::integrity("run length does not fit the string"))?;
        zero_runs.push(run as usize);
    }
    let profile = RunProfile { k, zero_runs, complemented };
    if profile.len() != n {
        return Err(Error::integrity(format!(
            "run lengths {:?} with {k} ones do not add up to n={n}; deck is not realizable",
            profile.zero_runs
        )));
    }
    Ok(profile)
}

/// Rebuilds `x` from its m-deck when `|x| = 2m - 1` and `m >= 3`.
pub fn reconstruct_runs(d: &Deck) -> Result<BitString> {
    let profile = run_profile(d)?;
    let mut x = profile.expand();
    if profile.complemented {
        x = x.complement();
    }
    if &compute_deck(&x, d.m())? != d {
        return Err(Error::integrity(format!("reconstructed {x} does not reproduce the deck; deck is not realizable")));
    }
    Ok(x)
}

/// Every string whose m-deck equals `d`, in lexicographic order.
pub fn invert_deck_bruteforce(d: &Deck) -> Result<Vec<BitString>> {
    let (m, n) = (d.m(), d.n());
    if n > MAX_BRUTEFORCE_N {
        return Err(Error::Resource(format!("brute-force inversion is limited to n <= {MAX_BRUTEFORCE_N}, got {n}")));
    }
    let target: Option<Vec<u64>> = d.counts().iter().map(|c| c.to_u64()).collect();
    let target = target.ok_or_else(|| Error::integrity("deck counts exceed any length-24 string"))?;
    let k = if m == 0 {
        None
    } else {
        match count_ones_from_deck(d) {
            Ok(k) if k <= n => Some(k),
            _ => return Ok(Vec::new()),
        }
    };
    let weights: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (0..=n).collect(),
    };
    let mut found: Vec<u64> = Vec::new();
    for w in weights {
        let total = binomial_u64(n as u64, w as u64).unwrap();
        const CHUNK: u64 = 1 << 12;
        let part: Vec<u64> = (0..total.div_ceil(CHUNK))
            .into_par_iter()
            .flat_map_iter(|ci| {
                let first = ci * CHUNK;
                let mut sweep = Sweep::new(m);
                let mut x = unrank(first, n, w);
                let mut hits = Vec::new();
                for t in 0..CHUNK.min(total - first) {
                    if t > 0 {
                        x = next_combination(x);
                    }
                    sweep.run_u64(x, n);
                    if sweep.deck() == target.as_slice() {
                        hits.push(x);
                    }
                }
                hits
            })
            .collect();
        found.extend(part);
    }
    found.sort_unstable();
    Ok(found.into_iter().map(|x| BitString::from_u64(x, n)).collect())
}
