//! Exhaustive search for m-deck collisions among all strings of length `n`.
//!
//! Strings are handled as `n`-bit big-endian numerals, so numeric order is
//! lexicographic order. The search never compares strings of different
//! weight (their 1-decks differ) and only enumerates weights `k ≤ n − k`:
//! complementation maps collisions of weight `k` onto collisions of weight
//! `n − k`. Inside a weight class one representative per symmetry orbit is
//! swept; the decks of the other orbit members are index permutations of it.
//! Decks are bucketed by a 128-bit fingerprint and every fingerprint match is
//! confirmed by recomputing and comparing the decks exactly.

use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use super::{verify_pair, CollisionReport, Outcome, SearchStats};
use crate::bits::BitString;
use crate::deck::{fingerprint_u64, Sweep, Symmetry, FINGERPRINT_SEED};
use crate::error::{Error, Result};
use crate::exact::binomial_u64;

/// Largest supported string length (numerals must fit in a `u64`, and every
/// intermediate sweep count is then at most `C(63, 31) < 2^63`).
pub const MAX_SEARCH_N: usize = 62;
pub const MAX_SEARCH_M: usize = 20;

/// Estimated peak bytes per stored fingerprint entry: 24 bytes for the entry
/// itself, doubled for the merge of per-worker buffers.
pub const BYTES_PER_ENTRY: u64 = 48;

const CHUNK: u64 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionScheme {
    /// One bucket per weight class.
    ByWeight,
    /// Weight classes further split by the count of `01` subsequences.
    ByWeightAndPairCounts,
}

impl FromStr for PartitionScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weight" => Ok(PartitionScheme::ByWeight),
            "weight-pairs" => Ok(PartitionScheme::ByWeightAndPairCounts),
            _ => Err(Error::parse(s, "partition must be `weight` or `weight-pairs`")),
        }
    }
}

impl std::fmt::Display for PartitionScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PartitionScheme::ByWeight => "weight",
            PartitionScheme::ByWeightAndPairCounts => "weight-pairs",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub workers: usize,
    pub partition: PartitionScheme,
    /// Each bucket is processed this many times, keeping a disjoint slice of
    /// the fingerprint space per pass.
    pub fingerprint_passes: usize,
    pub memory_budget: u64,
    pub fingerprint_seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            partition: PartitionScheme::ByWeight,
            fingerprint_passes: 1,
            memory_budget: 2 << 30,
            fingerprint_seed: FINGERPRINT_SEED,
        }
    }
}

impl SearchConfig {
    pub fn with_workers(workers: usize) -> Self {
        SearchConfig { workers, ..Default::default() }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Entry {
    hi: u64,
    lo: u64,
    x: u64,
}

struct Bucket {
    weight: usize,
    /// Admitted `01`-counts, `None` for the whole class.
    keys: Option<Vec<bool>>,
    size: u64,
}

struct Engine {
    m: usize,
    n: usize,
    passes: usize,
    seed: u64,
}

/// Decides whether every string of length `n` has a distinct m-deck.
///
/// On failure the witness is the colliding pair that is lexicographically
/// minimal (smaller member first, then larger member). The result does not
/// depend on `cfg.workers`, the partition scheme or the number of passes.
pub fn check_r(m: usize, n: usize, cfg: &SearchConfig) -> Result<CollisionReport> {
    if m == 0 || m > n {
        return Err(Error::domain(format!("search requires 1 <= m <= n, got m={m} n={n}")));
    }
    if n > MAX_SEARCH_N || m > MAX_SEARCH_M {
        return Err(Error::Resource(format!(
            "search supports n <= {MAX_SEARCH_N} and m <= {MAX_SEARCH_M}, got m={m} n={n}"
        )));
    }
    if cfg.workers == 0 || cfg.fingerprint_passes == 0 {
        return Err(Error::domain("workers and fingerprint passes must be positive"));
    }
    let start = Instant::now();
    let buckets = plan(n, cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Resource(format!("cannot start worker pool: {e}")))?;
    let engine = Engine { m, n, passes: cfg.fingerprint_passes, seed: cfg.fingerprint_seed };

    let mut stats = SearchStats::default();
    let mut best: Option<(u64, u64)> = None;
    pool.install(|| {
        for bucket in &buckets {
            for pass in 0..engine.passes {
                let groups = engine.process(bucket, pass, &mut stats);
                let mirrored = 2 * bucket.weight < n;
                for group in groups {
                    stats.confirmed_groups += 1;
                    best = min_pair(best, group[0], group[1]);
                    if mirrored {
                        stats.confirmed_groups += 1;
                        let mask = crate::deck::low_mask(n);
                        let mut comp: Vec<u64> = group.iter().map(|x| x ^ mask).collect();
                        comp.sort_unstable();
                        best = min_pair(best, comp[0], comp[1]);
                    }
                }
            }
        }
    });

    let witness = match best {
        None => None,
        Some((a, b)) => {
            let (a, b) = (BitString::from_u64(a, n), BitString::from_u64(b, n));
            if a.weight() != b.weight() || !verify_pair(&a, &b, m)?.is_collision() {
                return Err(Error::integrity(format!("search witness {a} / {b} failed exact verification")));
            }
            Some((a, b))
        }
    };
    Ok(CollisionReport {
        m,
        n,
        outcome: if witness.is_some() { Outcome::Fails } else { Outcome::Holds },
        witness,
        stats,
        elapsed: start.elapsed(),
    })
}

fn min_pair(best: Option<(u64, u64)>, a: u64, b: u64) -> Option<(u64, u64)> {
    debug_assert!(a < b);
    match best {
        Some(p) if p <= (a, b) => Some(p),
        _ => Some((a, b)),
    }
}

fn plan(n: usize, cfg: &SearchConfig) -> Result<Vec<Bucket>> {
    let passes = cfg.fingerprint_passes as u64;
    let cap = cfg.memory_budget / BYTES_PER_ENTRY;
    let fits = |size: u64| size.div_ceil(passes) <= cap;
    let mut buckets = Vec::new();
    for k in 0..=n / 2 {
        let size = binomial_u64(n as u64, k as u64).expect("C(62, k) fits in u64");
        match cfg.partition {
            PartitionScheme::ByWeight => {
                if !fits(size) {
                    let needed = (size * BYTES_PER_ENTRY).div_ceil(cfg.memory_budget.max(1));
                    return Err(Error::Resource(format!(
                        "weight class {k} of length {n} holds {size} strings (~{} bytes per pass), over the \
                         memory budget of {} bytes; use --partition weight-pairs or --passes {needed}",
                        size.div_ceil(passes) * BYTES_PER_ENTRY,
                        cfg.memory_budget
                    )));
                }
                buckets.push(Bucket { weight: k, keys: None, size });
            }
            PartitionScheme::ByWeightAndPairCounts => {
                let hist = pair_count_histogram(n, k);
                let top = hist.len() - 1;
                let mut keys = vec![false; hist.len()];
                let mut acc = 0u64;
                // keys c and top - c are swapped by reversal and complement,
                // so they always share a bucket
                for c in 0..=top / 2 {
                    let mut group = hist[c];
                    if top - c != c {
                        group += hist[top - c];
                    }
                    if !fits(group) {
                        let needed = (group * BYTES_PER_ENTRY).div_ceil(cfg.memory_budget.max(1));
                        return Err(Error::Resource(format!(
                            "pair-count group {c} of weight class {k} holds {group} strings, over the memory \
                             budget of {} bytes; use --passes {needed}",
                            cfg.memory_budget
                        )));
                    }
                    if acc > 0 && !fits(acc + group) {
                        buckets.push(Bucket { weight: k, keys: Some(std::mem::take(&mut keys)), size: acc });
                        keys = vec![false; hist.len()];
                        acc = 0;
                    }
                    keys[c] = true;
                    keys[top - c] = true;
                    acc += group;
                }
                if acc > 0 {
                    buckets.push(Bucket { weight: k, keys: Some(keys), size: acc });
                }
            }
        }
    }
    debug_assert_eq!(buckets.iter().map(|b| b.size).sum::<u64>(), (0..=n / 2).map(|k| binomial_u64(n as u64, k as u64).unwrap()).sum::<u64>());
    Ok(buckets)
}

/// Number of strings of length `n` and weight `k` with exactly `c`
/// subsequences `01`, for `c = 0..=k(n-k)`.
fn pair_count_histogram(n: usize, k: usize) -> Vec<u64> {
    // dp[ones][c] over prefixes of growing length
    let mut dp: Vec<Vec<u64>> = vec![vec![0; k * (n - k) + 1]; k + 1];
    dp[0][0] = 1;
    for len in 0..n {
        for ones in (0..=k.min(len + 1)).rev() {
            if ones == 0 {
                continue;
            }
            let zeros = len - (ones - 1);
            if zeros > n - k || ones - 1 > len {
                continue;
            }
            let (lo, hi) = dp.split_at_mut(ones);
            let src = &lo[ones - 1];
            let dst = &mut hi[0];
            for c in (0..src.len()).rev() {
                if src[c] != 0 && c + zeros < dst.len() {
                    dst[c + zeros] += src[c];
                }
            }
        }
    }
    dp.pop().unwrap()
}

/// Count of `01` subsequences of the `n`-bit numeral `x`.
fn pair_key(x: u64, n: usize) -> usize {
    let mut key = 0usize;
    let mut rest = x;
    while rest != 0 {
        let p = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let left = n - 1 - p;
        let ones_left = (x >> (p + 1)).count_ones() as usize;
        key += left - ones_left;
    }
    key
}

/// The `rank`-th smallest `n`-bit numeral with `k` ones.
pub(crate) fn unrank(mut rank: u64, n: usize, k: usize) -> u64 {
    let mut x = 0u64;
    let mut left = k;
    for p in (0..n).rev() {
        if left == 0 {
            break;
        }
        let below = binomial_u64(p as u64, left as u64).unwrap();
        if rank >= below {
            x |= 1 << p;
            rank -= below;
            left -= 1;
        }
    }
    x
}

/// Next larger numeral with the same number of ones (Gosper's hack).
pub(crate) fn next_combination(x: u64) -> u64 {
    let low = x & x.wrapping_neg();
    let ripple = x + low;
    (((ripple ^ x) >> 2) / low) | ripple
}

impl Engine {
    fn symmetries(&self, weight: usize) -> Vec<Symmetry> {
        if 2 * weight == self.n {
            Symmetry::ALL.to_vec()
        } else {
            vec![Symmetry::IDENTITY, Symmetry { complement: false, reverse: true }]
        }
    }

    /// Sweeps one (bucket, pass) unit and returns its confirmed collision
    /// groups, each sorted ascending.
    fn process(&self, bucket: &Bucket, pass: usize, stats: &mut SearchStats) -> Vec<Vec<u64>> {
        let (m, n, k) = (self.m, self.n, bucket.weight);
        let syms = self.symmetries(k);
        let perms: Vec<Vec<usize>> = syms.iter().map(|g| g.index_permutation(m)).collect();
        let total = binomial_u64(n as u64, k as u64).unwrap();
        let chunks = total.div_ceil(CHUNK);

        let parts: Vec<(Vec<Entry>, u64)> = (0..chunks)
            .into_par_iter()
            .map(|ci| {
                let first = ci * CHUNK;
                let len = CHUNK.min(total - first);
                let mut sweep = Sweep::new(m);
                let mut scratch = vec![0u64; 1 << m];
                let mut buf = Vec::with_capacity(12 + 8 * (1 << m));
                let mut out = Vec::new();
                let mut sweeps = 0u64;
                let mut x = unrank(first, n, k);
                for t in 0..len {
                    if t > 0 {
                        x = next_combination(x);
                    }
                    if let Some(keys) = &bucket.keys {
                        if !keys[pair_key(x, n)] {
                            continue;
                        }
                    }
                    let images: Vec<u64> = syms.iter().map(|g| g.apply_u64(x, n)).collect();
                    if images.iter().any(|&y| y < x) {
                        continue;
                    }
                    let ok = sweep.run_u64(x, n);
                    debug_assert!(ok, "sweep counts are bounded by C(62, 31)");
                    sweeps += 1;
                    for (i, &y) in images.iter().enumerate() {
                        if images[..i].contains(&y) {
                            continue;
                        }
                        for (dst, &src) in scratch.iter_mut().zip(&perms[i]) {
                            *dst = sweep.deck()[src];
                        }
                        let fp = fingerprint_u64(m, n, &scratch, self.seed, &mut buf).0;
                        let hi = (fp >> 64) as u64;
                        if (hi % self.passes as u64) as usize == pass {
                            out.push(Entry { hi, lo: fp as u64, x: y });
                        }
                    }
                }
                (out, sweeps)
            })
            .collect();

        let mut entries = Vec::with_capacity(parts.iter().map(|p| p.0.len()).sum());
        for (part, sweeps) in parts {
            entries.extend_from_slice(&part);
            stats.decks_computed += sweeps;
        }
        stats.strings_enumerated += total;
        stats.buckets += 1;
        entries.par_sort_unstable();

        let runs: Vec<&[Entry]> = entries
            .chunk_by(|a, b| a.hi == b.hi && a.lo == b.lo)
            .filter(|run| run.len() > 1)
            .collect();
        stats.candidate_matches += runs.iter().map(|r| r.len() as u64).sum::<u64>();
        stats.decks_computed += runs.iter().map(|r| r.len() as u64).sum::<u64>();
        let mut groups: Vec<Vec<u64>> = runs
            .par_iter()
            .flat_map_iter(|run| self.confirm(run))
            .collect();
        groups.sort_unstable();
        groups
    }

    /// Splits a fingerprint run into groups of exactly equal decks.
    fn confirm(&self, run: &[Entry]) -> Vec<Vec<u64>> {
        let mut sweep = Sweep::new(self.m);
        let mut decks: Vec<(Vec<u64>, u64)> = run
            .iter()
            .map(|e| {
                sweep.run_u64(e.x, self.n);
                (sweep.deck().to_vec(), e.x)
            })
            .collect();
        decks.sort_unstable();
        decks
            .chunk_by(|a, b| a.0 == b.0)
            .filter(|g| g.len() > 1)
            .map(|g| g.iter().map(|d| d.1).collect())
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct NmReport {
    pub m: usize,
    pub n_cap: usize,
    /// Largest `n ≤ n_cap` for which all m-decks of length-`n` strings are distinct.
    pub value: usize,
    /// True when no failure was found up to `n_cap`.
    pub capped: bool,
    pub reports: Vec<CollisionReport>,
}

/// Finds the largest `n ≤ n_cap` at which the m-deck still separates all
/// strings of length `n`, checking every length from `m` upward. A failure at
/// length `n` persists at every larger length (append the same digit to both
/// members of a colliding pair), so the scan stops at the first failure.
pub fn compute_n(m: usize, n_cap: usize, cfg: &SearchConfig) -> Result<NmReport> {
    if n_cap < m {
        return Err(Error::domain(format!("n cap {n_cap} is below m={m}")));
    }
    let mut reports = Vec::new();
    for n in m..=n_cap {
        let report = check_r(m, n, cfg)?;
        let failed = report.outcome == Outcome::Fails;
        reports.push(report);
        if failed {
            return Ok(NmReport { m, n_cap, value: n - 1, capped: false, reports });
        }
    }
    Ok(NmReport { m, n_cap, value: n_cap, capped: true, reports })
}
