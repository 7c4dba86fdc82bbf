//! Heuristic search for long colliding pairs by splicing pieces of a known
//! shorter collision.
//!
//! Every candidate is `u ++ v` where `u` is a non-empty prefix and `v` a
//! non-empty suffix of strings in the symmetry orbit of the seed pair, with
//! the splice point on a run boundary of the result (the last digit of `u`
//! differs from the first digit of `v`). The orbit strings themselves are
//! candidates too. The pool is closed under complement and reversal.
//! Candidates are grouped by length and weight, then refined level by level
//! by the fingerprints of their j-decks for `j = 2..=m_target`, and the
//! surviving groups are split into exactly equal `m_target`-decks.

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::{verify_pair, PairVerdict};
use crate::bits::BitString;
use crate::deck::{compute_deck, fingerprint_u64, Fingerprint, Sweep, Symmetry, FINGERPRINT_SEED};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct HuntConfig {
    /// Longest candidate string considered.
    pub length_cap: usize,
    pub workers: usize,
}

#[derive(Clone, Debug)]
pub struct HuntReport {
    /// Largest level below the target at which the seed pair collides.
    pub seed_level: usize,
    pub candidates: usize,
    /// Candidates still grouped with another candidate after each filter
    /// level, starting with the length/weight grouping.
    pub survivors: Vec<usize>,
    /// Verified colliding pairs, smaller member first, sorted.
    pub pairs: Vec<(BitString, BitString)>,
}

pub fn hunt_collisions(seed: (&BitString, &BitString), m_target: usize, cfg: &HuntConfig) -> Result<HuntReport> {
    let (a, b) = seed;
    if a.len() != b.len() || a == b || a.is_empty() {
        return Err(Error::domain("seed must be two distinct strings of equal, non-zero length"));
    }
    if m_target < 2 {
        return Err(Error::domain("target level must be at least 2"));
    }
    if !verify_pair(a, b, 1)?.is_collision() {
        return Err(Error::domain("seed pair does not collide"));
    }
    let mut seed_level = 1;
    while seed_level + 1 < m_target
        && seed_level < a.len()
        && verify_pair(a, b, seed_level + 1)?.is_collision()
    {
        seed_level += 1;
    }
    if cfg.workers == 0 {
        return Err(Error::domain("workers must be positive"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Resource(format!("cannot start worker pool: {e}")))?;

    let candidates = splice_candidates(a, b, m_target, cfg.length_cap);
    let total = candidates.len();

    let (survivors, groups) = pool.install(|| {
        let mut survivors = Vec::new();
        let mut keyed: Vec<((usize, usize), &BitString)> =
            candidates.iter().map(|x| ((x.len(), x.weight()), x)).collect();
        keyed.sort();
        let mut groups: Vec<Vec<&BitString>> = keyed
            .chunk_by(|p, q| p.0 == q.0)
            .filter(|g| g.len() > 1)
            .map(|g| g.iter().map(|p| p.1).collect())
            .collect();
        survivors.push(groups.iter().map(Vec::len).sum());
        for j in 2..=m_target {
            groups = groups.par_iter().flat_map_iter(|g| refine(g, j)).collect();
            groups.sort();
            survivors.push(groups.iter().map(Vec::len).sum());
        }
        (survivors, groups)
    });

    let mut pairs = Vec::new();
    for group in groups {
        let mut decks = group
            .iter()
            .map(|x| Ok((compute_deck(x, m_target)?, *x)))
            .collect::<Result<Vec<_>>>()?;
        decks.sort_by(|p, q| p.0.counts().cmp(q.0.counts()).then(p.1.cmp(q.1)));
        for same in decks.chunk_by(|p, q| p.0 == q.0) {
            for i in 0..same.len() {
                for j in i + 1..same.len() {
                    let (x, y) = (same[i].1, same[j].1);
                    let (x, y) = if x < y { (x, y) } else { (y, x) };
                    // self-check of the postcondition through the independent path
                    if verify_pair(x, y, m_target)? != PairVerdict::Collide {
                        return Err(Error::integrity(format!("hunted pair {x} / {y} failed verification")));
                    }
                    pairs.push((x.clone(), y.clone()));
                }
            }
        }
    }
    pairs.sort();
    pairs.dedup();
    Ok(HuntReport { seed_level, candidates: total, survivors, pairs })
}

fn splice_candidates(a: &BitString, b: &BitString, min_len: usize, cap: usize) -> Vec<BitString> {
    let pieces: BTreeSet<BitString> = Symmetry::ALL
        .iter()
        .flat_map(|g| [g.apply(a), g.apply(b)])
        .collect();
    let mut out: BTreeSet<BitString> = pieces.iter().filter(|p| p.len() >= min_len && p.len() <= cap).cloned().collect();
    for s1 in &pieces {
        for s2 in &pieces {
            for i in 1..=s1.len() {
                let last = s1.digits()[i - 1];
                for j in 0..s2.len() {
                    let len = i + s2.len() - j;
                    if len > cap || len < min_len || s2.digits()[j] == last {
                        continue;
                    }
                    out.insert(s1.slice(0..i).concat(&s2.slice(j..s2.len())));
                }
            }
        }
    }
    out.into_iter().collect()
}

fn refine<'a>(group: &[&'a BitString], j: usize) -> Vec<Vec<&'a BitString>> {
    let mut sweep = Sweep::new(j);
    let mut buf = Vec::new();
    let mut keyed: Vec<(Fingerprint, &BitString)> = group
        .iter()
        .map(|x| {
            let fp = if sweep.run(x.digits().iter().copied()) {
                fingerprint_u64(j, x.len(), sweep.deck(), FINGERPRINT_SEED, &mut buf)
            } else {
                compute_deck(x, j).expect("candidates are at least m_target long").fingerprint()
            };
            (fp, *x)
        })
        .collect();
    keyed.sort();
    keyed
        .chunk_by(|p, q| p.0 == q.0)
        .filter(|g| g.len() > 1)
        .map(|g| g.iter().map(|p| p.1).collect())
        .collect()
}
