//! Deck collisions: verifying candidate pairs, deciding whether all strings
//! of length `n` have distinct m-decks, and hunting for longer collisions.

mod hunt;
pub(crate) mod search;

use std::fmt;
use std::time::Duration;

pub use hunt::{hunt_collisions, HuntConfig, HuntReport};
pub use search::{check_r, compute_n, NmReport, PartitionScheme, SearchConfig};

use crate::bits::BitString;
use crate::deck::compute_deck;
use crate::error::{Error, Result};
use crate::exact::ExactInt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairVerdict {
    Collide,
    /// The lexicographically smallest `y` whose counts differ.
    Distinct { y: BitString, count_a: ExactInt, count_b: ExactInt },
}

impl PairVerdict {
    pub fn is_collision(&self) -> bool {
        matches!(self, PairVerdict::Collide)
    }
}

impl fmt::Display for PairVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairVerdict::Collide => f.write_str("Collide"),
            PairVerdict::Distinct { y, count_a, count_b } => {
                write!(f, "Distinct y={y} counts {count_a} vs {count_b}")
            }
        }
    }
}

/// Compares the m-decks of two equal-length strings exactly.
pub fn verify_pair(a: &BitString, b: &BitString, m: usize) -> Result<PairVerdict> {
    if a.len() != b.len() {
        return Err(Error::domain(format!("length mismatch: {} vs {}", a.len(), b.len())));
    }
    if m > a.len() {
        return Err(Error::domain("m exceeds string length"));
    }
    let da = compute_deck(a, m)?;
    let db = compute_deck(b, m)?;
    // index order is lexicographic order on y
    let first = da.counts().iter().zip(db.counts()).position(|(x, y)| x != y);
    Ok(match first {
        None => PairVerdict::Collide,
        Some(i) => PairVerdict::Distinct {
            y: BitString::from_u64(i as u64, m),
            count_a: da.counts()[i].clone(),
            count_b: db.counts()[i].clone(),
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Holds => "holds",
            Outcome::Fails => "fails",
        })
    }
}

/// Work counters of a search. All fields are independent of the worker count.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Strings visited by the enumerator, summed over buckets and passes.
    pub strings_enumerated: u64,
    /// Deck sweeps, including the ones spent confirming candidates.
    pub decks_computed: u64,
    /// Strings that shared a fingerprint with at least one other string.
    pub candidate_matches: u64,
    /// Groups of two or more strings with identical decks.
    pub confirmed_groups: u64,
    /// Number of (bucket, pass) units processed.
    pub buckets: u64,
}

#[derive(Clone, Debug)]
pub struct CollisionReport {
    pub m: usize,
    pub n: usize,
    pub outcome: Outcome,
    /// Lexicographically minimal colliding pair, smaller member first.
    pub witness: Option<(BitString, BitString)>,
    pub stats: SearchStats,
    pub elapsed: Duration,
}

impl CollisionReport {
    /// `key=value` lines describing the report; wall time is excluded so the
    /// output is reproducible.
    pub fn summary_lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("m={}", self.m),
            format!("n={}", self.n),
            format!("outcome={}", self.outcome),
        ];
        if let Some((a, b)) = &self.witness {
            out.push(format!("witness_a={a}"));
            out.push(format!("witness_b={b}"));
        }
        let s = &self.stats;
        out.push(format!("strings_enumerated={}", s.strings_enumerated));
        out.push(format!("decks_computed={}", s.decks_computed));
        out.push(format!("candidate_matches={}", s.candidate_matches));
        out.push(format!("confirmed_groups={}", s.confirmed_groups));
        out.push(format!("buckets={}", s.buckets));
        out
    }
}
