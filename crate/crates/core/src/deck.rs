//! Exact m-decks: the number of times each `y ∈ {0,1}^m` occurs as a
//! (scattered) subsequence of a string `x`. Dividing by `C(n, m)` gives the
//! output distribution of the `(m, n)`-deletion channel on input `x`.
//!
//! Deck entries are indexed by `y` read as a big-endian numeral, so the
//! leftmost digit of `y` is the highest-order bit of the index.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_rational::Ratio;
use xxhash_rust::xxh3::xxh3_128_with_seed;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::exact::{binomial, ExactInt};

/// Seed of the default deck fingerprint (ASCII "kdeck" in the high bytes).
pub const FINGERPRINT_SEED: u64 = 0x6b64_6563_6b00_0001;

/// Largest `m` for which a deck (2^m entries) will be materialised.
pub const MAX_DECK_M: usize = 24;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Deck {
    m: usize,
    n: usize,
    counts: Vec<ExactInt>,
}

/// 128-bit deck digest. Equal decks always have equal fingerprints; the
/// converse is only probable and must be confirmed by comparing decks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint(pub u128);

impl std::fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:032x}", self.0)
    }
}

impl Deck {
    /// Builds a deck from raw counts, checking the length and the sum
    /// invariant `Σ counts = C(n, m)`.
    pub fn from_counts(m: usize, n: usize, counts: Vec<ExactInt>) -> Result<Deck> {
        if m > n {
            return Err(Error::domain(format!("m={m} exceeds n={n}")));
        }
        if m > MAX_DECK_M {
            return Err(Error::Resource(format!("m={m} exceeds the supported maximum {MAX_DECK_M}")));
        }
        if counts.len() != 1 << m {
            return Err(Error::integrity(format!("expected {} counts for m={m}, found {}", 1usize << m, counts.len())));
        }
        let sum: ExactInt = counts.iter().sum();
        let total = binomial(n as u64, m as u64);
        if sum != total {
            return Err(Error::integrity(format!("counts sum to {sum}, expected C({n},{m}) = {total}")));
        }
        Ok(Deck { m, n, counts })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[ExactInt] {
        &self.counts
    }

    /// Count of `y`, which must have length `m`.
    pub fn count(&self, y: &BitString) -> &ExactInt {
        assert_eq!(y.len(), self.m, "subsequence length must equal the deck order");
        &self.counts[index_of(y.digits())]
    }

    /// `C(n, m)`, the total of all counts.
    pub fn total(&self) -> ExactInt {
        binomial(self.n as u64, self.m as u64)
    }

    /// Iterates `(y, count)` in index order.
    pub fn entries(&self) -> impl Iterator<Item = (BitString, &ExactInt)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(move |(i, c)| (BitString::from_u64(i as u64, self.m), c))
    }

    /// The j-deck of the same source string, obtained by passing the
    /// m-deck through a second channel that keeps `j` of its `m` digits:
    /// `counts_j[y] = Σ_z counts_m[z] · occ(y, z) / C(n − j, m − j)`.
    pub fn marginalize(&self, j: usize) -> Result<Deck> {
        if j > self.m {
            return Err(Error::domain(format!("cannot marginalize an m={} deck to j={j}", self.m)));
        }
        if j == self.m {
            return Ok(self.clone());
        }
        let table = occurrence_table(j, self.m);
        let width = 1usize << j;
        let mut acc = vec![ExactInt::ZERO; width];
        for (z, cz) in self.counts.iter().enumerate() {
            if cz.is_zero() {
                continue;
            }
            let row = &table[z * width..(z + 1) * width];
            for (y, &occ) in row.iter().enumerate() {
                if occ != 0 {
                    acc[y] += &(cz * &ExactInt::from(occ));
                }
            }
        }
        let divisor = binomial((self.n - j) as u64, (self.m - j) as u64);
        let counts = acc
            .into_iter()
            .enumerate()
            .map(|(y, v)| {
                v.div_exact(&divisor).ok_or_else(|| {
                    Error::integrity(format!(
                        "marginal sum {v} for y={} is not divisible by C({},{}) = {divisor}",
                        BitString::from_u64(y as u64, j),
                        self.n - j,
                        self.m - j
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Deck::from_counts(j, self.n, counts)
    }

    /// Exact output distribution `P(m, x)` in index order.
    pub fn distribution(&self) -> Vec<(BitString, Ratio<BigUint>)> {
        let total = self.total().to_biguint();
        self.entries()
            .map(|(y, c)| (y, Ratio::new(c.to_biguint(), total.clone())))
            .collect()
    }

    /// Deck of the complemented and/or reversed source string, by index
    /// permutation: `deck(c(x))[y] = deck(x)[c(y)]`, `deck(r(x))[y] = deck(x)[r(y)]`.
    pub fn transform(&self, complement: bool, reverse: bool) -> Deck {
        if !complement && !reverse {
            return self.clone();
        }
        let perm = Symmetry { complement, reverse }.index_permutation(self.m);
        let counts = perm.iter().map(|&src| self.counts[src].clone()).collect();
        Deck { m: self.m, n: self.n, counts }
    }

    pub fn fingerprint(&self) -> Fingerprint {
        self.fingerprint_with_seed(FINGERPRINT_SEED)
    }

    /// xxh3-128 over the canonical serialisation: `m` as u32 LE, `n` as
    /// u64 LE, then each count as u64 LE, or for counts ≥ u64::MAX the
    /// marker `u64::MAX`, a u32 LE byte length and the LE magnitude.
    pub fn fingerprint_with_seed(&self, seed: u64) -> Fingerprint {
        let mut buf = Vec::with_capacity(12 + 8 * self.counts.len());
        write_header(&mut buf, self.m, self.n);
        for c in &self.counts {
            match c.to_u64() {
                Some(v) if v != u64::MAX => buf.extend_from_slice(&v.to_le_bytes()),
                _ => {
                    let bytes = c.to_biguint().to_bytes_le();
                    buf.extend_from_slice(&u64::MAX.to_le_bytes());
                    buf.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
                    buf.extend_from_slice(&bytes);
                }
            }
        }
        Fingerprint(xxh3_128_with_seed(&buf, seed))
    }

    /// Serialises to the deck text format (header plus one line per entry).
    pub fn to_text(&self) -> String {
        let mut out = format!("deck m={} n={}\n", self.m, self.n);
        for (y, c) in self.entries() {
            writeln!(out, "{y} {c}").unwrap();
        }
        out
    }

    /// Parses the deck text format. A trailing `sum=<s> binom=<b> ...`
    /// check line, as printed by the CLI, is accepted and validated.
    pub fn parse_text(text: &str) -> Result<Deck> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::parse("", "empty deck file"))?;
        let (m, n) = parse_header(header)?;
        if m > MAX_DECK_M {
            return Err(Error::Resource(format!("m={m} exceeds the supported maximum {MAX_DECK_M}")));
        }
        let mut counts = Vec::with_capacity(1 << m);
        let mut footer = None;
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            if line.starts_with("sum=") {
                footer = Some(line);
                continue;
            }
            if footer.is_some() {
                return Err(Error::parse(line, "deck entry after check line"));
            }
            let (y, c) = line
                .rsplit_once(' ')
                .ok_or_else(|| Error::parse(line, "expected `<y> <count>`"))?;
            let expected = BitString::from_u64(counts.len() as u64, m).to_string();
            if counts.len() >= 1 << m || y != expected {
                return Err(Error::parse(line, format!("expected entry for y={expected}")));
            }
            counts.push(c.parse::<ExactInt>()?);
        }
        let deck = Deck::from_counts(m, n, counts)?;
        if let Some(f) = footer {
            check_footer(f, &deck)?;
        }
        Ok(deck)
    }

    /// The `sum=<s> binom=<b> OK` line reporting the sum invariant.
    pub fn sum_check_line(&self) -> String {
        let sum: ExactInt = self.counts.iter().sum();
        let total = self.total();
        let status = if sum == total { "OK" } else { "MISMATCH" };
        format!("sum={sum} binom={total} {status}")
    }
}

impl std::fmt::Debug for Deck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Deck(m={}, n={}, {:?})", self.m, self.n, self.counts)
    }
}

fn parse_header(line: &str) -> Result<(usize, usize)> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some("deck") {
        return Err(Error::parse(line, "expected header `deck m=<m> n=<n>`"));
    }
    let m = parse_kv(parts.next(), "m", line)?;
    let n = parse_kv(parts.next(), "n", line)?;
    if parts.next().is_some() {
        return Err(Error::parse(line, "unexpected trailing fields in header"));
    }
    Ok((m, n))
}

pub(crate) fn parse_kv<T: std::str::FromStr>(field: Option<&str>, key: &str, line: &str) -> Result<T> {
    field
        .and_then(|f| f.strip_prefix(key))
        .and_then(|f| f.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::parse(line, format!("expected `{key}=<value>`")))
}

fn check_footer(line: &str, deck: &Deck) -> Result<()> {
    let mut parts = line.split_whitespace();
    let sum: ExactInt = parse_kv(parts.next(), "sum", line)?;
    let binom: ExactInt = parse_kv(parts.next(), "binom", line)?;
    let actual: ExactInt = deck.counts.iter().sum();
    if sum != actual || binom != deck.total() {
        return Err(Error::integrity(format!("check line `{line}` disagrees with the deck")));
    }
    Ok(())
}

fn write_header(buf: &mut Vec<u8>, m: usize, n: usize) {
    buf.extend_from_slice(&(m as u32).to_le_bytes());
    buf.extend_from_slice(&(n as u64).to_le_bytes());
}

/// Fingerprint of a deck held as plain `u64` counts; identical to
/// [`Deck::fingerprint_with_seed`] on the same deck.
pub(crate) fn fingerprint_u64(m: usize, n: usize, counts: &[u64], seed: u64, buf: &mut Vec<u8>) -> Fingerprint {
    buf.clear();
    write_header(buf, m, n);
    for &c in counts {
        // search decks are bounded by C(63, 31) < u64::MAX
        debug_assert!(c != u64::MAX);
        buf.extend_from_slice(&c.to_le_bytes());
    }
    Fingerprint(xxh3_128_with_seed(buf, seed))
}

pub(crate) fn index_of(digits: &[u8]) -> usize {
    digits.iter().fold(0usize, |acc, &d| (acc << 1) | d as usize)
}

/// One of the four string symmetries generated by complement and reversal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Symmetry {
    pub complement: bool,
    pub reverse: bool,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry { complement: false, reverse: false };
    pub const ALL: [Symmetry; 4] = [
        Symmetry { complement: false, reverse: false },
        Symmetry { complement: true, reverse: false },
        Symmetry { complement: false, reverse: true },
        Symmetry { complement: true, reverse: true },
    ];

    pub fn apply(&self, x: &BitString) -> BitString {
        let mut y = x.clone();
        if self.complement {
            y = y.complement();
        }
        if self.reverse {
            y = y.reversed();
        }
        y
    }

    /// Applies the symmetry to the `n`-bit big-endian numeral `x`.
    pub fn apply_u64(&self, x: u64, n: usize) -> u64 {
        let mut y = x;
        if self.complement {
            y ^= low_mask(n);
        }
        if self.reverse {
            y = reverse_bits(y, n);
        }
        y
    }

    /// `perm[y] = g(y)`, so that `deck(g·x)[y] = deck(x)[perm[y]]`.
    pub fn index_permutation(&self, m: usize) -> Vec<usize> {
        (0..1u64 << m).map(|y| self.apply_u64(y, m) as usize).collect()
    }
}

pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn reverse_bits(x: u64, n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        x.reverse_bits() >> (64 - n)
    }
}

/// Scratch state for the single-pass deck sweep. Holds the counts of every
/// subsequence of length `0..=m` of the prefix read so far in one flat array;
/// level `ℓ` occupies indices `2^ℓ - 1 .. 2^(ℓ+1) - 1`.
pub(crate) struct Sweep {
    m: usize,
    levels: Vec<u64>,
}

impl Sweep {
    pub(crate) fn new(m: usize) -> Self {
        Sweep { m, levels: vec![0; (1usize << (m + 1)) - 1] }
    }

    /// Runs the sweep over `digits`. Returns `false` if a count overflowed
    /// `u64`, in which case the buffer contents are meaningless.
    pub(crate) fn run<I: IntoIterator<Item = u8>>(&mut self, digits: I) -> bool {
        let m = self.m;
        self.levels.fill(0);
        self.levels[0] = 1;
        for (i, b) in digits.into_iter().enumerate() {
            let b = b as usize;
            let top = (i + 1).min(m);
            for l in (1..=top).rev() {
                let cur = (1usize << l) - 1;
                let prev = (1usize << (l - 1)) - 1;
                for v in 0..1usize << (l - 1) {
                    let add = self.levels[prev + v];
                    let slot = &mut self.levels[cur + ((v << 1) | b)];
                    match slot.checked_add(add) {
                        Some(s) => *slot = s,
                        None => return false,
                    }
                }
            }
        }
        true
    }

    /// Runs the sweep over the `n`-bit numeral `x`, most significant first.
    pub(crate) fn run_u64(&mut self, x: u64, n: usize) -> bool {
        self.run((0..n).map(|i| ((x >> (n - 1 - i)) & 1) as u8))
    }

    pub(crate) fn deck(&self) -> &[u64] {
        &self.levels[(1usize << self.m) - 1..]
    }
}

/// Same recurrence as [`Sweep`], in exact arithmetic.
fn sweep_exact(digits: &[u8], m: usize) -> Vec<ExactInt> {
    let mut levels = vec![ExactInt::ZERO; (1usize << (m + 1)) - 1];
    levels[0] = ExactInt::ONE;
    for (i, &b) in digits.iter().enumerate() {
        let b = b as usize;
        for l in (1..=(i + 1).min(m)).rev() {
            let cur = (1usize << l) - 1;
            let prev = (1usize << (l - 1)) - 1;
            for v in 0..1usize << (l - 1) {
                let add = levels[prev + v].clone();
                levels[cur + ((v << 1) | b)] += &add;
            }
        }
    }
    levels.split_off((1usize << m) - 1)
}

/// Computes the m-deck of `x` in one left-to-right sweep, `O(n · 2^m)`.
pub fn compute_deck(x: &BitString, m: usize) -> Result<Deck> {
    if m > x.len() {
        return Err(Error::domain("m exceeds string length"));
    }
    if m > MAX_DECK_M {
        return Err(Error::Resource(format!("m={m} exceeds the supported maximum {MAX_DECK_M}")));
    }
    let mut sweep = Sweep::new(m);
    let counts = if sweep.run(x.digits().iter().copied()) {
        sweep.deck().iter().map(|&c| ExactInt::from(c)).collect()
    } else {
        sweep_exact(x.digits(), m)
    };
    Deck::from_counts(m, x.len(), counts)
}

/// Number of index tuples `i_1 < … < i_|y|` with `x[i_1..] = y`.
pub fn occurrence_count(y: &BitString, x: &BitString) -> ExactInt {
    let (y, x) = (y.digits(), x.digits());
    if y.len() > x.len() {
        return ExactInt::ZERO;
    }
    // table[j] = occurrences of y[..j] in the prefix of x read so far
    let mut small = vec![0u64; y.len() + 1];
    small[0] = 1;
    let mut overflow = false;
    'outer: for &d in x {
        for j in (1..=y.len()).rev() {
            if y[j - 1] == d {
                match small[j].checked_add(small[j - 1]) {
                    Some(s) => small[j] = s,
                    None => {
                        overflow = true;
                        break 'outer;
                    }
                }
            }
        }
    }
    if !overflow {
        return ExactInt::from(small[y.len()]);
    }
    let mut table = vec![ExactInt::ZERO; y.len() + 1];
    table[0] = ExactInt::ONE;
    for &d in x {
        for j in (1..=y.len()).rev() {
            if y[j - 1] == d {
                let add = table[j - 1].clone();
                table[j] += &add;
            }
        }
    }
    table.pop().unwrap()
}

type TableCache = Mutex<HashMap<(usize, usize), Arc<Vec<u64>>>>;

/// Row-major `2^m × 2^j` table of `occ(y, z)` for `z ∈ {0,1}^m`,
/// `y ∈ {0,1}^j`. Small tables are cached per `(j, m)`.
fn occurrence_table(j: usize, m: usize) -> Arc<Vec<u64>> {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    let cacheable = j + m <= 20;
    if cacheable {
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().unwrap().get(&(j, m)) {
            return Arc::clone(t);
        }
    }
    let width = 1usize << j;
    let mut table = vec![0u64; width << m];
    let mut sweep = Sweep::new(j);
    for z in 0..1u64 << m {
        // entries are at most C(m, j), far below u64::MAX for m ≤ MAX_DECK_M
        let ok = sweep.run_u64(z, m);
        debug_assert!(ok);
        let start = z as usize * width;
        table[start..start + width].copy_from_slice(sweep.deck());
    }
    let table = Arc::new(table);
    if cacheable {
        CACHE
            .get_or_init(Default::default)
            .lock()
            .unwrap()
            .insert((j, m), Arc::clone(&table));
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn counts(d: &Deck) -> Vec<u64> {
        d.counts().iter().map(|c| c.to_u64().unwrap()).collect()
    }

    /// Enumerates every index subset; independent of the sweep.
    fn brute_deck(x: &BitString, m: usize) -> Vec<u64> {
        let n = x.len();
        let mut out = vec![0u64; 1 << m];
        for mask in 0u32..1 << n {
            if mask.count_ones() as usize != m {
                continue;
            }
            let y: Vec<u8> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| x.digits()[i]).collect();
            out[index_of(&y)] += 1;
        }
        out
    }

    #[test]
    fn occurrence_examples() {
        assert_eq!(occurrence_count(&bs("01"), &bs("0110")), 2u64);
        assert_eq!(occurrence_count(&BitString::empty(), &bs("0110")), 1u64);
        assert_eq!(occurrence_count(&BitString::empty(), &BitString::empty()), 1u64);
        assert_eq!(occurrence_count(&bs("01101"), &bs("0110")), 0u64);
    }

    #[test]
    fn deck_examples() {
        assert_eq!(counts(&compute_deck(&bs("0110"), 2).unwrap()), vec![1, 2, 2, 1]);
        assert_eq!(compute_deck(&bs("0110"), 2).unwrap(), compute_deck(&bs("1001"), 2).unwrap());
        assert_eq!(counts(&compute_deck(&bs("0"), 1).unwrap()), vec![1, 0]);
        assert!(matches!(compute_deck(&bs("01"), 3), Err(Error::Domain(_))));
    }

    #[test]
    fn sweep_matches_subset_enumeration() {
        for n in 0..=12 {
            for x in BitString::all_of_length(n) {
                for m in 0..=n.min(5) {
                    assert_eq!(counts(&compute_deck(&x, m).unwrap()), brute_deck(&x, m), "x={x} m={m}");
                }
            }
        }
    }

    #[test]
    fn sweep_matches_occurrence_count() {
        let x = bs("0110100110010110");
        let d = compute_deck(&x, 4).unwrap();
        for (y, c) in d.entries() {
            assert_eq!(c, &occurrence_count(&y, &x));
        }
    }

    #[test]
    fn marginalize_examples() {
        let d = compute_deck(&bs("0110"), 2).unwrap();
        assert_eq!(counts(&d.marginalize(1).unwrap()), vec![2, 2]);
        assert_eq!(d.marginalize(2).unwrap(), d);
        assert_eq!(counts(&d.marginalize(0).unwrap()), vec![1]);
        assert!(matches!(d.marginalize(3), Err(Error::Domain(_))));
    }

    #[test]
    fn marginalize_consistency() {
        for n in 0..=10 {
            for x in BitString::all_of_length(n) {
                for m in 0..=n.min(5) {
                    let d = compute_deck(&x, m).unwrap();
                    for j in 0..=m {
                        assert_eq!(d.marginalize(j).unwrap(), compute_deck(&x, j).unwrap(), "x={x} m={m} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn marginalize_composes() {
        let x = bs("011010011100101");
        let d = compute_deck(&x, 6).unwrap();
        for j in 0..=6 {
            let dj = d.marginalize(j).unwrap();
            for i in 0..=j {
                assert_eq!(dj.marginalize(i).unwrap(), d.marginalize(i).unwrap());
            }
        }
    }

    #[test]
    fn marginalize_rejects_corrupted_deck() {
        // sums to C(4,2)=6 but is not the deck of any string
        let fake = Deck::from_counts(2, 4, [1u64, 0, 0, 5].map(ExactInt::from).to_vec()).unwrap();
        assert!(matches!(fake.marginalize(1), Err(Error::Integrity(_))));
    }

    #[test]
    fn sum_invariant_enforced() {
        let bad = Deck::from_counts(2, 4, [1u64, 2, 2, 2].map(ExactInt::from).to_vec());
        assert!(matches!(bad, Err(Error::Integrity(_))));
    }

    #[test]
    fn distribution_examples() {
        let d = compute_deck(&bs("0110"), 2).unwrap();
        let p: Vec<_> = d.distribution().into_iter().map(|(_, r)| r).collect();
        let r = |a: u32, b: u32| Ratio::new(BigUint::from(a), BigUint::from(b));
        assert_eq!(p, vec![r(1, 6), r(1, 3), r(1, 3), r(1, 6)]);
        let total: Ratio<BigUint> = p.iter().cloned().sum();
        assert_eq!(total, r(1, 1));

        let p0: Vec<_> = compute_deck(&bs("0"), 1).unwrap().distribution().into_iter().map(|(_, r)| r).collect();
        assert_eq!(p0, vec![r(1, 1), r(0, 1)]);
        let pz: Vec<_> = compute_deck(&bs("0000"), 2).unwrap().distribution().into_iter().map(|(_, r)| r).collect();
        assert_eq!(pz, vec![r(1, 1), r(0, 1), r(0, 1), r(0, 1)]);
    }

    #[test]
    fn transform_examples() {
        let d = compute_deck(&bs("0110"), 2).unwrap();
        assert_eq!(d.transform(true, false), compute_deck(&bs("1001"), 2).unwrap());
        assert_eq!(d.transform(false, false), d);
        assert_eq!(compute_deck(&bs("01"), 1).unwrap().transform(false, true), compute_deck(&bs("10"), 1).unwrap());
    }

    #[test]
    fn transform_equivariance() {
        for n in 0..=10 {
            for x in BitString::all_of_length(n) {
                for m in 0..=n.min(4) {
                    let d = compute_deck(&x, m).unwrap();
                    for g in Symmetry::ALL {
                        assert_eq!(d.transform(g.complement, g.reverse), compute_deck(&g.apply(&x), m).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn fingerprint_examples() {
        let a = compute_deck(&bs("0110"), 2).unwrap();
        let b = compute_deck(&bs("1001"), 2).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint(), a.clone().fingerprint());
        let c = compute_deck(&bs("01"), 2).unwrap();
        let d = compute_deck(&bs("11"), 2).unwrap();
        assert_ne!(c, d);
        assert_ne!(c.fingerprint(), d.fingerprint());
        assert_ne!(a.fingerprint(), a.fingerprint_with_seed(7));
    }

    #[test]
    fn fast_fingerprint_agrees() {
        let x = bs("110100111000101");
        let d = compute_deck(&x, 5).unwrap();
        let raw = counts(&d);
        let mut buf = Vec::new();
        assert_eq!(fingerprint_u64(5, 15, &raw, FINGERPRINT_SEED, &mut buf), d.fingerprint());
    }

    #[test]
    fn text_round_trip() {
        let d = compute_deck(&bs("0110"), 2).unwrap();
        let text = d.to_text();
        assert_eq!(text, "deck m=2 n=4\n00 1\n01 2\n10 2\n11 1\n");
        assert_eq!(Deck::parse_text(&text).unwrap(), d);
        assert_eq!(Deck::parse_text(&text).unwrap().to_text(), text);
        let with_footer = format!("{text}{}\n", d.sum_check_line());
        assert_eq!(d.sum_check_line(), "sum=6 binom=6 OK");
        assert_eq!(Deck::parse_text(&with_footer).unwrap(), d);

        let d0 = compute_deck(&bs("01"), 0).unwrap();
        assert_eq!(Deck::parse_text(&d0.to_text()).unwrap(), d0);
    }

    #[test]
    fn text_errors() {
        assert!(Deck::parse_text("").is_err());
        assert!(matches!(Deck::parse_text("deck m=1 n=2\n1 1\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(Deck::parse_text("deck m=1 n=2\n0 1\n1 2\n"), Err(Error::Integrity(_))));
        assert!(matches!(Deck::parse_text("deck m=1 n=2\n0 1\n"), Err(Error::Integrity(_))));
        assert!(matches!(Deck::parse_text("deck m=1 n=2\n0 1\n1 1\nsum=3 binom=2 OK\n"), Err(Error::Integrity(_))));
    }

    #[test]
    fn exact_path_handles_large_counts() {
        // C(1100, 8) > u64::MAX forces the exact sweep
        let mut digits = vec![0; 1100];
        digits[7] = 1;
        let x = BitString::new(digits).unwrap();
        let d = compute_deck(&x, 8).unwrap();
        assert_eq!(d.counts()[0], binomial(1099, 8));
        assert!(d.counts()[0].to_u64().is_none());
        let y = bs("00000001");
        assert_eq!(d.count(&y), &occurrence_count(&y, &x));
        assert_eq!(d.marginalize(1).unwrap().counts()[1], 1u64);
    }
}
