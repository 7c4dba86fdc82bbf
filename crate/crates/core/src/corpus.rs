//! The bundled corpus of known colliding pairs, one per deck order `m = 1..=8`.

use crate::bits::{parse_rle, BitString};
use crate::deck::parse_kv;
use crate::error::{Error, Result};

pub const PAPER_PAIRS: &str = include_str!("../data/paper_pairs.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusPair {
    pub m: usize,
    pub n: usize,
    pub a: BitString,
    pub b: BitString,
}

/// Parses corpus text. Blank lines and `#` comments are skipped; a declared
/// length that disagrees with either expanded string is an integrity error.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusPair>> {
    let mut pairs = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('|');
        let (Some(head), Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next(), fields.next()) else {
            return Err(Error::parse(line, "expected `m=<m> n=<n> | <a> | <b>`"));
        };
        let mut head = head.split_whitespace();
        let m: usize = parse_kv(head.next(), "m", line)?;
        let n: usize = parse_kv(head.next(), "n", line)?;
        let a = parse_rle(a)?;
        let b = parse_rle(b)?;
        if a.len() != n || b.len() != n {
            return Err(Error::integrity(format!(
                "pair for m={m} declares n={n} but expands to lengths {} and {}",
                a.len(),
                b.len()
            )));
        }
        pairs.push(CorpusPair { m, n, a, b });
    }
    if pairs.is_empty() {
        return Err(Error::integrity("corpus contains no pairs"));
    }
    Ok(pairs)
}

/// The bundled pairs.
pub fn paper_pairs() -> Vec<CorpusPair> {
    parse_corpus(PAPER_PAIRS).expect("bundled corpus is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_corpus_shape() {
        let pairs = paper_pairs();
        let shape: Vec<(usize, usize)> = pairs.iter().map(|p| (p.m, p.n)).collect();
        assert_eq!(shape, vec![(1, 2), (2, 4), (3, 7), (4, 12), (5, 16), (6, 30), (7, 54), (8, 106)]);
        assert_eq!(pairs[0].a.to_string(), "01");
        assert_eq!(pairs[1].b.to_string(), "1001");
    }

    #[test]
    fn corrupted_corpus_is_rejected() {
        assert!(matches!(parse_corpus("m=1 n=3 | 1_0 1_1 | 1_1 1_0"), Err(Error::Integrity(_))));
        assert!(matches!(parse_corpus("m=1 n=2 | 1_0 1_1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_corpus("m=1 n=2 | 1_0 1_x | 1_1 1_0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_corpus("# nothing\n"), Err(Error::Integrity(_))));
    }
}
