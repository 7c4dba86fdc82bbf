//! Binary strings and the run-length notation `a_b` ("a copies of b").

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A finite sequence of binary digits, stored one digit per byte.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if let Some(pos) = digits.iter().position(|&d| d > 1) {
            return Err(Error::domain(format!("digit {} at position {pos} is not binary", digits[pos])));
        }
        Ok(BitString(digits))
    }

    pub fn empty() -> Self {
        BitString(Vec::new())
    }

    /// The `n`-digit string whose big-endian numeral is `value`
    /// (first digit = bit `n - 1`).
    pub fn from_u64(value: u64, n: usize) -> Self {
        assert!(n <= 64, "from_u64 supports at most 64 digits");
        BitString((0..n).map(|i| ((value >> (n - 1 - i)) & 1) as u8).collect())
    }

    /// Big-endian numeral of the string, `None` above 64 digits.
    pub fn to_u64(&self) -> Option<u64> {
        if self.0.len() > 64 {
            return None;
        }
        Some(self.0.iter().fold(0u64, |acc, &d| (acc << 1) | d as u64))
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&d| d == 1).count()
    }

    pub fn complement(&self) -> Self {
        BitString(self.0.iter().map(|d| d ^ 1).collect())
    }

    pub fn reversed(&self) -> Self {
        BitString(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &BitString) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        BitString(v)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        BitString(self.0[range].to_vec())
    }

    /// Maximal runs as `(count, digit)` pairs.
    pub fn runs(&self) -> Vec<(usize, u8)> {
        let mut runs: Vec<(usize, u8)> = Vec::new();
        for &d in &self.0 {
            match runs.last_mut() {
                Some((c, last)) if *last == d => *c += 1,
                _ => runs.push((1, d)),
            }
        }
        runs
    }

    /// Every string of length `n`, in lexicographic order.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = BitString> {
        assert!(n < 64, "enumeration limited to fewer than 64 digits");
        (0..1u64 << n).map(move |v| BitString::from_u64(v, n))
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Plain `0`/`1` string; see [`parse_rle`] for the notation-aware parser.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut digits = Vec::with_capacity(s.len());
        for (i, c) in s.char_indices() {
            match c {
                '0' => digits.push(0),
                '1' => digits.push(1),
                _ => return Err(Error::parse(s, format!("character `{c}` at offset {i} is not a binary digit"))),
            }
        }
        Ok(BitString(digits))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.0 {
            f.write_str(if d == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// A string in run-length form. Parsed runs keep the order they were written
/// in; [`RunLengthString::canonical`] merges adjacent runs of the same digit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunLengthString {
    runs: Vec<(usize, u8)>,
}

impl RunLengthString {
    pub fn parse(text: &str) -> Result<Self> {
        let mut runs = Vec::new();
        for token in text.split_whitespace() {
            let (count, digit) = token
                .split_once('_')
                .ok_or_else(|| Error::parse(token, "expected `<count>_<digit>`"))?;
            let count: usize = count
                .parse()
                .map_err(|_| Error::parse(token, "count is not a decimal integer"))?;
            if count == 0 {
                return Err(Error::parse(token, "count must be at least 1"));
            }
            let digit = match digit {
                "0" => 0,
                "1" => 1,
                _ => return Err(Error::parse(token, "digit must be 0 or 1")),
            };
            runs.push((count, digit));
        }
        if runs.is_empty() {
            return Err(Error::parse(text, "empty input"));
        }
        Ok(RunLengthString { runs })
    }

    pub fn runs(&self) -> &[(usize, u8)] {
        &self.runs
    }

    pub fn canonical(&self) -> Self {
        let mut runs: Vec<(usize, u8)> = Vec::with_capacity(self.runs.len());
        for &(c, d) in &self.runs {
            match runs.last_mut() {
                Some((lc, ld)) if *ld == d => *lc += c,
                _ => runs.push((c, d)),
            }
        }
        RunLengthString { runs }
    }

    pub fn expand(&self) -> BitString {
        let total = self.runs.iter().map(|r| r.0).sum();
        let mut digits = Vec::with_capacity(total);
        for &(c, d) in &self.runs {
            digits.extend(std::iter::repeat_n(d, c));
        }
        BitString(digits)
    }
}

impl From<&BitString> for RunLengthString {
    fn from(x: &BitString) -> Self {
        RunLengthString { runs: x.runs() }
    }
}

impl fmt::Display for RunLengthString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, d)) in self.runs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}_{d}")?;
        }
        Ok(())
    }
}

/// Parses either run-length notation (`"1_0 2_1 1_0"`) or a plain binary
/// string (`"0110"`). The presence of `_` selects run-length notation.
pub fn parse_rle(text: &str) -> Result<BitString> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::parse(text, "empty input"));
    }
    if trimmed.contains('_') {
        Ok(RunLengthString::parse(trimmed)?.expand())
    } else {
        trimmed.parse()
    }
}

/// Canonical maximal-run encoding; the empty string encodes as `""`.
pub fn to_rle(x: &BitString) -> String {
    RunLengthString::from(x).to_string()
}
