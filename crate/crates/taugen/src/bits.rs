//! Fixed-width bit strings, written most-significant bit first.
//!
//! `"0100"` denotes the string whose bit 0 is `0`, bit 1 is `1`, and so on;
//! when a string is read as an integer the leftmost character is the most
//! significant bit. Comparison is lexicographic, which for equal widths
//! coincides with numeric order.

use std::fmt;
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn zeros(width: usize) -> Self {
        BitString(vec![false; width])
    }

    /// The `width`-bit binary expansion of `value`, most significant bit first.
    /// `value` must fit in `width` bits.
    pub fn from_index(value: usize, width: usize) -> Self {
        assert!(width >= usize::BITS as usize || value < (1usize << width));
        BitString((0..width).map(|i| value >> (width - 1 - i) & 1 == 1).collect())
    }

    /// Reads the string back as an integer, most significant bit first.
    pub fn to_index(&self) -> usize {
        assert!(self.len() < usize::BITS as usize, "bit string too wide for an index");
        self.0.iter().fold(0, |acc, &b| acc << 1 | b as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    pub fn xor(&self, other: &BitString) -> BitString {
        assert_eq!(self.len(), other.len(), "xor of unequal widths");
        BitString(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect())
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        BitString(bits)
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString(self.0[start..end].to_vec())
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct ParseBitStringError {
    pub position: usize,
    pub found: char,
}

impl fmt::Display for ParseBitStringError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid bit '{}' at position {}", self.found, self.position)
    }
}

impl std::error::Error for ParseBitStringError {}

impl FromStr for BitString {
    type Err = ParseBitStringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for (position, ch) in s.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                found => return Err(ParseBitStringError { position, found }),
            }
        }
        Ok(BitString(bits))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}
