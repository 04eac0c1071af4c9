use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

/// An ordered sequence of bits.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Bitstring {
    bits: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid bit character {0:?}")]
pub struct ParseBitsError(pub char);

impl Bitstring {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![false; len] }
    }

    pub fn from_bits<I: IntoIterator<Item = u8>>(bits: I) -> Self {
        bits.into_iter().map(|b| b & 1 == 1).collect()
    }

    /// Bits of `bytes`, most significant bit first.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        bytes
            .iter()
            .flat_map(|&byte| (0..8).rev().map(move |i| (byte >> i) & 1 == 1))
            .collect()
    }

    /// Packs into bytes, most significant bit first, zero-padding the tail.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.bits
            .chunks(8)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | ((b as u8) << (7 - i)))
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> u8 {
        self.bits[i] as u8
    }

    pub fn set(&mut self, i: usize, bit: u8) {
        self.bits[i] = bit & 1 == 1;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn push(&mut self, bit: u8) {
        self.bits.push(bit & 1 == 1);
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.bits.iter().map(|&b| b as u8)
    }

    pub fn as_bools(&self) -> &[bool] {
        &self.bits
    }

    /// Bits at `positions`, in the order given.
    pub fn select(&self, positions: &[usize]) -> Bitstring {
        positions.iter().map(|&i| self.bits[i]).collect()
    }

    /// XOR parity over `positions`.
    pub fn parity_of(&self, positions: &[usize]) -> u8 {
        positions.iter().fold(0u8, |acc, &i| acc ^ self.bits[i] as u8)
    }

    pub fn parity(&self) -> u8 {
        self.bits.iter().fold(0u8, |acc, &b| acc ^ b as u8)
    }

    /// Removes every index in `positions` (any order, duplicates ignored).
    pub fn remove_positions(&mut self, positions: &[usize]) {
        let mut drop = vec![false; self.bits.len()];
        for &p in positions {
            drop[p] = true;
        }
        let mut i = 0;
        self.bits.retain(|_| {
            let keep = !drop[i];
            i += 1;
            keep
        });
    }

    /// `out[i] = self[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> Bitstring {
        perm.iter().map(|&i| self.bits[i]).collect()
    }

    /// Number of positions where the two strings differ; extra tail bits count.
    pub fn hamming(&self, other: &Bitstring) -> usize {
        let common = self.bits.iter().zip(other.bits.iter()).filter(|(a, b)| a != b).count();
        common + self.len().abs_diff(other.len())
    }

    /// Positions (ascending) where the strings differ, over the common prefix.
    pub fn diff_positions(&self, other: &Bitstring) -> Vec<usize> {
        self.bits
            .iter()
            .zip(other.bits.iter())
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i)
            .collect()
    }
}

impl FromIterator<bool> for Bitstring {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self {
            bits: iter.into_iter().collect(),
        }
    }
}

/// Parses `0`/`1` characters; whitespace and `_` are ignored.
impl FromStr for Bitstring {
    type Err = ParseBitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .filter(|c| !c.is_whitespace() && *c != '_')
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(ParseBitsError(other)),
            })
            .collect()
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstring({self})")
    }
}

impl Serialize for Bitstring {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
