//! Bit words indexing tensor amplitudes.
//!
//! Position 1 is the most significant bit, so the word `b1 b2 ... bk` is the
//! amplitude index `b1 * 2^(k-1) + ... + bk`.

use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BitError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("position {pos} out of range for a word of length {len}")]
    OutOfRange { pos: usize, len: usize },
    #[error("bit words are limited to 64 positions, got {0}")]
    TooLong(usize),
    #[error("invalid bit character {0:?}")]
    BadChar(char),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitWord {
    value: u64,
    len: usize,
}

impl BitWord {
    pub fn zero(len: usize) -> Self {
        assert!(len <= 64, "bit words are limited to 64 positions");
        BitWord { value: 0, len }
    }

    /// Interprets `value` as the amplitude index of a `len`-bit word.
    pub fn from_index(value: u64, len: usize) -> Self {
        assert!(len <= 64, "bit words are limited to 64 positions");
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        BitWord {
            value: value & mask,
            len,
        }
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self, BitError> {
        if bits.len() > 64 {
            return Err(BitError::TooLong(bits.len()));
        }
        let value = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        Ok(BitWord {
            value,
            len: bits.len(),
        })
    }

    pub fn parse(s: &str) -> Result<Self, BitError> {
        let bits = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(BitError::BadChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_bits(&bits)
    }

    /// The word with a single 1 at 1-based position `p`.
    pub fn unit(p: usize, len: usize) -> Result<Self, BitError> {
        let mut w = Self::zero(len);
        w.set(p, true)?;
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn index(&self) -> usize {
        self.value as usize
    }

    fn shift(&self, p: usize) -> usize {
        self.len - p
    }

    /// Bit at 1-based position `p`.
    pub fn get(&self, p: usize) -> bool {
        assert!(p >= 1 && p <= self.len, "bit position out of range");
        (self.value >> self.shift(p)) & 1 == 1
    }

    pub fn set(&mut self, p: usize, bit: bool) -> Result<(), BitError> {
        if p == 0 || p > self.len {
            return Err(BitError::OutOfRange { pos: p, len: self.len });
        }
        let m = 1u64 << self.shift(p);
        if bit {
            self.value |= m;
        } else {
            self.value &= !m;
        }
        Ok(())
    }

    pub fn flip(&self, p: usize) -> Self {
        assert!(p >= 1 && p <= self.len, "bit position out of range");
        BitWord {
            value: self.value ^ (1u64 << self.shift(p)),
            len: self.len,
        }
    }

    pub fn xor(&self, other: &BitWord) -> Result<Self, BitError> {
        if self.len != other.len {
            return Err(BitError::LengthMismatch(self.len, other.len));
        }
        Ok(BitWord {
            value: self.value ^ other.value,
            len: self.len,
        })
    }

    pub fn concat(&self, other: &BitWord) -> Result<Self, BitError> {
        let len = self.len + other.len;
        if len > 64 {
            return Err(BitError::TooLong(len));
        }
        let value = if other.len == 64 {
            other.value
        } else {
            (self.value << other.len) | other.value
        };
        Ok(BitWord { value, len })
    }

    /// Sub-word of positions `from..from+len` (1-based start).
    pub fn slice(&self, from: usize, len: usize) -> Self {
        assert!(from >= 1 && from + len - 1 <= self.len || len == 0);
        if len == 0 {
            return Self::zero(0);
        }
        let shift = self.len - (from + len - 1);
        Self::from_index(self.value >> shift, len)
    }

    pub fn weight(&self) -> usize {
        self.value.count_ones() as usize
    }

    pub fn parity(&self) -> bool {
        self.weight() % 2 == 1
    }

    /// 1-based positions holding a 1, increasing.
    pub fn ones(&self) -> Vec<usize> {
        (1..=self.len).filter(|&p| self.get(p)).collect()
    }

    pub fn diff_positions(&self, other: &BitWord) -> Result<Vec<usize>, BitError> {
        Ok(self.xor(other)?.ones())
    }

    pub fn bits(&self) -> Vec<bool> {
        (1..=self.len).map(|p| self.get(p)).collect()
    }

    /// Every word of length `len` in increasing index order.
    pub fn all(len: usize) -> impl Iterator<Item = BitWord> {
        assert!(len < 64);
        (0..(1u64 << len)).map(move |v| BitWord::from_index(v, len))
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 1..=self.len {
            f.write_str(if self.get(p) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}
