//! Fixed-capacity binary words.
//!
//! Coordinates are stored LSB-first: coordinate 1 of a code (1-based, as in
//! every file format of this crate) lives in bit 0.

use std::fmt;

use crate::error::CodeError;

/// Maximum supported code length.
pub const MAX_LEN: usize = 128;

/// A binary word of length `len <= 128` packed into a `u128`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord {
    bits: u128,
    len: u8,
}

#[inline]
pub(crate) fn len_mask(len: usize) -> u128 {
    if len >= 128 {
        u128::MAX
    } else {
        (1u128 << len) - 1
    }
}

impl BitWord {
    pub fn zero(len: usize) -> Self {
        assert!(len <= MAX_LEN, "word length {len} exceeds {MAX_LEN}");
        BitWord { bits: 0, len: len as u8 }
    }

    /// Builds a word from raw bits; bits at or beyond `len` must be clear.
    pub fn from_bits(bits: u128, len: usize) -> Result<Self, CodeError> {
        if len > MAX_LEN {
            return Err(CodeError::LengthTooLarge(len));
        }
        if bits & !len_mask(len) != 0 {
            return Err(CodeError::BitsBeyondLength { len });
        }
        Ok(BitWord { bits, len: len as u8 })
    }

    /// Word with ones at the given 0-based positions.
    pub fn from_support(len: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let mut w = BitWord::zero(len);
        for i in support {
            w.set(i, true);
        }
        w
    }

    /// Parses a string of `0`/`1` characters, first character = coordinate 1.
    pub fn parse(s: &str) -> Result<Self, CodeError> {
        let len = s.chars().count();
        if len > MAX_LEN {
            return Err(CodeError::LengthTooLarge(len));
        }
        let mut bits = 0u128;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1u128 << i,
                other => return Err(CodeError::BadSymbol(other)),
            }
        }
        Ok(BitWord { bits, len: len as u8 })
    }

    #[inline]
    pub fn bits(&self) -> u128 {
        self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len());
        (self.bits >> i) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len(), "coordinate {i} out of range for length {}", self.len);
        if value {
            self.bits |= 1u128 << i;
        } else {
            self.bits &= !(1u128 << i);
        }
    }

    #[inline]
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Standard inner product over GF(2).
    #[inline]
    pub fn dot(&self, other: &BitWord) -> bool {
        (self.bits & other.bits).count_ones() & 1 == 1
    }

    #[inline]
    pub fn xor(&self, other: &BitWord) -> BitWord {
        debug_assert_eq!(self.len, other.len);
        BitWord { bits: self.bits ^ other.bits, len: self.len }
    }

    /// 0-based positions of the set bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        ones(self.bits).collect()
    }

    /// Concatenates `other` after `self`.
    pub fn concat(&self, other: &BitWord) -> BitWord {
        let len = self.len() + other.len();
        assert!(len <= MAX_LEN);
        BitWord { bits: self.bits | (other.bits << self.len()), len: len as u8 }
    }

    /// Restriction to coordinates `start..start+len`.
    pub fn slice(&self, start: usize, len: usize) -> BitWord {
        assert!(start + len <= self.len());
        BitWord { bits: (self.bits >> start) & len_mask(len), len: len as u8 }
    }

    /// Zero-extends (or truncates, when shorter) to `len` coordinates.
    pub fn resized(&self, len: usize) -> BitWord {
        assert!(len <= MAX_LEN);
        BitWord { bits: self.bits & len_mask(len), len: len as u8 }
    }
}

/// Iterator over the set bit positions of a raw word.
#[inline]
pub fn ones(mut bits: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if bits == 0 {
            None
        } else {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        }
    })
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}
