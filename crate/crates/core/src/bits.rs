//! Dense binary vectors packed into `u64` words.
//!
//! Coordinate `i` lives in bit `i % 64` of word `i / 64`. Bits past `len` are
//! always zero, so derived equality and hashing compare content only.

use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![!0; word_count(len)],
        };
        v.clear_padding();
        v
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            if f(i) {
                v.words[i / 64] |= 1 << (i % 64);
            }
        }
        v
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        Self::from_fn(bits.len(), |i| bits[i] != 0)
    }

    /// Parses a string of `0`/`1` characters, coordinate 0 first.
    pub fn parse_binary(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Shape(format!("invalid binary digit {c:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self::from_bits(&bits))
    }

    fn clear_padding(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let m = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn distance(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Number of coordinates where both vectors are 1.
    pub fn and_count(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    /// Writes `block` starting at coordinate `offset`. Bits already present in
    /// the destination range are OR-ed, so the range should start zeroed.
    pub(crate) fn or_block_at(&mut self, offset: usize, block: &BitVector) {
        let n = block.len;
        if n == 0 {
            return;
        }
        if offset.is_multiple_of(64) {
            let start = offset / 64;
            for (i, &w) in block.words.iter().enumerate() {
                self.words[start + i] |= w;
            }
        } else if n + offset % 64 <= 64 {
            self.words[offset / 64] |= block.words[0] << (offset % 64);
        } else {
            for i in block.iter_ones() {
                let j = offset + i;
                self.words[j / 64] |= 1 << (j % 64);
            }
        }
    }

    /// Applies a coordinate permutation: coordinate `i` moves to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.len);
        let mut out = Self::zeros(self.len);
        for i in self.iter_ones() {
            let j = perm[i];
            out.words[j / 64] |= 1 << (j % 64);
        }
        out
    }

    /// Lowercase hex: digit `k` carries coordinates `4k..4k+4`, with the lower
    /// coordinate in the lower bit. The length is not encoded.
    pub fn to_hex(&self) -> String {
        const DIGITS: &[u8; 16] = b"0123456789abcdef";
        let mut out = String::with_capacity(self.len.div_ceil(4));
        for k in 0..self.len.div_ceil(4) {
            let bit = 4 * k;
            let nibble = (self.words[bit / 64] >> (bit % 64)) & 0xf;
            out.push(DIGITS[nibble as usize] as char);
        }
        out
    }

    pub fn from_hex(hex: &str, len: usize) -> Result<Self> {
        if hex.len() != len.div_ceil(4) {
            return Err(Error::Shape(format!(
                "hex string has {} digits, expected {} for length {len}",
                hex.len(),
                len.div_ceil(4)
            )));
        }
        let mut v = Self::zeros(len);
        for (k, c) in hex.chars().enumerate() {
            let nibble = c
                .to_digit(16)
                .filter(|_| !c.is_ascii_uppercase())
                .ok_or_else(|| Error::Shape(format!("invalid hex digit {c:?}")))?
                as u64;
            let bit = 4 * k;
            if bit + 4 > len && nibble >> (len - bit) != 0 {
                return Err(Error::Shape("hex string sets bits past the length".into()));
            }
            v.words[bit / 64] |= nibble << (bit % 64);
        }
        Ok(v)
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        assert_eq!(self.len, rhs.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor<&BitVector> for &BitVector {
    type Output = BitVector;

    fn bitxor(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn padding_stays_zero() {
        let v = BitVector::ones(70);
        assert_eq!(v.weight(), 70);
        assert_eq!(v.words()[1], (1 << 6) - 1);
        assert_eq!(BitVector::ones(70), BitVector::from_fn(70, |_| true));
    }

    #[test]
    fn hex_layout() {
        let v = BitVector::parse_binary("10000001").unwrap();
        assert_eq!(v.to_hex(), "18");
        let w = BitVector::parse_binary("110").unwrap();
        assert_eq!(w.to_hex(), "3");
        assert!(BitVector::from_hex("f", 3).is_err());
        assert!(BitVector::from_hex("A", 4).is_err());
        assert!(BitVector::from_hex("00", 4).is_err());
    }

    #[test]
    fn or_block_at_handles_all_alignments() {
        for block_len in [1usize, 2, 4, 8, 32, 64, 128] {
            let block = BitVector::from_fn(block_len, |i| i % 3 != 1);
            let copies = 5;
            let mut out = BitVector::zeros(block_len * copies);
            for c in 0..copies {
                out.or_block_at(c * block_len, &block);
            }
            for i in 0..out.len() {
                assert_eq!(out.get(i), block.get(i % block_len));
            }
        }
    }

    proptest! {
        #[test]
        fn hex_round_trip(bits in proptest::collection::vec(0u8..2, 0..300)) {
            let v = BitVector::from_bits(&bits);
            prop_assert_eq!(BitVector::from_hex(&v.to_hex(), v.len()).unwrap(), v.clone());
            prop_assert_eq!(v.to_bits(), bits);
        }

        #[test]
        fn xor_weight_is_distance(a in proptest::collection::vec(0u8..2, 130), b in proptest::collection::vec(0u8..2, 130)) {
            let va = BitVector::from_bits(&a);
            let vb = BitVector::from_bits(&b);
            let naive = a.iter().zip(&b).filter(|(x, y)| x != y).count();
            prop_assert_eq!((&va ^ &vb).weight(), naive);
            prop_assert_eq!(va.distance(&vb), naive);
            let ones: Vec<usize> = va.iter_ones().collect();
            let naive_ones: Vec<usize> = (0..a.len()).filter(|&i| a[i] == 1).collect();
            prop_assert_eq!(ones, naive_ones);
        }
    }
}
