//! Arithmetic in Z_{2^s}.
//!
//! Every value carries its modulus exponent `s`; binary operations check that
//! both operands agree before reducing by masking with `2^s - 1`.

use std::fmt;

use crate::bits::BitVector;
use crate::error::{Error, Result};

/// Largest modulus exponent accepted anywhere in the crate.
pub const MAX_S: u32 = 30;

pub(crate) fn check_s(s: u32) -> Result<()> {
    if (1..=MAX_S).contains(&s) {
        Ok(())
    } else {
        Err(Error::UnsupportedModulus { s, max: MAX_S })
    }
}

#[inline]
pub(crate) fn mask(s: u32) -> u32 {
    ((1u64 << s) - 1) as u32
}

/// An element of Z_{2^s}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u32,
    s: u32,
}

// Checked ring operations; they return `Result` because both operands must share s.
#[allow(clippy::should_implement_trait)]
impl Residue {
    pub fn new(value: u64, s: u32) -> Result<Self> {
        check_s(s)?;
        if value >> s != 0 {
            return Err(Error::ResidueOutOfRange { value, s });
        }
        Ok(Self {
            value: value as u32,
            s,
        })
    }

    /// Builds a residue from any integer, reducing it modulo 2^s.
    pub fn reduced(value: i64, s: u32) -> Result<Self> {
        check_s(s)?;
        Ok(Self {
            value: (value as u64 & mask(s) as u64) as u32,
            s,
        })
    }

    pub fn zero(s: u32) -> Result<Self> {
        Self::new(0, s)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn s(self) -> u32 {
        self.s
    }

    fn same_ring(self, other: Self) -> Result<()> {
        if self.s == other.s {
            Ok(())
        } else {
            Err(Error::ModulusMismatch {
                left: self.s,
                right: other.s,
            })
        }
    }

    pub fn add(self, other: Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(Self {
            value: self.value.wrapping_add(other.value) & mask(self.s),
            s: self.s,
        })
    }

    pub fn sub(self, other: Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(Self {
            value: self.value.wrapping_sub(other.value) & mask(self.s),
            s: self.s,
        })
    }

    pub fn neg(self) -> Self {
        Self {
            value: self.value.wrapping_neg() & mask(self.s),
            s: self.s,
        }
    }

    pub fn scale(self, k: u64) -> Self {
        let v = (self.value as u64).wrapping_mul(k) & mask(self.s) as u64;
        Self {
            value: v as u32,
            s: self.s,
        }
    }

    /// Bit `i` of the binary expansion, least significant first.
    pub fn bit(self, i: u32) -> u8 {
        ((self.value >> i) & 1) as u8
    }

    pub fn binary_expansion(self) -> BinaryExpansion {
        BinaryExpansion {
            bits: (0..self.s).map(|i| self.bit(i)).collect(),
        }
    }

    /// `u ⊙ v`: the residue whose binary expansion is the bitwise AND of the
    /// two expansions.
    pub fn odot(self, other: Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(Self {
            value: self.value & other.value,
            s: self.s,
        })
    }

    /// Smallest m ≥ 1 with m·u ≡ 0 (mod 2^s).
    pub fn order(self) -> u64 {
        element_order(self.value, self.s)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[inline]
pub(crate) fn element_order(value: u32, s: u32) -> u64 {
    if value == 0 {
        1
    } else {
        1u64 << (s - value.trailing_zeros())
    }
}

/// `[u_0, …, u_{s-1}]`, least significant bit first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryExpansion {
    pub bits: Vec<u8>,
}

impl BinaryExpansion {
    pub fn value(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .map(|(i, &b)| (b as u64) << i)
            .sum()
    }
}

/// A vector over Z_{2^s}. The modulus is stored once, so all entries share it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueVector {
    s: u32,
    entries: Vec<u32>,
}

impl ResidueVector {
    pub fn new(entries: Vec<u32>, s: u32) -> Result<Self> {
        check_s(s)?;
        if let Some(&bad) = entries.iter().find(|&&v| (v as u64) >> s != 0) {
            return Err(Error::ResidueOutOfRange {
                value: bad as u64,
                s,
            });
        }
        Ok(Self { s, entries })
    }

    pub fn from_residues(residues: &[Residue]) -> Result<Self> {
        let first = residues
            .first()
            .ok_or_else(|| Error::Shape("empty residue vector".into()))?;
        let s = first.s();
        let mut entries = Vec::with_capacity(residues.len());
        for r in residues {
            if r.s() != s {
                return Err(Error::ModulusMismatch {
                    left: s,
                    right: r.s(),
                });
            }
            entries.push(r.value());
        }
        Ok(Self { s, entries })
    }

    pub fn zeros(n: usize, s: u32) -> Result<Self> {
        Self::new(vec![0; n], s)
    }

    /// The constant vector `(c, c, …, c)` of length `n`.
    pub fn constant(c: u64, n: usize, s: u32) -> Result<Self> {
        check_s(s)?;
        Ok(Self {
            s,
            entries: vec![(c & mask(s) as u64) as u32; n],
        })
    }

    pub(crate) fn from_raw(entries: Vec<u32>, s: u32) -> Self {
        debug_assert!(entries.iter().all(|&v| v & !mask(s) == 0));
        Self { s, entries }
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Option<Residue> {
        self.entries
            .get(i)
            .map(|&value| Residue { value, s: self.s })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.s != other.s {
            return Err(Error::ModulusMismatch {
                left: self.s,
                right: other.s,
            });
        }
        if self.len() != other.len() {
            return Err(Error::Shape(format!(
                "length mismatch: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let m = mask(self.s);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.wrapping_add(*b) & m)
            .collect();
        Ok(Self { s: self.s, entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let m = mask(self.s);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.wrapping_sub(*b) & m)
            .collect();
        Ok(Self { s: self.s, entries })
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        let m = mask(self.s);
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a = a.wrapping_add(*b) & m;
        }
    }

    pub fn scale(&self, k: u64) -> Self {
        let m = mask(self.s) as u64;
        let entries = self
            .entries
            .iter()
            .map(|&v| ((v as u64).wrapping_mul(k) & m) as u32)
            .collect();
        Self { s: self.s, entries }
    }

    /// Componentwise `⊙`.
    pub fn odot(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a & b)
            .collect();
        Ok(Self { s: self.s, entries })
    }

    /// Maximum of the entry orders; 1 for the zero vector.
    pub fn order(&self) -> u64 {
        self.entries
            .iter()
            .map(|&v| element_order(v, self.s))
            .max()
            .unwrap_or(1)
    }

    /// The binary vector `u^{(p)}` holding bit `p` of every entry.
    pub fn bit_plane(&self, p: u32) -> Result<BitVector> {
        if p >= self.s {
            return Err(Error::IndexOutOfRange {
                index: p as usize,
                limit: self.s as usize,
            });
        }
        Ok(BitVector::from_fn(self.len(), |i| {
            (self.entries[i] >> p) & 1 == 1
        }))
    }

    /// Concatenation `(self, self, …, self)` with `copies` blocks.
    pub fn replicate(&self, copies: usize) -> Self {
        let mut entries = Vec::with_capacity(self.len() * copies);
        for _ in 0..copies {
            entries.extend_from_slice(&self.entries);
        }
        Self { s: self.s, entries }
    }
}

impl fmt::Display for ResidueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Free-function forms of the residue operations.
pub fn binary_expansion(u: Residue) -> BinaryExpansion {
    u.binary_expansion()
}

pub fn odot(u: Residue, v: Residue) -> Result<Residue> {
    u.odot(v)
}

pub fn vector_order(v: &ResidueVector) -> u64 {
    v.order()
}

pub fn bit_plane(v: &ResidueVector, p: u32) -> Result<BitVector> {
    v.bit_plane(p)
}
