//! Carlet's generalized Gray map φ: Z_{2^s} → Z_2^{2^{s-1}} and its
//! componentwise extension Φ.
//!
//! φ(u) = (u_{s-1}, …, u_{s-1}) + (u_0, …, u_{s-2})·Y, where the columns of
//! the (s-1) × 2^{s-1} matrix Y are the binary expansions of 0, 1, …,
//! 2^{s-1} - 1 (bit i of column j sits in row i). For s = 1 the map is the
//! identity on one bit.

use std::collections::HashMap;

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::ring::{self, Residue, ResidueVector};

/// Largest s for which a full lookup table is built (2^s images of
/// 2^{s-1} bits each).
pub const MAX_TABLE_S: u32 = 16;

/// The matrix Y whose columns enumerate Z_2^{s-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarletMatrix {
    s: u32,
    rows: Vec<BitVector>,
}

impl CarletMatrix {
    pub fn new(s: u32) -> Result<Self> {
        check_table_s(s)?;
        let width = 1usize << (s - 1);
        let rows = (0..s - 1)
            .map(|i| BitVector::from_fn(width, |j| (j >> i) & 1 == 1))
            .collect();
        Ok(Self { s, rows })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn width(&self) -> usize {
        1usize << (self.s - 1)
    }

    /// Column `j` read top to bottom as an integer (row i gives bit i).
    pub fn column(&self, j: usize) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.get(j) as u64) << i)
            .sum()
    }
}

fn check_table_s(s: u32) -> Result<()> {
    ring::check_s(s)?;
    if s > MAX_TABLE_S {
        return Err(Error::UnsupportedModulus {
            s,
            max: MAX_TABLE_S,
        });
    }
    Ok(())
}

/// φ(u) evaluated straight from the defining formula, without a table.
pub fn phi_direct(u: Residue) -> BitVector {
    let s = u.s();
    let width = 1usize << (s - 1);
    let top = u.bit(s - 1) == 1;
    let low = (u.value() as usize) & (width - 1);
    BitVector::from_fn(width, |j| top ^ ((j & low).count_ones() & 1 == 1))
}

/// Precomputed images φ(u) for every u ∈ Z_{2^s}.
#[derive(Debug, Clone)]
pub struct GrayTable {
    s: u32,
    images: Vec<BitVector>,
    preimages: HashMap<BitVector, u32>,
}

impl GrayTable {
    pub fn build(s: u32) -> Result<Self> {
        let y = CarletMatrix::new(s)?;
        let width = y.width();
        let mut images = Vec::with_capacity(1 << s);
        for u in 0..(1u32 << s) {
            let mut img = if (u >> (s - 1)) & 1 == 1 {
                BitVector::ones(width)
            } else {
                BitVector::zeros(width)
            };
            for (i, row) in y.rows().iter().enumerate() {
                if (u >> i) & 1 == 1 {
                    img ^= row;
                }
            }
            images.push(img);
        }
        let preimages = images
            .iter()
            .enumerate()
            .map(|(u, b)| (b.clone(), u as u32))
            .collect();
        Ok(Self {
            s,
            images,
            preimages,
        })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Length 2^{s-1} of each image.
    pub fn block_len(&self) -> usize {
        1usize << (self.s - 1)
    }

    pub fn images(&self) -> &[BitVector] {
        &self.images
    }

    #[inline]
    pub(crate) fn image_raw(&self, u: u32) -> &BitVector {
        &self.images[u as usize]
    }

    pub fn phi(&self, u: Residue) -> Result<&BitVector> {
        if u.s() != self.s {
            return Err(Error::ModulusMismatch {
                left: u.s(),
                right: self.s,
            });
        }
        Ok(&self.images[u.value() as usize])
    }

    /// Φ: concatenation of φ(v_i) in coordinate order.
    pub fn phi_vec(&self, v: &ResidueVector) -> Result<BitVector> {
        if v.s() != self.s {
            return Err(Error::ModulusMismatch {
                left: v.s(),
                right: self.s,
            });
        }
        Ok(self.phi_entries(v.entries()))
    }

    pub(crate) fn phi_entries(&self, entries: &[u32]) -> BitVector {
        let block = self.block_len();
        let mut out = BitVector::zeros(entries.len() * block);
        for (i, &u) in entries.iter().enumerate() {
            if u != 0 {
                out.or_block_at(i * block, &self.images[u as usize]);
            }
        }
        out
    }

    /// The unique preimage of `b` under Φ, or `None` when some block is not
    /// an image of φ.
    pub fn phi_inverse(&self, b: &BitVector) -> Result<Option<ResidueVector>> {
        let block = self.block_len();
        if !b.len().is_multiple_of(block) {
            return Err(Error::Shape(format!(
                "length {} is not a multiple of the block length {block}",
                b.len()
            )));
        }
        let mut entries = Vec::with_capacity(b.len() / block);
        for k in 0..b.len() / block {
            let chunk = BitVector::from_fn(block, |j| b.get(k * block + j));
            match self.preimages.get(&chunk) {
                Some(&u) => entries.push(u),
                None => return Ok(None),
            }
        }
        Ok(Some(ResidueVector::from_raw(entries, self.s)))
    }
}

pub fn build_gray(s: u32) -> Result<GrayTable> {
    GrayTable::build(s)
}

pub fn phi(u: Residue, table: &GrayTable) -> Result<&BitVector> {
    table.phi(u)
}

pub fn phi_vec(v: &ResidueVector, table: &GrayTable) -> Result<BitVector> {
    table.phi_vec(v)
}

pub fn phi_inverse(b: &BitVector, table: &GrayTable) -> Result<Option<ResidueVector>> {
    table.phi_inverse(b)
}

/// The algebraic identities satisfied by φ, each as a predicate over a
/// built table. Arguments are raw residues in `[0, 2^s)`.
pub mod identities {
    use super::GrayTable;
    use crate::bits::BitVector;

    fn m(t: &GrayTable) -> u32 {
        (1u32 << t.s()) - 1
    }

    fn img(t: &GrayTable, u: u32) -> &BitVector {
        t.image_raw(u & m(t))
    }

    /// φ(u) + φ(v) = φ(u + v - 2(u ⊙ v)).
    pub fn odot_sum(t: &GrayTable, u: u32, v: u32) -> bool {
        let w = u.wrapping_add(v).wrapping_sub(2 * (u & v));
        &(img(t, u) ^ img(t, v)) == img(t, w)
    }

    /// φ(u) + φ(2^p) = φ(u + 2^p - 2^{p+1} u_p), for 0 ≤ p ≤ s - 1.
    pub fn power_of_two_sum(t: &GrayTable, u: u32, p: u32) -> bool {
        let up = (u >> p) & 1;
        let w = u.wrapping_add(1 << p).wrapping_sub(up << (p + 1));
        &(img(t, u) ^ img(t, 1 << p)) == img(t, w)
    }

    /// φ(u) + φ(2^{s-1}) = φ(u + 2^{s-1}).
    pub fn complement_sum(t: &GrayTable, u: u32) -> bool {
        let half = 1u32 << (t.s() - 1);
        &(img(t, u) ^ img(t, half)) == img(t, u.wrapping_add(half))
    }

    /// The set U = {2^{s-2}, …, 2^{s-1} - 1} ∪ {3·2^{s-2}, …, 2^s - 1}, i.e.
    /// the residues whose bit s-2 is set. Requires s ≥ 2.
    pub fn in_upper_quarter_set(t: &GrayTable, u: u32) -> bool {
        (u >> (t.s() - 2)) & 1 == 1
    }

    /// For u ∈ U: φ(u) + φ(2^{s-2}) = φ(u + 2^{s-2} + 2^{s-1}). Vacuously
    /// true outside U. Requires s ≥ 2.
    pub fn quarter_sum(t: &GrayTable, u: u32) -> bool {
        if !in_upper_quarter_set(t, u) {
            return true;
        }
        let q = 1u32 << (t.s() - 2);
        let half = 1u32 << (t.s() - 1);
        &(img(t, u) ^ img(t, q)) == img(t, u.wrapping_add(q).wrapping_add(half))
    }

    /// For v ∈ {2^{s-2}, 3·2^{s-2}}: φ(u) + φ(v) = φ(u + v + 2^{s-1}) when
    /// u ∈ U, and φ(u + v) otherwise. Requires s ≥ 2.
    pub fn quarter_pair_sum(t: &GrayTable, u: u32, v: u32) -> bool {
        let half = 1u32 << (t.s() - 1);
        let w = if in_upper_quarter_set(t, u) {
            u.wrapping_add(v).wrapping_add(half)
        } else {
            u.wrapping_add(v)
        };
        &(img(t, u) ^ img(t, v)) == img(t, w)
    }

    /// Σ λ_i φ(2^i) = φ(Σ λ_i 2^i) over λ ∈ {0,1}^{s-1}, encoded as the bit
    /// mask `lambda` (bit i is λ_i).
    pub fn low_bits_linear(t: &GrayTable, lambda: u32) -> bool {
        let s = t.s();
        let lambda = lambda & ((1u32 << (s - 1)) - 1);
        let mut acc = BitVector::zeros(t.block_len());
        for i in 0..s - 1 {
            if (lambda >> i) & 1 == 1 {
                acc ^= img(t, 1 << i);
            }
        }
        &acc == img(t, lambda)
    }

    /// d_H(φ(u), φ(v)) = wt_H(φ(u - v)).
    pub fn distance_is_weight(t: &GrayTable, u: u32, v: u32) -> bool {
        img(t, u).distance(img(t, v)) == img(t, u.wrapping_sub(v)).weight()
    }

    /// d_H(φ(u), φ(2^{s-1})) + d_H(φ(u), φ(0)) = 2^{s-1}.
    pub fn antipodal_distance(t: &GrayTable, u: u32) -> bool {
        let half = 1u32 << (t.s() - 1);
        img(t, u).distance(img(t, half)) + img(t, u).distance(img(t, 0)) == t.block_len()
    }

    /// d_H(φ(u), φ(v + 2^{s-1})) + d_H(φ(u), φ(v)) = 2^{s-1}.
    pub fn antipodal_pair_distance(t: &GrayTable, u: u32, v: u32) -> bool {
        let half = 1u32 << (t.s() - 1);
        img(t, u).distance(img(t, v.wrapping_add(half))) + img(t, u).distance(img(t, v))
            == t.block_len()
    }

    /// All 2^s images are distinct.
    pub fn injective(t: &GrayTable) -> bool {
        let set: std::collections::HashSet<&BitVector> = t.images().iter().collect();
        set.len() == t.images().len()
    }

    /// wt(φ(u)) is 0 for u = 0, 2^{s-1} for u = 2^{s-1} and 2^{s-2} otherwise.
    pub fn weight_profile(t: &GrayTable, u: u32) -> bool {
        let s = t.s();
        let w = img(t, u).weight();
        if u == 0 {
            w == 0
        } else if u == 1 << (s - 1) {
            w == 1 << (s - 1)
        } else {
            s >= 2 && w == 1 << (s - 2)
        }
    }
}

/// Outcome of checking one identity over all of Z_{2^s} (or Z_{2^s}^2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.failures == 0
    }
}

/// Runs every identity exhaustively for one s ≥ 2.
pub fn check_identities(table: &GrayTable) -> Vec<IdentityCheck> {
    use identities::*;
    let s = table.s();
    assert!(s >= 2, "the quarter identities need s >= 2");
    let q = 1u32 << s;
    let mut out = Vec::new();
    let mut run = |name: &'static str, cases: &mut dyn Iterator<Item = bool>| {
        let mut n = 0;
        let mut bad = 0;
        for ok in cases {
            n += 1;
            if !ok {
                bad += 1;
            }
        }
        out.push(IdentityCheck {
            name,
            cases: n,
            failures: bad,
        });
    };
    let pairs = || (0..q).flat_map(move |u| (0..q).map(move |v| (u, v)));
    run("odot_sum", &mut pairs().map(|(u, v)| odot_sum(table, u, v)));
    run(
        "power_of_two_sum",
        &mut (0..q)
            .flat_map(|u| (0..s).map(move |p| (u, p)))
            .map(|(u, p)| power_of_two_sum(table, u, p)),
    );
    run(
        "complement_sum",
        &mut (0..q).map(|u| complement_sum(table, u)),
    );
    run("quarter_sum", &mut (0..q).map(|u| quarter_sum(table, u)));
    let quarters = [1u32 << (s - 2), 3 << (s - 2)];
    run(
        "quarter_pair_sum",
        &mut (0..q)
            .flat_map(|u| quarters.iter().map(move |&v| (u, v)))
            .map(|(u, v)| quarter_pair_sum(table, u, v)),
    );
    run(
        "low_bits_linear",
        &mut (0..1u32 << (s - 1)).map(|l| low_bits_linear(table, l)),
    );
    run(
        "distance_is_weight",
        &mut pairs().map(|(u, v)| distance_is_weight(table, u, v)),
    );
    run(
        "antipodal_distance",
        &mut (0..q).map(|u| antipodal_distance(table, u)),
    );
    run(
        "antipodal_pair_distance",
        &mut pairs().map(|(u, v)| antipodal_pair_distance(table, u, v)),
    );
    run(
        "weight_profile",
        &mut (0..q).map(|u| weight_profile(table, u)),
    );
    run("injective", &mut std::iter::once(injective(table)));
    out
}
