//! Rank, kernel and distance invariants of binary codes, with closed forms
//! for the Gray images of the additive Hadamard codes.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::gf2::Gf2Basis;
use crate::graymap::GrayTable;
use crate::hadamard::{AdditiveCode, BinaryCode, GeneratorMatrix, TypeSpec};
use crate::ring::ResidueVector;

/// Invariants of one code H^{t_1,…,t_s}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRecord {
    #[serde(flatten)]
    pub spec: TypeSpec,
    pub t: u32,
    pub n: usize,
    #[serde(rename = "N")]
    pub length: usize,
    pub rank: usize,
    pub kernel_dim: u32,
    pub linear: bool,
    pub min_distance: usize,
}

/// Whether a reported kernel dimension was confirmed by exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelCheck {
    FormulaOnly,
    VerifiedBruteforce,
}

impl KernelCheck {
    pub fn as_str(self) -> &'static str {
        match self {
            KernelCheck::FormulaOnly => "formula-only",
            KernelCheck::VerifiedBruteforce => "verified-bruteforce",
        }
    }
}

/// GF(2) dimension of the span of all words.
pub fn rank(code: &BinaryCode) -> usize {
    let mut basis = Gf2Basis::new(code.length());
    for w in code.iter() {
        basis.insert(w);
    }
    basis.rank()
}

/// Number of codewords handed to each worker when streaming.
const CHUNK: u64 = 1 << 10;

/// Rank and minimum nonzero weight of Φ(𝓗), streamed without
/// materializing the binary code. Chunks are reduced in parallel and the
/// partial bases merged in chunk order.
pub fn rank_and_min_weight(
    code: &AdditiveCode,
    table: &GrayTable,
) -> Result<(usize, Option<usize>)> {
    if table.s() != code.spec().s() {
        return Err(Error::ModulusMismatch {
            left: code.spec().s(),
            right: table.s(),
        });
    }
    let length = code.spec().length();
    let size = code.size();
    let starts: Vec<u64> = (0..size).step_by(CHUNK as usize).collect();
    let partials: Vec<(Gf2Basis, Option<usize>)> = starts
        .par_iter()
        .map(|&start| {
            let mut basis = Gf2Basis::new(length);
            let mut min_w: Option<usize> = None;
            for c in code.codewords_range(start, start + CHUNK) {
                let b = table.phi_entries(c.entries());
                let w = b.weight();
                if w > 0 {
                    min_w = Some(min_w.map_or(w, |m| m.min(w)));
                }
                basis.insert(&b);
            }
            (basis, min_w)
        })
        .collect();
    let mut merged = Gf2Basis::new(length);
    let mut min_w = None;
    for (basis, w) in &partials {
        for row in basis.rows() {
            merged.insert(row);
        }
        if let Some(w) = *w {
            min_w = Some(min_w.map_or(w, |m: usize| m.min(w)));
        }
    }
    Ok((merged.rank(), min_w))
}

/// K(C) = {x ∈ C : x + C = C}, for a code containing the zero word.
pub fn kernel_bruteforce(code: &BinaryCode) -> Result<BinaryCode> {
    if !code.contains_zero() {
        return Err(Error::Precondition(
            "kernel search needs the zero word in the code; translate it first".into(),
        ));
    }
    let words: Vec<&BitVector> = code.iter().collect();
    let survivors: Vec<BitVector> = words
        .par_iter()
        .filter(|x| words.iter().all(|c| code.contains(&(**x ^ *c))))
        .map(|x| (*x).clone())
        .collect();
    BinaryCode::from_words(code.length(), survivors)
}

/// log2 of the kernel size.
pub fn kernel_dim_bruteforce(code: &BinaryCode) -> Result<u32> {
    let k = kernel_bruteforce(code)?;
    let size = k.size();
    debug_assert!(size.is_power_of_two());
    Ok(size.trailing_zeros())
}

/// Linear iff the type is (1,0,…,0,t_s) or (1,0,…,0,1,t_s) for s > 2, or
/// t_1 ∈ {1,2} for s = 2.
pub fn is_linear_theorem(spec: &TypeSpec) -> bool {
    let c = spec.counts();
    let s = spec.s() as usize;
    if s == 2 {
        return c[0] <= 2;
    }
    c[0] == 1 && c[1..s - 2].iter().all(|&x| x == 0) && c[s - 2] <= 1
}

/// t + 1 for linear codes, σ + τ otherwise.
pub fn kernel_dim_theorem(spec: &TypeSpec) -> u32 {
    if is_linear_theorem(spec) {
        spec.t() + 1
    } else {
        spec.sigma() + spec.tau() as u32
    }
}

/// Where a kernel basis vector comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisSource {
    /// Φ((ord(w_i)/2)·w_i) for generator row `row` (0-based).
    OrderTwoRow { row: usize },
    /// Φ(2^p·𝟏) for 0 ≤ p ≤ σ - 2.
    PowerOfTwo { p: u32 },
    /// Φ((2^{s-1} - 1)·𝟏), the constant vector Σ_{i=0}^{s-2} 2^i.
    LowOnes,
}

#[derive(Debug, Clone)]
pub struct KernelBasis {
    pub vectors: Vec<BitVector>,
    pub sources: Vec<BasisSource>,
}

impl KernelBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// All 2^k vectors of the span.
    pub fn span(&self) -> Vec<BitVector> {
        let len = self.vectors.first().map_or(0, |v| v.len());
        let mut basis = Gf2Basis::new(len);
        for v in &self.vectors {
            basis.insert(v);
        }
        basis.span()
    }
}

/// Explicit basis of K(Φ(𝓗)) for nonlinear types: one order-two multiple
/// per generator row, the constants 2^p for p < σ - 1, and 2^{s-1} - 1.
pub fn kernel_basis(
    spec: &TypeSpec,
    gen: &GeneratorMatrix,
    table: &GrayTable,
) -> Result<KernelBasis> {
    if is_linear_theorem(spec) {
        return Err(Error::NotApplicable(format!("{spec} gives a linear code")));
    }
    if gen.spec() != spec || table.s() != spec.s() {
        return Err(Error::Precondition(
            "generator, table and type disagree".into(),
        ));
    }
    let s = spec.s();
    let n = gen.n();
    let mut vectors = Vec::new();
    let mut sources = Vec::new();
    for (row_idx, (row, &ord)) in gen.rows().iter().zip(gen.row_orders()).enumerate() {
        vectors.push(table.phi_vec(&row.scale(ord / 2))?);
        sources.push(BasisSource::OrderTwoRow { row: row_idx });
    }
    for p in 0..spec.sigma().saturating_sub(1) {
        vectors.push(table.phi_vec(&ResidueVector::constant(1 << p, n, s)?)?);
        sources.push(BasisSource::PowerOfTwo { p });
    }
    vectors.push(table.phi_vec(&ResidueVector::constant((1 << (s - 1)) - 1, n, s)?)?);
    sources.push(BasisSource::LowOnes);
    Ok(KernelBasis { vectors, sources })
}

/// Minimum distance. Gray images of additive codes use the minimum nonzero
/// weight; other codes fall back to all pairs.
pub fn min_distance(code: &BinaryCode) -> Result<usize> {
    if code.is_additive_image() {
        code.iter()
            .map(|w| w.weight())
            .filter(|&w| w > 0)
            .min()
            .ok_or_else(|| Error::Precondition("minimum distance of a one-word code".into()))
    } else {
        min_distance_pairwise(code)
    }
}

pub fn min_distance_pairwise(code: &BinaryCode) -> Result<usize> {
    let words: Vec<&BitVector> = code.iter().collect();
    words
        .par_iter()
        .enumerate()
        .filter_map(|(i, a)| words[i + 1..].iter().map(|b| a.distance(b)).min())
        .min()
        .ok_or_else(|| Error::Precondition("minimum distance of a one-word code".into()))
}

/// |C| = 2N and d(C) = N/2.
pub fn is_hadamard(code: &BinaryCode) -> bool {
    let n = code.length();
    if !n.is_multiple_of(2) || code.size() != 2 * n {
        return false;
    }
    matches!(min_distance(code), Ok(d) if d == n / 2)
}

pub fn weight_distribution(code: &BinaryCode) -> BTreeMap<usize, usize> {
    let mut dist = BTreeMap::new();
    for w in code.iter() {
        *dist.entry(w.weight()).or_insert(0) += 1;
    }
    dist
}

/// Computes the full record for one type. The kernel dimension comes from
/// the closed form; with `verify_kernel` it is also recomputed by brute
/// force and a mismatch is an error.
pub fn compute_record(
    spec: &TypeSpec,
    verify_kernel: bool,
    allow_large: bool,
) -> Result<(InvariantRecord, KernelCheck)> {
    spec.check_cap(allow_large)?;
    let table = GrayTable::build(spec.s())?;
    let code = AdditiveCode::from_spec(spec);
    let (rank, min_w) = rank_and_min_weight(&code, &table)?;
    let kernel_dim = kernel_dim_theorem(spec);
    let check = if verify_kernel {
        let image = crate::hadamard::gray_image_unbounded(&code, &table)?;
        let brute = kernel_dim_bruteforce(&image)?;
        if brute != kernel_dim {
            return Err(Error::Precondition(format!(
                "kernel dimension mismatch for {spec}: closed form {kernel_dim}, brute force {brute}"
            )));
        }
        KernelCheck::VerifiedBruteforce
    } else {
        KernelCheck::FormulaOnly
    };
    let record = InvariantRecord {
        spec: spec.clone(),
        t: spec.t(),
        n: spec.n(),
        length: spec.length(),
        rank,
        kernel_dim,
        linear: is_linear_theorem(spec),
        min_distance: min_w
            .ok_or_else(|| Error::Precondition("code has no nonzero word".into()))?,
    };
    Ok((record, check))
}
