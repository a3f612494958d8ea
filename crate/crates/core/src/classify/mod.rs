//! Invariant tables per (t, s), the counts A_{t,s}, bounds on A_t, and a
//! bounded equivalence search.

mod equivalence;

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use equivalence::{
    equivalence_search, verify_witness, Budget, EquivalenceVerdict, SeparatingInvariant, Witness,
};

use crate::error::{Error, Result};
use crate::graymap::GrayTable;
use crate::hadamard::{enumerate_type_specs, gray_image_unbounded, AdditiveCode, TypeSpec};
use crate::invariants::{
    is_linear_theorem, kernel_dim_bruteforce, kernel_dim_theorem, rank_and_min_weight, KernelCheck,
};

/// Largest t for which `classify_fixed` cross-checks kernels by brute force.
pub const BRUTEFORCE_KERNEL_MAX_T: u32 = 8;

/// Largest t for which A_{t,s} is known to be exact.
pub const EXACT_COUNT_MAX_T: u32 = 11;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRow {
    #[serde(flatten)]
    pub spec: TypeSpec,
    pub rank: usize,
    pub kernel_dim: u32,
    pub linear: bool,
    pub min_distance: usize,
    pub kernel_check: KernelCheck,
}

impl ClassificationRow {
    pub fn pair(&self) -> (usize, u32) {
        (self.rank, self.kernel_dim)
    }
}

fn check_t(t: u32, allow_large: bool) -> Result<()> {
    if t < 3 {
        return Err(Error::Precondition(format!(
            "classification needs t >= 3, got {t}"
        )));
    }
    if !allow_large && t > crate::hadamard::DEFAULT_MAX_T {
        return Err(Error::OverCap {
            t,
            cap: crate::hadamard::DEFAULT_MAX_T,
        });
    }
    Ok(())
}

/// One row per type of length 2^t over Z_{2^s}, in lexicographic order.
pub fn classify_fixed(
    t: u32,
    s: u32,
    verify_kernel: bool,
    allow_large: bool,
) -> Result<Vec<ClassificationRow>> {
    check_t(t, allow_large)?;
    let specs = enumerate_type_specs(t, s);
    if specs.is_empty() {
        return Ok(Vec::new());
    }
    let table = GrayTable::build(s)?;
    specs
        .par_iter()
        .map(|spec| {
            let code = AdditiveCode::from_spec(spec);
            let (rank, min_weight) = rank_and_min_weight(&code, &table)?;
            let min_distance = min_weight.ok_or_else(|| Error::Precondition(format!("{spec} has no nonzero word")))?;
            let kernel_dim = kernel_dim_theorem(spec);
            let kernel_check = if verify_kernel && t <= BRUTEFORCE_KERNEL_MAX_T {
                let brute = kernel_dim_bruteforce(&gray_image_unbounded(&code, &table)?)?;
                if brute != kernel_dim {
                    return Err(Error::Precondition(format!(
                        "kernel dimension of {spec} over Z_2^{s}: closed form {kernel_dim}, brute force {brute}"
                    )));
                }
                KernelCheck::VerifiedBruteforce
            } else {
                KernelCheck::FormulaOnly
            };
            Ok(ClassificationRow {
                spec: spec.clone(),
                rank,
                kernel_dim,
                linear: is_linear_theorem(spec),
                min_distance,
                kernel_check,
            })
        })
        .collect()
}

/// A_{t,s}, flagged when it is only known to be an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountValue {
    pub value: u64,
    pub upper_bound: bool,
}

/// Number of pairwise nonequivalent Z_{2^s}-linear Hadamard codes of length
/// 2^t. Panics if t < 3 or s < 2.
pub fn a_ts(t: u32, s: u32) -> CountValue {
    assert!(t >= 3 && s >= 2, "a_ts needs t >= 3 and s >= 2");
    let exact = |value| CountValue {
        value,
        upper_bound: false,
    };
    if s >= t + 2 {
        return exact(0);
    }
    if s + 1 >= t || (s == 2 && t <= 4) {
        return exact(1);
    }
    let count = enumerate_type_specs(t, s).len() as u64;
    CountValue {
        value: count - 1,
        upper_bound: t > EXACT_COUNT_MAX_T,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRecord {
    pub t: u32,
    pub lower_k: usize,
    pub lower_rk: usize,
    pub upper: u64,
}

/// Range of s whose grids contain nonlinear codes.
pub fn nonlinear_s_range(t: u32) -> RangeInclusive<u32> {
    2..=t.saturating_sub(2)
}

/// Bounds from already classified rows, which must cover every s in
/// `nonlinear_s_range(t)`.
pub fn bounds_from_rows<'a>(
    t: u32,
    rows: impl IntoIterator<Item = &'a ClassificationRow>,
) -> BoundsRecord {
    let mut dims = BTreeSet::new();
    let mut pairs = BTreeSet::new();
    for row in rows.into_iter().filter(|r| !r.linear) {
        dims.insert(row.kernel_dim);
        pairs.insert(row.pair());
    }
    let upper = (2..=t + 1)
        .map(|s| a_ts(t, s).value)
        .filter(|&a| a >= 1)
        .map(|a| a - 1)
        .sum::<u64>()
        + 1;
    BoundsRecord {
        t,
        lower_k: dims.len() + 1,
        lower_rk: pairs.len() + 1,
        upper,
    }
}

pub fn a_t_bounds(t: u32, allow_large: bool) -> Result<BoundsRecord> {
    check_t(t, allow_large)?;
    let mut rows = Vec::new();
    for s in nonlinear_s_range(t) {
        rows.extend(classify_fixed(t, s, false, allow_large)?);
    }
    Ok(bounds_from_rows(t, &rows))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SGroup {
    pub s: u32,
    pub count: CountValue,
    pub rows: Vec<ClassificationRow>,
}

impl SGroup {
    pub fn nonlinear(&self) -> impl Iterator<Item = &ClassificationRow> {
        self.rows.iter().filter(|r| !r.linear)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub t: u32,
    pub groups: Vec<SGroup>,
    /// Present only when the groups cover every s that has nonlinear codes.
    pub bounds: Option<BoundsRecord>,
}

impl ClassificationReport {
    pub fn rows(&self) -> impl Iterator<Item = &ClassificationRow> {
        self.groups.iter().flat_map(|g| g.rows.iter())
    }

    /// Distinct (rank, kernel_dim) pairs among nonlinear rows.
    pub fn nonlinear_pairs(&self) -> BTreeSet<(usize, u32)> {
        self.rows()
            .filter(|r| !r.linear)
            .map(|r| r.pair())
            .collect()
    }
}

pub fn classification_report(
    t: u32,
    s_range: RangeInclusive<u32>,
    verify_kernel: bool,
    allow_large: bool,
) -> Result<ClassificationReport> {
    check_t(t, allow_large)?;
    if *s_range.start() < 2 {
        return Err(Error::Precondition("s ranges start at 2".into()));
    }
    let mut groups = Vec::new();
    for s in s_range.clone() {
        groups.push(SGroup {
            s,
            count: a_ts(t, s),
            rows: classify_fixed(t, s, verify_kernel, allow_large)?,
        });
    }
    let needed = nonlinear_s_range(t);
    let covers =
        needed.is_empty() || (s_range.start() <= needed.start() && s_range.end() >= needed.end());
    let bounds = covers.then(|| bounds_from_rows(t, groups.iter().flat_map(|g| g.rows.iter())));
    Ok(ClassificationReport { t, groups, bounds })
}
