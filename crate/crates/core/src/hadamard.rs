//! Z_{2^s}-additive Hadamard codes H^{t_1,…,t_s} and their binary images.
//!
//! The generator matrix A^{t_1,…,t_s} has first row 𝟏, then t_1 - 1 rows of
//! order 2^s, t_2 rows of order 2^{s-1}, …, t_s rows of order 2. Its columns
//! run over {1} × T_1^{t_1-1} × T_2^{t_2} × … × T_s^{t_s} with
//! T_i = {j·2^{i-1} : 0 ≤ j < 2^{s-i+1}}, row 2 varying fastest.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::graymap::GrayTable;
use crate::ring::{self, ResidueVector};

/// Specs with t above this are refused unless the caller opts in.
pub const DEFAULT_MAX_T: u32 = 12;

/// The type (s; t_1, …, t_s) of an additive Hadamard code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct TypeSpec {
    s: u32,
    counts: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    s: u32,
    #[serde(rename = "type")]
    counts: Vec<u32>,
}

impl TryFrom<SpecRepr> for TypeSpec {
    type Error = Error;
    fn try_from(r: SpecRepr) -> Result<Self> {
        TypeSpec::new(r.s, &r.counts)
    }
}

impl From<TypeSpec> for SpecRepr {
    fn from(t: TypeSpec) -> Self {
        SpecRepr {
            s: t.s,
            counts: t.counts,
        }
    }
}

impl TypeSpec {
    pub fn new(s: u32, counts: &[u32]) -> Result<Self> {
        if s < 2 {
            return Err(Error::InvalidType(format!("s must be at least 2, got {s}")));
        }
        ring::check_s(s)?;
        if counts.len() != s as usize {
            return Err(Error::InvalidType(format!(
                "expected {s} entries t_1..t_{s}, got {}",
                counts.len()
            )));
        }
        if counts[0] == 0 {
            return Err(Error::InvalidType("t_1 must be at least 1".into()));
        }
        let spec = Self {
            s,
            counts: counts.to_vec(),
        };
        // 2^{t+1} codewords must be countable.
        if spec.weighted_sum() > 63 {
            return Err(Error::InvalidType(format!(
                "type {spec} is too large to represent"
            )));
        }
        Ok(spec)
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// (t_1, …, t_s).
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// t_i with the paper-style 1-based index.
    pub fn count(&self, i: usize) -> u32 {
        self.counts[i - 1]
    }

    fn weighted_sum(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| (self.s as u64 - k as u64) * c as u64)
            .sum()
    }

    /// t = Σ (s - i + 1) t_i - 1; the binary length is 2^t.
    pub fn t(&self) -> u32 {
        (self.weighted_sum() - 1) as u32
    }

    /// Additive length n = 2^{t-s+1}.
    pub fn n(&self) -> usize {
        1usize << (self.t() + 1 - self.s)
    }

    /// Binary length N = 2^t.
    pub fn length(&self) -> usize {
        1usize << self.t()
    }

    /// log2 of the number of codewords, t + 1.
    pub fn log_cardinality(&self) -> u32 {
        self.t() + 1
    }

    /// τ = Σ t_i, the number of generator rows.
    pub fn tau(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn check_cap(&self, allow_large: bool) -> Result<()> {
        if !allow_large && self.t() > DEFAULT_MAX_T {
            return Err(Error::OverCap {
                t: self.t(),
                cap: DEFAULT_MAX_T,
            });
        }
        Ok(())
    }

    /// σ ∈ {1, …, s}: ord(w_2) = 2^{s+1-σ}. For (1,0,…,0), which has no
    /// second row, σ = s.
    pub fn sigma(&self) -> u32 {
        if self.counts[0] > 1 {
            return 1;
        }
        (2..=self.s as usize)
            .find(|&i| self.counts[i - 1] > 0)
            .map_or(self.s, |i| i as u32)
    }

    /// Comma-separated t_1,…,t_s.
    pub fn type_string(&self) -> String {
        self.counts
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for TypeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.type_string())
    }
}

/// Parses `t1,…,ts`; s is the tuple length.
impl FromStr for TypeSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let trimmed = text.trim().trim_start_matches('(').trim_end_matches(')');
        let counts = trimmed
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidType(format!("malformed type tuple {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        TypeSpec::new(counts.len() as u32, &counts)
    }
}

pub fn make_spec(s: u32, counts: &[u32]) -> Result<TypeSpec> {
    TypeSpec::new(s, counts)
}

/// All types (t_1,…,t_s) with t_1 ≥ 1 and Σ (s-i+1) t_i = t + 1, in
/// lexicographic order.
pub fn enumerate_type_specs(t: u32, s: u32) -> Vec<TypeSpec> {
    fn go(pos: usize, s: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let weight = (s - pos) as u32;
        if pos == s - 1 {
            cur.push(remaining);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        let min = if pos == 0 { 1 } else { 0 };
        for c in min..=remaining / weight {
            cur.push(c);
            go(pos + 1, s, remaining - c * weight, cur, out);
            cur.pop();
        }
    }
    if !(2..=ring::MAX_S).contains(&s) || t + 1 < s {
        return Vec::new();
    }
    let mut raw = Vec::new();
    go(0, s as usize, t + 1, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .filter_map(|c| TypeSpec::new(s, &c).ok())
        .collect()
}

/// Rows of a generator matrix over Z_{2^s}, with their orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    spec: TypeSpec,
    rows: Vec<ResidueVector>,
    row_orders: Vec<u64>,
}

/// Ring class index i (1-based) of each row after the first: row orders
/// 2^{s-i+1}, in build order.
fn row_classes(spec: &TypeSpec) -> Vec<u32> {
    let mut classes = Vec::with_capacity(spec.tau());
    for i in 1..=spec.s {
        let count = spec.count(i as usize) - u32::from(i == 1);
        classes.extend(std::iter::repeat_n(i, count as usize));
    }
    classes
}

impl GeneratorMatrix {
    fn from_rows(spec: TypeSpec, rows: Vec<ResidueVector>) -> Self {
        let row_orders = rows.iter().map(|r| r.order()).collect();
        Self {
            spec,
            rows,
            row_orders,
        }
    }

    pub fn spec(&self) -> &TypeSpec {
        &self.spec
    }

    pub fn rows(&self) -> &[ResidueVector] {
        &self.rows
    }

    pub fn row_orders(&self) -> &[u64] {
        &self.row_orders
    }

    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    /// Number of rows with order 2^{s-k+1}, for k = 1..s.
    pub fn order_census(&self) -> Vec<u32> {
        let s = self.spec.s;
        (1..=s)
            .map(|k| {
                let target = 1u64 << (s - k + 1);
                self.row_orders.iter().filter(|&&o| o == target).count() as u32
            })
            .collect()
    }

    /// The iterative step: replicate the matrix 2^{s-i+1} times and append
    /// the row (0·2^{i-1}, 1·2^{i-1}, …) in constant blocks. Rows are then
    /// stably re-sorted by nonincreasing order, producing a generator of
    /// the type with t_i increased by one.
    pub fn extend(&self, i: u32) -> Result<Self> {
        let s = self.spec.s;
        if !(1..=s).contains(&i) {
            return Err(Error::IndexOutOfRange {
                index: i as usize,
                limit: s as usize,
            });
        }
        let mut counts = self.spec.counts.clone();
        counts[i as usize - 1] += 1;
        let spec = TypeSpec::new(s, &counts)?;
        let copies = 1usize << (s - i + 1);
        let n = self.n();
        let mut rows: Vec<ResidueVector> = self.rows.iter().map(|r| r.replicate(copies)).collect();
        let step = 1u32 << (i - 1);
        let new_row: Vec<u32> = (0..copies)
            .flat_map(|j| std::iter::repeat_n(j as u32 * step, n))
            .collect();
        rows.push(ResidueVector::from_raw(new_row, s));
        let mut ordered: Vec<(usize, ResidueVector)> = rows.into_iter().enumerate().collect();
        ordered.sort_by_key(|(idx, r)| (std::cmp::Reverse(r.order()), *idx));
        Ok(Self::from_rows(
            spec,
            ordered.into_iter().map(|(_, r)| r).collect(),
        ))
    }

    /// Text layout: one row per line, residues separated by spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let line: Vec<String> = r.entries().iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Builds A^{t_1,…,t_s} by enumerating its columns directly.
pub fn generator_direct(spec: &TypeSpec) -> GeneratorMatrix {
    let s = spec.s;
    let classes = row_classes(spec);
    let radices: Vec<usize> = classes.iter().map(|&i| 1usize << (s - i + 1)).collect();
    let n: usize = radices.iter().product();
    debug_assert_eq!(n, spec.n());
    let mut rows = vec![ResidueVector::from_raw(vec![1; n], s)];
    let mut stride = 1usize;
    for (&i, &radix) in classes.iter().zip(&radices) {
        let step = 1u32 << (i - 1);
        let entries = (0..n)
            .map(|c| ((c / stride) % radix) as u32 * step)
            .collect();
        rows.push(ResidueVector::from_raw(entries, s));
        stride *= radix;
    }
    GeneratorMatrix::from_rows(spec.clone(), rows)
}

/// Builds A^{t_1,…,t_s} from A^{1,0,…,0} = (1) by repeated replication,
/// adding rows of order 2^s first and rows of order 2 last.
pub fn generator_recursive(spec: &TypeSpec) -> GeneratorMatrix {
    let s = spec.s;
    let mut base = vec![0u32; s as usize];
    base[0] = 1;
    let mut gen = GeneratorMatrix::from_rows(
        TypeSpec::new(s, &base).expect("base type is valid"),
        vec![ResidueVector::from_raw(vec![1], s)],
    );
    for i in row_classes(spec) {
        gen = gen.extend(i).expect("class index within 1..=s");
    }
    debug_assert_eq!(&gen.spec, spec);
    gen
}

/// The additive code generated by a [`GeneratorMatrix`].
#[derive(Debug, Clone)]
pub struct AdditiveCode {
    gen: GeneratorMatrix,
}

impl AdditiveCode {
    pub fn new(gen: GeneratorMatrix) -> Self {
        Self { gen }
    }

    pub fn from_spec(spec: &TypeSpec) -> Self {
        Self::new(generator_direct(spec))
    }

    pub fn generator(&self) -> &GeneratorMatrix {
        &self.gen
    }

    pub fn spec(&self) -> &TypeSpec {
        &self.gen.spec
    }

    /// Number of codewords, Π ord(w_i).
    pub fn size(&self) -> u64 {
        self.gen.row_orders.iter().product()
    }

    /// All codewords Σ λ_i w_i, λ_i ∈ [0, ord(w_i)), with λ counted as a
    /// mixed-radix number whose last coefficient varies fastest.
    pub fn codewords(&self) -> Codewords<'_> {
        self.codewords_range(0, self.size())
    }

    /// Codewords with mixed-radix index in `[start, end)`.
    pub fn codewords_range(&self, start: u64, end: u64) -> Codewords<'_> {
        let end = end.min(self.size());
        let mut digits = vec![0u64; self.gen.rows.len()];
        let mut rem = start;
        for (d, &o) in digits.iter_mut().zip(&self.gen.row_orders).rev() {
            *d = rem % o;
            rem /= o;
        }
        let current = if start < end {
            Some(self.combination(&digits))
        } else {
            None
        };
        Codewords {
            code: self,
            digits,
            current,
            remaining: end.saturating_sub(start),
        }
    }

    fn combination(&self, coeffs: &[u64]) -> ResidueVector {
        let mut acc = ResidueVector::from_raw(vec![0; self.gen.n()], self.gen.spec.s);
        for (row, &c) in self.gen.rows.iter().zip(coeffs) {
            if c != 0 {
                acc.add_assign_unchecked(&row.scale(c));
            }
        }
        acc
    }
}

/// Streaming iterator over codewords; see [`AdditiveCode::codewords`].
pub struct Codewords<'a> {
    code: &'a AdditiveCode,
    digits: Vec<u64>,
    current: Option<ResidueVector>,
    remaining: u64,
}

impl Iterator for Codewords<'_> {
    type Item = ResidueVector;

    fn next(&mut self) -> Option<ResidueVector> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let cur = self.current.as_mut()?;
        let out = cur.clone();
        if self.remaining > 0 {
            // A digit wrapping from ord-1 to 0 also adds its row once, since ord·w = 0.
            let rows = &self.code.gen.rows;
            let orders = &self.code.gen.row_orders;
            let mut i = rows.len();
            while i > 0 {
                i -= 1;
                cur.add_assign_unchecked(&rows[i]);
                self.digits[i] += 1;
                if self.digits[i] < orders[i] {
                    break;
                }
                self.digits[i] = 0;
            }
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

pub fn codewords(code: &AdditiveCode) -> Codewords<'_> {
    code.codewords()
}

pub fn sigma(spec: &TypeSpec) -> u32 {
    spec.sigma()
}

/// A binary code with an insertion-ordered hashed word set.
#[derive(Debug, Clone)]
pub struct BinaryCode {
    length: usize,
    words: IndexSet<BitVector>,
    difference_closed: bool,
}

impl BinaryCode {
    /// An arbitrary binary code. Duplicate words collapse.
    pub fn from_words(length: usize, words: impl IntoIterator<Item = BitVector>) -> Result<Self> {
        let mut set = IndexSet::new();
        for w in words {
            if w.len() != length {
                return Err(Error::Shape(format!(
                    "word of length {} in a code of length {length}",
                    w.len()
                )));
            }
            set.insert(w);
        }
        if set.is_empty() {
            return Err(Error::Shape("a code needs at least one word".into()));
        }
        Ok(Self {
            length,
            words: set,
            difference_closed: false,
        })
    }

    /// Marks the code as the Gray image of an additive code, for which the
    /// minimum distance equals the minimum nonzero weight.
    pub(crate) fn mark_additive_image(mut self) -> Self {
        self.difference_closed = true;
        self
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &IndexSet<BitVector> {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = &BitVector> {
        self.words.iter()
    }

    pub fn contains(&self, w: &BitVector) -> bool {
        self.words.contains(w)
    }

    pub fn contains_zero(&self) -> bool {
        self.words.contains(&BitVector::zeros(self.length))
    }

    pub fn is_additive_image(&self) -> bool {
        self.difference_closed
    }

    /// {a + c : c ∈ C}.
    pub fn translate(&self, a: &BitVector) -> Self {
        let words = self.words.iter().map(|w| w ^ a).collect();
        Self {
            length: self.length,
            words,
            difference_closed: false,
        }
    }

    /// {π(c) : c ∈ C}, where coordinate i moves to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let words = self.words.iter().map(|w| w.permuted(perm)).collect();
        Self {
            length: self.length,
            words,
            difference_closed: self.difference_closed,
        }
    }

    /// Set equality, ignoring word order.
    pub fn same_words(&self, other: &Self) -> bool {
        self.length == other.length
            && self.size() == other.size()
            && self.words.iter().all(|w| other.words.contains(w))
    }
}

/// Φ(𝓗) for an additive code, refusing t above the default cap.
pub fn gray_image(code: &AdditiveCode, table: &GrayTable) -> Result<BinaryCode> {
    code.spec().check_cap(false)?;
    gray_image_unbounded(code, table)
}

/// Φ(𝓗) without the size cap.
pub fn gray_image_unbounded(code: &AdditiveCode, table: &GrayTable) -> Result<BinaryCode> {
    if table.s() != code.spec().s() {
        return Err(Error::ModulusMismatch {
            left: code.spec().s(),
            right: table.s(),
        });
    }
    let length = code.gen.n() * table.block_len();
    let words = code.codewords().map(|c| table.phi_entries(c.entries()));
    Ok(BinaryCode::from_words(length, words)?.mark_additive_image())
}
