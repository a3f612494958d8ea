//! Search for a translation and coordinate permutation carrying one binary
//! code onto another.
//!
//! Translations are tried up to cosets of the target's kernel. For each one
//! the word/coordinate incidence structures of both codes are refined
//! jointly (colors are canonical across the pair), then coordinates are
//! individualized one at a time with full backtracking. A discrete
//! coordinate coloring fixes the permutation, which is checked word by word.

use std::collections::HashSet;
use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::hadamard::BinaryCode;
use crate::invariants::{kernel_bruteforce, rank};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Refinement calls allowed across all translations.
    pub max_nodes: u64,
    pub time_limit: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_nodes: 200_000,
            time_limit: Some(Duration::from_secs(60)),
        }
    }
}

impl Budget {
    pub fn extended() -> Self {
        Self {
            max_nodes: 5_000_000,
            time_limit: Some(Duration::from_secs(900)),
        }
    }

    pub fn with_time_limit(ms: u64) -> Self {
        Self {
            time_limit: Some(Duration::from_millis(ms)),
            ..Self::default()
        }
    }
}

/// B = a + π(A), where coordinate i of A moves to `permutation[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "hex_word")]
    pub translation: BitVector,
    pub permutation: Vec<usize>,
}

impl Witness {
    pub fn identity(len: usize) -> Self {
        Self {
            translation: BitVector::zeros(len),
            permutation: (0..len).collect(),
        }
    }

    pub fn apply(&self, code: &BinaryCode) -> BinaryCode {
        code.permute(&self.permutation).translate(&self.translation)
    }
}

mod hex_word {
    use super::BitVector;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        len: usize,
        hex: String,
    }

    pub fn serialize<S: Serializer>(v: &BitVector, s: S) -> Result<S::Ok, S::Error> {
        Repr {
            len: v.len(),
            hex: v.to_hex(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BitVector, D::Error> {
        let r = Repr::deserialize(d)?;
        BitVector::from_hex(&r.hex, r.len).map_err(serde::de::Error::custom)
    }
}

/// Replays a witness; true iff it maps `a` exactly onto `b`.
pub fn verify_witness(a: &BinaryCode, b: &BinaryCode, w: &Witness) -> bool {
    let n = a.length();
    if b.length() != n || w.translation.len() != n || w.permutation.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &j in &w.permutation {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return false;
        }
    }
    w.apply(a).same_words(b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "invariant", rename_all = "snake_case")]
pub enum SeparatingInvariant {
    Length {
        a: usize,
        b: usize,
    },
    Size {
        a: usize,
        b: usize,
    },
    KernelDim {
        a: u32,
        b: u32,
    },
    Rank {
        a: usize,
        b: usize,
    },
    /// Multisets of per-word distance distributions differ.
    DistanceProfile,
    /// Every translation and permutation branch was refuted.
    ExhaustiveSearch,
}

impl fmt::Display for SeparatingInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Length { a, b } => write!(f, "length {a} vs {b}"),
            Self::Size { a, b } => write!(f, "size {a} vs {b}"),
            Self::KernelDim { a, b } => write!(f, "kernel dimension {a} vs {b}"),
            Self::Rank { a, b } => write!(f, "rank {a} vs {b}"),
            Self::DistanceProfile => f.write_str("distance distribution profile"),
            Self::ExhaustiveSearch => f.write_str("exhaustive search"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum EquivalenceVerdict {
    Equivalent { witness: Witness },
    Inequivalent { separated_by: SeparatingInvariant },
    Unknown { nodes: u64 },
}

impl EquivalenceVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Equivalent { .. } => "equivalent",
            Self::Inequivalent { .. } => "inequivalent",
            Self::Unknown { .. } => "unknown",
        }
    }
}

fn distance_profile(code: &BinaryCode) -> Vec<Vec<usize>> {
    let words: Vec<&BitVector> = code.iter().collect();
    let n = code.length();
    let mut profile: Vec<Vec<usize>> = words
        .par_iter()
        .map(|x| {
            let mut hist = vec![0usize; n + 1];
            for y in &words {
                hist[x.distance(y)] += 1;
            }
            hist
        })
        .collect();
    profile.sort_unstable();
    profile
}

/// Coset representatives of `kernel` in `code`, the zero coset first.
fn coset_reps(code: &BinaryCode, kernel: &BinaryCode) -> Vec<BitVector> {
    let mut covered: HashSet<BitVector> = HashSet::with_capacity(code.size());
    let mut reps = vec![BitVector::zeros(code.length())];
    covered.extend(kernel.iter().cloned());
    for w in code.iter() {
        if covered.contains(w) {
            continue;
        }
        for k in kernel.iter() {
            covered.insert(w ^ k);
        }
        reps.push(w.clone());
    }
    reps
}

pub fn equivalence_search(
    a: &BinaryCode,
    b: &BinaryCode,
    budget: &Budget,
) -> Result<EquivalenceVerdict> {
    let inequivalent = |separated_by| Ok(EquivalenceVerdict::Inequivalent { separated_by });
    if a.length() != b.length() {
        return inequivalent(SeparatingInvariant::Length {
            a: a.length(),
            b: b.length(),
        });
    }
    if a.size() != b.size() {
        return inequivalent(SeparatingInvariant::Size {
            a: a.size(),
            b: b.size(),
        });
    }
    if !a.contains_zero() || !b.contains_zero() {
        return Err(Error::Precondition(
            "equivalence search needs the zero word in both codes".into(),
        ));
    }
    if a.same_words(b) {
        return Ok(EquivalenceVerdict::Equivalent {
            witness: Witness::identity(a.length()),
        });
    }
    let (ka, kb) = (kernel_bruteforce(a)?, kernel_bruteforce(b)?);
    let (da, db) = (ka.size().trailing_zeros(), kb.size().trailing_zeros());
    if da != db {
        return inequivalent(SeparatingInvariant::KernelDim { a: da, b: db });
    }
    let (ra, rb) = (rank(a), rank(b));
    if ra != rb {
        return inequivalent(SeparatingInvariant::Rank { a: ra, b: rb });
    }
    if distance_profile(a) != distance_profile(b) {
        return inequivalent(SeparatingInvariant::DistanceProfile);
    }

    let deadline = budget.time_limit.map(|d| Instant::now() + d);
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let side_a = Side::new(a);
    let outcomes: Vec<(BitVector, Outcome)> = coset_reps(b, &kb)
        .into_par_iter()
        .map(|shift| {
            let target = b.translate(&shift);
            let ctx = Ctx {
                a: &side_a,
                b: &Side::new(&target),
                target: &target,
                nodes: &nodes,
                stop: &stop,
                budget,
                deadline,
            };
            let outcome = ctx.run();
            if matches!(outcome, Outcome::Found(_)) {
                stop.store(true, Ordering::Relaxed);
            }
            (shift, outcome)
        })
        .collect();

    let mut exhausted = true;
    for (shift, outcome) in outcomes {
        match outcome {
            Outcome::Found(permutation) => {
                let witness = Witness {
                    translation: shift,
                    permutation,
                };
                if verify_witness(a, b, &witness) {
                    return Ok(EquivalenceVerdict::Equivalent { witness });
                }
                exhausted = false;
            }
            Outcome::Aborted => exhausted = false,
            Outcome::Exhausted => {}
        }
    }
    if exhausted {
        inequivalent(SeparatingInvariant::ExhaustiveSearch)
    } else {
        Ok(EquivalenceVerdict::Unknown {
            nodes: nodes.load(Ordering::Relaxed),
        })
    }
}

/// Word/coordinate incidence of one code.
struct Side {
    rows: Vec<BitVector>,
    cols: Vec<BitVector>,
    /// Per word: weight and |C ∩ (C + w)|.
    word_seed: Vec<[u32; 2]>,
}

impl Side {
    fn new(code: &BinaryCode) -> Self {
        let rows: Vec<BitVector> = code.iter().cloned().collect();
        let cols = (0..code.length())
            .map(|j| BitVector::from_fn(rows.len(), |w| rows[w].get(j)))
            .collect();
        let word_seed = rows
            .par_iter()
            .map(|w| {
                let overlap = rows.iter().filter(|x| code.contains(&(*x ^ w))).count();
                [w.weight() as u32, overlap as u32]
            })
            .collect();
        Self {
            rows,
            cols,
            word_seed,
        }
    }
}

#[derive(Clone)]
struct Coloring {
    words: Vec<u32>,
    coords: Vec<u32>,
}

enum Outcome {
    Found(Vec<usize>),
    Exhausted,
    Aborted,
}

/// Gives equal signatures on either side the same dense color, ordered by
/// signature. None if some color class has different sizes on the two sides.
fn relabel(sa: &[Vec<u32>], sb: &[Vec<u32>]) -> Option<(Vec<u32>, Vec<u32>, usize)> {
    let mut all: Vec<&Vec<u32>> = sa.iter().chain(sb).collect();
    all.sort_unstable();
    all.dedup();
    let id = |s: &Vec<u32>| all.binary_search(&s).expect("signature present") as u32;
    let ca: Vec<u32> = sa.iter().map(id).collect();
    let cb: Vec<u32> = sb.iter().map(id).collect();
    let mut balance = vec![0i64; all.len()];
    for &c in &ca {
        balance[c as usize] += 1;
    }
    for &c in &cb {
        balance[c as usize] -= 1;
    }
    balance
        .iter()
        .all(|&x| x == 0)
        .then_some((ca, cb, all.len()))
}

fn class_masks(colors: &[u32], classes: usize) -> Vec<BitVector> {
    let mut masks = vec![BitVector::zeros(colors.len()); classes];
    for (i, &c) in colors.iter().enumerate() {
        masks[c as usize].set(i, true);
    }
    masks
}

fn signatures(own: &[u32], incidence: &[BitVector], masks: &[BitVector]) -> Vec<Vec<u32>> {
    own.iter()
        .zip(incidence)
        .map(|(&c, v)| {
            std::iter::once(c)
                .chain(masks.iter().map(|m| v.and_count(m) as u32))
                .collect()
        })
        .collect()
}

fn color_count(colors: &[u32]) -> usize {
    colors.iter().max().map_or(0, |&m| m as usize + 1)
}

struct Ctx<'a> {
    a: &'a Side,
    b: &'a Side,
    target: &'a BinaryCode,
    nodes: &'a AtomicU64,
    stop: &'a AtomicBool,
    budget: &'a Budget,
    deadline: Option<Instant>,
}

impl Ctx<'_> {
    fn out_of_budget(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
            || self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget.max_nodes
            || self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn run(&self) -> Outcome {
        let seed = |s: &Side| s.word_seed.iter().map(|x| x.to_vec()).collect::<Vec<_>>();
        let Some((wa, wb, _)) = relabel(&seed(self.a), &seed(self.b)) else {
            return Outcome::Exhausted;
        };
        let n = self.a.cols.len();
        let mut ca = Coloring {
            words: wa,
            coords: vec![0; n],
        };
        let mut cb = Coloring {
            words: wb,
            coords: vec![0; n],
        };
        if self.out_of_budget() {
            return Outcome::Aborted;
        }
        if !self.refine(&mut ca, &mut cb) {
            return Outcome::Exhausted;
        }
        self.search(&ca, &cb)
    }

    /// Joint colour refinement to a stable partition; false on a mismatch.
    fn refine(&self, ca: &mut Coloring, cb: &mut Coloring) -> bool {
        let mut kw = color_count(&ca.words);
        let mut kc = color_count(&ca.coords);
        loop {
            let (ma, mb) = (class_masks(&ca.words, kw), class_masks(&cb.words, kw));
            let Some((xa, xb, new_kc)) = relabel(
                &signatures(&ca.coords, &self.a.cols, &ma),
                &signatures(&cb.coords, &self.b.cols, &mb),
            ) else {
                return false;
            };
            ca.coords = xa;
            cb.coords = xb;
            let (ma, mb) = (
                class_masks(&ca.coords, new_kc),
                class_masks(&cb.coords, new_kc),
            );
            let Some((ya, yb, new_kw)) = relabel(
                &signatures(&ca.words, &self.a.rows, &ma),
                &signatures(&cb.words, &self.b.rows, &mb),
            ) else {
                return false;
            };
            ca.words = ya;
            cb.words = yb;
            if new_kc == kc && new_kw == kw {
                return true;
            }
            kc = new_kc;
            kw = new_kw;
        }
    }

    fn search(&self, ca: &Coloring, cb: &Coloring) -> Outcome {
        let k = color_count(&ca.coords);
        let mut sizes = vec![0usize; k];
        for &c in &ca.coords {
            sizes[c as usize] += 1;
        }
        let target = (0..k).filter(|&c| sizes[c] > 1).min_by_key(|&c| sizes[c]);
        let Some(target) = target.map(|c| c as u32) else {
            return self.leaf(ca, cb);
        };
        let ja = ca
            .coords
            .iter()
            .position(|&c| c == target)
            .expect("cell is nonempty");
        for jb in (0..cb.coords.len()).filter(|&j| cb.coords[j] == target) {
            if self.out_of_budget() {
                return Outcome::Aborted;
            }
            let (mut na, mut nb) = (ca.clone(), cb.clone());
            na.coords[ja] = k as u32;
            nb.coords[jb] = k as u32;
            if !self.refine(&mut na, &mut nb) {
                continue;
            }
            match self.search(&na, &nb) {
                Outcome::Exhausted => {}
                done => return done,
            }
        }
        Outcome::Exhausted
    }

    fn leaf(&self, ca: &Coloring, cb: &Coloring) -> Outcome {
        let mut where_b = vec![0usize; cb.coords.len()];
        for (j, &c) in cb.coords.iter().enumerate() {
            where_b[c as usize] = j;
        }
        let perm: Vec<usize> = ca.coords.iter().map(|&c| where_b[c as usize]).collect();
        if self
            .a
            .rows
            .iter()
            .all(|w| self.target.contains(&w.permuted(&perm)))
        {
            Outcome::Found(perm)
        } else {
            Outcome::Exhausted
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graymap::GrayTable;
    use crate::hadamard::{gray_image, AdditiveCode, TypeSpec};

    fn image(s: u32, c: &[u32]) -> BinaryCode {
        let spec = TypeSpec::new(s, c).unwrap();
        gray_image(
            &AdditiveCode::from_spec(&spec),
            &GrayTable::build(s).unwrap(),
        )
        .unwrap()
    }

    fn words(len: usize, ws: &[&str]) -> BinaryCode {
        assert!(ws.iter().all(|w| w.len() == len));
        BinaryCode::from_words(len, ws.iter().map(|w| BitVector::parse_binary(w).unwrap())).unwrap()
    }

    #[test]
    fn identical_codes_give_identity() {
        let c = image(3, &[2, 0, 0]);
        let v = equivalence_search(&c, &c, &Budget::default()).unwrap();
        assert_eq!(
            v,
            EquivalenceVerdict::Equivalent {
                witness: Witness::identity(32)
            }
        );
    }

    #[test]
    fn finds_hidden_translation_and_permutation() {
        let a = image(3, &[2, 0, 0]);
        let n = a.length();
        let perm: Vec<usize> = (0..n).map(|i| (i * 7 + 3) % n).collect();
        let shift = a.iter().nth(37).unwrap().permuted(&perm);
        let b = Witness {
            translation: shift,
            permutation: perm,
        }
        .apply(&a);
        match equivalence_search(&a, &b, &Budget::default()).unwrap() {
            EquivalenceVerdict::Equivalent { witness } => assert!(verify_witness(&a, &b, &witness)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn separates_by_kernel() {
        let v = equivalence_search(
            &image(2, &[3, 0]),
            &image(3, &[2, 0, 0]),
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(
            v,
            EquivalenceVerdict::Inequivalent {
                separated_by: SeparatingInvariant::KernelDim { a: 4, b: 3 }
            }
        );
    }

    #[test]
    fn small_exhaustive_refutation() {
        // Equal size, kernel, rank and distance profile; inequivalent by a
        // brute-force check over all translations and permutations.
        let a = words(5, &["00000", "11000", "10100", "01110"]);
        let b = words(5, &["00000", "11000", "10100", "10011"]);
        let v = equivalence_search(&a, &b, &Budget::default()).unwrap();
        assert_eq!(
            v,
            EquivalenceVerdict::Inequivalent {
                separated_by: SeparatingInvariant::ExhaustiveSearch
            }
        );
    }

    #[test]
    fn shape_mismatches() {
        let a = words(2, &["00", "11"]);
        let b = words(3, &["000", "111"]);
        assert!(matches!(
            equivalence_search(&a, &b, &Budget::default()).unwrap(),
            EquivalenceVerdict::Inequivalent {
                separated_by: SeparatingInvariant::Length { .. }
            }
        ));
        let c = words(2, &["00", "11", "01"]);
        assert!(matches!(
            equivalence_search(&a, &c, &Budget::default()).unwrap(),
            EquivalenceVerdict::Inequivalent {
                separated_by: SeparatingInvariant::Size { .. }
            }
        ));
        let no_zero = words(2, &["10", "11"]);
        assert!(equivalence_search(&a, &no_zero, &Budget::default()).is_err());
    }

    #[test]
    fn witness_validation() {
        let a = words(3, &["000", "110"]);
        let b = words(3, &["000", "011"]);
        let good = Witness {
            translation: BitVector::zeros(3),
            permutation: vec![1, 2, 0],
        };
        assert!(verify_witness(&a, &b, &good));
        let not_perm = Witness {
            translation: BitVector::zeros(3),
            permutation: vec![1, 1, 0],
        };
        assert!(!verify_witness(&a, &b, &not_perm));
        assert!(!verify_witness(&a, &b, &Witness::identity(3)));
    }
}
