//! Incremental row reduction over GF(2).

use crate::bits::BitVector;

/// Row-reduced basis of a subspace of GF(2)^len.
///
/// Pivot rows are kept indexed by their lowest set bit; a pivot row never has
/// a bit set below its own pivot position.
#[derive(Debug, Clone)]
pub struct Gf2Basis {
    len: usize,
    pivots: Vec<Option<BitVector>>,
    rank: usize,
}

impl Gf2Basis {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            pivots: vec![None; len],
            rank: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_empty(&self) -> bool {
        self.rank == 0
    }

    /// Reduces `v` against the current pivots, returning the residue.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut v = v.clone();
        self.reduce_in_place(&mut v);
        v
    }

    fn reduce_in_place(&self, v: &mut BitVector) -> Option<usize> {
        let mut from = 0;
        loop {
            let lead = first_one_from(v, from)?;
            match &self.pivots[lead] {
                Some(p) => {
                    *v ^= p;
                    from = lead + 1;
                }
                None => return Some(lead),
            }
        }
    }

    /// Adds `v` to the spanning set; returns whether the rank grew.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        assert_eq!(v.len(), self.len);
        let mut v = v.clone();
        match self.reduce_in_place(&mut v) {
            Some(lead) => {
                self.pivots[lead] = Some(v);
                self.rank += 1;
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn rows(&self) -> impl Iterator<Item = &BitVector> {
        self.pivots.iter().flatten()
    }

    /// Every vector of the span, in Gray-code order over the pivot rows.
    pub fn span(&self) -> Vec<BitVector> {
        let rows: Vec<&BitVector> = self.rows().collect();
        let mut out = Vec::with_capacity(1 << rows.len());
        let mut cur = BitVector::zeros(self.len);
        out.push(cur.clone());
        for k in 1u64..(1u64 << rows.len()) {
            cur ^= rows[k.trailing_zeros() as usize];
            out.push(cur.clone());
        }
        out
    }
}

fn first_one_from(v: &BitVector, from: usize) -> Option<usize> {
    let words = v.words();
    let mut wi = from / 64;
    if wi >= words.len() {
        return None;
    }
    let mut w = words[wi] & (!0u64 << (from % 64));
    loop {
        if w != 0 {
            return Some(wi * 64 + w.trailing_zeros() as usize);
        }
        wi += 1;
        if wi >= words.len() {
            return None;
        }
        w = words[wi];
    }
}

/// GF(2) dimension of the span of `vectors`.
pub fn rank_of<'a>(len: usize, vectors: impl IntoIterator<Item = &'a BitVector>) -> usize {
    let mut basis = Gf2Basis::new(len);
    for v in vectors {
        basis.insert(v);
    }
    basis.rank()
}
