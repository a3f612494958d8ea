//! Published rank/kernel pairs, counts A_{t,s} and bounds on A_t, shipped
//! as an embedded JSON resource.

use serde::{Deserialize, Serialize};
use zhad::classify::BoundsRecord;

pub const EXPECTED_JSON: &str = include_str!("../data/expected_tables.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedPair {
    pub t: u32,
    pub s: u32,
    #[serde(rename = "type")]
    pub counts: Vec<u32>,
    pub rank: usize,
    pub kernel_dim: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedCount {
    pub t: u32,
    pub s: u32,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedTables {
    pub version: u32,
    pub pairs: Vec<ExpectedPair>,
    pub counts: Vec<ExpectedCount>,
    pub bounds: Vec<BoundsRecord>,
}

impl ExpectedTables {
    pub fn embedded() -> Self {
        serde_json::from_str(EXPECTED_JSON).expect("embedded expected tables are valid JSON")
    }

    pub fn pair(&self, t: u32, s: u32, counts: &[u32]) -> Option<(usize, u32)> {
        self.pairs
            .iter()
            .find(|p| p.t == t && p.s == s && p.counts == counts)
            .map(|p| (p.rank, p.kernel_dim))
    }

    pub fn pairs_for(&self, t: u32) -> impl Iterator<Item = &ExpectedPair> {
        self.pairs.iter().filter(move |p| p.t == t)
    }

    pub fn count(&self, t: u32, s: u32) -> Option<u64> {
        self.counts
            .iter()
            .find(|c| c.t == t && c.s == s)
            .map(|c| c.value)
    }

    pub fn bounds(&self, t: u32) -> Option<BoundsRecord> {
        self.bounds.iter().find(|b| b.t == t).copied()
    }

    /// t values with published rank/kernel pairs.
    pub fn pair_t_range(&self) -> std::ops::RangeInclusive<u32> {
        let lo = self.pairs.iter().map(|p| p.t).min().unwrap_or(0);
        let hi = self.pairs.iter().map(|p| p.t).max().unwrap_or(0);
        lo..=hi
    }
}
