//! CSV and JSON emission of invariant records and classification rows.
//!
//! CSV columns are fixed: s, type, t, n, N, rank, kernel_dim, linear,
//! min_distance; classification rows append kernel_check.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use zhad::classify::ClassificationRow;
use zhad::invariants::{InvariantRecord, KernelCheck};
use zhad::TypeSpec;

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    s: u32,
    #[serde(rename = "type")]
    counts: String,
    t: u32,
    n: usize,
    #[serde(rename = "N")]
    length: usize,
    rank: usize,
    kernel_dim: u32,
    linear: bool,
    min_distance: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    kernel_check: Option<KernelCheck>,
}

impl CsvRow {
    fn spec(&self) -> Result<TypeSpec> {
        let spec: TypeSpec = self.counts.parse()?;
        anyhow::ensure!(
            spec.s() == self.s,
            "type {} does not have {} entries",
            self.counts,
            self.s
        );
        Ok(spec)
    }
}

fn to_csv(rows: impl IntoIterator<Item = CsvRow>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner().context("flushing CSV")?)?)
}

fn from_csv(text: &str) -> Result<Vec<CsvRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.context("malformed CSV row"))
        .collect()
}

pub fn records_to_csv(records: &[InvariantRecord]) -> Result<String> {
    to_csv(records.iter().map(|r| CsvRow {
        s: r.spec.s(),
        counts: r.spec.type_string(),
        t: r.t,
        n: r.n,
        length: r.length,
        rank: r.rank,
        kernel_dim: r.kernel_dim,
        linear: r.linear,
        min_distance: r.min_distance,
        kernel_check: None,
    }))
}

pub fn records_from_csv(text: &str) -> Result<Vec<InvariantRecord>> {
    from_csv(text)?
        .into_iter()
        .map(|r| {
            Ok(InvariantRecord {
                spec: r.spec()?,
                t: r.t,
                n: r.n,
                length: r.length,
                rank: r.rank,
                kernel_dim: r.kernel_dim,
                linear: r.linear,
                min_distance: r.min_distance,
            })
        })
        .collect()
}

pub fn rows_to_csv(rows: &[ClassificationRow]) -> Result<String> {
    to_csv(rows.iter().map(|r| CsvRow {
        s: r.spec.s(),
        counts: r.spec.type_string(),
        t: r.spec.t(),
        n: r.spec.n(),
        length: r.spec.length(),
        rank: r.rank,
        kernel_dim: r.kernel_dim,
        linear: r.linear,
        min_distance: r.min_distance,
        kernel_check: Some(r.kernel_check),
    }))
}

pub fn rows_from_csv(text: &str) -> Result<Vec<ClassificationRow>> {
    from_csv(text)?
        .into_iter()
        .map(|r| {
            let spec = r.spec()?;
            anyhow::ensure!(
                spec.t() == r.t && spec.n() == r.n && spec.length() == r.length,
                "derived parameters of {spec} disagree with the row"
            );
            Ok(ClassificationRow {
                spec,
                rank: r.rank,
                kernel_dim: r.kernel_dim,
                linear: r.linear,
                min_distance: r.min_distance,
                kernel_check: r.kernel_check.context("missing kernel_check column")?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_order() {
        let rec =
            zhad::invariants::compute_record(&TypeSpec::new(3, &[2, 0, 0]).unwrap(), false, false)
                .unwrap()
                .0;
        let text = records_to_csv(&[rec]).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("s,type,t,n,N,rank,kernel_dim,linear,min_distance")
        );
        assert_eq!(lines.next(), Some("3,\"2,0,0\",5,8,32,8,3,false,16"));
    }
}
