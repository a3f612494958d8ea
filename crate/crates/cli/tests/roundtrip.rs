use proptest::prelude::*;
use tempfile::tempdir;

use zhad::classify::classify_fixed;
use zhad::hadamard::enumerate_type_specs;
use zhad::invariants::compute_record;
use zhad::TypeSpec;
use zhad_cli::cache::ResultsCache;
use zhad_cli::format::{records_from_csv, records_to_csv, rows_from_csv, rows_to_csv};

fn spec_strategy() -> impl Strategy<Value = TypeSpec> {
    (3u32..=7, 2u32..=5)
        .prop_filter("nonempty grid", |&(t, s)| {
            !enumerate_type_specs(t, s).is_empty()
        })
        .prop_flat_map(|(t, s)| {
            let specs = enumerate_type_specs(t, s);
            (0..specs.len()).prop_map(move |i| specs[i].clone())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn invariant_records_round_trip(spec in spec_strategy()) {
        let (rec, _) = compute_record(&spec, false, false).unwrap();
        let json = serde_json::to_string(&rec).unwrap();
        prop_assert_eq!(&serde_json::from_str::<zhad::invariants::InvariantRecord>(&json).unwrap(), &rec);
        let csv = records_to_csv(std::slice::from_ref(&rec)).unwrap();
        prop_assert_eq!(records_from_csv(&csv).unwrap(), vec![rec]);
    }
}

#[test]
fn classification_rows_round_trip() {
    for (t, s) in [(6, 3), (7, 4), (5, 2)] {
        let rows = classify_fixed(t, s, true, false).unwrap();
        assert_eq!(rows_from_csv(&rows_to_csv(&rows).unwrap()).unwrap(), rows);
        let json = serde_json::to_string(&rows).unwrap();
        assert_eq!(
            serde_json::from_str::<Vec<zhad::classify::ClassificationRow>>(&json).unwrap(),
            rows
        );
    }
}

#[test]
fn malformed_csv_is_rejected() {
    let header = "s,type,t,n,N,rank,kernel_dim,linear,min_distance\n";
    assert!(records_from_csv(&format!("{header}3,\"2,0\",5,8,32,8,3,false,16\n")).is_err());
    assert!(records_from_csv(&format!("{header}3,\"2,0,0\",5,8,32,8,3,maybe,16\n")).is_err());
}

#[test]
fn cache_hits_equal_recomputation() {
    let dir = tempdir().unwrap();
    let cache = ResultsCache::new(dir.path().join("cache.jsonl"));
    let spec = TypeSpec::new(4, &[1, 1, 0, 1]).unwrap();
    assert!(cache.lookup(&spec).unwrap().is_none());
    let (rec, _) = compute_record(&spec, false, false).unwrap();
    cache.append(&rec, 1.5).unwrap();
    let other = TypeSpec::new(3, &[2, 0, 0]).unwrap();
    cache
        .append(&compute_record(&other, false, false).unwrap().0, 0.5)
        .unwrap();
    let hit = cache.lookup(&spec).unwrap().unwrap();
    assert_eq!(hit, compute_record(&spec, false, false).unwrap().0);
    assert_eq!(cache.entries().unwrap().len(), 2);
    std::fs::write(cache.path(), "not json\n").unwrap();
    assert!(cache.entries().unwrap().is_empty());
}

#[test]
fn cli_uses_cache_file() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let run = || {
        std::process::Command::new(env!("CARGO_BIN_EXE_zhad"))
            .args(["invariants", "--type", "2,0,0"])
            .env("ZHAD_CACHE", &path)
            .output()
            .unwrap()
    };
    let first = run();
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    let lines = std::fs::read_to_string(&path).unwrap();
    assert_eq!(lines.lines().count(), 1);
}
