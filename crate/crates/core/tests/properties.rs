use proptest::prelude::*;

use zhad::graymap::GrayTable;
use zhad::hadamard::{
    enumerate_type_specs, generator_direct, generator_recursive, AdditiveCode, TypeSpec,
};
use zhad::invariants::{is_linear_theorem, kernel_dim_theorem, rank_and_min_weight};
use zhad::ResidueVector;

fn residue_pair(max_s: u32, max_n: usize) -> impl Strategy<Value = (u32, Vec<u32>, Vec<u32>)> {
    (1..=max_s, 1..=max_n).prop_flat_map(|(s, n)| {
        let m = 1u32 << s;
        (
            Just(s),
            prop::collection::vec(0..m, n),
            prop::collection::vec(0..m, n),
        )
    })
}

fn small_spec() -> impl Strategy<Value = TypeSpec> {
    (3u32..=7, 2u32..=6)
        .prop_filter("grid must be nonempty", |&(t, s)| {
            !enumerate_type_specs(t, s).is_empty()
        })
        .prop_flat_map(|(t, s)| {
            let specs = enumerate_type_specs(t, s);
            (0..specs.len()).prop_map(move |i| specs[i].clone())
        })
}

proptest! {
    #[test]
    fn gray_map_is_an_isometry((s, u, v) in residue_pair(6, 12)) {
        let table = GrayTable::build(s).unwrap();
        let u = ResidueVector::new(u, s).unwrap();
        let v = ResidueVector::new(v, s).unwrap();
        let d = table.phi_vec(&u).unwrap().distance(&table.phi_vec(&v).unwrap());
        prop_assert_eq!(d, table.phi_vec(&u.sub(&v).unwrap()).unwrap().weight());
        let back = table.phi_inverse(&table.phi_vec(&u).unwrap()).unwrap();
        prop_assert_eq!(back, Some(u));
    }

    #[test]
    fn residue_vector_arithmetic((s, u, v) in residue_pair(8, 16)) {
        let u = ResidueVector::new(u, s).unwrap();
        let v = ResidueVector::new(v, s).unwrap();
        prop_assert_eq!(u.add(&v).unwrap(), v.add(&u).unwrap());
        prop_assert_eq!(u.add(&v).unwrap().sub(&v).unwrap(), u.clone());
        prop_assert!(u.scale(u.order()).is_zero());
    }

    #[test]
    fn constructions_agree(spec in small_spec()) {
        prop_assert_eq!(generator_direct(&spec), generator_recursive(&spec));
    }

    #[test]
    fn linear_types_have_full_kernel_and_minimal_rank(spec in small_spec()) {
        let table = GrayTable::build(spec.s()).unwrap();
        let (rank, d) = rank_and_min_weight(&AdditiveCode::from_spec(&spec), &table).unwrap();
        let t = spec.t() as usize;
        prop_assert_eq!(d, Some(1usize << (t - 1)));
        if is_linear_theorem(&spec) {
            prop_assert_eq!(rank, t + 1);
            prop_assert_eq!(kernel_dim_theorem(&spec) as usize, t + 1);
        } else {
            prop_assert!(rank > t + 1);
            prop_assert!((kernel_dim_theorem(&spec) as usize) < t + 1);
        }
    }
}
