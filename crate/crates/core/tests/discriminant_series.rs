mod common;

use common::*;
use walks_core::walk_oracle::ModelName;

fn check(name: ModelName, small: usize, large: usize) {
    let f = unit_factorization(name);
    assert!(f.residual().is_zero());
    assert_eq!((f.small_roots.len(), f.large_roots.len()), (small, large));
    for (label, got, want) in printed_series(name) {
        if let Some(m) = series_mismatch(&got, &want) {
            panic!("{name} {label}: {m}");
        }
    }
}

#[test]
fn reverse_kreweras_delta_roots() {
    check(ModelName::ReverseKreweras, 1, 2);
}

#[test]
fn kreweras_delta_roots() {
    check(ModelName::Kreweras, 2, 1);
}
