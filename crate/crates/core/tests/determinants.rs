mod common;

use common::*;
use walks_core::exact_series::{rat, Rational};
use walks_core::kernel_pipeline::{solve, DeterminantReport, SolveOptions};
use walks_core::walk_oracle::ModelName;

fn find<'a>(dets: &'a [DeterminantReport], labels: &[usize]) -> &'a DeterminantReport {
    dets.iter().find(|d| d.labels == labels).unwrap_or_else(|| panic!("no determinant for {labels:?}"))
}

fn abc() -> (Rational, Rational, Rational) {
    (rat(3, 1), rat(2, 1), rat(5, 1))
}

#[test]
fn reverse_kreweras_triples_at_3_2_5() {
    let sol = solve(&model_at(ModelName::ReverseKreweras, ("3", "2", "5")), &SolveOptions::new(15)).unwrap();
    let dets = &sol.report.determinants;
    assert!(find(dets, &[1, 3, 5]).is_singular());
    let (a, b, c) = abc();
    let expected = reverse_kreweras_triples(&a, &b, &c);
    assert_eq!(expected[0].1, rat(15552000, 1));
    for (labels, want) in expected {
        assert_eq!(find(dets, &labels).leading, Some((rat(10, 1), want)), "{labels:?}");
    }
    assert_eq!(sol.report.chosen, vec![1, 3, 7]);
}

#[test]
fn kreweras_quadruples_at_3_2_5() {
    let sol = solve(&model_at(ModelName::Kreweras, ("3", "2", "5")), &SolveOptions::new(15)).unwrap();
    let rep = &sol.report;
    assert!(!rep.before_injection.is_empty());
    assert!(rep.before_injection.iter().all(|d| d.is_singular()), "{:?}", rep.before_injection);
    let (a, b, c) = abc();
    let want = kreweras_quadruple(&a, &b, &c);
    assert_eq!(want, rat(282293061120000, 1));
    assert_eq!(find(&rep.determinants, &[1, 3, 5, 7]).leading, Some((rat(26, 1), want)));
    assert_eq!(rep.chosen, vec![1, 3, 5, 7]);
}
