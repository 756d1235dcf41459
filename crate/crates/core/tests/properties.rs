mod common;

use common::*;
use proptest::prelude::*;
use walks_core::kernel_pipeline::{solve, SolveOptions};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn invert_is_a_two_sided_inverse(f in unit_led()) {
        invert_law(&f)?;
    }

    #[test]
    fn sqrt_recovers_a_square(g in unit_led()) {
        sqrt_law(&g)?;
    }

    #[test]
    fn x_parts_partition(f in any_series()) {
        x_part_law(&f)?;
    }

    #[test]
    fn ramification_unifies(a in any_series(), b in any_series(), m in 1u32..=3) {
        ramification_law(&a, &b, m)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kernel_fixed_by_the_group(m in model()) {
        group_law(&m)?;
    }

    #[test]
    fn null_vectors_annihilate(m in model()) {
        null_vector_law(&m)?;
    }

    #[test]
    fn enumeration_satisfies_the_functional_equation(m in model()) {
        enumeration_residual_law(&m)?;
    }
}

#[test]
fn solutions_satisfy_the_functional_equation() {
    for name in MODELS {
        for w in [("2", "3", "5"), ("1/2", "3", "2"), ("1", "1", "1")] {
            let sol = solve(&model_at(name, w), &SolveOptions::new(12)).unwrap();
            let res = solution_residual(&sol, 12);
            assert!(res.is_zero(), "{name} {w:?}: {res}");
        }
    }
}
