mod common;

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn reorder_places_the_given_order(seed in any::<u64>()) {
        common::reorder_case(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn combine_merges_both_sides(seed in any::<u64>()) {
        common::combine_case(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn reverse_undoes_and_is_an_involution(seed in any::<u64>()) {
        common::reverse_case(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn check_modes_agree(seed in any::<u64>()) {
        common::check_modes_case(seed).map_err(TestCaseError::fail)?;
    }
}
