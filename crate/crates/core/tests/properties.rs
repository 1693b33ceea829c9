mod common;

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ansatz_identity_holds(seed in any::<u64>()) {
        prop_assert_eq!(common::ansatz_identity(seed), Ok(()));
    }

    #[test]
    fn shifted_sum_matches_ansatz(seed in any::<u64>()) {
        prop_assert_eq!(common::shifted_sum_equivalence(seed), Ok(()));
    }

    #[test]
    fn project_inverts_lift(seed in any::<u64>()) {
        prop_assert_eq!(common::lift_project_round_trip(seed), Ok(()));
    }

    #[test]
    fn smith_certificates(seed in any::<u64>()) {
        prop_assert_eq!(common::smith_certificate(seed), Ok(()));
    }

    #[test]
    fn pencil_index_sum(seed in any::<u64>()) {
        prop_assert_eq!(common::index_sum_consistency(seed), Ok(()));
    }
}
