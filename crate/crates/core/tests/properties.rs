mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn normalize_is_idempotent(e in expr()) {
        normalize_idempotent(&e)?;
    }

    #[test]
    fn derivatives_are_leibniz_and_linear(a in poly(), b in poly(), c in small_rational()) {
        leibniz_linearity(&a, &b, &c)?;
    }

    #[test]
    fn total_derivatives_commute_on_jets(a in poly()) {
        total_derivatives_commute(&a)?;
    }

    #[test]
    fn jacobi_is_enforced_at_construction(
        lower in proptest::collection::vec(small_rational(), 10),
        diag in proptest::collection::vec(nonzero_rational(), 5),
        slot in (0usize..5, 0usize..5, 0usize..5),
        delta in nonzero_rational(),
    ) {
        jacobi_at_construction(&lower, &diag, slot, &delta)?;
    }

    #[test]
    fn solved_symmetries_close_under_brackets(a in rational_vector(6), b in rational_vector(6)) {
        bracket_closure(&a, &b)?;
    }

    #[test]
    fn normal_form_replays_and_is_idempotent(a in rational_vector(5)) {
        normal_form_replay(&a)?;
    }

    #[test]
    fn invariant_components_survive_adjoint_chains(
        a in rational_vector(5),
        steps in proptest::collection::vec((0usize..5, small_rational()), 1..20),
    ) {
        fingerprint_invariance(&a, &steps)?;
    }
}
