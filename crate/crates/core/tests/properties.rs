//! Properties over representations read off random planar drawings, so a
//! realization is known in advance.

mod common;

use octi::compact::compact_xp;
use octi::corpus::{canonical_code, transform_rep, Symmetry};
use octi::flow::{drawing_from_lengths, solve_realization};
use octi::rep::is_convex;
use octi::shadow::{build_shadow, lift_drawing, realize_fpt};
use octi::{bbox_area, compute_params, derive_faces, parse_rep, serialize_rep, validate_drawing, validate_rep};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, max_global_rejects: 20_000, ..ProptestConfig::default() })]

    #[test]
    fn text_format_round_trips(seed in any::<u64>()) {
        let (rep, _) = common::random_rep(&mut common::rng(seed), 6, 20);
        prop_assert_eq!(parse_rep(&serialize_rep(&rep)).unwrap(), rep);
    }

    #[test]
    fn scaled_drawings_stay_valid(seed in any::<u64>(), k in 1i64..5) {
        let (rep, drw) = common::random_rep(&mut common::rng(seed), 6, 20);
        prop_assert!(validate_drawing(&rep, &drw.scaled(k)).is_empty());
    }

    #[test]
    fn symmetries_keep_params_and_canonical_code(seed in any::<u64>(), s in 0u8..8) {
        let (rep, _) = common::random_rep(&mut common::rng(seed), 5, 14);
        let sym = Symmetry { reflect: s >= 4, quarter_turns: s % 4 };
        let moved = transform_rep(&rep, sym);
        prop_assert!(validate_rep(&moved).is_empty());
        prop_assert_eq!(compute_params(&moved).unwrap(), compute_params(&rep).unwrap());
        prop_assert_eq!(canonical_code(&moved), canonical_code(&rep));
    }

    #[test]
    fn convex_inputs_are_flow_feasible(seed in any::<u64>()) {
        let (rep, _) = common::random_rep(&mut common::rng(seed), 3, 10);
        let faces = derive_faces(&rep).unwrap();
        prop_assume!(is_convex(&rep, &faces));
        let lens = solve_realization(&rep).unwrap();
        prop_assert!(validate_drawing(&rep, &drawing_from_lengths(&rep, &lens).unwrap()).is_empty());
    }

    #[test]
    fn compaction_never_loses_to_a_known_drawing(seed in any::<u64>()) {
        let (rep, drw) = common::random_rep(&mut common::rng(seed), 3, 10);
        let faces = derive_faces(&rep).unwrap();
        prop_assume!(is_convex(&rep, &faces));
        prop_assume!(compute_params(&rep).unwrap().delta <= 3);
        // Every diagonal of the known drawing has length at most 3.
        let best = compact_xp(&rep, 3).unwrap();
        prop_assert!(validate_drawing(&rep, &best.drawing).is_empty());
        prop_assert!(best.area <= bbox_area(&drw));
    }

    #[test]
    fn lifted_drawings_realize_the_shadow(seed in any::<u64>()) {
        let (rep, drw) = common::random_rep(&mut common::rng(seed), 8, 50);
        let sh = build_shadow(&rep).unwrap();
        prop_assert!(validate_rep(&sh.rep).is_empty());
        let lifted = lift_drawing(&sh, &drw);
        let violations = validate_drawing(&sh.rep, &lifted);
        prop_assert!(violations.is_empty(), "{:?}", violations.first());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fpt_realizes_drawn_inputs(seed in any::<u64>()) {
        let (rep, _) = common::random_rep(&mut common::rng(seed), 4, 9);
        prop_assume!(compute_params(&rep).unwrap().omega <= 4);
        let drw = realize_fpt(&rep).unwrap();
        prop_assert!(drw.as_ref().is_some_and(|d| validate_drawing(&rep, d).is_empty()));
    }
}
