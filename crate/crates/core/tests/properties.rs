//! Property tests over structurally random programs. Unlike the seeded
//! corpora, these shrink to a minimal failing program on regression.

use proptest::prelude::*;
use stratum_core::{aas_solve, brute_force_stable_models, parse_kb, Nogood, SolveOptions};

fn rule_strategy() -> impl Strategy<Value = (u8, Vec<u8>, Vec<u8>)> {
    (
        0u8..7,
        proptest::collection::vec(0u8..7, 0..3),
        proptest::collection::vec(0u8..7, 0..3),
    )
}

fn program_strategy() -> impl Strategy<Value = String> {
    proptest::collection::vec(rule_strategy(), 1..12).prop_map(|rules| {
        let mut text = String::new();
        for (head, pos, neg) in rules {
            text.push_str(&format!("x{head}"));
            let body: Vec<String> = pos
                .iter()
                .map(|a| format!("x{a}"))
                .chain(neg.iter().map(|a| format!("not x{a}")))
                .collect();
            if !body.is_empty() {
                text.push_str(" :- ");
                text.push_str(&body.join(", "));
            }
            text.push_str(".\n");
        }
        text
    })
}

proptest! {
    #[test]
    fn component_solve_matches_exhaustive_search(text in program_strategy()) {
        let kb = parse_kb(&text).unwrap();
        let brute = brute_force_stable_models(&kb, 8).unwrap();
        let solved = aas_solve(&kb, &[], &SolveOptions::default()).unwrap();
        prop_assert_eq!(brute.true_name_sets(&kb), solved.true_name_sets(&kb));
    }

    #[test]
    fn rendered_programs_reparse_to_the_same_rules(text in program_strategy()) {
        let kb = parse_kb(&text).unwrap();
        let reparsed = parse_kb(&kb.render()).unwrap();
        prop_assert_eq!(kb.named_rules(), reparsed.named_rules());
    }

    #[test]
    fn nogoods_only_remove_models(
        text in program_strategy(),
        picked in proptest::collection::btree_set(0u8..7, 1..4),
    ) {
        let kb = parse_kb(&text).unwrap();
        let atoms: std::collections::BTreeSet<_> = picked
            .iter()
            .filter_map(|a| kb.atom(&format!("x{a}")))
            .collect();
        prop_assume!(!atoms.is_empty());
        let nogood = Nogood::new(atoms.clone());
        let plain = aas_solve(&kb, &[], &SolveOptions::default()).unwrap();
        let constrained = aas_solve(&kb, &[nogood], &SolveOptions::default()).unwrap();
        let expected: Vec<_> = plain
            .true_sets()
            .into_iter()
            .filter(|m| !atoms.is_subset(m))
            .collect();
        prop_assert_eq!(constrained.true_sets(), expected);
    }
}
