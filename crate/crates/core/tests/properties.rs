//! Randomized invariants over the serialization formats and the
//! complexity-function algebra.

use proptest::prelude::*;

use partrand_core::levin_schnorr::{deficiency_profile, tests_from_witness};
use partrand_core::premeasure::HSpec;
use partrand_core::rules::{stronger, FiniteComplexity, RuleSpec};
use partrand_core::strings::{BinaryString, StringSet};

fn arb_string() -> impl Strategy<Value = BinaryString> {
    proptest::collection::vec(any::<bool>(), 0..10).prop_map(BinaryString::from_bits)
}

fn arb_set() -> impl Strategy<Value = StringSet> {
    proptest::collection::vec(arb_string(), 0..8).prop_map(|v| v.into_iter().collect())
}

fn arb_complexity() -> impl Strategy<Value = FiniteComplexity> {
    proptest::collection::vec((arb_string(), -4i64..8), 0..8)
        .prop_map(FiniteComplexity::from_pairs)
}

proptest! {
    #[test]
    fn string_display_round_trips(s in arb_string()) {
        let text = s.to_string();
        prop_assert_eq!(text.parse::<BinaryString>().unwrap(), s);
    }

    #[test]
    fn set_file_format_round_trips(f in arb_set()) {
        let lines: String = f.iter().map(|s| format!("{s}\n")).collect();
        let parsed = partrand_core::strings::parse_string_set("prop", &lines).unwrap();
        prop_assert_eq!(parsed, f);
    }

    #[test]
    fn complexity_table_round_trips(r in arb_complexity()) {
        let parsed = FiniteComplexity::parse("prop", &r.to_table()).unwrap();
        prop_assert_eq!(parsed, r);
    }

    #[test]
    fn graph_preserves_the_function_and_membership(r in arb_complexity()) {
        let graph = r.graph();
        for (s, _) in r.iter() {
            prop_assert_eq!(graph.k_of(s), r.k_of(s));
        }
        // The graph and the raw set dominate each other, so every built-in
        // rule must treat them identically.
        prop_assert!(stronger(&graph, &r) && stronger(&r, &graph));
        let kp = RuleSpec::Kp(HSpec::Length);
        prop_assert_eq!(kp.member(&graph).unwrap(), kp.member(&r).unwrap());
    }

    #[test]
    fn witness_levels_are_nested(r in arb_complexity()) {
        let t = tests_from_witness(&r, 5);
        for i in 0..5 {
            prop_assert!(t.level(i + 1).is_subset(&t.level(i)));
        }
    }

    #[test]
    fn deficiency_never_drops_when_the_witness_grows(
        bits in proptest::collection::vec(any::<bool>(), 1..24),
        r in arb_complexity(),
        extra in arb_complexity(),
    ) {
        let x = BinaryString::from_bits(bits);
        let before = deficiency_profile(&x, &r);
        let after = deficiency_profile(&x, &r.union(&extra));
        for (b, a) in before.entries().iter().zip(after.entries()) {
            match (b, a) {
                (Some(vb), Some(va)) => prop_assert!(va >= vb),
                (Some(_), None) => prop_assert!(false, "entry vanished"),
                _ => {}
            }
        }
    }
}
