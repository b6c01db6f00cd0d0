//! Structure-level property tests over arbitrary small automata.

use maxdet::files::{parse_json, to_canonical_json, AutomatonFile};
use maxdet::{check_k_inclusion, gamma, Limits, WeightedAutomaton};
use proptest::prelude::*;

fn arb_automaton() -> impl Strategy<Value = WeightedAutomaton> {
    let states = 1usize..=4;
    let symbols = 1usize..=2;
    (states, symbols)
        .prop_flat_map(|(ns, na)| {
            let state_names: Vec<String> = (0..ns).map(|i| format!("q{i}")).collect();
            let alphabet: Vec<String> = (0..na).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
            let transition = (0..ns, 0..na, -3i64..=3, 0..ns);
            (
                Just(state_names),
                Just(alphabet),
                proptest::collection::vec(transition, 0..12),
                proptest::collection::btree_set(0..ns, 1..=ns),
                proptest::collection::btree_set(0..ns, 1..=ns),
            )
        })
        .prop_map(|(state_names, alphabet, transitions, initial, finals)| {
            let name = |i: usize| state_names[i].clone();
            WeightedAutomaton::new(
                alphabet.clone(),
                state_names.clone(),
                initial.into_iter().map(name).collect(),
                finals.into_iter().map(name).collect(),
                transitions
                    .into_iter()
                    .map(|(s, a, w, t)| (name(s), alphabet[a].clone(), w, name(t)))
                    .collect(),
            )
            .expect("generated parts are well-formed")
        })
}

proptest! {
    #[test]
    fn file_roundtrip_is_identity(wa in arb_automaton()) {
        let text = to_canonical_json(&AutomatonFile::from_automaton(&wa));
        let back = parse_json::<AutomatonFile>(&text).unwrap().into_automaton().unwrap();
        prop_assert_eq!(&back, &wa);
        prop_assert_eq!(to_canonical_json(&AutomatonFile::from_automaton(&back)), text);
    }

    #[test]
    fn gamma_inverts_scaling(x in -200i64..=200, k in 0i64..=5) {
        prop_assert_eq!(gamma(x * (4 * k + 1), k), x);
        // And the defining inequality holds for arbitrary integers.
        let g = gamma(x, k);
        prop_assert!(((4 * k + 1) * g - x).abs() <= 2 * k);
    }

    #[test]
    fn zero_inclusion_is_reflexive(wa in arb_automaton()) {
        prop_assert!(check_k_inclusion(&wa, &wa, 0, 3).unwrap());
    }

    #[test]
    fn trim_then_trim_is_trim(wa in arb_automaton()) {
        let t = wa.trim();
        prop_assert_eq!(t.trim(), t);
    }

    #[test]
    fn scaling_scales_values(wa in arb_automaton(), x in 1i64..=4) {
        let scaled = wa.scale(x).unwrap();
        for w in maxdet::words_up_to(wa.symbol_count(), 3) {
            let lhs = scaled.evaluate(&w).unwrap();
            let rhs = match wa.evaluate(&w).unwrap() {
                maxdet::ExtendedWeight::Finite(v) => maxdet::ExtendedWeight::Finite(v * x),
                b => b,
            };
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn subset_construction_is_pair_deterministic(wa in arb_automaton()) {
        let p = maxdet::pair_determinize(&wa, &Limits::default()).unwrap();
        prop_assert!(p.is_pair_deterministic());
    }
}
