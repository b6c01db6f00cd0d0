//! Deterministic generators for the worked examples and parametric families
//! used as fixtures by the tests, the acceptance suite and the CLI.
//!
//! All generators are referentially transparent: equal parameters produce
//! byte-identical automata. Unlabeled figure states get systematic names.

use crate::automaton::{StateId, WeightedAutomaton};
use crate::egames::{EgrArena, EgrEdge, Player, VertexId};
use crate::mealy::{MealyMachine, MemoryId};

fn wa(
    alphabet: &[&str],
    states: &[&str],
    initial: &[&str],
    finals: &[&str],
    transitions: &[(&str, &str, i64, &str)],
) -> WeightedAutomaton {
    WeightedAutomaton::new(
        alphabet.iter().map(|s| s.to_string()).collect(),
        states.iter().map(|s| s.to_string()).collect(),
        initial.iter().map(|s| s.to_string()).collect(),
        finals.iter().map(|s| s.to_string()).collect(),
        transitions
            .iter()
            .map(|(a, b, w, c)| (a.to_string(), b.to_string(), *w, c.to_string()))
            .collect(),
    )
    .expect("corpus fixture is well-formed")
}

/// Two-branch automaton mapping any word in AaA* to 0 and any word in AbA*
/// to 1; its first transition splits the weight +-k between the branches.
pub fn make_fig1_left(k: i64) -> WeightedAutomaton {
    assert!(k >= 1, "the family is defined for k >= 1");
    wa(
        &["a", "b"],
        &["si", "s0", "s1", "s2", "s3"],
        &["si"],
        &["s2"],
        &[
            ("si", "a", -k, "s0"),
            ("si", "b", -k, "s0"),
            ("si", "a", k, "s1"),
            ("si", "b", k, "s1"),
            ("s0", "a", k, "s2"),
            ("s1", "b", 1 - k, "s2"),
            ("s0", "b", 0, "s3"),
            ("s1", "a", 0, "s3"),
            ("s2", "a", 0, "s2"),
            ("s2", "b", 0, "s2"),
            ("s3", "a", 0, "s3"),
            ("s3", "b", 0, "s3"),
        ],
    )
}

/// A k-delay determinizer of [`make_fig1_left`]: commits weight 0 first and
/// pays the difference on the second letter.
pub fn make_fig1_right(_k: i64) -> WeightedAutomaton {
    wa(
        &["a", "b"],
        &["qi", "q", "p"],
        &["qi"],
        &["p"],
        &[
            ("qi", "a", 0, "q"),
            ("qi", "b", 0, "q"),
            ("q", "a", 0, "p"),
            ("q", "b", 1, "p"),
            ("p", "a", 0, "p"),
            ("p", "b", 0, "p"),
        ],
    )
}

/// Second worked family: branch weights +-k resolved on the second letter.
pub fn make_fig2_left(k: i64) -> WeightedAutomaton {
    assert!(k >= 1, "the family is defined for k >= 1");
    wa(
        &["a", "b"],
        &["si", "s0", "s1", "s2"],
        &["si"],
        &["s0", "s2"],
        &[
            ("si", "a", k, "s0"),
            ("si", "b", -k, "s0"),
            ("si", "a", -k, "s1"),
            ("si", "b", k, "s1"),
            ("s0", "a", 0, "s2"),
            ("s1", "b", 0, "s2"),
        ],
    )
}

/// A 2k-delay determinizer of [`make_fig2_left`].
pub fn make_fig2_right(k: i64) -> WeightedAutomaton {
    assert!(k >= 1, "the family is defined for k >= 1");
    wa(
        &["a", "b"],
        &["ti", "t0", "t1", "t2"],
        &["ti"],
        &["t0", "t1", "t2"],
        &[
            ("ti", "a", k, "t0"),
            ("ti", "b", -k, "t1"),
            ("t0", "a", 0, "t2"),
            ("t0", "b", -2 * k, "t2"),
            ("t1", "a", 0, "t2"),
            ("t1", "b", 2 * k, "t2"),
        ],
    )
}

/// The two-branch automaton that is 0-delay determinizable and 1-regret
/// determinizable but not 0-regret determinizable. Following the drawn
/// weights it maps "ab" to 0 and "aa" to 1 (the right branch wins on "aa").
pub fn make_fig3() -> WeightedAutomaton {
    wa(
        &["a", "b"],
        &["si", "s0", "s1", "s2", "s3"],
        &["si"],
        &["s2", "s3"],
        &[
            ("si", "a", 0, "s0"),
            ("si", "a", 0, "s1"),
            ("s0", "a", 1, "s2"),
            ("s1", "a", 0, "s3"),
            ("s1", "b", 0, "s3"),
        ],
    )
}

/// The left branch of [`make_fig3`] as a DWA; a 1-regret determinizer.
pub fn fig3_left_branch_dwa() -> WeightedAutomaton {
    wa(
        &["a", "b"],
        &["si", "s1", "s3"],
        &["si"],
        &["s3"],
        &[
            ("si", "a", 0, "s1"),
            ("s1", "a", 0, "s3"),
            ("s1", "b", 0, "s3"),
        ],
    )
}

/// The "pick the left branch" strategy on [`make_fig3`].
pub fn fig3_left_branch_strategy() -> MealyMachine {
    let n = make_fig3();
    let s = |name: &str| n.state_id(name).unwrap();
    // Memory counts the position: 0 start, 1 after one letter, 2 afterwards.
    let names = vec!["m0".to_string(), "m1".to_string(), "m2".to_string()];
    let update = vec![
        vec![MemoryId(1), MemoryId(1)],
        vec![MemoryId(2), MemoryId(2)],
        vec![MemoryId(2), MemoryId(2)],
    ];
    let output = vec![
        vec![s("s1"), s("s1")],
        vec![s("s3"), s("s3")],
        vec![s("s3"), s("s3")],
    ];
    MealyMachine::new(names, n.alphabet().to_vec(), MemoryId(0), s("si"), update, output).unwrap()
}

/// The automaton computing max(#a, #b): two initial counting loops.
pub fn make_maxab() -> WeightedAutomaton {
    wa(
        &["a", "b"],
        &["ca", "cb"],
        &["ca", "cb"],
        &["ca", "cb"],
        &[
            ("ca", "a", 1, "ca"),
            ("ca", "b", 0, "ca"),
            ("cb", "a", 0, "cb"),
            ("cb", "b", 1, "cb"),
        ],
    )
}

/// The "count the a's" strategy on [`make_maxab`].
pub fn maxab_count_a_strategy() -> MealyMachine {
    let n = make_maxab();
    let ca = n.state_id("ca").unwrap();
    MealyMachine::new(
        vec!["m".to_string()],
        n.alphabet().to_vec(),
        MemoryId(0),
        ca,
        vec![vec![MemoryId(0), MemoryId(0)]],
        vec![vec![ca, ca]],
    )
    .unwrap()
}

/// The j-pair family: maps a word to 0 when it contains a j-pair (two j's
/// with no larger letter in between) and to -|word| otherwise. Alphabet
/// {1..n}, 3n + 1 states.
pub fn make_jpair(n: usize) -> WeightedAutomaton {
    assert!(n >= 1);
    let alphabet: Vec<String> = (1..=n).map(|j| j.to_string()).collect();
    let mut states = vec!["main".to_string()];
    let mut initial = vec!["main".to_string()];
    let mut finals = vec!["main".to_string()];
    let mut transitions: Vec<(String, String, i64, String)> = Vec::new();
    for a in &alphabet {
        transitions.push(("main".into(), a.clone(), -1, "main".into()));
    }
    for j in 1..=n {
        let init = format!("init{j}");
        let mid = format!("mid{j}");
        let fin = format!("fin{j}");
        states.extend([init.clone(), mid.clone(), fin.clone()]);
        initial.push(init.clone());
        finals.push(fin.clone());
        for i in 1..=n {
            let a = i.to_string();
            if i == j {
                transitions.push((init.clone(), a.clone(), 0, mid.clone()));
                transitions.push((mid.clone(), a.clone(), 0, fin.clone()));
            } else {
                transitions.push((init.clone(), a.clone(), 0, init.clone()));
                if i < j {
                    transitions.push((mid.clone(), a.clone(), 0, mid.clone()));
                } else {
                    transitions.push((mid.clone(), a.clone(), 0, init.clone()));
                }
            }
            transitions.push((fin.clone(), a.clone(), 0, fin.clone()));
        }
    }
    WeightedAutomaton::new(alphabet, states, initial, finals, transitions).unwrap()
}

/// The inductively built longest word without a j-pair over {1..n}:
/// w(1) = 1, w(i) = w(i-1) i w(i-1); its length is 2^n - 1.
pub fn word_without_jpair(n: usize) -> Vec<crate::SymbolId> {
    assert!(n >= 1);
    let mut word = vec![0usize];
    for j in 1..n {
        let mut next = word.clone();
        next.push(j);
        next.extend(word.iter().copied());
        word = next;
    }
    word.into_iter().map(crate::SymbolId).collect()
}

/// Scans for a j-pair: positions i1 < i2 with equal letters and no larger
/// letter in between.
pub fn has_jpair(word: &[crate::SymbolId]) -> bool {
    for i1 in 0..word.len() {
        'outer: for i2 in i1 + 1..word.len() {
            if word[i1] != word[i2] {
                continue;
            }
            for k in i1..=i2 {
                if word[k].0 > word[i1].0 {
                    continue 'outer;
                }
            }
            return true;
        }
    }
    false
}

/// The quadratic-regret family: two disjoint deterministic branches over
/// {a, b} with 2(k+1) + 1 states. The left branch pays 1 per a but dies
/// after more than k consecutive a's; the right branch pays 1 per letter
/// once k b's have been seen.
pub fn make_quadregret(k: usize) -> WeightedAutomaton {
    assert!(k >= 1);
    let mut states: Vec<String> = (1..=k + 1).map(|i| format!("p{i}")).collect();
    states.push("bot".into());
    states.extend((1..=k + 1).map(|i| format!("q{i}")));
    let mut transitions: Vec<(String, String, i64, String)> = Vec::new();
    for i in 1..=k + 1 {
        let p = format!("p{i}");
        transitions.push((p.clone(), "b".into(), 0, "p1".into()));
        if i <= k {
            transitions.push((p.clone(), "a".into(), 1, format!("p{}", i + 1)));
        } else {
            transitions.push((p.clone(), "a".into(), 0, "bot".into()));
        }
    }
    transitions.push(("bot".into(), "a".into(), 0, "bot".into()));
    transitions.push(("bot".into(), "b".into(), 0, "bot".into()));
    for i in 1..=k + 1 {
        let q = format!("q{i}");
        if i <= k {
            transitions.push((q.clone(), "a".into(), 0, q.clone()));
            transitions.push((q.clone(), "b".into(), 0, format!("q{}", i + 1)));
        } else {
            transitions.push((q.clone(), "a".into(), 1, q.clone()));
            transitions.push((q.clone(), "b".into(), 1, q.clone()));
        }
    }
    let finals: Vec<String> = states.iter().filter(|s| *s != "bot").cloned().collect();
    WeightedAutomaton::new(
        vec!["a".into(), "b".into()],
        states,
        vec!["p1".into(), "q1".into()],
        finals,
        transitions,
    )
    .unwrap()
}

/// The three-vertex energy game with one reset edge (v1, v2).
pub fn make_egr_example() -> EgrArena {
    EgrArena::new(
        vec![
            ("v0".into(), Player::Eve),
            ("v1".into(), Player::Adam),
            ("v2".into(), Player::Eve),
        ],
        vec![
            EgrEdge { src: VertexId(0), dst: VertexId(1), weight: 1, reset: false },
            EgrEdge { src: VertexId(1), dst: VertexId(0), weight: -1, reset: false },
            EgrEdge { src: VertexId(1), dst: VertexId(2), weight: 0, reset: true },
            EgrEdge { src: VertexId(2), dst: VertexId(0), weight: -2, reset: false },
        ],
    )
    .unwrap()
}

#[allow(unused)]
fn _types(_: StateId) {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ExtendedWeight::{Bottom, Finite};

    #[test]
    fn fig1_left_shape() {
        let n = make_fig1_left(2);
        assert_eq!(n.state_count(), 5);
        let mut non_loop: Vec<i64> = n
            .transitions()
            .iter()
            .filter(|t| t.src != t.dst)
            .map(|t| t.weight)
            .collect();
        non_loop.sort();
        assert_eq!(non_loop, vec![-2, -2, -1, 0, 0, 2, 2, 2]);
    }

    #[test]
    fn fig1_right_values() {
        let d = make_fig1_right(2);
        assert_eq!(d.evaluate(&d.parse_word("ab").unwrap()).unwrap(), Finite(1));
        assert_eq!(d.evaluate(&d.parse_word("aa").unwrap()).unwrap(), Finite(0));
    }

    #[test]
    fn fig2_values_agree() {
        let l = make_fig2_left(1);
        let r = make_fig2_right(1);
        assert_eq!(l.evaluate(&l.parse_word("aa").unwrap()).unwrap(), Finite(1));
        for w in crate::automaton::words_up_to(2, 3) {
            assert_eq!(l.evaluate(&w).unwrap(), r.evaluate(&w).unwrap());
        }
    }

    #[test]
    fn fig3_follows_the_figure() {
        let n = make_fig3();
        assert_eq!(n.evaluate(&n.parse_word("ab").unwrap()).unwrap(), Finite(0));
        assert_eq!(n.evaluate(&n.parse_word("aa").unwrap()).unwrap(), Finite(1));
        assert_eq!(n.evaluate(&n.parse_word("a").unwrap()).unwrap(), Bottom);
    }

    #[test]
    fn jpair_values_and_shape() {
        let n = make_jpair(2);
        assert_eq!(n.state_count(), 7);
        assert_eq!(n.evaluate(&n.parse_word("11").unwrap()).unwrap(), Finite(0));
        assert_eq!(n.evaluate(&n.parse_word("121").unwrap()).unwrap(), Finite(-3));
        assert_eq!(n.evaluate(&n.parse_word("12").unwrap()).unwrap(), Finite(-2));
    }

    #[test]
    fn jpair_free_words() {
        assert_eq!(word_without_jpair(1), make_jpair(1).parse_word("1").unwrap());
        assert_eq!(word_without_jpair(2), make_jpair(2).parse_word("121").unwrap());
        let w3 = word_without_jpair(3);
        assert_eq!(w3.len(), 7);
        assert!(!has_jpair(&w3));
        assert!(has_jpair(&make_jpair(2).parse_word("11").unwrap()));
        // Appending any letter to the maximal word creates a j-pair.
        for a in 0..2 {
            let mut w = word_without_jpair(2);
            w.push(crate::SymbolId(a));
            assert!(has_jpair(&w));
        }
    }

    #[test]
    fn quadregret_shape_and_values() {
        let n = make_quadregret(2);
        assert_eq!(n.state_count(), 7);
        // (a^k b)^k realizes k^2 through the left branch.
        assert_eq!(n.evaluate(&n.parse_word("aabaab").unwrap()).unwrap(), Finite(4));
        // More than k consecutive a's still accepted through the right branch.
        assert_eq!(n.evaluate(&n.parse_word("aaa").unwrap()).unwrap(), Finite(0));
        // The drawn non-accepting sink is the one non-trim state.
        assert_eq!(n.trim().state_count(), n.state_count() - 1);
    }

    #[test]
    fn maxab_counts() {
        let n = make_maxab();
        assert_eq!(n.evaluate(&n.parse_word("aab").unwrap()).unwrap(), Finite(2));
        assert_eq!(n.evaluate(&[]).unwrap(), Finite(0));
    }

    #[test]
    fn egr_example_shape() {
        let g = make_egr_example();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.reset_edges().count(), 1);
    }
}
