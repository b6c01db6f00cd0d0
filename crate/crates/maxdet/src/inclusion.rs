//! Bounded-horizon k-delay inclusion.
//!
//! `D ⊆_k N` asks that every accepting run of D is matched by an accepting
//! run of N on the same word with equal total value whose prefix sums never
//! drift more than k away. Language inclusion for weighted automata is
//! undecidable, so this check is exact only up to the given horizon; it is
//! the semi-decision the oracles and witness verifiers build on.

use crate::automaton::{StateId, SymbolId, WeightedAutomaton, Word};
use crate::error::{Error, Result};
use std::collections::{BTreeSet, HashMap, VecDeque};

/// Matching states of N annotated with the drift of their prefix sum
/// relative to the D-run prefix, kept within [-k, k].
type Annotations = BTreeSet<(StateId, i64)>;

/// Node of the joint exploration: a set of annotated N-states is a function
/// of the D-run prefix only through the word and the weight sequence, so
/// distinct D-run prefixes inducing the same (state, annotations) pair merge.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Node {
    d_state: StateId,
    ann: Annotations,
}

const EXPLORATION_CAP: usize = 2_000_000;

/// Checks `d ⊆_k n` over all accepting runs of `d` of length at most
/// `horizon`. Returns the violating word when the check fails.
pub fn k_inclusion_counterexample(
    d: &WeightedAutomaton,
    n: &WeightedAutomaton,
    k: i64,
    horizon: usize,
) -> Result<Option<Word>> {
    if d.alphabet() != n.alphabet() {
        return Err(Error::AlphabetMismatch(d.alphabet().join(","), n.alphabet().join(",")));
    }
    // Depth 0: a length-0 accepting run of d needs an equal-value length-0
    // accepting run of n, i.e. initial-and-final states on both sides.
    let d_eps = d.initial().iter().any(|&q| d.is_final(q));
    let n_eps = n.initial().iter().any(|&q| n.is_final(q));
    if d_eps && !n_eps {
        return Ok(Some(Vec::new()));
    }

    let root_ann: Annotations = n.initial().iter().map(|&q| (q, 0)).collect();
    let mut best_depth: HashMap<Node, usize> = HashMap::new();
    let mut queue: VecDeque<(Node, usize, Word)> = VecDeque::new();
    for &q in d.initial() {
        let node = Node { d_state: q, ann: root_ann.clone() };
        if best_depth.insert(node.clone(), 0).is_none() {
            queue.push_back((node, 0, Vec::new()));
        }
    }
    let mut visited = 0usize;
    while let Some((node, depth, word)) = queue.pop_front() {
        visited += 1;
        if visited > EXPLORATION_CAP {
            return Err(Error::Budget { what: "inclusion exploration", limit: EXPLORATION_CAP, needed: visited });
        }
        if depth == horizon {
            continue;
        }
        for t in d.outgoing(node.d_state) {
            let mut ann: Annotations = BTreeSet::new();
            for &(q, drift) in &node.ann {
                for nt in n.successors(q, t.sym) {
                    let nd = drift + nt.weight - t.weight;
                    if nd.abs() <= k {
                        ann.insert((nt.dst, nd));
                    }
                }
            }
            let mut next_word = word.clone();
            next_word.push(t.sym);
            // Equal total value forces drift 0 at every accepting endpoint.
            if d.is_final(t.dst) && !ann.iter().any(|&(q, drift)| drift == 0 && n.is_final(q)) {
                return Ok(Some(next_word));
            }
            let next = Node { d_state: t.dst, ann };
            let nd = depth + 1;
            match best_depth.get(&next) {
                Some(&seen) if seen <= nd => {}
                _ => {
                    best_depth.insert(next.clone(), nd);
                    queue.push_back((next, nd, next_word));
                }
            }
        }
    }
    Ok(None)
}

/// Bounded-horizon check of `d ⊆_k n`.
pub fn check_k_inclusion(d: &WeightedAutomaton, n: &WeightedAutomaton, k: i64, horizon: usize) -> Result<bool> {
    Ok(k_inclusion_counterexample(d, n, k, horizon)?.is_none())
}

/// Suppresses the unused warning for SymbolId re-export consumers.
#[allow(unused)]
fn _types(_: SymbolId) {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn fig1_delay_is_exactly_k() {
        let left = corpus::make_fig1_left(2);
        let right = corpus::make_fig1_right(2);
        assert!(check_k_inclusion(&right, &left, 2, 5).unwrap());
        assert!(!check_k_inclusion(&right, &left, 1, 5).unwrap());
    }

    #[test]
    fn zero_inclusion_is_reflexive() {
        for n in [corpus::make_fig1_left(2), corpus::make_fig3(), corpus::make_maxab()] {
            assert!(check_k_inclusion(&n, &n, 0, 4).unwrap());
        }
    }

    #[test]
    fn monotone_in_k() {
        let left = corpus::make_fig2_left(1);
        let right = corpus::make_fig2_right(1);
        let mut prev = false;
        for k in 0..=4 {
            let now = check_k_inclusion(&right, &left, k, 4).unwrap();
            assert!(!prev || now, "inclusion lost when k grew to {k}");
            prev = now;
        }
        assert!(prev);
    }

    #[test]
    fn counterexample_word_is_reported() {
        let left = corpus::make_fig1_left(2);
        let right = corpus::make_fig1_right(2);
        let ce = k_inclusion_counterexample(&right, &left, 1, 5).unwrap().unwrap();
        // The drift of 2 appears after the very first letter.
        assert_eq!(ce.len(), 2);
    }
}
