//! Property suites for the invariants that back the decision procedures:
//! closure laws of the Joker winning relation, strategy soundness under
//! adversarial replay, the scaling equivalences, monotonicity of the
//! deciders, and the structural properties of the bounded determinization.

use maxdet::automaton::words_up_to;
use maxdet::deciders::{joker_region, joker_win, JokerVertex};
use maxdet::egames::{extract_strategy, EgrArena, Player, VertexId};
use maxdet::oracle::{
    brute_egr, equivalence_check, random_arena, random_automaton, RandomArenaParams,
    RandomAutomatonParams,
};
use maxdet::{
    check_homomorphism, check_k_inclusion, corpus, decide_0_delay, decide_k_delay,
    decide_r_regret, ExtendedWeight, Limits, StateId, WeightedAutomaton,
};

fn limits() -> Limits {
    Limits::default()
}

/// Lemma 1-style consequence of a homomorphism: language containment and
/// pointwise domination, checked on the strategy-product projections.
#[test]
fn homomorphic_images_are_dominated() {
    let n = corpus::make_fig3();
    let m = corpus::fig3_left_branch_strategy();
    let p = maxdet::strategy_product(&n, &m).unwrap();
    let mu = maxdet::mealy::product_projection(&p, &n).unwrap();
    assert!(check_homomorphism(&mu, &p, &n).unwrap());
    for w in words_up_to(2, 5) {
        let (a, b) = (p.evaluate(&w).unwrap(), n.evaluate(&w).unwrap());
        if !a.is_bottom() {
            assert!(!b.is_bottom(), "language containment broken");
            assert!(a <= b, "value domination broken");
        }
    }
}

#[test]
fn trim_preserves_values_on_random_automata() {
    let params = RandomAutomatonParams { require_nonempty_trim: false, ..Default::default() };
    for seed in 0..60u64 {
        let n = random_automaton(seed, &params);
        let t = n.trim();
        for w in words_up_to(2, 5) {
            assert_eq!(n.evaluate(&w).unwrap(), t.evaluate(&w).unwrap(), "seed {seed}");
        }
    }
}

#[test]
fn difference_product_realizes_the_difference() {
    let params = RandomAutomatonParams::default();
    for seed in 0..40u64 {
        let n = random_automaton(seed, &params);
        let d = corpus::make_fig1_right(2); // deterministic, same alphabet
        let m = maxdet::difference_product(&n, &d).unwrap();
        for w in words_up_to(2, 4) {
            let expected = match (n.evaluate(&w).unwrap(), d.evaluate(&w).unwrap()) {
                (ExtendedWeight::Finite(a), ExtendedWeight::Finite(b)) => ExtendedWeight::Finite(a - b),
                _ => ExtendedWeight::Bottom,
            };
            assert_eq!(m.evaluate(&w).unwrap(), expected, "seed {seed}");
        }
    }
}

/// Sampled second delay-lemma item: a deterministic automaton k-included in
/// N is 0-included in the k-delay construction of N.
#[test]
fn delay_lemma_item_two_sampled() {
    let cases = [
        (corpus::make_fig1_right(2), corpus::make_fig1_left(2), 2i64),
        (corpus::make_fig2_right(1), corpus::make_fig2_left(1), 2i64),
        (corpus::fig3_left_branch_dwa(), corpus::make_fig3(), 0i64),
    ];
    let mut nonvacuous = 0;
    for (m, n, k) in cases {
        if check_k_inclusion(&m, &n, k, 4).unwrap() {
            nonvacuous += 1;
            let d = maxdet::delay_construct(&n, k, &limits()).unwrap();
            assert!(check_k_inclusion(&m, &d, 0, 4).unwrap());
        }
    }
    assert!(nonvacuous >= 2);
}

/// The full scaling equivalence: N is 0-delay determinizable iff (4k+1) N
/// is, iff (4k+1) N is k-delay determinizable.
#[test]
fn scaling_lemma_on_tiny_automata() {
    let tiny = [
        corpus::make_fig3(),
        corpus::make_fig1_right(2),
        corpus::fig3_left_branch_dwa(),
        random_automaton(11, &RandomAutomatonParams { max_states: 3, ..Default::default() }),
        random_automaton(17, &RandomAutomatonParams { max_states: 3, ..Default::default() }),
        random_automaton(23, &RandomAutomatonParams { max_states: 3, ..Default::default() }),
    ];
    for (i, n) in tiny.iter().enumerate() {
        let base = decide_0_delay(n, &limits()).unwrap().answer;
        let scaled = n.scale(5).unwrap();
        assert_eq!(base, decide_0_delay(&scaled, &limits()).unwrap().answer, "case {i}");
        assert_eq!(base, decide_k_delay(&scaled, 1, &limits()).unwrap().answer, "case {i}");
    }
}

/// Monotonicity of the deciders in their thresholds.
#[test]
fn decider_monotonicity_sampled() {
    for n in [corpus::make_fig3(), corpus::make_fig1_left(2), corpus::make_quadregret(1)] {
        let mut prev = false;
        for r in 0..=2 {
            let now = decide_r_regret(&n, r, &limits()).unwrap().answer;
            assert!(!prev || now, "regret monotonicity broken at r = {r}");
            prev = now;
        }
        let mut prev = false;
        for k in 0..=3 {
            let now = decide_k_delay(&n, k, &limits()).unwrap().answer;
            assert!(!prev || now, "delay monotonicity broken at k = {k}");
            prev = now;
        }
    }
}

/// Successor closure of the Joker winning relation: whatever transition the
/// winning strategy picks, every alternative answer of Adam lands back in a
/// winning pair.
#[test]
fn joker_successor_closure() {
    let params = RandomAutomatonParams::default();
    let mut winners = 0;
    for seed in 300..340u64 {
        let n = random_automaton(seed, &params).trim();
        let outcome = joker_region(&n, &limits()).unwrap();
        if !outcome.won {
            continue;
        }
        winners += 1;
        let auto = &outcome.game.automaton;
        let arena = &outcome.game.arena;
        let cap = arena.credit_cap();
        let sol = extract_strategy(arena, cap, &limits()).unwrap();
        for &(p, q) in &outcome.region {
            for a in auto.symbols() {
                if !auto.has_successor(q, a) {
                    continue;
                }
                // Find Eve's decision vertex and her chosen transition.
                let sym = outcome
                    .game
                    .labels
                    .iter()
                    .position(|l| matches!(l, JokerVertex::Sym(pp, qq, aa) if (*pp, *qq, *aa) == (p, q, a)))
                    .map(VertexId);
                let Some(sym) = sym else { continue };
                let Some(edge) = sol.choose(arena, sym, cap) else { continue };
                let JokerVertex::Choice(_, _, p1, _, _) = outcome.game.labels[arena.edge(edge).dst.0] else {
                    panic!("Eve's move goes to a choice vertex");
                };
                for t in [p, q] {
                    for tr in auto.successors(t, a) {
                        assert!(
                            outcome.region.contains(&(p1, tr.dst)),
                            "seed {seed}: successor pair ({p1:?},{:?}) left the region",
                            tr.dst
                        );
                    }
                }
            }
        }
    }
    assert!(winners >= 5, "want enough Joker winners, got {winners}");
}

/// Run closure: replaying any alternative run against Eve's winning Joker
/// strategy keeps (her state, the alternative's state) inside the winning
/// region, over all of Adam's plays up to a bounded depth.
#[test]
fn joker_run_closure_bounded() {
    let params = RandomAutomatonParams::default();
    let mut winners = 0;
    for seed in 400..425u64 {
        let n = random_automaton(seed, &params).trim();
        let outcome = joker_region(&n, &limits()).unwrap();
        let Some(p0) = outcome.chosen_initial else { continue };
        winners += 1;
        let auto = outcome.game.automaton.clone();
        let arena = &outcome.game.arena;
        let cap = arena.credit_cap();
        let sol = extract_strategy(arena, cap, &limits()).unwrap();
        // Depth-bounded exploration of (arena pair vertex, level, alt state).
        for &q0 in auto.initial() {
            let start = outcome.game.pair_index[&(p0, q0)];
            let mut frontier: Vec<(VertexId, i64, StateId)> = vec![(start, cap, q0)];
            for _depth in 0..3 {
                let mut next = Vec::new();
                for (v, level, alt) in frontier {
                    let JokerVertex::Pair(p, _) = outcome.game.labels[v.0] else { unreachable!() };
                    assert!(
                        outcome.region.contains(&(p, alt)),
                        "seed {seed}: pair ({p:?},{alt:?}) fell out of the winning region"
                    );
                    for a in auto.symbols() {
                        // Adam picks symbols his tracked run can follow.
                        let sym_vertex = arena
                            .outgoing(v)
                            .map(|(_, e)| e.dst)
                            .find(|d| {
                                matches!(outcome.game.labels[d.0], JokerVertex::Sym(_, _, aa) if aa == a)
                            });
                        let Some(sym_vertex) = sym_vertex else { continue };
                        let Some(edge) = sol.choose(arena, sym_vertex, level) else { continue };
                        let choice_vertex = arena.edge(edge).dst;
                        // All of Adam's answers (including jokers).
                        for (eid, e) in arena.outgoing(choice_vertex) {
                            let _ = eid;
                            if let JokerVertex::Pair(_, _) = outcome.game.labels[e.dst.0] {
                                if let Some(next_level) = sol.step_level(e, level) {
                                    for t in auto.successors(alt, a) {
                                        next.push((e.dst, next_level, t.dst));
                                    }
                                }
                            }
                        }
                    }
                }
                frontier = next;
            }
        }
    }
    assert!(winners >= 5, "want enough Joker winners, got {winners}");
}

/// Extracted strategies never witness a negative energy level against any
/// Adam behaviour, replayed exhaustively to a bounded depth.
#[test]
fn strategy_soundness_under_replay() {
    let params = RandomArenaParams::default();
    for seed in 0..80u64 {
        let g = random_arena(seed, &params);
        let cap = g.credit_cap();
        let sol = extract_strategy(&g, cap, &limits()).unwrap();
        for v in g.vertices() {
            if !sol.eve_wins(v) {
                continue;
            }
            // Exhaustive Adam play to depth 8; Eve follows the strategy.
            let mut frontier = vec![(v, cap)];
            for _ in 0..8 {
                let mut next = Vec::new();
                for (u, level) in frontier {
                    assert!(level >= 0, "seed {seed}: negative level at {u:?}");
                    match g.owner(u) {
                        Player::Eve => {
                            let e = sol
                                .choose(&g, u, level)
                                .unwrap_or_else(|| panic!("seed {seed}: no choice at winning {u:?}"));
                            let edge = g.edge(e);
                            let nl = sol.step_level(edge, level).expect("strategy keeps energy alive");
                            next.push((edge.dst, nl));
                        }
                        Player::Adam => {
                            for (_, edge) in g.outgoing(u) {
                                let nl = sol
                                    .step_level(edge, level)
                                    .unwrap_or_else(|| panic!("seed {seed}: Adam forced underflow from winning {u:?}"));
                                next.push((edge.dst, nl));
                            }
                        }
                    }
                }
                next.sort();
                next.dedup();
                frontier = next;
            }
        }
    }
}

/// On arenas without resets the solver agrees with the grid oracle run with
/// resets ignored (the textbook energy game).
#[test]
fn reset_free_arenas_match_textbook_solver() {
    let params = RandomArenaParams { reset_prob: 0.0, ..Default::default() };
    for seed in 0..60u64 {
        let g = random_arena(seed, &params);
        assert_eq!(g.reset_edges().count(), 0);
        let cap = g.credit_cap();
        for v in g.vertices() {
            for c0 in 0..=cap {
                assert_eq!(
                    maxdet::solve_egr(&g, v, c0, &limits()).unwrap(),
                    brute_egr(&g, v, c0),
                    "seed {seed} ({v:?}, {c0})"
                );
            }
        }
    }
}

/// The appendix properties of the bounded determinization on its reachable
/// states: P1 normalization at final states, P2 witness runs for every
/// stored delay, P3 domination of good runs.
#[test]
fn bounded_determinize_p1_p2_p3() {
    let params = RandomAutomatonParams::default();
    let mut checked = 0;
    for seed in 500..560u64 {
        let n = random_automaton(seed, &params).trim();
        if n.state_count() == 0 {
            continue;
        }
        let Ok(out) = joker_win(&n, &limits()) else { continue };
        if !out.won {
            continue;
        }
        checked += 1;
        let (d, outcome) = maxdet::deciders::determinize_via_joker(&n, &limits()).unwrap();
        let bound = 2 * outcome.uniform_credit.unwrap();
        let n = &outcome.game.automaton;
        assert!(equivalence_check(n, &d, 5).unwrap().pass, "seed {seed}");
        // Replays every word and checks the profile states along the run.
        for word in words_up_to(n.symbol_count(), 4) {
            let mut profile: Vec<(StateId, i64)> = n.initial().iter().map(|&q| (q, 0)).collect();
            let mut output = 0i64;
            let mut alive = true;
            for &a in &word {
                let mut m: std::collections::BTreeMap<StateId, i64> = Default::default();
                for &(p, gp) in &profile {
                    for t in n.successors(p, a) {
                        let v = gp + t.weight;
                        m.entry(t.dst).and_modify(|b| *b = (*b).max(v)).or_insert(v);
                    }
                }
                if m.is_empty() {
                    alive = false;
                    break;
                }
                let mmax = *m.values().max().unwrap();
                let kept: Vec<(StateId, i64)> =
                    m.into_iter().filter(|&(_, v)| mmax - v <= bound).collect();
                let w_out = kept
                    .iter()
                    .filter(|(q, _)| n.is_final(*q))
                    .map(|&(_, v)| v)
                    .max()
                    .unwrap_or(mmax);
                profile = kept.into_iter().map(|(q, v)| (q, v - w_out)).collect();
                output += w_out;
            }
            if !alive {
                continue;
            }
            // P1: finals sit at or below zero, and one final is exactly zero
            // whenever any final is present.
            let finals: Vec<i64> =
                profile.iter().filter(|(q, _)| n.is_final(*q)).map(|&(_, v)| v).collect();
            assert!(finals.iter().all(|&v| v <= 0), "seed {seed}: P1 upper bound broken");
            if !finals.is_empty() {
                assert!(finals.contains(&0), "seed {seed}: P1 normalization broken");
            }
            // P2: each stored value is realized by an initial run.
            for &(q, gq) in &profile {
                let best = best_run_value_to(n, &word, q);
                assert!(
                    best == Some(output + gq),
                    "seed {seed}: P2 broken at {q:?} ({best:?} vs {})",
                    output + gq
                );
            }
        }
    }
    assert!(checked >= 5, "want enough Joker winners, got {checked}");
}

fn best_run_value_to(n: &WeightedAutomaton, word: &[maxdet::SymbolId], target: StateId) -> Option<i64> {
    let mut layer: Vec<Option<i64>> = vec![None; n.state_count()];
    for &q in n.initial() {
        layer[q.0] = Some(0);
    }
    for &a in word {
        let mut next: Vec<Option<i64>> = vec![None; n.state_count()];
        for q in n.states() {
            if let Some(v) = layer[q.0] {
                for t in n.successors(q, a) {
                    let c = v + t.weight;
                    next[t.dst.0] = Some(next[t.dst.0].map_or(c, |b: i64| b.max(c)));
                }
            }
        }
        layer = next;
    }
    layer[target.0]
}

/// The safety reduction drives underflow into the unsafe component: at
/// credit 1 the worked example is forced into bottom.
#[test]
fn safety_product_reaches_bottom_when_underfunded() {
    let g = corpus::make_egr_example();
    let product = maxdet::to_safety_game(&g, 1, &limits()).unwrap();
    let v2 = g.vertex_id("v2").unwrap();
    let i = product.id(v2, 1).unwrap();
    let succ = product.successors(i);
    assert!(succ.iter().any(|&j| product.is_unsafe(j)), "v2 at credit 1 must underflow");
}

/// Per-vertex minimal credits on the worked example.
#[test]
fn credit_map_on_example() {
    let g = corpus::make_egr_example();
    for v in g.vertices() {
        let minimal = maxdet::minimal_credit(&g, v, &limits()).unwrap();
        // Cross-check against the oracle sweep.
        let cap = g.credit_cap();
        let oracle = (0..=cap).find(|&c| brute_egr(&g, v, c));
        assert_eq!(minimal, oracle, "{}", g.vertex_name(v));
        if let Some(c) = minimal {
            assert!(c == 0 || !brute_egr(&g, v, c - 1), "not minimal at {}", g.vertex_name(v));
        }
    }
}

/// First-cycle verdicts agree with saturated solvability on random lassos:
/// an arena made of one simple cycle plus its entry is won by Eve at the
/// saturation credit iff the cycle is reset-carrying or nonnegative.
#[test]
fn first_cycle_matches_cycle_arenas() {
    use maxdet::EgrEdge;
    for seed in 0..40u64 {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let len = rng.gen_range(2..5usize);
        let mut edges = Vec::new();
        for i in 0..len {
            edges.push(EgrEdge {
                src: VertexId(i),
                dst: VertexId((i + 1) % len),
                weight: rng.gen_range(-3..=3),
                reset: rng.gen_bool(0.3),
            });
        }
        // Single-successor vertices: ownership is irrelevant; mark all Adam
        // so reset edges are legal.
        let vertices = (0..len).map(|i| (format!("c{i}"), Player::Adam)).collect();
        let g = EgrArena::new(vertices, edges).unwrap();
        let lasso: Vec<usize> = (0..len).chain([0]).take(len + 1).collect();
        // The lasso is the cycle itself: edge ids 0..len then the closure is
        // implicit; feed edges 0..len (ends where it started).
        let lasso: Vec<usize> = lasso.into_iter().take(len).collect();
        let winner = maxdet::oracle::first_cycle_winner(&g, &lasso).unwrap();
        let eve_wins = maxdet::solve_egr(&g, VertexId(0), g.credit_cap(), &limits()).unwrap();
        assert_eq!(winner == Player::Eve, eve_wins, "seed {seed}");
    }
}
