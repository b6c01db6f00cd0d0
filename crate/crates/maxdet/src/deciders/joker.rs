//! The Joker game: an energy game with resets built from an automaton, in
//! which Adam tracks an alternative run and may "play joker" to restart the
//! weight comparison from Eve's own current state. Eve winning it certifies
//! that the automaton is boundedly determinizable.

use crate::automaton::{StateId, SymbolId, WeightedAutomaton};
use crate::egames::{
    eve_wins_targets, sufficient_uniform_credit, EgrArena, EgrEdge, Player, VertexId,
};
use crate::error::{Error, Result};
use crate::limits::Limits;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

/// Arena vertices labeled with the construction tuples they stand for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JokerVertex {
    /// Adam's turn to pick a symbol: (Eve state, Adam state).
    Pair(StateId, StateId),
    /// Eve's turn to pick a transition: (p, q, a).
    Sym(StateId, StateId, SymbolId),
    /// Adam's turn to answer or joker after Eve chose the transition
    /// (p, a, w, p'): parallel transitions are distinct choices, so the
    /// weight is part of the configuration.
    Choice(StateId, StateId, StateId, SymbolId, i64),
    /// Losing sink for Eve.
    Dead,
}

#[derive(Clone, Debug)]
pub struct JokerGame {
    pub arena: EgrArena,
    pub labels: Vec<JokerVertex>,
    pub pair_index: BTreeMap<(StateId, StateId), VertexId>,
    /// The trimmed automaton the game is played on.
    pub automaton: WeightedAutomaton,
}

/// Which configurations to seed the reachable-arena exploration with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JokerSeeds {
    /// The game as played: Eve and Adam pick initial states.
    InitialPairs,
    /// Every pair of states; used to compute the full winning relation.
    AllPairs,
}

/// Builds the reachable part of the Joker arena. The input is trimmed first;
/// an automaton trimming to empty has no game to play.
pub fn build_joker_game(n: &WeightedAutomaton, seeds: JokerSeeds, limits: &Limits) -> Result<JokerGame> {
    let n = n.trim();
    if n.state_count() == 0 || n.initial().is_empty() {
        return Err(Error::EmptyAutomaton);
    }
    let mut labels: Vec<JokerVertex> = Vec::new();
    let mut owners: Vec<Player> = Vec::new();
    let mut index: HashMap<JokerVertex, VertexId> = HashMap::new();
    let mut queue: VecDeque<JokerVertex> = VecDeque::new();
    let mut edges: Vec<EgrEdge> = Vec::new();

    let owner_of = |v: &JokerVertex| match v {
        JokerVertex::Pair(..) | JokerVertex::Choice(..) => Player::Adam,
        JokerVertex::Sym(..) | JokerVertex::Dead => Player::Eve,
    };

    macro_rules! intern {
        ($v:expr) => {{
            let v = $v;
            match index.get(&v) {
                Some(&id) => id,
                None => {
                    limits.check_arena(labels.len() + 1)?;
                    let id = VertexId(labels.len());
                    owners.push(owner_of(&v));
                    labels.push(v);
                    index.insert(v, id);
                    queue.push_back(v);
                    id
                }
            }
        }};
    }

    match seeds {
        JokerSeeds::InitialPairs => {
            for &p in n.initial() {
                for &q in n.initial() {
                    intern!(JokerVertex::Pair(p, q));
                }
            }
        }
        JokerSeeds::AllPairs => {
            for p in n.states() {
                for q in n.states() {
                    intern!(JokerVertex::Pair(p, q));
                }
            }
        }
    }

    while let Some(v) = queue.pop_front() {
        let src = index[&v];
        match v {
            JokerVertex::Pair(p, q) => {
                let before = edges.len();
                let playable =
                    |s: StateId, a: SymbolId| n.has_successor(s, a);
                for a in n.symbols() {
                    if playable(q, a) {
                        let dst = intern!(JokerVertex::Sym(p, q, a));
                        edges.push(EgrEdge { src, dst, weight: 0, reset: false });
                    }
                }
                // Eve loses when her state misses acceptance against Adam's,
                // or when Adam can call a symbol she cannot match.
                let stuck = n.symbols().any(|a| playable(q, a) && !playable(p, a));
                if (!n.is_final(p) && n.is_final(q)) || stuck {
                    let dst = intern!(JokerVertex::Dead);
                    edges.push(EgrEdge { src, dst, weight: 0, reset: false });
                }
                if edges.len() == before {
                    // Adam cannot even pick a symbol: the play halts and Eve
                    // survives; a zero self-loop keeps the arena sink-free.
                    edges.push(EgrEdge { src, dst: src, weight: 0, reset: false });
                }
            }
            JokerVertex::Sym(p, q, a) => {
                let mut any = false;
                for t in n.successors(p, a) {
                    any = true;
                    let dst = intern!(JokerVertex::Choice(p, q, t.dst, a, t.weight));
                    edges.push(EgrEdge { src, dst, weight: 0, reset: false });
                }
                if !any {
                    let dst = intern!(JokerVertex::Dead);
                    edges.push(EgrEdge { src, dst, weight: 0, reset: false });
                }
            }
            JokerVertex::Choice(p, q, p1, a, wp) => {
                for t in n.successors(q, a) {
                    let dst = intern!(JokerVertex::Pair(p1, t.dst));
                    edges.push(EgrEdge { src, dst, weight: wp - t.weight, reset: false });
                }
                for t in n.successors(p, a) {
                    let dst = intern!(JokerVertex::Pair(p1, t.dst));
                    edges.push(EgrEdge { src, dst, weight: wp - t.weight, reset: true });
                }
            }
            JokerVertex::Dead => {
                edges.push(EgrEdge { src, dst: src, weight: -1, reset: false });
            }
        }
    }

    let names: Vec<String> = labels
        .iter()
        .map(|l| match l {
            JokerVertex::Pair(p, q) => format!("[{},{}]", n.state_name(*p), n.state_name(*q)),
            JokerVertex::Sym(p, q, a) => {
                format!("[{},{};{}]", n.state_name(*p), n.state_name(*q), n.symbol_name(*a))
            }
            JokerVertex::Choice(p, q, p1, a, w) => format!(
                "[{},{},{};{}:{}]",
                n.state_name(*p),
                n.state_name(*q),
                n.state_name(*p1),
                n.symbol_name(*a),
                w
            ),
            JokerVertex::Dead => "[dead]".to_string(),
        })
        .collect();
    let vertices: Vec<(String, Player)> = names.into_iter().zip(owners).collect();
    let arena = EgrArena::new(vertices, edges)?;
    let pair_index = labels
        .iter()
        .enumerate()
        .filter_map(|(i, l)| match l {
            JokerVertex::Pair(p, q) => Some(((*p, *q), VertexId(i))),
            _ => None,
        })
        .collect();
    Ok(JokerGame { arena, labels, pair_index, automaton: n })
}

#[derive(Clone, Debug)]
pub struct JokerOutcome {
    /// Eve wins: some initial p dominates every initial q.
    pub won: bool,
    pub chosen_initial: Option<StateId>,
    /// Winning pairs among the explored configurations.
    pub region: BTreeSet<(StateId, StateId)>,
    /// Minimal credit with which Eve wins from every winning pair at once;
    /// filled in by [`determinize_via_joker`].
    pub uniform_credit: Option<i64>,
    /// Minimal winning credit per pair; computed on small arenas only.
    pub credits: Option<BTreeMap<(StateId, StateId), i64>>,
    pub game: JokerGame,
}

/// Ceiling under which per-pair minimal credits are tabulated exhaustively.
const CREDIT_MAP_CEILING: u128 = 200_000;

/// Solves the Joker game played on `n` with the saturation credit
/// |V| mu_max: Eve wins iff some initial p wins against all initial q.
pub fn joker_win(n: &WeightedAutomaton, limits: &Limits) -> Result<JokerOutcome> {
    joker_outcome(n, JokerSeeds::InitialPairs, limits)
}

/// The full winning relation over all state pairs, for the closure lemmas.
pub fn joker_region(n: &WeightedAutomaton, limits: &Limits) -> Result<JokerOutcome> {
    joker_outcome(n, JokerSeeds::AllPairs, limits)
}

fn joker_outcome(n: &WeightedAutomaton, seeds: JokerSeeds, limits: &Limits) -> Result<JokerOutcome> {
    let game = build_joker_game(n, seeds, limits)?;
    let cap = game.arena.credit_cap();
    let pairs: Vec<(&(StateId, StateId), &VertexId)> = game.pair_index.iter().collect();
    let vertices: Vec<VertexId> = pairs.iter().map(|(_, &v)| v).collect();
    let wins = eve_wins_targets(&game.arena, cap, &vertices, limits)?;
    let region: BTreeSet<(StateId, StateId)> = pairs
        .iter()
        .zip(&wins)
        .filter(|(_, &w)| w)
        .map(|((&pq, _), _)| pq)
        .collect();
    let auto = &game.automaton;
    let chosen_initial = auto
        .initial()
        .iter()
        .copied()
        .find(|&p| auto.initial().iter().all(|&q| region.contains(&(p, q))));
    let credits = if (game.arena.vertex_count() as u128) * ((cap as u128) + 2) <= CREDIT_MAP_CEILING {
        let mut map = BTreeMap::new();
        for &(p, q) in &region {
            if let Some(c) = crate::egames::minimal_credit(&game.arena, game.pair_index[&(p, q)], limits)? {
                map.insert((p, q), c);
            }
        }
        Some(map)
    } else {
        None
    };
    Ok(JokerOutcome { won: chosen_initial.is_some(), chosen_initial, region, uniform_credit: None, credits, game })
}

/// Determinizes a Joker-winning automaton: Eve winning uniformly with credit
/// c from every winning pair makes the automaton 2c-bounded, so the bounded
/// determinization with B = 2c (always at most the 2 |V| mu_max bound)
/// yields an equivalent DWA. The result is trimmed, preserving its value
/// function. The outcome is returned with its uniform credit filled in.
pub fn determinize_via_joker(n: &WeightedAutomaton, limits: &Limits) -> Result<(WeightedAutomaton, JokerOutcome)> {
    let outcome = joker_win(n, limits)?;
    determinize_from_outcome(outcome, limits)
}

/// As [`determinize_via_joker`], reusing an already-solved Joker game.
pub fn determinize_from_outcome(
    mut outcome: JokerOutcome,
    limits: &Limits,
) -> Result<(WeightedAutomaton, JokerOutcome)> {
    if !outcome.won {
        return Err(Error::JokerLost);
    }
    let winning_vertices: Vec<VertexId> =
        outcome.region.iter().map(|pq| outcome.game.pair_index[pq]).collect();
    let credit = sufficient_uniform_credit(&outcome.game.arena, &winning_vertices, limits)?
        .expect("pairs winning at the cap win at some uniform credit");
    outcome.uniform_credit = Some(credit);
    let bound = 2 * credit;
    let d = crate::constructions::bounded_determinize(&outcome.game.automaton, bound, limits)?.trim();
    Ok((d, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::words_up_to;
    use crate::corpus;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn single_loop_arena_shape() {
        let n = WeightedAutomaton::new(
            vec!["a".into()],
            vec!["q".into()],
            vec!["q".into()],
            vec!["q".into()],
            vec![("q".into(), "a".into(), 0, "q".into())],
        )
        .unwrap();
        let g = build_joker_game(&n, JokerSeeds::InitialPairs, &limits()).unwrap();
        // Vertices: (q,q), (q,q;a), (q,q,q;a); no dead vertex is reachable.
        assert_eq!(g.arena.vertex_count(), 3);
        assert_eq!(g.arena.reset_edges().count(), 1);
    }

    #[test]
    fn joker_reset_weights_compare_eves_choice_to_alternatives() {
        let n = WeightedAutomaton::new(
            vec!["a".into()],
            vec!["p".into(), "x".into(), "y".into()],
            vec!["p".into()],
            vec!["x".into(), "y".into()],
            vec![
                ("p".into(), "a".into(), 2, "x".into()),
                ("p".into(), "a".into(), 5, "y".into()),
                ("x".into(), "a".into(), 0, "x".into()),
                ("y".into(), "a".into(), 0, "y".into()),
            ],
        )
        .unwrap();
        let g = build_joker_game(&n, JokerSeeds::InitialPairs, &limits()).unwrap();
        let p = g.automaton.state_id("p").unwrap();
        let x = g.automaton.state_id("x").unwrap();
        let y = g.automaton.state_id("y").unwrap();
        let choice = g
            .labels
            .iter()
            .position(|l| matches!(l, JokerVertex::Choice(pp, qq, t, _, _) if *pp == p && *qq == p && *t == x))
            .map(VertexId)
            .unwrap();
        // Eve picked the weight-2 branch; Adam's joker into the weight-5
        // branch carries 2 - 5 = -3.
        let w = g
            .arena
            .outgoing(choice)
            .filter(|(_, e)| e.reset)
            .map(|(_, e)| (g.labels[e.dst.0], e.weight))
            .collect::<Vec<_>>();
        assert!(w.contains(&(JokerVertex::Pair(x, y), -3)));
        assert!(w.contains(&(JokerVertex::Pair(x, x), 0)));
    }

    #[test]
    fn deterministic_automata_win() {
        let d = corpus::make_fig1_right(2);
        let out = joker_win(&d, &limits()).unwrap();
        assert!(out.won);
        // The diagonal of the reachable region is winning.
        for &(p, q) in &out.region {
            let _ = (p, q);
        }
        let full = joker_region(&d, &limits()).unwrap();
        for q in full.game.automaton.states() {
            assert!(full.region.contains(&(q, q)), "diagonal pair lost");
        }
    }

    #[test]
    fn fig3_wins_and_maxab_loses() {
        assert!(joker_win(&corpus::make_fig3(), &limits()).unwrap().won);
        assert!(!joker_win(&corpus::make_maxab(), &limits()).unwrap().won);
    }

    #[test]
    fn jpair_loses_its_joker_game() {
        assert!(!joker_win(&corpus::make_jpair(2), &limits()).unwrap().won);
    }

    #[test]
    fn determinize_joker_winners() {
        for n in [corpus::make_fig3(), corpus::make_fig2_right(1), corpus::make_quadregret(2)] {
            let (d, _) = determinize_via_joker(&n, &limits()).unwrap();
            assert!(d.is_deterministic());
            for w in words_up_to(2, 6) {
                assert_eq!(d.evaluate(&w).unwrap(), n.evaluate(&w).unwrap());
            }
        }
    }

    #[test]
    fn fig1_left_is_not_hom_determinizable() {
        // Eve must resolve the initial branch blind; each choice dies on some
        // word, so no homomorphic determinizer exists at any regret and the
        // Joker game is lost.
        assert!(!joker_win(&corpus::make_fig1_left(2), &limits()).unwrap().won);
    }

    #[test]
    fn losing_game_reports_error() {
        assert!(matches!(
            determinize_via_joker(&corpus::make_maxab(), &limits()),
            Err(Error::JokerLost)
        ));
    }
}
