//! The regret energy game: given the automaton and an equivalent DWA used as
//! a monitor, a reset-free energy game whose winner decides r-regret
//! determinizability. Eve's winning strategy converts into a Mealy machine
//! whose strategy product with the automaton is the regret determinizer.

use crate::automaton::{StateId, SymbolId, WeightedAutomaton};
use crate::egames::{EgrArena, EgrEdge, EgrSolution, Player, VertexId};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::mealy::{MealyMachine, MemoryId};
use std::collections::{BTreeMap, HashMap, VecDeque};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegretVertex {
    /// Adam picks the next symbol; the monitor state moves deterministically.
    Pair(StateId, StateId),
    /// Eve answers symbol `a` with a transition of the automaton.
    Choice(StateId, StateId, SymbolId),
    /// The monitor is stuck: the word left the language, Eve is safe.
    Top,
    /// Eve's run died or missed acceptance.
    Bot,
    /// Regret checkpoint entered at accepting synchronizations.
    BotR1,
    BotR2,
}

#[derive(Clone, Debug)]
pub struct RegretGame {
    pub arena: EgrArena,
    pub labels: Vec<RegretVertex>,
    /// Start vertex per initial state of the automaton.
    pub starts: BTreeMap<StateId, VertexId>,
    /// Eve's decision vertices, indexed by (automaton state, monitor state, symbol).
    pub choice_index: BTreeMap<(StateId, StateId, SymbolId), VertexId>,
    /// |Q'| (w_max + w'_max): the slack the regret gadget charges.
    pub penalty: i64,
}

/// Builds the reset-free regret arena for automaton `n` monitored by the
/// deterministic `d` (which must satisfy [[d]] = [[n]], with `d` trim).
/// With `with_regret_gadget` the accepting synchronizations charge the
/// checkpoint penalty so that winning with credit r + penalty bounds the
/// regret by r; without it the game decides existential regret.
pub fn build_regret_energy_game(
    n: &WeightedAutomaton,
    d: &WeightedAutomaton,
    with_regret_gadget: bool,
    limits: &Limits,
) -> Result<RegretGame> {
    if n.alphabet() != d.alphabet() {
        return Err(Error::AlphabetMismatch(n.alphabet().join(","), d.alphabet().join(",")));
    }
    if !d.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    let d_init = *d.initial().iter().next().ok_or(Error::NoInitialState)?;
    let penalty = (d.state_count() as i64)
        .checked_mul(n.max_weight().checked_add(d.max_weight()).ok_or(Error::Overflow)?)
        .ok_or(Error::Overflow)?;

    let mut labels: Vec<RegretVertex> = Vec::new();
    let mut owners: Vec<Player> = Vec::new();
    let mut index: HashMap<RegretVertex, VertexId> = HashMap::new();
    let mut queue: VecDeque<RegretVertex> = VecDeque::new();
    let mut edges: Vec<EgrEdge> = Vec::new();

    let owner_of = |v: &RegretVertex| match v {
        RegretVertex::Choice(..) => Player::Eve,
        _ => Player::Adam,
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

    let mut starts = BTreeMap::new();
    for &p in n.initial() {
        starts.insert(p, intern!(RegretVertex::Pair(p, d_init)));
    }
    while let Some(v) = queue.pop_front() {
        let src = index[&v];
        match v {
            RegretVertex::Pair(p, q) => {
                let mut d_live = false;
                for a in n.symbols() {
                    if d.has_successor(q, a) {
                        d_live = true;
                        let dst = intern!(RegretVertex::Choice(p, q, a));
                        edges.push(EgrEdge { src, dst, weight: 0, reset: false });
                    }
                }
                if !n.is_final(p) && d.is_final(q) {
                    let dst = intern!(RegretVertex::Bot);
                    edges.push(EgrEdge { src, dst, weight: 0, reset: false });
                }
                if with_regret_gadget && n.is_final(p) && d.is_final(q) {
                    let dst = intern!(RegretVertex::BotR1);
                    edges.push(EgrEdge { src, dst, weight: 1 - penalty, reset: false });
                }
                if !d_live {
                    let dst = intern!(RegretVertex::Top);
                    edges.push(EgrEdge { src, dst, weight: 0, reset: false });
                }
            }
            RegretVertex::Choice(p, q, a) => {
                let dt = d.successors(q, a).next().expect("choice exists only when d moves");
                let mut any = false;
                for t in n.successors(p, a) {
                    any = true;
                    let dst = intern!(RegretVertex::Pair(t.dst, dt.dst));
                    edges.push(EgrEdge { src, dst, weight: t.weight - dt.weight, reset: false });
                }
                if !any {
                    let dst = intern!(RegretVertex::Bot);
                    edges.push(EgrEdge { src, dst, weight: 0, reset: false });
                }
            }
            RegretVertex::Top => edges.push(EgrEdge { src, dst: src, weight: 1, reset: false }),
            RegretVertex::Bot => edges.push(EgrEdge { src, dst: src, weight: -1, reset: false }),
            RegretVertex::BotR1 => {
                let dst = intern!(RegretVertex::BotR2);
                edges.push(EgrEdge { src, dst, weight: -1, reset: false });
            }
            RegretVertex::BotR2 => {
                let dst = intern!(RegretVertex::BotR1);
                edges.push(EgrEdge { src, dst, weight: 1, reset: false });
            }
        }
    }
    let names: Vec<String> = labels
        .iter()
        .map(|l| match l {
            RegretVertex::Pair(p, q) => format!("[{},{}]", n.state_name(*p), d.state_name(*q)),
            RegretVertex::Choice(p, q, a) => {
                format!("[{},{};{}]", n.state_name(*p), d.state_name(*q), n.symbol_name(*a))
            }
            RegretVertex::Top => "[top]".into(),
            RegretVertex::Bot => "[bot]".into(),
            RegretVertex::BotR1 => "[botr1]".into(),
            RegretVertex::BotR2 => "[botr2]".into(),
        })
        .collect();
    let arena = EgrArena::new(names.into_iter().zip(owners).collect(), edges)?;
    let choice_index = labels
        .iter()
        .enumerate()
        .filter_map(|(i, l)| match l {
            RegretVertex::Choice(p, q, a) => Some(((*p, *q, *a), VertexId(i))),
            _ => None,
        })
        .collect();
    Ok(RegretGame { arena, labels, starts, choice_index, penalty })
}

/// Extracts Eve's winning play as a Mealy machine over `n`: memory is the
/// current (pair vertex, credit level); symbols the monitor cannot read
/// lead to an absorbing dead memory state whose output keeps the run in
/// place (the strategy product drops those words).
pub fn extract_mealy(
    game: &RegretGame,
    n: &WeightedAutomaton,
    sol: &EgrSolution,
    start: StateId,
    limits: &Limits,
) -> Result<MealyMachine> {
    let start_vertex = game.starts[&start];
    let start_level = sol.c0;
    type Memory = (VertexId, i64);
    let mut index: HashMap<Memory, usize> = HashMap::new();
    let mut mems: Vec<Memory> = Vec::new();
    let mut queue: VecDeque<Memory> = VecDeque::new();
    index.insert((start_vertex, start_level), 0);
    mems.push((start_vertex, start_level));
    queue.push_back((start_vertex, start_level));
    let mut rows: Vec<Vec<Option<(usize, StateId)>>> = Vec::new();
    while let Some((v, level)) = queue.pop_front() {
        let RegretVertex::Pair(p, q) = game.labels[v.0] else {
            unreachable!("memory states are pair vertices");
        };
        let mut row: Vec<Option<(usize, StateId)>> = Vec::with_capacity(n.symbol_count());
        for a in n.symbols() {
            let Some(&choice_vertex) = game.choice_index.get(&(p, q, a)) else {
                row.push(None);
                continue;
            };
            let Some(edge_id) = sol.choose(&game.arena, choice_vertex, level) else {
                row.push(None);
                continue;
            };
            let edge = game.arena.edge(edge_id);
            let RegretVertex::Pair(p2, _) = game.labels[edge.dst.0] else {
                row.push(None);
                continue;
            };
            let next_level = sol.step_level(edge, level).expect("winning choices never underflow");
            let mem = (edge.dst, next_level);
            let id = match index.get(&mem) {
                Some(&i) => i,
                None => {
                    limits.check_states(mems.len() + 2)?;
                    let i = mems.len();
                    index.insert(mem, i);
                    mems.push(mem);
                    queue.push_back(mem);
                    i
                }
            };
            row.push(Some((id, p2)));
        }
        rows.push(row);
    }
    // Dead memory state: total tables, output keeps the current state.
    let dead = mems.len();
    let mut names: Vec<String> = mems
        .iter()
        .map(|(v, c)| format!("({}@{})", game.arena.vertex_name(*v), c))
        .collect();
    names.push("(dead)".into());
    let mut update: Vec<Vec<MemoryId>> = Vec::with_capacity(names.len());
    let mut output: Vec<Vec<StateId>> = Vec::with_capacity(names.len());
    for (i, row) in rows.iter().enumerate() {
        let RegretVertex::Pair(p, _) = game.labels[mems[i].0 .0] else { unreachable!() };
        let mut urow = Vec::with_capacity(n.symbol_count());
        let mut orow = Vec::with_capacity(n.symbol_count());
        for entry in row {
            match entry {
                Some((mem, out)) => {
                    urow.push(MemoryId(*mem));
                    orow.push(*out);
                }
                None => {
                    urow.push(MemoryId(dead));
                    orow.push(p);
                }
            }
        }
        update.push(urow);
        output.push(orow);
    }
    update.push(vec![MemoryId(dead); n.symbol_count()]);
    output.push(vec![start; n.symbol_count()]);
    MealyMachine::new(names, n.alphabet().to_vec(), MemoryId(0), start, update, output)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::deciders::joker::determinize_via_joker;

    #[test]
    fn gadget_wiring_and_round_weights() {
        let limits = Limits::default();
        let n = corpus::make_fig3().trim();
        let (d, _) = determinize_via_joker(&n, &limits).unwrap();
        let game = build_regret_energy_game(&n, &d, true, &limits).unwrap();
        // Round weights are the difference between Eve's transition and the
        // monitor's; the worked automaton has the weight-1 vs weight-0 split.
        let round_weights: Vec<i64> = game
            .labels
            .iter()
            .enumerate()
            .filter(|(_, l)| matches!(l, RegretVertex::Choice(..)))
            .flat_map(|(i, _)| game.arena.outgoing(VertexId(i)).map(|(_, e)| e.weight))
            .collect();
        assert!(round_weights.contains(&-1));
        // Gadget loops: top pays +1, bottom drains -1, the checkpoint swings
        // between -1 and +1 after its entry fee.
        let loop_weight = |label: RegretVertex| {
            game.labels
                .iter()
                .position(|l| *l == label)
                .map(|i| game.arena.outgoing(VertexId(i)).next().unwrap().1.weight)
        };
        assert_eq!(loop_weight(RegretVertex::Bot), Some(-1));
        assert_eq!(loop_weight(RegretVertex::BotR1), Some(-1));
        assert_eq!(loop_weight(RegretVertex::BotR2), Some(1));
        let entry: Vec<i64> = game
            .labels
            .iter()
            .enumerate()
            .filter(|(_, l)| matches!(l, RegretVertex::Pair(..)))
            .flat_map(|(i, _)| {
                game.arena
                    .outgoing(VertexId(i))
                    .filter(|(_, e)| matches!(game.labels[e.dst.0], RegretVertex::BotR1))
                    .map(|(_, e)| e.weight)
            })
            .collect();
        assert!(entry.iter().all(|&w| w == 1 - game.penalty));
        assert!(!entry.is_empty());
        // No resets anywhere.
        assert_eq!(game.arena.reset_edges().count(), 0);
    }

    #[test]
    fn existential_variant_omits_the_checkpoint() {
        let limits = Limits::default();
        let n = corpus::make_fig3().trim();
        let (d, _) = determinize_via_joker(&n, &limits).unwrap();
        let game = build_regret_energy_game(&n, &d, false, &limits).unwrap();
        assert!(game
            .labels
            .iter()
            .all(|l| !matches!(l, RegretVertex::BotR1 | RegretVertex::BotR2)));
    }
}
