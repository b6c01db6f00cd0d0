//! Independent brute-force reference implementations used to validate every
//! production construction and solver on small instances.
//!
//! The oracles deliberately share no solver logic with the production
//! modules: values come from explicit run enumeration instead of the layered
//! DP, and game winners from a greatest-fixpoint over explicit
//! (vertex, credit) pairs instead of the safety reduction or value lifting.

use crate::automaton::{words_up_to, StateId, WeightedAutomaton, Word};
use crate::egames::{EgrArena, Player, VertexId};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::mealy::MealyMachine;
use crate::weight::{Bottom, ExtendedWeight, Finite};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Run fan-out cap for the enumerating oracles; exceeding it yields an
/// inconclusive error, never a silent pass.
pub const ENUMERATION_CAP: usize = 1_000_000;

/// Outcome of one oracle check; failures carry a replayable counterexample.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleReport {
    pub check: String,
    pub horizon: usize,
    pub pass: bool,
    pub counterexample: Option<String>,
}

impl OracleReport {
    fn pass(check: &str, horizon: usize) -> OracleReport {
        OracleReport { check: check.into(), horizon, pass: true, counterexample: None }
    }

    fn fail(check: &str, horizon: usize, counterexample: String) -> OracleReport {
        OracleReport { check: check.into(), horizon, pass: false, counterexample: Some(counterexample) }
    }
}

/// Word value by explicit enumeration of all runs (contrast with the DP in
/// [`WeightedAutomaton::evaluate`]).
pub fn brute_value(n: &WeightedAutomaton, word: &[crate::SymbolId]) -> Result<ExtendedWeight> {
    let mut best = Bottom;
    let mut visited = 0usize;
    let mut stack: Vec<(StateId, usize, i64)> = n.initial().iter().map(|&q| (q, 0, 0)).collect();
    while let Some((q, pos, sum)) = stack.pop() {
        visited += 1;
        if visited > ENUMERATION_CAP {
            return Err(Error::Budget { what: "run enumeration", limit: ENUMERATION_CAP, needed: visited });
        }
        if pos == word.len() {
            if n.is_final(q) {
                best = best.max(Finite(sum));
            }
            continue;
        }
        for t in n.successors(q, word[pos]) {
            stack.push((t.dst, pos + 1, sum + t.weight));
        }
    }
    Ok(best)
}

/// Prefix-sum sequences of all accepting runs of `n` on `word`, enumerated
/// transition by transition so parallel transitions count as distinct runs.
fn accepting_run_sums(n: &WeightedAutomaton, word: &[crate::SymbolId]) -> Result<Vec<Vec<i64>>> {
    let mut runs = Vec::new();
    let mut visited = 0usize;
    let mut stack: Vec<(StateId, Vec<i64>)> = n.initial().iter().map(|&q| (q, vec![0])).collect();
    while let Some((q, sums)) = stack.pop() {
        visited += 1;
        if visited > ENUMERATION_CAP {
            return Err(Error::Budget { what: "run enumeration", limit: ENUMERATION_CAP, needed: visited });
        }
        let pos = sums.len() - 1;
        if pos == word.len() {
            if n.is_final(q) {
                runs.push(sums);
            }
            continue;
        }
        for t in n.successors(q, word[pos]) {
            let mut next = sums.clone();
            next.push(sums[pos] + t.weight);
            stack.push((t.dst, next));
        }
    }
    Ok(runs)
}

/// Regret of a Mealy strategy restricted to words of length at most
/// `horizon`: the worst gap between the word value and the value of the run
/// the strategy builds, infinite when the strategy misses a language word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regret {
    Finite(i64),
    Infinite,
}

impl std::fmt::Display for Regret {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regret::Finite(v) => write!(f, "{v}"),
            Regret::Infinite => write!(f, "infinite"),
        }
    }
}

pub fn brute_regret(n: &WeightedAutomaton, m: &MealyMachine, horizon: usize) -> Result<Regret> {
    let mut worst: Option<i64> = None;
    for word in words_up_to(n.symbol_count(), horizon) {
        let Finite(value) = n.evaluate(&word)? else { continue };
        match m.run_value(n, &word) {
            Bottom => return Ok(Regret::Infinite),
            Finite(v) => {
                let gap = value - v;
                worst = Some(worst.map_or(gap, |w| w.max(gap)));
            }
        }
    }
    Ok(Regret::Finite(worst.unwrap_or(0)))
}

/// Least k with `d` k-included in `n` over the horizon, or None when the
/// value functions already disagree there.
pub fn brute_min_delay(d: &WeightedAutomaton, n: &WeightedAutomaton, horizon: usize) -> Result<Option<i64>> {
    if !equivalence_check(d, n, horizon)?.pass {
        return Ok(None);
    }
    let ceiling = (horizon as i64 + 1) * (d.max_weight() + n.max_weight()) + 1;
    for k in 0..=ceiling {
        if crate::inclusion::check_k_inclusion(d, n, k, horizon)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Exact EGR winner from (v, c0) by a greatest fixpoint over explicit
/// (vertex, clamped credit) pairs: pairs from which some move stays alive
/// (for Eve) or all moves stay alive (for Adam) survive the pruning.
pub fn brute_egr(arena: &EgrArena, v: VertexId, c0: i64) -> bool {
    let cap = arena.credit_cap();
    let c0 = c0.min(cap);
    if c0 < 0 {
        return false;
    }
    let levels = (cap + 1) as usize;
    let n = arena.vertex_count();
    let idx = |u: VertexId, c: i64| u.0 * levels + c as usize;
    let mut alive = vec![true; n * levels];
    let next = |c: i64, eid: usize| -> Option<i64> {
        let e = arena.edge(eid);
        let d = if e.reset { c0 + e.weight } else { c + e.weight };
        if d < 0 {
            None
        } else {
            Some(d.min(cap))
        }
    };
    loop {
        let mut changed = false;
        for u in arena.vertices() {
            for c in 0..=cap {
                if !alive[idx(u, c)] {
                    continue;
                }
                let mut moves = arena.outgoing(u).map(|(eid, e)| {
                    next(c, eid).map(|d| alive[idx(e.dst, d)]).unwrap_or(false)
                });
                let ok = match arena.owner(u) {
                    Player::Eve => moves.any(|m| m),
                    Player::Adam => moves.all(|m| m),
                };
                if !ok {
                    alive[idx(u, c)] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return alive[idx(v, c0)];
        }
    }
}

/// Winner of a first-cycle play: Eve wins iff the cycle has a reset edge or
/// a nonnegative weight sum. The lasso is a path (edge indices) whose last
/// vertex closes exactly one cycle.
pub fn first_cycle_winner(arena: &EgrArena, lasso: &[usize]) -> Result<Player> {
    if lasso.is_empty() {
        return Err(Error::NotALasso);
    }
    for pair in lasso.windows(2) {
        if arena.edge(pair[0]).dst != arena.edge(pair[1]).src {
            return Err(Error::NotAPath);
        }
    }
    let mut vertices: Vec<VertexId> = vec![arena.edge(lasso[0]).src];
    for &e in lasso {
        vertices.push(arena.edge(e).dst);
    }
    let last = *vertices.last().unwrap();
    let open = &vertices[..vertices.len() - 1];
    let start = open.iter().position(|&u| u == last).ok_or(Error::NotALasso)?;
    let distinct: BTreeSet<VertexId> = open.iter().copied().collect();
    if distinct.len() != open.len() {
        return Err(Error::NotALasso);
    }
    let cycle = &lasso[start..];
    let has_reset = cycle.iter().any(|&e| arena.edge(e).reset);
    let sum: i64 = cycle.iter().map(|&e| arena.edge(e).weight).sum();
    Ok(if has_reset || sum >= 0 { Player::Eve } else { Player::Adam })
}

/// Verifies B-boundedness over the horizon: for every word, every maximal
/// accepting run, every prefix length i and every initial run of length i,
/// the initial run exceeds the maximal run's prefix by at most B.
pub fn brute_bound_check(n: &WeightedAutomaton, bound: i64, horizon: usize) -> Result<OracleReport> {
    let check = format!("{bound}-bounded");
    // Boundedness is defined on trim automata; trimming preserves the value
    // function and the runs the definition quantifies over.
    let n = &n.trim();
    for word in words_up_to(n.symbol_count(), horizon) {
        let value = match n.evaluate(&word)? {
            Bottom => continue,
            Finite(v) => v,
        };
        // Best initial-run weight per prefix length, over all runs.
        let mut best_prefix = vec![i64::MIN; word.len() + 1];
        let mut layer: Vec<Option<i64>> = vec![None; n.state_count()];
        for &q in n.initial() {
            layer[q.0] = Some(0);
        }
        for i in 0..=word.len() {
            for v in layer.iter().flatten() {
                best_prefix[i] = best_prefix[i].max(*v);
            }
            if i == word.len() {
                break;
            }
            let mut next: Vec<Option<i64>> = vec![None; n.state_count()];
            for q in n.states() {
                if let Some(v) = layer[q.0] {
                    for t in n.successors(q, word[i]) {
                        let c = v + t.weight;
                        next[t.dst.0] = Some(next[t.dst.0].map_or(c, |b: i64| b.max(c)));
                    }
                }
            }
            layer = next;
        }
        for sums in accepting_run_sums(n, &word)? {
            if *sums.last().unwrap() != value {
                continue; // not maximal
            }
            for (i, &p) in sums.iter().enumerate() {
                if best_prefix[i] != i64::MIN && best_prefix[i] - p > bound {
                    return Ok(OracleReport::fail(
                        &check,
                        horizon,
                        format!(
                            "word \"{}\": initial runs reach {} at position {i} while a maximal run sits at {p}",
                            n.format_word(&word),
                            best_prefix[i]
                        ),
                    ));
                }
            }
        }
    }
    Ok(OracleReport::pass(&check, horizon))
}

/// Value-function agreement (including undefinedness) on all words up to the
/// horizon.
pub fn equivalence_check(n1: &WeightedAutomaton, n2: &WeightedAutomaton, horizon: usize) -> Result<OracleReport> {
    if n1.alphabet() != n2.alphabet() {
        return Err(Error::AlphabetMismatch(n1.alphabet().join(","), n2.alphabet().join(",")));
    }
    for word in words_up_to(n1.symbol_count(), horizon) {
        let (a, b) = (n1.evaluate(&word)?, n2.evaluate(&word)?);
        if a != b {
            return Ok(OracleReport::fail(
                "evaluate-equality",
                horizon,
                format!("word \"{}\": {} vs {}", n1.format_word(&word), a, b),
            ));
        }
    }
    Ok(OracleReport::pass("evaluate-equality", horizon))
}

/// Language equality plus pointwise value distance at most `bound`, on all
/// words up to the horizon: the defining property of a regret determinizer.
pub fn regret_range_check(
    n: &WeightedAutomaton,
    d: &WeightedAutomaton,
    bound: i64,
    horizon: usize,
) -> Result<OracleReport> {
    let check = format!("language-equal-within-{bound}");
    if n.alphabet() != d.alphabet() {
        return Err(Error::AlphabetMismatch(n.alphabet().join(","), d.alphabet().join(",")));
    }
    for word in words_up_to(n.symbol_count(), horizon) {
        let (a, b) = (n.evaluate(&word)?, d.evaluate(&word)?);
        let ok = match (a, b) {
            (Bottom, Bottom) => true,
            (Finite(x), Finite(y)) => (x - y).abs() <= bound,
            _ => false,
        };
        if !ok {
            return Ok(OracleReport::fail(
                &check,
                horizon,
                format!("word \"{}\": {} vs {}", n.format_word(&word), a, b),
            ));
        }
    }
    Ok(OracleReport::pass(&check, horizon))
}

/// Least r at most r_max for which the automaton is r-regret determinizable.
pub fn min_regret_sweep(n: &WeightedAutomaton, r_max: i64, limits: &Limits) -> Result<Option<i64>> {
    for r in 0..=r_max {
        if crate::deciders::decide_r_regret(n, r, limits)?.answer {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Random instance generation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct RandomAutomatonParams {
    pub max_states: usize,
    pub alphabet_size: usize,
    pub weight_min: i64,
    pub weight_max: i64,
    pub density: f64,
    /// Reject samples whose trim part is empty.
    pub require_nonempty_trim: bool,
}

impl Default for RandomAutomatonParams {
    fn default() -> Self {
        RandomAutomatonParams {
            max_states: 5,
            alphabet_size: 2,
            weight_min: -2,
            weight_max: 2,
            density: 0.35,
            require_nonempty_trim: true,
        }
    }
}

/// Seeded random automaton: uniform transition presence at the given
/// density, weights uniform in range, at least one initial and final state,
/// rejection-sampled until the trim part is nonempty.
pub fn random_automaton(seed: u64, p: &RandomAutomatonParams) -> WeightedAutomaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let states = rng.gen_range(1..=p.max_states);
        let alphabet: Vec<String> = (0..p.alphabet_size)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect();
        let names: Vec<String> = (0..states).map(|i| format!("q{i}")).collect();
        let mut transitions = Vec::new();
        for s in 0..states {
            for a in 0..p.alphabet_size {
                for t in 0..states {
                    if rng.gen_bool(p.density) {
                        let w = rng.gen_range(p.weight_min..=p.weight_max);
                        transitions.push((names[s].clone(), alphabet[a].clone(), w, names[t].clone()));
                    }
                }
            }
        }
        let initial: Vec<String> = names
            .iter()
            .filter(|_| rng.gen_bool(0.4))
            .cloned()
            .collect();
        let initial = if initial.is_empty() { vec![names[rng.gen_range(0..states)].clone()] } else { initial };
        let finals: Vec<String> = names.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect();
        let finals = if finals.is_empty() { vec![names[rng.gen_range(0..states)].clone()] } else { finals };
        let wa = WeightedAutomaton::new(alphabet, names, initial, finals, transitions)
            .expect("random generator emits well-formed parts");
        if !p.require_nonempty_trim || wa.trim().state_count() > 0 {
            return wa;
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomArenaParams {
    pub max_vertices: usize,
    pub weight_min: i64,
    pub weight_max: i64,
    pub extra_edge_prob: f64,
    pub reset_prob: f64,
}

impl Default for RandomArenaParams {
    fn default() -> Self {
        RandomArenaParams { max_vertices: 6, weight_min: -3, weight_max: 3, extra_edge_prob: 0.25, reset_prob: 0.2 }
    }
}

/// Seeded random EGR arena: every vertex gets at least one outgoing edge
/// (no sinks); reset flags appear on Adam-owned sources only.
pub fn random_arena(seed: u64, p: &RandomArenaParams) -> EgrArena {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=p.max_vertices);
    let vertices: Vec<(String, Player)> = (0..n)
        .map(|i| (format!("v{i}"), if rng.gen_bool(0.5) { Player::Eve } else { Player::Adam }))
        .collect();
    let mut edges = Vec::new();
    for v in 0..n {
        let out_degree = 1 + (0..2).filter(|_| rng.gen_bool(p.extra_edge_prob)).count();
        for _ in 0..out_degree {
            let dst = rng.gen_range(0..n);
            let weight = rng.gen_range(p.weight_min..=p.weight_max);
            let reset = vertices[v].1 == Player::Adam && rng.gen_bool(p.reset_prob);
            edges.push(crate::egames::EgrEdge { src: VertexId(v), dst: VertexId(dst), weight, reset });
        }
    }
    EgrArena::new(vertices, edges).expect("generator avoids sinks and Eve resets")
}

/// Convenience: generated word sets for value comparisons.
pub fn sample_words(n: &WeightedAutomaton, horizon: usize) -> Vec<Word> {
    words_up_to(n.symbol_count(), horizon)
}
