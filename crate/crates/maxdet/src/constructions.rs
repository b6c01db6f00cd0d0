//! Determinization-adjacent automaton transformations: pair-determinization
//! (the weighted subset construction), the k-delay construction, their fused
//! version, and B-bounded determinization.
//!
//! Every construction explores only the states reachable from the initial
//! configuration through a canonical worklist, so full powersets are never
//! materialized and outputs are byte-stable across runs.

use crate::automaton::{StateId, Transition, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::weight::checked_add;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

fn set_name(wa: &WeightedAutomaton, states: &[StateId]) -> String {
    let names: Vec<&str> = states.iter().map(|&q| wa.state_name(q)).collect();
    format!("{{{}}}", names.join(","))
}

/// The weighted subset construction P(N), reachable part only: for each
/// subset U, symbol a and occurring weight x there is one transition to the
/// set of x-weighted a-successors of U. The result is pair-deterministic,
/// 0-included in N both ways, and value-equivalent to N.
pub fn pair_determinize(n: &WeightedAutomaton, limits: &Limits) -> Result<WeightedAutomaton> {
    if n.initial().is_empty() {
        return Ok(WeightedAutomaton::empty_language(n.alphabet().to_vec()));
    }
    let start: Vec<StateId> = n.initial().iter().copied().collect();
    let mut index: BTreeMap<Vec<StateId>, StateId> = BTreeMap::new();
    let mut names = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(start.clone(), StateId(0));
    names.push(set_name(n, &start));
    queue.push_back(start);
    let mut transitions = Vec::new();
    let mut finals = BTreeSet::new();
    while let Some(subset) = queue.pop_front() {
        let src = index[&subset];
        if subset.iter().any(|&q| n.is_final(q)) {
            finals.insert(src);
        }
        for a in n.symbols() {
            let mut by_weight: BTreeMap<i64, BTreeSet<StateId>> = BTreeMap::new();
            for &q in &subset {
                for t in n.successors(q, a) {
                    by_weight.entry(t.weight).or_default().insert(t.dst);
                }
            }
            for (x, targets) in by_weight {
                let target: Vec<StateId> = targets.into_iter().collect();
                let dst = match index.get(&target) {
                    Some(&id) => id,
                    None => {
                        limits.check_states(names.len() + 1)?;
                        let id = StateId(names.len());
                        names.push(set_name(n, &target));
                        index.insert(target.clone(), id);
                        queue.push_back(target);
                        id
                    }
                };
                transitions.push(Transition { src, sym: a, weight: x, dst });
            }
        }
    }
    WeightedAutomaton::from_parts(n.alphabet().to_vec(), names, BTreeSet::from([StateId(0)]), finals, transitions)
}

/// The k-delay construction: states Q x {-k..k}, initial I x {0}, final
/// F x {0}, and a transition ((p,i), a, (q,j)) of weight i + w(p,a,q) - j
/// for every transition and every target delay j.
pub fn delay_construct(n: &WeightedAutomaton, k: i64, limits: &Limits) -> Result<WeightedAutomaton> {
    if k < 0 {
        return Err(Error::Precondition("delay bound k must be nonnegative".into()));
    }
    let width = (2 * k + 1) as usize;
    limits.check_states(n.state_count().saturating_mul(width))?;
    let id = |q: StateId, d: i64| StateId(q.0 * width + (d + k) as usize);
    let mut names = Vec::with_capacity(n.state_count() * width);
    for q in n.states() {
        for d in -k..=k {
            names.push(format!("({},{:+})", n.state_name(q), d));
        }
    }
    let initial: BTreeSet<StateId> = n.initial().iter().map(|&q| id(q, 0)).collect();
    let finals: BTreeSet<StateId> = n.finals().iter().map(|&q| id(q, 0)).collect();
    let mut transitions = Vec::new();
    for t in n.transitions() {
        for i in -k..=k {
            for j in -k..=k {
                transitions.push(Transition {
                    src: id(t.src, i),
                    sym: t.sym,
                    weight: checked_add(checked_add(i, t.weight)?, -j)?,
                    dst: id(t.dst, j),
                });
            }
        }
    }
    WeightedAutomaton::from_parts(n.alphabet().to_vec(), names, initial, finals, transitions)
}

/// A state of the fused construction: source states annotated with every
/// delay at which a tracked run currently sits, canonically ordered. In the
/// common case each state carries one delay; several survive when two runs
/// reach the same state with different histories inside the delay window.
type DelaySet = Vec<(StateId, i64)>;

fn delay_set_name(wa: &WeightedAutomaton, s: &DelaySet) -> String {
    let parts: Vec<String> = s.iter().map(|&(q, d)| format!("{}{:+}", wa.state_name(q), d)).collect();
    format!("{{{}}}", parts.join(","))
}

/// The reachable pair-determinization of the k-delay construction, computed
/// directly over delay-annotated subsets without materializing the delay
/// automaton. Evaluates identically to
/// `pair_determinize(delay_construct(n, k))` and shares its reachable
/// state structure.
pub fn delay_subset_construct(n: &WeightedAutomaton, k: i64, limits: &Limits) -> Result<WeightedAutomaton> {
    if k < 0 {
        return Err(Error::Precondition("delay bound k must be nonnegative".into()));
    }
    if n.initial().is_empty() {
        return Ok(WeightedAutomaton::empty_language(n.alphabet().to_vec()));
    }
    let start: DelaySet = n.initial().iter().map(|&q| (q, 0)).collect();
    let mut index: BTreeMap<DelaySet, StateId> = BTreeMap::new();
    let mut names = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(start.clone(), StateId(0));
    names.push(delay_set_name(n, &start));
    queue.push_back(start);
    let mut transitions = Vec::new();
    let mut finals = BTreeSet::new();
    while let Some(subset) = queue.pop_front() {
        let src = index[&subset];
        if subset.iter().any(|&(q, d)| d == 0 && n.is_final(q)) {
            finals.insert(src);
        }
        for a in n.symbols() {
            // Group annotated successors by the committed weight
            // x = d + w(q,a,q') - j; each in-window j contributes.
            let mut by_weight: BTreeMap<i64, BTreeSet<(StateId, i64)>> = BTreeMap::new();
            for &(q, d) in &subset {
                for t in n.successors(q, a) {
                    let level = checked_add(d, t.weight)?;
                    for j in -k..=k {
                        by_weight.entry(level - j).or_default().insert((t.dst, j));
                    }
                }
            }
            for (x, targets) in by_weight {
                let target: DelaySet = targets.into_iter().collect();
                let dst = match index.get(&target) {
                    Some(&id) => id,
                    None => {
                        limits.check_states(names.len() + 1)?;
                        let id = StateId(names.len());
                        names.push(delay_set_name(n, &target));
                        index.insert(target.clone(), id);
                        queue.push_back(target);
                        id
                    }
                };
                transitions.push(Transition { src, sym: a, weight: x, dst });
            }
        }
    }
    WeightedAutomaton::from_parts(n.alphabet().to_vec(), names, BTreeSet::from([StateId(0)]), finals, transitions)
}

/// A state of the bounded determinization: per source state, the offset of
/// the best run ending there relative to the output so far, within
/// {-B..B}; absent states are at -infinity.
type Profile = Vec<(StateId, i64)>;

fn profile_name(wa: &WeightedAutomaton, g: &Profile) -> String {
    let parts: Vec<String> = g.iter().map(|&(q, d)| format!("{}:{}", wa.state_name(q), d)).collect();
    format!("{{{}}}", parts.join(","))
}

/// Determinization with cutoff B: tracks, per state, the delay of the best
/// initial run ending there against the emitted output, dropping runs that
/// fall more than B behind the front. On a B-bounded automaton the result
/// is an equivalent DWA; on other automata it is a well-formed DWA whose
/// value function may differ, so callers must supply a sound B.
pub fn bounded_determinize(n: &WeightedAutomaton, bound: i64, limits: &Limits) -> Result<WeightedAutomaton> {
    if bound < 0 {
        return Err(Error::Precondition("bound B must be nonnegative".into()));
    }
    if !n.is_trim() {
        return Err(Error::NotTrim);
    }
    if n.state_count() == 0 || n.initial().is_empty() {
        return Ok(WeightedAutomaton::empty_language(n.alphabet().to_vec()));
    }
    let start: Profile = n.initial().iter().map(|&q| (q, 0)).collect();
    let mut index: BTreeMap<Profile, StateId> = BTreeMap::new();
    let mut names = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(start.clone(), StateId(0));
    names.push(profile_name(n, &start));
    queue.push_back(start);
    let mut transitions = Vec::new();
    let mut finals = BTreeSet::new();
    while let Some(profile) = queue.pop_front() {
        let src = index[&profile];
        if profile.iter().any(|&(q, _)| n.is_final(q)) {
            finals.insert(src);
        }
        for a in n.symbols() {
            // Best continuation per target state.
            let mut m: BTreeMap<StateId, i64> = BTreeMap::new();
            for &(p, gp) in &profile {
                for t in n.successors(p, a) {
                    let v = checked_add(gp, t.weight)?;
                    m.entry(t.dst).and_modify(|b| *b = (*b).max(v)).or_insert(v);
                }
            }
            if m.is_empty() {
                continue;
            }
            let m_max = *m.values().max().unwrap();
            // Runs more than B behind the front can never become maximal.
            let kept: BTreeMap<StateId, i64> = m.into_iter().filter(|&(_, v)| m_max - v <= bound).collect();
            let final_best = kept
                .iter()
                .filter(|(q, _)| n.is_final(**q))
                .map(|(_, &v)| v)
                .max();
            let out_weight = final_best.unwrap_or(m_max);
            let target: Profile = kept.into_iter().map(|(q, v)| (q, v - out_weight)).collect();
            let dst = match index.get(&target) {
                Some(&id) => id,
                None => {
                    limits.check_states(names.len() + 1)?;
                    let id = StateId(names.len());
                    names.push(profile_name(n, &target));
                    index.insert(target.clone(), id);
                    queue.push_back(target);
                    id
                }
            };
            transitions.push(Transition { src, sym: a, weight: out_weight, dst });
        }
    }
    WeightedAutomaton::from_parts(n.alphabet().to_vec(), names, BTreeSet::from([StateId(0)]), finals, transitions)
}

/// Determinization of an automaton whose value range is within {-B..B}:
/// such an automaton is (3B + 2|Q| w_max)-bounded.
pub fn range_bound_determinize(n: &WeightedAutomaton, range: i64, limits: &Limits) -> Result<WeightedAutomaton> {
    let bound = range_bound(n, range)?;
    bounded_determinize(n, bound, limits)
}

/// The cutoff 3B + 2|Q| w_max used by [`range_bound_determinize`].
pub fn range_bound(n: &WeightedAutomaton, range: i64) -> Result<i64> {
    if range < 0 {
        return Err(Error::Precondition("range bound must be nonnegative".into()));
    }
    let q = n.state_count() as i64;
    checked_add(3i64.checked_mul(range).ok_or(Error::Overflow)?, 2 * q * n.max_weight())
}

/// Horizon used by the construction-time precondition oracle of
/// [`exactify`].
const EXACTIFY_ORACLE_HORIZON: usize = 6;

/// Given a deterministic D with the same language as N whose values stay
/// within r of N's, builds a deterministic automaton realizing N exactly:
/// the difference automaton M = N - D has range {-r..r}, so it
/// determinizes by range bound, and the sum product D + det(M) equals N.
pub fn exactify(
    n: &WeightedAutomaton,
    d: &WeightedAutomaton,
    r: i64,
    limits: &Limits,
) -> Result<WeightedAutomaton> {
    if !d.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    let m = crate::automaton::difference_product(n, d)?.trim();
    // Bounded oracle for the supplied r: a word where the difference leaves
    // {-r..r} witnesses a precondition violation.
    for w in crate::automaton::words_up_to(n.symbol_count(), EXACTIFY_ORACLE_HORIZON) {
        if let Some(v) = m.evaluate(&w)?.finite() {
            if v.abs() > r {
                return Err(Error::Precondition(format!(
                    "difference automaton reaches {} on word \"{}\", outside the stated range {}",
                    v,
                    n.format_word(&w),
                    r
                )));
            }
        }
    }
    if m.state_count() == 0 {
        // Empty intersection language: N's language is empty as well under
        // the stated preconditions.
        return Ok(WeightedAutomaton::empty_language(n.alphabet().to_vec()));
    }
    let dm = range_bound_determinize(&m, r, limits)?;
    crate::automaton::sum_product(d, &dm)
}
