//! The weighted-automaton data model and its run semantics.
//!
//! An automaton is a tuple (Q, I, A, Delta, w, F) over the max-plus domain:
//! runs sum their transition weights, a word's value is the maximum over its
//! accepting runs, and absent runs yield [`ExtendedWeight::Bottom`].
//!
//! States and symbols are interned as dense indices; the external names live
//! in side tables so that products and subset constructions hash cheaply.

use crate::error::{Error, Result};
use crate::weight::{checked_add, checked_mul, Bottom, ExtendedWeight, Finite};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

/// Index of a state in [`WeightedAutomaton::state_names`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

/// Index of a symbol in [`WeightedAutomaton::alphabet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub usize);

/// A word is a sequence of alphabet indices; the empty word is first-class.
pub type Word = Vec<SymbolId>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub src: StateId,
    pub sym: SymbolId,
    pub weight: i64,
    pub dst: StateId,
}

#[derive(Clone, Debug)]
pub struct WeightedAutomaton {
    alphabet: Vec<String>,
    state_names: Vec<String>,
    initial: BTreeSet<StateId>,
    finals: BTreeSet<StateId>,
    /// Sorted by (src, sym, dst); at most one weight per triple.
    transitions: Vec<Transition>,
    /// Per state, indices into `transitions`, ascending (hence sorted by symbol).
    out: Vec<Vec<usize>>,
}

impl PartialEq for WeightedAutomaton {
    /// Structural equality on names: order of internal ids is irrelevant as
    /// long as alphabet order, named state set, initial/final sets and the
    /// named transition set agree.
    fn eq(&self, other: &Self) -> bool {
        fn names(a: &WeightedAutomaton) -> BTreeSet<&str> {
            a.state_names.iter().map(|s| s.as_str()).collect()
        }
        fn set<'a>(a: &'a WeightedAutomaton, ids: &BTreeSet<StateId>) -> BTreeSet<&'a str> {
            ids.iter().map(|&q| a.state_name(q)).collect()
        }
        fn trans(a: &WeightedAutomaton) -> BTreeSet<(&str, &str, i64, &str)> {
            a.transitions
                .iter()
                .map(|t| (a.state_name(t.src), a.symbol_name(t.sym), t.weight, a.state_name(t.dst)))
                .collect()
        }
        self.alphabet == other.alphabet
            && names(self) == names(other)
            && set(self, &self.initial) == set(other, &other.initial)
            && set(self, &self.finals) == set(other, &other.finals)
            && trans(self) == trans(other)
    }
}

impl Eq for WeightedAutomaton {}

impl WeightedAutomaton {
    /// Builds and validates an automaton from named parts.
    ///
    /// Transitions are given as (source, symbol, weight, target) name tuples
    /// with set semantics: exact duplicates collapse. Parallel transitions
    /// (equal source, symbol and target, distinct weights) are allowed; the
    /// weighted subset construction produces them whenever two weight
    /// classes share a successor set.
    pub fn new(
        alphabet: Vec<String>,
        states: Vec<String>,
        initial: Vec<String>,
        finals: Vec<String>,
        transitions: Vec<(String, String, i64, String)>,
    ) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut sym_index = HashMap::new();
        for (i, s) in alphabet.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::Parse("empty symbol name".into()));
            }
            if sym_index.insert(s.clone(), SymbolId(i)).is_some() {
                return Err(Error::DuplicateName { kind: "symbol", name: s.clone() });
            }
        }
        let mut state_index = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if state_index.insert(s.clone(), StateId(i)).is_some() {
                return Err(Error::DuplicateName { kind: "state", name: s.clone() });
            }
        }
        let look_state = |name: &str| -> Result<StateId> {
            state_index.get(name).copied().ok_or_else(|| Error::UnknownState(name.into()))
        };
        let initial = initial.iter().map(|n| look_state(n)).collect::<Result<BTreeSet<_>>>()?;
        let finals = finals.iter().map(|n| look_state(n)).collect::<Result<BTreeSet<_>>>()?;
        let mut trans = Vec::with_capacity(transitions.len());
        for (src, sym, weight, dst) in &transitions {
            let sym = sym_index
                .get(sym)
                .copied()
                .ok_or_else(|| Error::UnknownSymbol(sym.clone()))?;
            trans.push(Transition { src: look_state(src)?, sym, weight: *weight, dst: look_state(dst)? });
        }
        Self::from_parts(alphabet, states, initial, finals, trans)
    }

    /// Internal constructor over already-interned parts.
    pub(crate) fn from_parts(
        alphabet: Vec<String>,
        state_names: Vec<String>,
        initial: BTreeSet<StateId>,
        finals: BTreeSet<StateId>,
        mut transitions: Vec<Transition>,
    ) -> Result<Self> {
        let n = state_names.len();
        let check = |q: StateId| -> Result<()> {
            if q.0 >= n {
                return Err(Error::UnknownState(format!("#{}", q.0)));
            }
            Ok(())
        };
        for &q in initial.iter().chain(finals.iter()) {
            check(q)?;
        }
        transitions.sort_by_key(|t| (t.src, t.sym, t.dst, t.weight));
        transitions.dedup();
        let mut out = vec![Vec::new(); n];
        for (i, t) in transitions.iter().enumerate() {
            check(t.src)?;
            check(t.dst)?;
            if t.sym.0 >= alphabet.len() {
                return Err(Error::UnknownSymbol(format!("#{}", t.sym.0)));
            }
            out[t.src.0].push(i);
        }
        Ok(WeightedAutomaton { alphabet, state_names, initial, finals, transitions, out })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.state_names[q.0]
    }

    pub fn symbol_name(&self, a: SymbolId) -> &str {
        &self.alphabet[a.0]
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn symbol_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.state_count()).map(StateId)
    }

    pub fn symbols(&self) -> impl Iterator<Item = SymbolId> {
        (0..self.symbol_count()).map(SymbolId)
    }

    pub fn initial(&self) -> &BTreeSet<StateId> {
        &self.initial
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals.contains(&q)
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|s| s == name).map(StateId)
    }

    pub fn symbol_id(&self, name: &str) -> Option<SymbolId> {
        self.alphabet.iter().position(|s| s == name).map(SymbolId)
    }

    /// Outgoing transitions of `q`, ascending by (symbol, target).
    pub fn outgoing(&self, q: StateId) -> impl Iterator<Item = &Transition> {
        self.out[q.0].iter().map(move |&i| &self.transitions[i])
    }

    /// Outgoing transitions of `q` on symbol `a`.
    pub fn successors(&self, q: StateId, a: SymbolId) -> impl Iterator<Item = &Transition> {
        self.outgoing(q).filter(move |t| t.sym == a)
    }

    pub fn has_successor(&self, q: StateId, a: SymbolId) -> bool {
        self.successors(q, a).next().is_some()
    }

    /// Weight of the (src, a, dst) transition if present; the largest weight
    /// when parallel transitions connect the pair (the best-run convention,
    /// consistent with the max-plus value semantics).
    pub fn weight_of(&self, src: StateId, a: SymbolId, dst: StateId) -> Option<i64> {
        self.successors(src, a).filter(|t| t.dst == dst).map(|t| t.weight).max()
    }

    /// Is (src, a, weight, dst) a transition?
    pub fn has_transition(&self, src: StateId, a: SymbolId, weight: i64, dst: StateId) -> bool {
        self.successors(src, a).any(|t| t.dst == dst && t.weight == weight)
    }

    /// Parses a word over this automaton's alphabet.
    ///
    /// Symbols are comma-joined; when every symbol of the alphabet is a single
    /// character a bare string is accepted as well. The empty string is the
    /// empty word.
    pub fn parse_word(&self, input: &str) -> Result<Word> {
        if input.is_empty() {
            return Ok(Vec::new());
        }
        let lookup = |name: &str| -> Result<SymbolId> {
            self.symbol_id(name).ok_or_else(|| Error::UnknownSymbol(name.into()))
        };
        if input.contains(',') {
            return input.split(',').map(lookup).collect();
        }
        if self.alphabet.iter().all(|s| s.chars().count() == 1) {
            return input.chars().map(|c| lookup(&c.to_string())).collect();
        }
        Ok(vec![lookup(input)?])
    }

    pub fn format_word(&self, word: &[SymbolId]) -> String {
        let parts: Vec<&str> = word.iter().map(|&a| self.symbol_name(a)).collect();
        if self.alphabet.iter().all(|s| s.chars().count() == 1) {
            parts.concat()
        } else {
            parts.join(",")
        }
    }

    /// Maximum absolute transition weight; 0 when there are no transitions,
    /// which keeps the |V| * w_max credit formulas well defined.
    pub fn max_weight(&self) -> i64 {
        self.transitions.iter().map(|t| t.weight.abs()).max().unwrap_or(0)
    }

    /// A single initial state and at most one transition per (state, symbol).
    pub fn is_deterministic(&self) -> bool {
        if self.initial.len() != 1 {
            return false;
        }
        self.transitions
            .windows(2)
            .all(|w| (w[0].src, w[0].sym) != (w[1].src, w[1].sym))
    }

    /// A single initial state, and same-(state, symbol) transitions either
    /// share their target or carry distinct weights.
    pub fn is_pair_deterministic(&self) -> bool {
        if self.initial.len() != 1 {
            return false;
        }
        // Transitions are sorted by (src, sym, dst) with unique triples, so a
        // violation is two triples t1 != t2 with equal (src, sym, weight).
        for q in self.states() {
            let mut seen: Vec<(SymbolId, i64)> = Vec::new();
            for t in self.outgoing(q) {
                if seen.contains(&(t.sym, t.weight)) {
                    return false;
                }
                seen.push((t.sym, t.weight));
            }
        }
        true
    }

    /// Value of `word`: the maximum over all accepting runs, computed by a
    /// layered dynamic program carrying the best reachable partial sum per
    /// state, never by run enumeration.
    pub fn evaluate(&self, word: &[SymbolId]) -> Result<ExtendedWeight> {
        for &a in word {
            if a.0 >= self.symbol_count() {
                return Err(Error::UnknownSymbol(format!("#{}", a.0)));
            }
        }
        let mut layer: Vec<ExtendedWeight> = vec![Bottom; self.state_count()];
        for &q in &self.initial {
            layer[q.0] = Finite(0);
        }
        for &a in word {
            let mut next: Vec<ExtendedWeight> = vec![Bottom; self.state_count()];
            for q in self.states() {
                if let Finite(v) = layer[q.0] {
                    for t in self.successors(q, a) {
                        let c = Finite(checked_add(v, t.weight)?);
                        next[t.dst.0] = next[t.dst.0].max(c);
                    }
                }
            }
            layer = next;
        }
        let mut best = Bottom;
        for &q in &self.finals {
            best = best.max(layer[q.0]);
        }
        Ok(best)
    }

    /// The word is accepted iff it has an accepting run.
    pub fn accepts(&self, word: &[SymbolId]) -> Result<bool> {
        Ok(!self.evaluate(word)?.is_bottom())
    }

    /// States reachable from the initial set.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut queue: VecDeque<StateId> = self.initial.iter().copied().collect();
        for &q in &self.initial {
            seen[q.0] = true;
        }
        while let Some(q) = queue.pop_front() {
            for t in self.outgoing(q) {
                if !seen[t.dst.0] {
                    seen[t.dst.0] = true;
                    queue.push_back(t.dst);
                }
            }
        }
        seen
    }

    /// States from which some final state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let mut inc: Vec<Vec<StateId>> = vec![Vec::new(); self.state_count()];
        for t in &self.transitions {
            inc[t.dst.0].push(t.src);
        }
        let mut seen = vec![false; self.state_count()];
        let mut queue: VecDeque<StateId> = self.finals.iter().copied().collect();
        for &q in &self.finals {
            seen[q.0] = true;
        }
        while let Some(q) = queue.pop_front() {
            for &p in &inc[q.0] {
                if !seen[p.0] {
                    seen[p.0] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    pub fn is_trim(&self) -> bool {
        let r = self.reachable();
        let c = self.coreachable();
        self.states().all(|q| r[q.0] && c[q.0])
    }

    /// The sub-automaton of states both reachable from I and co-reachable to
    /// F. The language and value function are unchanged; the result may have
    /// an empty state set when the language is empty.
    pub fn trim(&self) -> WeightedAutomaton {
        let r = self.reachable();
        let c = self.coreachable();
        let keep: Vec<StateId> = self.states().filter(|q| r[q.0] && c[q.0]).collect();
        let mut renum: HashMap<StateId, StateId> = HashMap::new();
        let mut names = Vec::with_capacity(keep.len());
        for (i, &q) in keep.iter().enumerate() {
            renum.insert(q, StateId(i));
            names.push(self.state_names[q.0].clone());
        }
        let map = |set: &BTreeSet<StateId>| -> BTreeSet<StateId> {
            set.iter().filter_map(|q| renum.get(q).copied()).collect()
        };
        let transitions = self
            .transitions
            .iter()
            .filter_map(|t| {
                Some(Transition {
                    src: *renum.get(&t.src)?,
                    sym: t.sym,
                    weight: t.weight,
                    dst: *renum.get(&t.dst)?,
                })
            })
            .collect();
        WeightedAutomaton::from_parts(self.alphabet.clone(), names, map(&self.initial), map(&self.finals), transitions)
            .expect("trim of a valid automaton is valid")
    }

    /// Every transition weight multiplied by `x`; structure unchanged.
    pub fn scale(&self, x: i64) -> Result<WeightedAutomaton> {
        let transitions = self
            .transitions
            .iter()
            .map(|t| Ok(Transition { weight: checked_mul(t.weight, x)?, ..*t }))
            .collect::<Result<Vec<_>>>()?;
        WeightedAutomaton::from_parts(
            self.alphabet.clone(),
            self.state_names.clone(),
            self.initial.clone(),
            self.finals.clone(),
            transitions,
        )
    }

    /// Replaces each weight `x` by the unique integer g with
    /// |(4k+1) g - x| <= 2k (the nearest-multiple quotient).
    pub fn gamma_round(&self, k: i64) -> WeightedAutomaton {
        let transitions = self
            .transitions
            .iter()
            .map(|t| Transition { weight: gamma(t.weight, k), ..*t })
            .collect();
        WeightedAutomaton::from_parts(
            self.alphabet.clone(),
            self.state_names.clone(),
            self.initial.clone(),
            self.finals.clone(),
            transitions,
        )
        .expect("gamma rounding preserves validity")
    }

    /// An automaton with the same alphabet, a single initial non-final state
    /// and no transitions: the canonical empty-language DWA.
    pub fn empty_language(alphabet: Vec<String>) -> WeightedAutomaton {
        WeightedAutomaton::from_parts(
            alphabet,
            vec!["empty".to_string()],
            BTreeSet::from([StateId(0)]),
            BTreeSet::new(),
            Vec::new(),
        )
        .expect("empty-language automaton is valid")
    }
}

/// The unique g with |(4k+1) g - x| <= 2k.
pub fn gamma(x: i64, k: i64) -> i64 {
    let m = 4 * k + 1;
    (x + 2 * k).div_euclid(m)
}

/// A run q0 a0 q1 ... a(n-1) qn of an automaton; n = 0 is the single-state
/// run, accepting iff that state is initial and final.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub states: Vec<StateId>,
    pub symbols: Vec<SymbolId>,
}

impl Run {
    pub fn new(states: Vec<StateId>, symbols: Vec<SymbolId>) -> Result<Run> {
        if states.len() != symbols.len() + 1 || states.is_empty() {
            return Err(Error::Parse("run shape must be q0 a0 q1 ... qn".into()));
        }
        Ok(Run { states, symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn word(&self) -> Word {
        self.symbols.clone()
    }

    /// Checks that each consecutive triple is a transition of `wa`.
    pub fn is_run_of(&self, wa: &WeightedAutomaton) -> bool {
        self.states.iter().all(|q| q.0 < wa.state_count())
            && (0..self.symbols.len())
                .all(|i| wa.weight_of(self.states[i], self.symbols[i], self.states[i + 1]).is_some())
    }

    pub fn is_initial(&self, wa: &WeightedAutomaton) -> bool {
        wa.initial().contains(&self.states[0])
    }

    pub fn is_final(&self, wa: &WeightedAutomaton) -> bool {
        wa.is_final(*self.states.last().unwrap())
    }

    pub fn is_accepting(&self, wa: &WeightedAutomaton) -> bool {
        self.is_initial(wa) && self.is_final(wa)
    }

    /// Sum of the transition weights; parallel transitions contribute their
    /// largest weight (the best run through this state sequence).
    pub fn value(&self, wa: &WeightedAutomaton) -> Result<i64> {
        let mut sum = 0i64;
        for i in 0..self.symbols.len() {
            let w = wa
                .weight_of(self.states[i], self.symbols[i], self.states[i + 1])
                .ok_or(Error::Parse("not a run of the automaton".into()))?;
            sum = checked_add(sum, w)?;
        }
        Ok(sum)
    }

    /// Partial sums of the run: entry i is the value of the length-i prefix.
    pub fn prefix_sums(&self, wa: &WeightedAutomaton) -> Result<Vec<i64>> {
        let mut sums = Vec::with_capacity(self.symbols.len() + 1);
        let mut acc = 0i64;
        sums.push(acc);
        for i in 0..self.symbols.len() {
            let w = wa
                .weight_of(self.states[i], self.symbols[i], self.states[i + 1])
                .ok_or(Error::Parse("not a run of the automaton".into()))?;
            acc = checked_add(acc, w)?;
            sums.push(acc);
        }
        Ok(sums)
    }

    /// An accepting run is maximal when its value attains the word's value.
    pub fn is_maximal(&self, wa: &WeightedAutomaton) -> Result<bool> {
        if !self.is_accepting(wa) || !self.is_run_of(wa) {
            return Ok(false);
        }
        Ok(ExtendedWeight::Finite(self.value(wa)?) == wa.evaluate(&self.symbols)?)
    }
}

/// A total mapping from the states of one automaton into another.
/// Validity (initial/final containment and weight-preserving transition
/// mapping) is a checkable predicate, not a construction invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    pub map: Vec<StateId>,
}

impl Homomorphism {
    pub fn identity(wa: &WeightedAutomaton) -> Homomorphism {
        Homomorphism { map: wa.states().collect() }
    }

    pub fn apply(&self, q: StateId) -> StateId {
        self.map[q.0]
    }
}

/// True iff `mu` is a homomorphism from `d` to `n`: mu(I) within I', mu(F)
/// within F', and every transition maps to a transition of equal weight.
pub fn check_homomorphism(mu: &Homomorphism, d: &WeightedAutomaton, n: &WeightedAutomaton) -> Result<bool> {
    if d.alphabet() != n.alphabet() {
        return Err(Error::AlphabetMismatch(d.alphabet().join(","), n.alphabet().join(",")));
    }
    if mu.map.len() != d.state_count() || mu.map.iter().any(|q| q.0 >= n.state_count()) {
        return Err(Error::Precondition("homomorphism must be total on the source states".into()));
    }
    let initial_ok = d.initial().iter().all(|&q| n.initial().contains(&mu.apply(q)));
    let final_ok = d.finals().iter().all(|&q| n.is_final(mu.apply(q)));
    let trans_ok = d
        .transitions()
        .iter()
        .all(|t| n.has_transition(mu.apply(t.src), t.sym, t.weight, mu.apply(t.dst)));
    Ok(initial_ok && final_ok && trans_ok)
}

/// Product of `n` and a deterministic `d` with weights subtracted:
/// the result satisfies [[M]](w) = [[n]](w) - [[d]](w) on L(n) n L(d).
pub fn difference_product(n: &WeightedAutomaton, d: &WeightedAutomaton) -> Result<WeightedAutomaton> {
    if n.alphabet() != d.alphabet() {
        return Err(Error::AlphabetMismatch(n.alphabet().join(","), d.alphabet().join(",")));
    }
    if !d.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    let Some(&d_init) = d.initial().iter().next() else {
        return Ok(WeightedAutomaton::empty_language(n.alphabet().to_vec()));
    };
    struct Pairs {
        index: BTreeMap<(StateId, StateId), StateId>,
        names: Vec<String>,
        queue: VecDeque<(StateId, StateId)>,
    }
    impl Pairs {
        fn intern(&mut self, name: String, p: StateId, q: StateId) -> StateId {
            match self.index.get(&(p, q)) {
                Some(&id) => id,
                None => {
                    let id = StateId(self.names.len());
                    self.names.push(name);
                    self.index.insert((p, q), id);
                    self.queue.push_back((p, q));
                    id
                }
            }
        }
    }
    let mut pairs = Pairs { index: BTreeMap::new(), names: Vec::new(), queue: VecDeque::new() };
    let pair_name = |p: StateId, q: StateId| format!("({},{})", n.state_name(p), d.state_name(q));
    let mut initial = BTreeSet::new();
    for &p in n.initial() {
        initial.insert(pairs.intern(pair_name(p, d_init), p, d_init));
    }
    let mut transitions = Vec::new();
    let mut finals = BTreeSet::new();
    while let Some((p, q)) = pairs.queue.pop_front() {
        let src = pairs.index[&(p, q)];
        if n.is_final(p) && d.is_final(q) {
            finals.insert(src);
        }
        for a in n.symbols() {
            let Some(dt) = d.successors(q, a).next() else { continue };
            for t in n.successors(p, a) {
                let dst = pairs.intern(pair_name(t.dst, dt.dst), t.dst, dt.dst);
                transitions.push(Transition {
                    src,
                    sym: a,
                    weight: checked_add(t.weight, -dt.weight)?,
                    dst,
                });
            }
        }
    }
    let names = pairs.names;
    if names.is_empty() {
        return Ok(WeightedAutomaton::empty_language(n.alphabet().to_vec()));
    }
    WeightedAutomaton::from_parts(n.alphabet().to_vec(), names, initial, finals, transitions)
}

/// Deterministic product of two DWAs with weights added; realizes
/// [[d1]] + [[d2]] on the intersection of their languages.
pub fn sum_product(d1: &WeightedAutomaton, d2: &WeightedAutomaton) -> Result<WeightedAutomaton> {
    if d1.alphabet() != d2.alphabet() {
        return Err(Error::AlphabetMismatch(d1.alphabet().join(","), d2.alphabet().join(",")));
    }
    if !d1.is_deterministic() || !d2.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    let (Some(&i1), Some(&i2)) = (d1.initial().iter().next(), d2.initial().iter().next()) else {
        return Ok(WeightedAutomaton::empty_language(d1.alphabet().to_vec()));
    };
    let mut index: BTreeMap<(StateId, StateId), StateId> = BTreeMap::new();
    let mut names = Vec::new();
    let mut queue = VecDeque::new();
    index.insert((i1, i2), StateId(0));
    names.push(format!("({},{})", d1.state_name(i1), d2.state_name(i2)));
    queue.push_back((i1, i2));
    let mut transitions = Vec::new();
    let mut finals = BTreeSet::new();
    while let Some((p, q)) = queue.pop_front() {
        let src = index[&(p, q)];
        if d1.is_final(p) && d2.is_final(q) {
            finals.insert(src);
        }
        for a in d1.symbols() {
            let (Some(t1), Some(t2)) = (d1.successors(p, a).next(), d2.successors(q, a).next()) else {
                continue;
            };
            let dst = *index.entry((t1.dst, t2.dst)).or_insert_with(|| {
                let id = StateId(names.len());
                names.push(format!("({},{})", d1.state_name(t1.dst), d2.state_name(t2.dst)));
                queue.push_back((t1.dst, t2.dst));
                id
            });
            transitions.push(Transition { src, sym: a, weight: checked_add(t1.weight, t2.weight)?, dst });
        }
    }
    WeightedAutomaton::from_parts(d1.alphabet().to_vec(), names, BTreeSet::from([StateId(0)]), finals, transitions)
}

/// All words over `syms` symbols of length at most `max_len`, shortest first.
pub fn words_up_to(syms: usize, max_len: usize) -> Vec<Word> {
    let mut words: Vec<Word> = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..syms {
                let mut e = w.clone();
                e.push(SymbolId(a));
                next.push(e);
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }
    words
}
