//! Mealy machines as finite-memory strategies, and the synchronized product
//! that turns a strategy into a deterministic automaton.

use crate::automaton::{StateId, SymbolId, Transition, WeightedAutomaton};
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Index into [`MealyMachine::memory_names`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MemoryId(pub usize);

/// A deterministic Mealy machine (S, s_I, A, update, output) encoding a
/// strategy over an automaton's states: `output` picks the automaton state
/// the strategy moves to on each symbol, `initial_output` is the choice for
/// the empty input. Both tables are total over S x A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MealyMachine {
    pub memory_names: Vec<String>,
    pub alphabet: Vec<String>,
    pub initial_memory: MemoryId,
    pub initial_output: StateId,
    update: Vec<Vec<MemoryId>>,
    output: Vec<Vec<StateId>>,
}

impl MealyMachine {
    pub fn new(
        memory_names: Vec<String>,
        alphabet: Vec<String>,
        initial_memory: MemoryId,
        initial_output: StateId,
        update: Vec<Vec<MemoryId>>,
        output: Vec<Vec<StateId>>,
    ) -> Result<Self> {
        let s = memory_names.len();
        let a = alphabet.len();
        if s == 0 || initial_memory.0 >= s {
            return Err(Error::PartialMealyTables);
        }
        let total =
            |t: &Vec<Vec<MemoryId>>| t.len() == s && t.iter().all(|row| row.len() == a && row.iter().all(|m| m.0 < s));
        if !total(&update) || output.len() != s || output.iter().any(|row| row.len() != a) {
            return Err(Error::PartialMealyTables);
        }
        Ok(MealyMachine { memory_names, alphabet, initial_memory, initial_output, update, output })
    }

    pub fn memory_size(&self) -> usize {
        self.memory_names.len()
    }

    pub fn update(&self, s: MemoryId, a: SymbolId) -> MemoryId {
        self.update[s.0][a.0]
    }

    pub fn output(&self, s: MemoryId, a: SymbolId) -> StateId {
        self.output[s.0][a.0]
    }

    pub fn update_table(&self) -> &Vec<Vec<MemoryId>> {
        &self.update
    }

    pub fn output_table(&self) -> &Vec<Vec<StateId>> {
        &self.output
    }

    /// The state sequence the strategy produces on `word`:
    /// q0 = initial_output, q(i+1) = output(s_i, a_i).
    pub fn play(&self, word: &[SymbolId]) -> Vec<StateId> {
        let mut states = Vec::with_capacity(word.len() + 1);
        states.push(self.initial_output);
        let mut mem = self.initial_memory;
        for &a in word {
            states.push(self.output(mem, a));
            mem = self.update(mem, a);
        }
        states
    }

    /// Value of the run the strategy builds on `word` in `n`:
    /// the run's weight when it is an accepting run of `n`, bottom otherwise.
    pub fn run_value(&self, n: &WeightedAutomaton, word: &[SymbolId]) -> crate::ExtendedWeight {
        let states = self.play(word);
        if !n.initial().contains(&states[0]) || !n.is_final(*states.last().unwrap()) {
            return crate::ExtendedWeight::Bottom;
        }
        let mut sum = 0i64;
        for i in 0..word.len() {
            match n.weight_of(states[i], word[i], states[i + 1]) {
                Some(w) => sum += w,
                None => return crate::ExtendedWeight::Bottom,
            }
        }
        crate::ExtendedWeight::Finite(sum)
    }

    /// The strategy that copies a deterministic automaton: memory tracks the
    /// automaton state, outputs follow its unique transitions.
    pub fn follow(d: &WeightedAutomaton) -> Result<MealyMachine> {
        if !d.is_deterministic() {
            return Err(Error::NotDeterministic);
        }
        let init = *d.initial().iter().next().ok_or(Error::NoInitialState)?;
        let n = d.state_count();
        let mut update = vec![vec![MemoryId(0); d.symbol_count()]; n];
        let mut output = vec![vec![StateId(0); d.symbol_count()]; n];
        for q in d.states() {
            for a in d.symbols() {
                // Dead (state, symbol) pairs keep the run in place; the
                // strategy product drops them when no such transition exists.
                let dst = d.successors(q, a).next().map(|t| t.dst).unwrap_or(q);
                update[q.0][a.0] = MemoryId(dst.0);
                output[q.0][a.0] = dst;
            }
        }
        MealyMachine::new(
            d.state_names().to_vec(),
            d.alphabet().to_vec(),
            MemoryId(init.0),
            init,
            update,
            output,
        )
    }
}

/// Synchronized product N_sigma of an automaton and a Mealy strategy: states
/// Q x S, initial (initial_output, s_I), and a transition per memory step
/// whose induced (q, a, q') exists in N. The result is deterministic; its
/// first projection is a homomorphism into N whenever the strategy plays
/// runs of N.
pub fn strategy_product(n: &WeightedAutomaton, m: &MealyMachine) -> Result<WeightedAutomaton> {
    if n.alphabet() != m.alphabet.as_slice() {
        return Err(Error::AlphabetMismatch(n.alphabet().join(","), m.alphabet.join(",")));
    }
    if m.initial_output.0 >= n.state_count() {
        return Err(Error::BadMealyOutput(format!("#{}", m.initial_output.0)));
    }
    for row in m.output_table() {
        for q in row {
            if q.0 >= n.state_count() {
                return Err(Error::BadMealyOutput(format!("#{}", q.0)));
            }
        }
    }
    let mut index: BTreeMap<(StateId, MemoryId), StateId> = BTreeMap::new();
    let mut names = Vec::new();
    let mut queue = VecDeque::new();
    let start = (m.initial_output, m.initial_memory);
    index.insert(start, StateId(0));
    names.push(format!("({},{})", n.state_name(start.0), m.memory_names[start.1 .0]));
    queue.push_back(start);
    let mut transitions = Vec::new();
    let mut finals = BTreeSet::new();
    while let Some((q, s)) = queue.pop_front() {
        let src = index[&(q, s)];
        if n.is_final(q) {
            finals.insert(src);
        }
        for a in n.symbols() {
            let q2 = m.output(s, a);
            let s2 = m.update(s, a);
            let Some(w) = n.weight_of(q, a, q2) else { continue };
            let dst = *index.entry((q2, s2)).or_insert_with(|| {
                let id = StateId(names.len());
                names.push(format!("({},{})", n.state_name(q2), m.memory_names[s2.0]));
                queue.push_back((q2, s2));
                id
            });
            transitions.push(Transition { src, sym: a, weight: w, dst });
        }
    }
    WeightedAutomaton::from_parts(n.alphabet().to_vec(), names, BTreeSet::from([StateId(0)]), finals, transitions)
}

/// First-dimension projection of a strategy product, as state names of `n`.
/// Product state names have the shape `(<n-state>,<memory>)`.
pub fn product_projection(product: &WeightedAutomaton, n: &WeightedAutomaton) -> Option<crate::Homomorphism> {
    let mut map = Vec::with_capacity(product.state_count());
    for name in product.state_names() {
        let inner = name.strip_prefix('(')?.strip_suffix(')')?;
        // Memory names may contain commas; the automaton state may not.
        let (q, _) = inner.split_once(',')?;
        map.push(n.state_id(q)?);
    }
    Some(crate::Homomorphism { map })
}
