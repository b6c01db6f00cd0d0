//! On-disk formats: one self-describing JSON document per artifact kind,
//! canonically serialized (stable member order, sorted transitions, UTF-8,
//! newline-terminated) so generated files double as golden test vectors.

use crate::automaton::WeightedAutomaton;
use crate::deciders::{Decision, VerifyReport};
use crate::egames::{EgrArena, EgrEdge, Player, VertexId};
use crate::error::{Error, Result};
use crate::mealy::{MealyMachine, MemoryId};
use crate::oracle::OracleReport;
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonFile {
    pub version: u32,
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: Vec<String>,
    #[serde(rename = "final")]
    pub finals: Vec<String>,
    pub transitions: Vec<(String, String, i64, String)>,
}

impl AutomatonFile {
    pub fn from_automaton(wa: &WeightedAutomaton) -> AutomatonFile {
        AutomatonFile {
            version: FORMAT_VERSION,
            alphabet: wa.alphabet().to_vec(),
            states: wa.state_names().to_vec(),
            initial: wa.initial().iter().map(|&q| wa.state_name(q).to_string()).collect(),
            finals: wa.finals().iter().map(|&q| wa.state_name(q).to_string()).collect(),
            transitions: wa
                .transitions()
                .iter()
                .map(|t| {
                    (
                        wa.state_name(t.src).to_string(),
                        wa.symbol_name(t.sym).to_string(),
                        t.weight,
                        wa.state_name(t.dst).to_string(),
                    )
                })
                .collect(),
        }
    }

    pub fn into_automaton(self) -> Result<WeightedAutomaton> {
        WeightedAutomaton::new(self.alphabet, self.states, self.initial, self.finals, self.transitions)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArenaVertex {
    pub name: String,
    pub owner: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArenaFile {
    pub version: u32,
    pub vertices: Vec<ArenaVertex>,
    /// Edges as [source, target, weight, reset flag].
    pub edges: Vec<(String, String, i64, bool)>,
}

impl ArenaFile {
    pub fn from_arena(g: &EgrArena) -> ArenaFile {
        ArenaFile {
            version: FORMAT_VERSION,
            vertices: g
                .vertices()
                .map(|v| ArenaVertex {
                    name: g.vertex_name(v).to_string(),
                    owner: match g.owner(v) {
                        Player::Eve => "eve".into(),
                        Player::Adam => "adam".into(),
                    },
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| {
                    (
                        g.vertex_name(e.src).to_string(),
                        g.vertex_name(e.dst).to_string(),
                        e.weight,
                        e.reset,
                    )
                })
                .collect(),
        }
    }

    pub fn into_arena(self) -> Result<EgrArena> {
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            let owner = match v.owner.as_str() {
                "eve" => Player::Eve,
                "adam" => Player::Adam,
                other => return Err(Error::Parse(format!("unknown owner `{other}` (use eve/adam)"))),
            };
            vertices.push((v.name.clone(), owner));
        }
        let lookup = |name: &str| -> Result<VertexId> {
            self.vertices
                .iter()
                .position(|v| v.name == name)
                .map(VertexId)
                .ok_or_else(|| Error::UnknownVertex(name.into()))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for (src, dst, weight, reset) in &self.edges {
            edges.push(EgrEdge { src: lookup(src)?, dst: lookup(dst)?, weight: *weight, reset: *reset });
        }
        EgrArena::new(vertices, edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MealyFile {
    pub version: u32,
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    pub initial_output: String,
    /// Rows (memory, symbol, next memory).
    pub update: Vec<(String, String, String)>,
    /// Rows (memory, symbol, output automaton state).
    pub output: Vec<(String, String, String)>,
}

impl MealyFile {
    pub fn from_mealy(m: &MealyMachine, automaton: &WeightedAutomaton) -> MealyFile {
        let mut update = Vec::new();
        let mut output = Vec::new();
        for (s, name) in m.memory_names.iter().enumerate() {
            for (a, sym) in m.alphabet.iter().enumerate() {
                update.push((name.clone(), sym.clone(), m.memory_names[m.update(MemoryId(s), crate::SymbolId(a)).0].clone()));
                output.push((
                    name.clone(),
                    sym.clone(),
                    automaton.state_name(m.output(MemoryId(s), crate::SymbolId(a))).to_string(),
                ));
            }
        }
        MealyFile {
            version: FORMAT_VERSION,
            alphabet: m.alphabet.clone(),
            states: m.memory_names.clone(),
            initial: m.memory_names[m.initial_memory.0].clone(),
            initial_output: automaton.state_name(m.initial_output).to_string(),
            update,
            output,
        }
    }

    pub fn into_mealy(self, automaton: &WeightedAutomaton) -> Result<MealyMachine> {
        let mem = |name: &str| -> Result<MemoryId> {
            self.states
                .iter()
                .position(|s| s == name)
                .map(MemoryId)
                .ok_or_else(|| Error::Parse(format!("unknown memory state `{name}`")))
        };
        let sym = |name: &str| -> Result<usize> {
            self.alphabet
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| Error::UnknownSymbol(name.into()))
        };
        let state = |name: &str| -> Result<crate::StateId> {
            automaton.state_id(name).ok_or_else(|| Error::UnknownState(name.into()))
        };
        let s = self.states.len();
        let a = self.alphabet.len();
        let mut update = vec![vec![None; a]; s];
        for (m, x, t) in &self.update {
            update[mem(m)?.0][sym(x)?] = Some(mem(t)?);
        }
        let mut output = vec![vec![None; a]; s];
        for (m, x, q) in &self.output {
            output[mem(m)?.0][sym(x)?] = Some(state(q)?);
        }
        let update = update
            .into_iter()
            .map(|row| row.into_iter().collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::PartialMealyTables)?;
        let output = output
            .into_iter()
            .map(|row| row.into_iter().collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::PartialMealyTables)?;
        MealyMachine::new(
            self.states.clone(),
            self.alphabet.clone(),
            mem(&self.initial)?,
            state(&self.initial_output)?,
            update,
            output,
        )
    }
}

/// A structured run report: the command, its answer and certificates,
/// witness file references, oracle results, parameters and seed.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ReportFile {
    pub version: u32,
    pub command: String,
    pub question: Option<String>,
    pub answer: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub parameters: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificates: Option<crate::deciders::Certificates>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_file: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub oracle_reports: Vec<OracleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ReportFile {
    pub fn for_decision(command: &str, decision: &Decision) -> ReportFile {
        ReportFile {
            version: FORMAT_VERSION,
            command: command.into(),
            question: Some(decision.question.to_string()),
            answer: Some(if decision.answer { "yes".into() } else { "no".into() }),
            certificates: Some(summarized(&decision.certificates)),
            ..ReportFile::default()
        }
    }
}

/// Keeps reports readable: very large winning regions are elided, their
/// size is still visible through the joker credit and answer.
fn summarized(c: &crate::deciders::Certificates) -> crate::deciders::Certificates {
    let mut c = c.clone();
    if c.joker_region.as_ref().map_or(false, |r| r.len() > 1000) {
        c.joker_region = None;
    }
    c
}

/// Canonical serialization: pretty JSON with a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable artifact");
    s.push('\n');
    s
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Best-effort Graphviz rendering of an automaton.
pub fn automaton_to_dot(wa: &WeightedAutomaton) -> String {
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
    for q in wa.states() {
        let shape = if wa.is_final(q) { "doublecircle" } else { "circle" };
        out.push_str(&format!("  \"{}\" [shape={shape}];\n", wa.state_name(q)));
        if wa.initial().contains(&q) {
            out.push_str(&format!(
                "  \"__start_{0}\" [shape=point]; \"__start_{0}\" -> \"{0}\";\n",
                wa.state_name(q)
            ));
        }
    }
    for t in wa.transitions() {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{},{}\"];\n",
            wa.state_name(t.src),
            wa.state_name(t.dst),
            wa.symbol_name(t.sym),
            t.weight
        ));
    }
    out.push_str("}\n");
    out
}

/// Best-effort Graphviz rendering of an arena (squares for Eve, dashed
/// edges for resets).
pub fn arena_to_dot(g: &EgrArena) -> String {
    let mut out = String::from("digraph arena {\n  rankdir=LR;\n");
    for v in g.vertices() {
        let shape = match g.owner(v) {
            Player::Eve => "box",
            Player::Adam => "circle",
        };
        out.push_str(&format!("  \"{}\" [shape={shape}];\n", g.vertex_name(v)));
    }
    for e in g.edges() {
        let style = if e.reset { ",style=dashed" } else { "" };
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"{}];\n",
            g.vertex_name(e.src),
            g.vertex_name(e.dst),
            e.weight,
            style
        ));
    }
    out.push_str("}\n");
    out
}
