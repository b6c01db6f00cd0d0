use thiserror::Error;

/// Errors shared by every layer of the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("state `{0}` is not declared")]
    UnknownState(String),
    #[error("duplicate {kind} name `{name}`")]
    DuplicateName { kind: &'static str, name: String },
    #[error("alphabets differ: `{0}` vs `{1}`")]
    AlphabetMismatch(String, String),
    #[error("automaton is not deterministic")]
    NotDeterministic,
    #[error("automaton is not trim")]
    NotTrim,
    #[error("automaton has no states after trimming")]
    EmptyAutomaton,
    #[error("automaton has no initial state")]
    NoInitialState,
    #[error("alphabet must be nonempty")]
    EmptyAlphabet,
    #[error("weight arithmetic overflow")]
    Overflow,
    #[error("{what} exceeds the budget of {limit} (needed {needed})")]
    Budget {
        what: &'static str,
        limit: usize,
        needed: usize,
    },
    #[error("mealy output state `{0}` is not a state of the automaton")]
    BadMealyOutput(String),
    #[error("mealy tables are not total over memory states and symbols")]
    PartialMealyTables,
    #[error("arena has a sink at vertex `{0}`")]
    ArenaSink(String),
    #[error("reset edge leaves Eve vertex `{0}`")]
    ResetFromEve(String),
    #[error("vertex `{0}` is not declared")]
    UnknownVertex(String),
    #[error("sequence is not a path in the arena")]
    NotAPath,
    #[error("path hop {0} -> {1} is ambiguous (parallel edges); pass edge ids")]
    AmbiguousPath(String, String),
    #[error("input is not a lasso (simple prefix followed by one cycle)")]
    NotALasso,
    #[error("Eve does not win the Joker game: no determinization bound available")]
    JokerLost,
    #[error("queried vertex is not in Eve's winning region")]
    NotWinning,
    #[error("decision carries no witness")]
    MissingWitness,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
