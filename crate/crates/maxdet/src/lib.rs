//! Delay- and regret-constrained determinization of max-plus weighted
//! automata.
//!
//! The library decides, for an automaton over (Z u {-inf}, max, +):
//!
//! - **k-delay determinizability** — is there an equivalent DWA whose run
//!   prefix sums stay within k of a maximal run's? ([`deciders::decide_k_delay`])
//! - **r-regret determinizability** — is there an equivalent DWA that maps
//!   homomorphically into the automaton and loses at most r anywhere?
//!   ([`deciders::decide_r_regret`])
//! - **existential regret** — is the above possible for any r at all?
//!   ([`deciders::decide_exists_regret`])
//!
//! plus the underlying machinery: the weighted subset construction, the
//! delay construction and their fusion ([`constructions`]), bounded
//! determinization, energy games with resets ([`egames`]), and the Joker
//! game ([`deciders::joker`]). Brute-force oracles ([`oracle`]) re-derive
//! every answer independently on bounded horizons, and [`corpus`] generates
//! the worked examples used as fixtures throughout.

pub mod automaton;
pub mod constructions;
pub mod corpus;
pub mod deciders;
pub mod egames;
pub mod error;
pub mod files;
pub mod inclusion;
pub mod limits;
pub mod mealy;
pub mod oracle;
pub mod weight;

pub use automaton::{
    check_homomorphism, difference_product, gamma, sum_product, words_up_to, Homomorphism, Run,
    StateId, SymbolId, Transition, WeightedAutomaton, Word,
};
pub use constructions::{
    bounded_determinize, delay_construct, delay_subset_construct, exactify, pair_determinize,
    range_bound_determinize,
};
pub use deciders::{
    decide_0_delay, decide_exists_regret, decide_k_delay, decide_r_regret,
    semialgorithm_determinize, verify_witness, Decision, Question,
};
pub use egames::{
    extract_strategy, minimal_credit, solve_egr, to_safety_game, win_region, EgrArena, EgrEdge,
    Player, VertexId,
};
pub use error::{Error, Result};
pub use inclusion::check_k_inclusion;
pub use limits::Limits;
pub use mealy::{strategy_product, MealyMachine, MemoryId};
pub use weight::ExtendedWeight;
