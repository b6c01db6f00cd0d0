/// Resource ceilings for the state-space explorations.
///
/// Exceeding a ceiling aborts the construction with [`crate::Error::Budget`]
/// instead of thrashing.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Maximum number of states a single constructed automaton may have.
    pub max_states: usize,
    /// Maximum number of vertices of a game arena (or of a safety-game
    /// product) built while solving.
    pub max_arena: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 1_000_000,
            max_arena: 10_000_000,
        }
    }
}

impl Limits {
    pub(crate) fn check_states(&self, needed: usize) -> crate::Result<()> {
        if needed > self.max_states {
            return Err(crate::Error::Budget {
                what: "state count",
                limit: self.max_states,
                needed,
            });
        }
        Ok(())
    }

    pub(crate) fn check_arena(&self, needed: usize) -> crate::Result<()> {
        if needed > self.max_arena {
            return Err(crate::Error::Budget {
                what: "arena size",
                limit: self.max_arena,
                needed,
            });
        }
        Ok(())
    }
}
