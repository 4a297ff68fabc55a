//! A small constraint engine specialized to pattern variables.
//!
//! Variables are assigned strictly left to right. After every assignment the
//! prefix-projection filter runs once, then the side-constraint filters run
//! until none of them removes a value. Changes are trailed and undone on
//! backtrack.

mod search;
mod vars;

pub use search::{decode_solution, MiningStats, Pattern, SearchConfig, SearchState};
pub use vars::{PatternVars, Value};

/// Result of a propagation step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Continue,
    Fail,
}

impl Outcome {
    pub fn is_fail(self) -> bool {
        self == Outcome::Fail
    }
}
