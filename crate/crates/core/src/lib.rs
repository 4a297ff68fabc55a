//! Constraint-based sequential pattern mining.
//!
//! Patterns are encoded as ℓ variables over the items plus an end marker
//! `□`. A prefix-projection global constraint keeps the pseudo-projected
//! databases of the current prefix and prunes infrequent items from all
//! future positions; minimum size, item occurrence and regular-expression
//! constraints are posted as ordinary filters on the same variables. A
//! brute-force oracle is provided for equivalence testing.
//!
//! ```
//! use ppmine::{Query, SequenceDatabase};
//!
//! let db = SequenceDatabase::load_symbolic("A B C B C\nB A B C\nA B\nB C D\n".as_bytes()).unwrap();
//! let (patterns, _) = Query::new(2).mine(&db).unwrap();
//! assert_eq!(patterns.len(), 9);
//! ```

pub mod constraints;
pub mod engine;
mod error;
pub mod minsup;
pub mod oracle;
pub mod pp;
pub mod projection;
pub mod query;
pub mod regex;
pub mod seqdb;

pub use constraints::{Constraints, ItemBound};
pub use engine::{
    decode_solution, MiningStats, Outcome, Pattern, PatternVars, SearchConfig, SearchState, Value,
};
pub use error::{Error, Result};
pub use minsup::MinSup;
pub use projection::{
    frequent_items, initial_projection, project, FrequentItemSet, PseudoProjection,
};
pub use query::{Comparison, Query};
pub use regex::{compile_regex, Dfa, RegexAst};
pub use seqdb::{is_subsequence, support, DbStats, ItemDictionary, ItemId, SequenceDatabase};
