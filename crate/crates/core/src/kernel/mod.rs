//! Vocabularies, ground terms and finite first-order structures.
//!
//! Every state lives inside a global [`Universe`] of element ids. Ids 0, 1
//! and 2 are the logical elements in every state; interpretations of
//! nonlogical symbols are finite tables defaulting to `undef`.

mod element;
mod state;
mod term;
mod vocab;

pub use element::{ElementId, Renaming, Universe};
pub use state::{coincides_over, State, Table};
pub use term::{ground_terms, Term, TermDisplay, TermPlan, WitnessSet};
pub use vocab::{Symbol, SymbolId, SymbolKind, Vocabulary, DEFAULT_MAX_ARITY, LOGICAL_SYMBOLS};
