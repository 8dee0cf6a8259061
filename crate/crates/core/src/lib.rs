//! Finite first-order structures, sequential algorithms over them, and
//! executable checkers for the sequential-time, abstract-state and both
//! bounded-exploration postulates.

pub mod error;
pub mod format;
pub mod harness;
pub mod kernel;
pub mod postulates;
pub mod report;
pub mod scenarios;
pub mod similarity;
pub mod transition;

pub use error::{Error, Result};
pub use kernel::{ElementId, Renaming, State, SymbolId, Term, Universe, Vocabulary, WitnessSet};
pub use report::{CheckReport, Requirement, Verdict, Witness};
pub use similarity::SimilarityFunction;
pub use transition::{Algorithm, Rule, Transition, Update, UpdateSet};
