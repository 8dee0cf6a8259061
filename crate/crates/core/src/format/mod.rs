//! The line-oriented spec format for algorithms and witness sets.
//!
//! ```text
//! vocabulary:
//!   f/0
//! state X:
//!   elements: a b
//!   f = a
//! state X2:
//!   elements: a b
//!   f = b
//! transition:
//!   state X -> X2
//!   state X2 -> X
//! initial:
//!   X X2
//! witness T1:
//!   f
//! ```
//!
//! A transition section is either a list of `state <name> -> <name>` pairs
//! or a rule program built from `f(t1,...,tj) := t0`, `par ... endpar` and
//! `if t then R [else R] endif`. `#` starts a comment.

mod lexer;
mod parse;
mod print;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{ElementId, State, Vocabulary, WitnessSet};
use crate::transition::{Algorithm, Rule, Transition};

pub use parse::{parse_rule, parse_term};
pub use print::{print_rule, print_state};

/// Words that cannot name symbols, states or witness sets.
pub const KEYWORDS: [&str; 8] = [
    "par", "endpar", "if", "then", "else", "endif", "state", "elements",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DocTransition {
    Rules(Rule),
    /// `(source, successor)` state names.
    Explicit(Vec<(String, String)>),
}

/// A parsed spec file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecDocument {
    pub vocabulary: Arc<Vocabulary>,
    /// Element names; the i-th name denotes `ElementId::nonlogical(i + 1)`.
    pub element_names: Vec<String>,
    pub states: Vec<(String, State)>,
    pub transition: DocTransition,
    pub initial: Vec<String>,
    pub witnesses: Vec<(String, WitnessSet)>,
}

/// Parses and validates a spec document.
pub fn parse_spec(text: &str) -> Result<SpecDocument> {
    parse::parse_document(text)
}

impl SpecDocument {
    pub fn state(&self, name: &str) -> Option<&State> {
        self.states.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn witness(&self, name: &str) -> Option<&WitnessSet> {
        self.witnesses
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, w)| w)
    }

    pub fn witness_names(&self) -> impl Iterator<Item = &str> {
        self.witnesses.iter().map(|(n, _)| n.as_str())
    }

    /// The spec name of an element, `TRUE`/`FALSE`/`UNDEF` for logical ones.
    pub fn element_name(&self, e: ElementId) -> String {
        match e {
            ElementId::TRUE => "TRUE".into(),
            ElementId::FALSE => "FALSE".into(),
            ElementId::UNDEF => "UNDEF".into(),
            ElementId(id) => self
                .element_names
                .get(id as usize - ElementId::LOGICAL.len())
                .cloned()
                .unwrap_or_else(|| format!("e{id}")),
        }
    }

    pub fn to_algorithm(&self) -> Result<Algorithm> {
        let states: Vec<State> = self.states.iter().map(|(_, s)| s.clone()).collect();
        let initial = self
            .states
            .iter()
            .map(|(n, _)| self.initial.iter().any(|i| i == n))
            .collect();
        let transition = match &self.transition {
            DocTransition::Rules(rule) => Transition::Rules(rule.clone()),
            DocTransition::Explicit(pairs) => {
                let succ = self
                    .states
                    .iter()
                    .map(|(name, _)| {
                        let (_, to) =
                            pairs.iter().find(|(from, _)| from == name).ok_or_else(|| {
                                Error::InvalidConfig(format!("state `{name}` has no successor"))
                            })?;
                        self.state(to)
                            .cloned()
                            .ok_or_else(|| Error::InvalidConfig(format!("unknown state `{to}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Transition::Explicit(succ)
            }
        };
        Algorithm::new(self.vocabulary.clone(), states, initial, transition)
    }

    /// Canonical text form; parsing it gives back an equal document.
    pub fn to_text(&self) -> String {
        print::print_document(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLIP: &str = "\
vocabulary:
  f/0
state X:
  elements: a b
  f = a
state X2:
  elements: a b
  f = b
transition:
  state X -> X2
  state X2 -> X
initial:
  X X2
witness T1:
  f
";

    fn message(text: &str) -> (usize, usize, String) {
        match parse_spec(text) {
            Err(Error::Parse {
                line,
                column,
                message,
            }) => (line, column, message),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn parses_explicit_algorithm() {
        let doc = parse_spec(FLIP).unwrap();
        assert_eq!(doc.element_names, vec!["a", "b"]);
        assert_eq!(doc.state("X").unwrap().to_string(), "{1 2 | f=1}");
        let a = doc.to_algorithm().unwrap();
        assert_eq!(a.initial_flags(), &[true, true]);
        let x = doc.state("X").unwrap();
        assert_eq!(&a.step(x).unwrap(), doc.state("X2").unwrap());
        assert_eq!(doc.witness("T1").unwrap().len(), 1);
        assert!(doc.witness("T2").is_none());
    }

    #[test]
    fn empty_document() {
        assert_eq!(message(""), (1, 1, "missing vocabulary section".into()));
        assert_eq!(message("# nothing\n").2, "missing vocabulary section");
    }

    #[test]
    fn assignment_to_logical_symbol() {
        let text = "vocabulary:\n  a/0\ntransition:\n  true() := a\n";
        let (line, column, msg) = message(text);
        assert_eq!((line, column), (4, 3));
        assert!(msg.starts_with("assignment to logical symbol"), "{msg}");
    }

    #[test]
    fn base_set_violation() {
        let text = FLIP.replace("state X2:\n  elements: a b", "state X2:\n  elements: a c");
        let text = text.replace("f = b", "f = c");
        assert!(message(&text).2.starts_with("base-set violation"));
    }

    #[test]
    fn positioned_errors() {
        let (line, column, msg) =
            message("vocabulary:\n  f/0\nstate X:\n  elements: a\n  f(a) = a\n");
        assert_eq!((line, column), (5, 3));
        assert!(msg.contains("arity"), "{msg}");
        let (line, column, msg) = message("vocabulary:\n  f/0\nstate X:\n  elements: a\n  g = a\n");
        assert_eq!((line, column), (5, 3));
        assert!(msg.contains("unknown symbol"), "{msg}");
        let (line, column, _) = message("vocabulary:\n  f/0\nstate X:\n  elements: a\n  f = b\n");
        assert_eq!((line, column), (5, 7));
        let (line, column, msg) = message("vocabulary:\n  f/0 f/1\n");
        assert_eq!((line, column), (2, 7));
        assert!(msg.contains("f"), "{msg}");
        let (line, _, msg) = message("vocabulary:\n  f/0\ntransition:\n  f := f\n  f := $\n");
        assert_eq!(line, 5);
        assert!(msg.contains("unexpected character"), "{msg}");
        let (_, _, msg) = message("vocabulary:\n  par/0\n");
        assert!(msg.contains("keyword"), "{msg}");
        assert!(message("f/0\nvocabulary:\n")
            .2
            .contains("before the first section"));
        assert!(message("vocabulary:\n f/0\n")
            .2
            .contains("missing transition"));
    }

    #[test]
    fn rule_programs() {
        let text = "vocabulary:\n  f/0 g/1\nstate S:\n  elements: p q\n  f = p\n  g(p) = q\n\
                    transition:\n  if eq(f, g(f)) then f := p0 endif\n";
        assert!(message(text).2.contains("unknown symbol"));
        let text = "vocabulary:\n  f/0 g/1\nstate S:\n  elements: p q\n  f = p\n  g(p) = q\n\
                    transition:\n  if eq(f,g(f)) then\n    f := undef\n  else\n    par\n      f := g(f)\n      g(f) := f\n    endpar\n  endif\n  g(g(f)) := f\n";
        let doc = parse_spec(text).unwrap();
        let DocTransition::Rules(Rule::Par(rules)) = &doc.transition else {
            panic!("expected a top-level block")
        };
        assert_eq!(rules.len(), 2);
        let a = doc.to_algorithm().unwrap();
        let s = doc.state("S").unwrap();
        assert_eq!(
            a.step(s).unwrap().to_string(),
            "{1 2 | f=2, g(1)=1, g(2)=1}"
        );
    }

    #[test]
    fn round_trip() {
        let doc = parse_spec(FLIP).unwrap();
        let text = doc.to_text();
        assert_eq!(parse_spec(&text).unwrap(), doc);
        assert_eq!(parse_spec(&text).unwrap().to_text(), text);
    }

    #[test]
    fn logical_values_in_states() {
        let text = "vocabulary:\n  p/1\nstate S:\n  elements: a b\n  p(a) = TRUE\n  p(b) = UNDEF\ntransition:\n  par endpar\n";
        let doc = parse_spec(text).unwrap();
        assert_eq!(doc.state("S").unwrap().to_string(), "{1 2 | p(1)=true}");
        assert!(doc.to_text().contains("p(a) = TRUE"));
    }
}
