use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{Renaming, State, Vocabulary};
use crate::transition::canon::canonical_form;
use crate::transition::{Rule, UpdateSet};

/// How the one-step transformation is presented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transition {
    /// A rule program, applied to any state of the family.
    Rules(Rule),
    /// The successor of each canonical state, by index; successors of
    /// renamed copies are transported through the renaming.
    Explicit(Vec<State>),
}

/// A finite presentation of a sequential algorithm.
///
/// The state family is the closure of the canonical states under renamings;
/// copies are materialized on demand and located through canonical forms.
#[derive(Debug, Clone)]
pub struct Algorithm {
    vocab: Arc<Vocabulary>,
    states: Vec<State>,
    initial: Vec<bool>,
    transition: Transition,
    exact: HashMap<State, usize>,
    canonical: HashMap<State, (usize, Renaming)>,
}

impl Algorithm {
    /// Builds the algorithm. Vocabularies must agree and an explicit
    /// transition needs one successor per state. Postulate violations such
    /// as an empty family or a successor with another base set are allowed
    /// here; the checkers report them.
    pub fn new(
        vocab: Arc<Vocabulary>,
        states: Vec<State>,
        initial: Vec<bool>,
        transition: Transition,
    ) -> Result<Algorithm> {
        if initial.len() != states.len() {
            return Err(Error::InvalidConfig(format!(
                "{} initial flags for {} states",
                initial.len(),
                states.len()
            )));
        }
        let others: Vec<&State> = match &transition {
            Transition::Rules(rule) => {
                rule.validate(&vocab)?;
                Vec::new()
            }
            Transition::Explicit(succ) => {
                if succ.len() != states.len() {
                    return Err(Error::InvalidConfig(format!(
                        "{} successors for {} states",
                        succ.len(),
                        states.len()
                    )));
                }
                succ.iter().collect()
            }
        };
        for s in states.iter().chain(others) {
            if *s.vocabulary().as_ref() != *vocab {
                return Err(Error::VocabularyMismatch(
                    "state vocabulary differs from the algorithm's".into(),
                ));
            }
        }
        let mut exact = HashMap::new();
        let mut canonical = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            exact.entry(s.clone()).or_insert(i);
            let (form, r) = canonical_form(s);
            canonical.entry(form).or_insert((i, r));
        }
        Ok(Algorithm {
            vocab,
            states,
            initial,
            transition,
            exact,
            canonical,
        })
    }

    pub fn with_rules(
        vocab: Arc<Vocabulary>,
        states: Vec<State>,
        initial: Vec<bool>,
        rule: Rule,
    ) -> Result<Algorithm> {
        Algorithm::new(vocab, states, initial, Transition::Rules(rule))
    }

    pub fn with_successors(
        vocab: Arc<Vocabulary>,
        states: Vec<State>,
        initial: Vec<bool>,
        successors: Vec<State>,
    ) -> Result<Algorithm> {
        Algorithm::new(vocab, states, initial, Transition::Explicit(successors))
    }

    pub fn vocabulary(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    pub fn canonical_states(&self) -> &[State] {
        &self.states
    }

    pub fn initial_flags(&self) -> &[bool] {
        &self.initial
    }

    pub fn transition(&self) -> &Transition {
        &self.transition
    }

    pub fn rule(&self) -> Option<&Rule> {
        match &self.transition {
            Transition::Rules(r) => Some(r),
            Transition::Explicit(_) => None,
        }
    }

    /// Largest nonlogical carrier among the canonical states.
    pub fn max_carrier(&self) -> usize {
        self.states
            .iter()
            .map(|s| s.nonlogical_elements().len())
            .max()
            .unwrap_or(0)
    }

    /// Finds a canonical state and a renaming taking it to `state`.
    ///
    /// A canonical state equal to `state` wins, with the identity; otherwise
    /// the first canonical state of the same isomorphism type is used.
    pub fn locate(&self, state: &State) -> Result<(usize, Renaming)> {
        if let Some(&i) = self.exact.get(state) {
            return Ok((
                i,
                Renaming::identity_on(state.nonlogical_elements().iter().copied()),
            ));
        }
        let (form, to_form) = canonical_form(state);
        let (i, from_canonical) = self.canonical.get(&form).ok_or(Error::UnknownState)?;
        Ok((*i, to_form.inverse().compose(from_canonical)?))
    }

    pub fn contains(&self, state: &State) -> bool {
        self.locate(state).is_ok()
    }

    /// `τ(X)`.
    pub fn step(&self, state: &State) -> Result<State> {
        let (i, r) = self.locate(state)?;
        match &self.transition {
            Transition::Rules(rule) => rule.apply(state)?.apply_to(state),
            Transition::Explicit(succ) => succ[i].apply_renaming(&r),
        }
    }

    /// `Δ(X)`, computed by diffing `X` against `τ(X)`.
    pub fn update_set(&self, state: &State) -> Result<UpdateSet> {
        UpdateSet::diff(state, &self.step(state)?)
    }

    /// `Δ(X)` computed from the rule program directly, for rule-based
    /// algorithms.
    pub fn rule_update_set(&self, state: &State) -> Option<Result<UpdateSet>> {
        self.rule().map(|rule| {
            self.locate(state)?;
            rule.apply(state)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_rule;
    use crate::kernel::ElementId;
    use crate::transition::Update;

    fn e(label: u32) -> ElementId {
        ElementId::nonlogical(label)
    }

    /// One nullary `f` over two elements; each step moves `f` to the other.
    fn flip() -> Algorithm {
        let vocab = Arc::new(Vocabulary::with_symbols([("f", 0)]).unwrap());
        let x = State::new(vocab.clone(), [e(1), e(2)])
            .with("f", &[], e(1))
            .unwrap();
        let succ = x.clone().with("f", &[], e(2)).unwrap();
        Algorithm::with_successors(vocab, vec![x], vec![true], vec![succ]).unwrap()
    }

    #[test]
    fn step_on_canonical_state() {
        let a = flip();
        let x = &a.canonical_states()[0];
        let next = a.step(x).unwrap();
        assert!(next.same_base_set(x));
        assert_eq!(next.to_string(), "{1 2 | f=2}");
        let f = a.vocabulary().resolve("f").unwrap();
        let expected: UpdateSet = [Update::new(f, vec![], e(2))].into_iter().collect();
        assert_eq!(a.update_set(x).unwrap(), expected);
    }

    #[test]
    fn step_on_renamed_copy() {
        let a = flip();
        let x = &a.canonical_states()[0];
        let b_to_c = Renaming::from_pairs([(e(1), e(1)), (e(2), e(3))]).unwrap();
        let y = x.apply_renaming(&b_to_c).unwrap();
        assert_eq!(a.step(&y).unwrap().to_string(), "{1 3 | f=3}");
        let f = a.vocabulary().resolve("f").unwrap();
        let expected: UpdateSet = [Update::new(f, vec![], e(3))].into_iter().collect();
        assert_eq!(a.update_set(&y).unwrap(), expected);
        // the successor of the canonical state is itself a copy
        let back = a.step(&a.step(x).unwrap()).unwrap();
        assert_eq!(&back, x);
    }

    #[test]
    fn unknown_state() {
        let a = flip();
        let z = State::new(a.vocabulary().clone(), [e(1)]);
        assert_eq!(a.step(&z), Err(Error::UnknownState));
    }

    #[test]
    fn fixed_point_has_empty_update_set() {
        let vocab = Arc::new(Vocabulary::with_symbols([("f", 0), ("g", 0)]).unwrap());
        let x = State::new(vocab.clone(), [e(1)])
            .with("f", &[], e(1))
            .unwrap();
        let rule = parse_rule(&vocab, "g := undef").unwrap();
        let a = Algorithm::with_rules(vocab, vec![x.clone()], vec![true], rule).unwrap();
        assert_eq!(a.step(&x).unwrap(), x);
        assert!(a.update_set(&x).unwrap().is_empty());
        assert!(a.rule_update_set(&x).unwrap().unwrap().is_empty());
    }

    #[test]
    fn rule_and_diff_agree() {
        let vocab = Arc::new(Vocabulary::with_symbols([("f", 0), ("g", 1)]).unwrap());
        let x = State::new(vocab.clone(), [e(1), e(2)])
            .with("f", &[], e(1))
            .and_then(|s| s.with("g", &[e(1)], e(2)))
            .unwrap();
        let rule = parse_rule(&vocab, "par f := g(f) g(f) := f endpar").unwrap();
        let a = Algorithm::with_rules(vocab, vec![x.clone()], vec![true], rule).unwrap();
        assert_eq!(
            a.update_set(&x).unwrap(),
            a.rule_update_set(&x).unwrap().unwrap()
        );
        assert_eq!(a.update_set(&x).unwrap().len(), 2);
    }
}
