use crate::error::{Error, Result};
use crate::kernel::{ElementId, State, SymbolId, Term, Vocabulary, WitnessSet};
use crate::transition::{Update, UpdateSet};

/// A ground ASM rule program.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `f(t1,...,tj) := t0`
    Assign {
        symbol: SymbolId,
        args: Vec<Term>,
        rhs: Term,
    },
    /// `par R1 ... Rn endpar`; the empty block is `skip`.
    Par(Vec<Rule>),
    /// `if guard then R1 else R2 endif`
    If {
        guard: Term,
        then: Box<Rule>,
        otherwise: Box<Rule>,
    },
}

impl Rule {
    pub fn skip() -> Rule {
        Rule::Par(Vec::new())
    }

    pub fn assign(
        vocab: &Vocabulary,
        symbol: SymbolId,
        args: Vec<Term>,
        rhs: Term,
    ) -> Result<Rule> {
        let sym = vocab.get(symbol).ok_or_else(|| {
            Error::VocabularyMismatch(format!("symbol id {} not in vocabulary", symbol.0))
        })?;
        if symbol.is_logical() {
            return Err(Error::AssignToLogical(sym.name.clone()));
        }
        if sym.arity != args.len() {
            return Err(Error::ArityMismatch {
                symbol: sym.name.clone(),
                expected: sym.arity,
                found: args.len(),
            });
        }
        Ok(Rule::Assign { symbol, args, rhs })
    }

    pub fn cond(guard: Term, then: Rule, otherwise: Rule) -> Rule {
        Rule::If {
            guard,
            then: Box::new(then),
            otherwise: Box::new(otherwise),
        }
    }

    /// Checks that every assignment targets a nonlogical symbol of the right
    /// arity in `vocab`.
    pub fn validate(&self, vocab: &Vocabulary) -> Result<()> {
        match self {
            Rule::Assign { symbol, args, rhs } => {
                Rule::assign(vocab, *symbol, args.clone(), rhs.clone()).map(|_| ())
            }
            Rule::Par(rules) => rules.iter().try_for_each(|r| r.validate(vocab)),
            Rule::If {
                then, otherwise, ..
            } => {
                then.validate(vocab)?;
                otherwise.validate(vocab)
            }
        }
    }

    /// Every term occurring in the program (guards, arguments, right-hand
    /// sides), without subterms.
    pub fn terms(&self) -> WitnessSet {
        let mut out = WitnessSet::new();
        self.collect_terms(&mut out);
        out
    }

    fn collect_terms(&self, out: &mut WitnessSet) {
        match self {
            Rule::Assign { args, rhs, .. } => {
                for a in args {
                    out.insert(a.clone());
                }
                out.insert(rhs.clone());
            }
            Rule::Par(rules) => rules.iter().for_each(|r| r.collect_terms(out)),
            Rule::If {
                guard,
                then,
                otherwise,
            } => {
                out.insert(guard.clone());
                then.collect_terms(out);
                otherwise.collect_terms(out);
            }
        }
    }

    /// The nontrivial update set this program produces at `state`.
    ///
    /// Clashes are detected over all fired assignments, trivial ones
    /// included; only then are trivial updates dropped.
    pub fn apply(&self, state: &State) -> Result<UpdateSet> {
        let mut all = UpdateSet::new();
        self.fire(state, &mut all)?;
        all.retain_nontrivial(state);
        Ok(all)
    }

    fn fire(&self, state: &State, out: &mut UpdateSet) -> Result<()> {
        match self {
            Rule::Assign { symbol, args, rhs } => {
                let args = args
                    .iter()
                    .map(|t| state.evaluate(t))
                    .collect::<Result<Vec<_>>>()?;
                let value = state.evaluate(rhs)?;
                out.insert(Update::new(*symbol, args, value), state.vocabulary())
            }
            Rule::Par(rules) => rules.iter().try_for_each(|r| r.fire(state, out)),
            Rule::If {
                guard,
                then,
                otherwise,
            } => match state.evaluate(guard)? {
                ElementId::TRUE => then.fire(state, out),
                ElementId::FALSE => otherwise.fire(state, out),
                value => Err(Error::GuardNotBoolean {
                    guard: guard.display(state.vocabulary()).to_string(),
                    value,
                }),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::format::{parse_rule, parse_term};

    fn e(label: u32) -> ElementId {
        ElementId::nonlogical(label)
    }

    fn setup() -> (Arc<Vocabulary>, State) {
        let vocab = Arc::new(
            Vocabulary::with_symbols([
                ("f", 0),
                ("other", 1),
                ("a", 0),
                ("b", 0),
                ("c", 0),
                ("g", 1),
            ])
            .unwrap(),
        );
        let x = State::new(vocab.clone(), [e(1), e(2), e(3)])
            .with("f", &[], e(1))
            .and_then(|s| s.with("other", &[e(1)], e(2)))
            .and_then(|s| s.with("other", &[e(2)], e(1)))
            .and_then(|s| s.with("a", &[], e(1)))
            .and_then(|s| s.with("b", &[], e(2)))
            .and_then(|s| s.with("c", &[], e(3)))
            .unwrap();
        (vocab, x)
    }

    #[test]
    fn assignment_through_table() {
        let (vocab, x) = setup();
        let rule = parse_rule(&vocab, "f := other(f)").unwrap();
        let f = vocab.resolve("f").unwrap();
        let expected: UpdateSet = [Update::new(f, vec![], e(2))].into_iter().collect();
        assert_eq!(rule.apply(&x).unwrap(), expected);
    }

    #[test]
    fn trivial_assignment_is_dropped() {
        let (vocab, x) = setup();
        let rule = parse_rule(&vocab, "f := a").unwrap();
        assert!(rule.apply(&x).unwrap().is_empty());
    }

    #[test]
    fn parallel_clash() {
        let (vocab, x) = setup();
        let rule = parse_rule(&vocab, "par g(a) := b g(a) := c endpar").unwrap();
        assert!(matches!(rule.apply(&x), Err(Error::Clash { .. })));
        // still a clash when one side is trivial
        let rule = parse_rule(&vocab, "par f := a f := b endpar").unwrap();
        assert!(matches!(rule.apply(&x), Err(Error::Clash { .. })));
    }

    #[test]
    fn conditional_selects_branch() {
        let (vocab, x) = setup();
        let rule = parse_rule(&vocab, "if eq(f,a) then g(a) := b else g(a) := c endif").unwrap();
        let g = vocab.resolve("g").unwrap();
        let expected: UpdateSet = [Update::new(g, vec![e(1)], e(2))].into_iter().collect();
        assert_eq!(rule.apply(&x).unwrap(), expected);
    }

    #[test]
    fn non_boolean_guard() {
        let (vocab, x) = setup();
        let rule = parse_rule(&vocab, "if f then g(a) := b endif").unwrap();
        assert!(matches!(
            rule.apply(&x),
            Err(Error::GuardNotBoolean { value, .. }) if value == e(1)
        ));
    }

    #[test]
    fn terms_of_program() {
        let (vocab, _) = setup();
        let rule = parse_rule(&vocab, "if eq(f,a) then g(a) := other(b) endif").unwrap();
        let expected: WitnessSet = ["eq(f,a)", "a", "other(b)"]
            .into_iter()
            .map(|t| parse_term(&vocab, t).unwrap())
            .collect();
        assert_eq!(rule.terms(), expected);
    }
}
