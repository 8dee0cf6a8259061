use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::kernel::{ElementId, SymbolId, Vocabulary};

/// A ground term. There are no variables anywhere in this crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    symbol: SymbolId,
    args: Vec<Term>,
}

impl Term {
    pub fn new(symbol: SymbolId, args: Vec<Term>) -> Term {
        Term { symbol, args }
    }

    pub fn constant(symbol: SymbolId) -> Term {
        Term::new(symbol, Vec::new())
    }

    pub fn symbol(&self) -> SymbolId {
        self.symbol
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }

    /// Nesting depth; constants have depth 0.
    pub fn depth(&self) -> usize {
        self.args.iter().map(|a| a.depth() + 1).max().unwrap_or(0)
    }

    /// Visits every subterm, including `self`, children first.
    pub fn for_each_subterm<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        for a in &self.args {
            a.for_each_subterm(f);
        }
        f(self);
    }

    pub fn display<'a>(&'a self, vocab: &'a Vocabulary) -> TermDisplay<'a> {
        TermDisplay { term: self, vocab }
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    vocab: &'a Vocabulary,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self
            .vocab
            .get(self.term.symbol)
            .map(|s| s.name.as_str())
            .unwrap_or("?");
        f.write_str(name)?;
        if !self.term.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.term.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", a.display(self.vocab))?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A finite set of ground terms, the candidate bounded exploration witness.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WitnessSet {
    terms: BTreeSet<Term>,
}

impl WitnessSet {
    pub fn new() -> WitnessSet {
        WitnessSet::default()
    }

    pub fn insert(&mut self, t: Term) -> bool {
        self.terms.insert(t)
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.terms.contains(t)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Term> + Clone {
        self.terms.iter()
    }

    /// The least superset closed under subterms.
    pub fn subterm_closure(&self) -> WitnessSet {
        let mut out = WitnessSet::new();
        for t in &self.terms {
            t.for_each_subterm(&mut |s| {
                out.terms.insert(s.clone());
            });
        }
        out
    }

    pub fn is_subterm_closed(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.args.iter().all(|a| self.terms.contains(a)))
    }

    pub fn is_subset(&self, other: &WitnessSet) -> bool {
        self.terms.is_subset(&other.terms)
    }

    pub fn union(&self, other: &WitnessSet) -> WitnessSet {
        WitnessSet {
            terms: self.terms.union(&other.terms).cloned().collect(),
        }
    }

    pub fn display<'a>(&'a self, vocab: &'a Vocabulary) -> impl fmt::Display + 'a {
        WitnessDisplay { set: self, vocab }
    }
}

impl FromIterator<Term> for WitnessSet {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> Self {
        WitnessSet {
            terms: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a WitnessSet {
    type Item = &'a Term;
    type IntoIter = std::collections::btree_set::Iter<'a, Term>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

struct WitnessDisplay<'a> {
    set: &'a WitnessSet,
    vocab: &'a Vocabulary,
}

impl fmt::Display for WitnessDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, t) in self.set.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", t.display(self.vocab))?;
        }
        f.write_str("}")
    }
}

/// A witness set compiled for repeated evaluation: shared subterms are
/// evaluated once, children before parents.
#[derive(Debug, Clone)]
pub struct TermPlan {
    nodes: Vec<(SymbolId, Vec<usize>)>,
    outputs: Vec<usize>,
}

impl TermPlan {
    pub fn new(terms: &WitnessSet) -> TermPlan {
        fn intern<'a>(
            t: &'a Term,
            seen: &mut HashMap<&'a Term, usize>,
            nodes: &mut Vec<(SymbolId, Vec<usize>)>,
        ) -> usize {
            if let Some(&i) = seen.get(t) {
                return i;
            }
            let children = t.args.iter().map(|a| intern(a, seen, nodes)).collect();
            nodes.push((t.symbol, children));
            seen.insert(t, nodes.len() - 1);
            nodes.len() - 1
        }
        let mut seen = HashMap::new();
        let mut nodes = Vec::new();
        let outputs = terms
            .iter()
            .map(|t| intern(t, &mut seen, &mut nodes))
            .collect();
        TermPlan { nodes, outputs }
    }

    /// Number of terms in the compiled set.
    pub fn len(&self) -> usize {
        self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outputs.is_empty()
    }

    /// Same result as [`State::evaluate_all`](crate::kernel::State::evaluate_all)
    /// for terms over the state's vocabulary.
    pub fn evaluate(&self, state: &crate::kernel::State) -> Vec<ElementId> {
        let mut values: Vec<ElementId> = Vec::with_capacity(self.nodes.len());
        let mut args = Vec::new();
        for (symbol, children) in &self.nodes {
            args.clear();
            args.extend(children.iter().map(|&c| values[c]));
            values.push(state.value(*symbol, &args));
        }
        self.outputs.iter().map(|&i| values[i]).collect()
    }
}

/// Every ground term of depth at most `max_depth` built from `symbols`.
pub fn ground_terms(vocab: &Vocabulary, symbols: &[SymbolId], max_depth: usize) -> WitnessSet {
    use itertools::Itertools;

    let mut all: BTreeSet<Term> = symbols
        .iter()
        .filter(|s| vocab.arity(**s) == 0)
        .map(|s| Term::constant(*s))
        .collect();
    for _ in 0..max_depth {
        let pool: Vec<Term> = all.iter().cloned().collect();
        let mut next = all.clone();
        for &s in symbols {
            let arity = vocab.arity(s);
            if arity == 0 {
                continue;
            }
            for args in std::iter::repeat_n(pool.iter(), arity).multi_cartesian_product() {
                next.insert(Term::new(s, args.into_iter().cloned().collect()));
            }
        }
        all = next;
    }
    WitnessSet { terms: all }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab() -> Vocabulary {
        Vocabulary::with_symbols([("a", 0), ("b", 0), ("f", 1)]).unwrap()
    }

    #[test]
    fn closure_of_application() {
        let v = vocab();
        let fa = v.term("f", vec![v.constant("a").unwrap()]).unwrap();
        let t: WitnessSet = [fa.clone()].into_iter().collect();
        let closed = t.subterm_closure();
        let expected: WitnessSet = [fa, v.constant("a").unwrap()].into_iter().collect();
        assert_eq!(closed, expected);
        assert!(!t.is_subterm_closed());
        assert!(closed.is_subterm_closed());
    }

    #[test]
    fn closure_of_empty_set() {
        assert_eq!(WitnessSet::new().subterm_closure(), WitnessSet::new());
    }

    #[test]
    fn closure_through_equality() {
        let v = vocab();
        let a = v.constant("a").unwrap();
        let b = v.constant("b").unwrap();
        let eq = v.term("eq", vec![a.clone(), b.clone()]).unwrap();
        let t: WitnessSet = [eq.clone(), a.clone()].into_iter().collect();
        let expected: WitnessSet = [eq, a, b].into_iter().collect();
        assert_eq!(t.subterm_closure(), expected);
    }

    #[test]
    fn ground_terms_by_depth() {
        let v = vocab();
        let syms: Vec<_> = v.nonlogical().collect();
        assert_eq!(ground_terms(&v, &syms, 0).len(), 2);
        // a, b, f(a), f(b), f(f(a)), f(f(b))
        assert_eq!(ground_terms(&v, &syms, 2).len(), 6);
        assert!(ground_terms(&v, &syms, 2).is_subterm_closed());
    }

    #[test]
    fn display_prefix_form() {
        let v = vocab();
        let t = v
            .term(
                "eq",
                vec![
                    v.constant("a").unwrap(),
                    v.term("f", vec![v.constant("b").unwrap()]).unwrap(),
                ],
            )
            .unwrap();
        assert_eq!(t.display(&v).to_string(), "eq(a,f(b))");
        assert_eq!(t.depth(), 2);
    }
}
