use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{ElementId, Renaming, SymbolId, Term, Universe, Vocabulary, WitnessSet};

/// Interpretation of one nonlogical symbol: explicit entries over a default
/// of `undef`. Entries equal to `undef` are never stored.
pub type Table = BTreeMap<Vec<ElementId>, ElementId>;

/// A finite first-order structure over a vocabulary.
///
/// The base set is the three logical elements plus a sorted list of
/// nonlogical elements. Tables are normalized, so structural equality is
/// equality of structures.
#[derive(Clone)]
pub struct State {
    vocab: Arc<Vocabulary>,
    elements: Vec<ElementId>,
    tables: Vec<Table>,
}

impl State {
    /// A state over `elements` where every nonlogical symbol is `undef`
    /// everywhere. Logical ids in `elements` are ignored.
    pub fn new(vocab: Arc<Vocabulary>, elements: impl IntoIterator<Item = ElementId>) -> State {
        let elements: BTreeSet<ElementId> =
            elements.into_iter().filter(|e| !e.is_logical()).collect();
        let tables = vec![Table::new(); vocab.len()];
        State {
            vocab,
            elements: elements.into_iter().collect(),
            tables,
        }
    }

    pub fn vocabulary(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    /// The nonlogical part of the base set, sorted.
    pub fn nonlogical_elements(&self) -> &[ElementId] {
        &self.elements
    }

    pub fn base_set(&self) -> impl Iterator<Item = ElementId> + '_ {
        ElementId::LOGICAL
            .into_iter()
            .chain(self.elements.iter().copied())
    }

    pub fn contains(&self, e: ElementId) -> bool {
        e.is_logical() || self.elements.binary_search(&e).is_ok()
    }

    pub fn same_base_set(&self, other: &State) -> bool {
        self.elements == other.elements
    }

    pub fn same_vocabulary(&self, other: &State) -> bool {
        Arc::ptr_eq(&self.vocab, &other.vocab) || *self.vocab == *other.vocab
    }

    pub(crate) fn check_same_vocabulary(&self, other: &State) -> Result<()> {
        if self.same_vocabulary(other) {
            Ok(())
        } else {
            Err(Error::VocabularyMismatch(
                "states have different vocabularies".into(),
            ))
        }
    }

    pub fn table(&self, symbol: SymbolId) -> &Table {
        &self.tables[symbol.index()]
    }

    /// `f_X(args)`, using the built-in semantics for logical symbols.
    pub fn value(&self, symbol: SymbolId, args: &[ElementId]) -> ElementId {
        match symbol {
            SymbolId::TRUE => ElementId::TRUE,
            SymbolId::FALSE => ElementId::FALSE,
            SymbolId::UNDEF => ElementId::UNDEF,
            SymbolId::EQ => ElementId::from_bool(args[0] == args[1]),
            SymbolId::NOT => match args[0] {
                ElementId::TRUE => ElementId::FALSE,
                ElementId::FALSE => ElementId::TRUE,
                _ => ElementId::UNDEF,
            },
            SymbolId::AND | SymbolId::OR => match (as_bool(args[0]), as_bool(args[1])) {
                (Some(a), Some(b)) if symbol == SymbolId::AND => ElementId::from_bool(a && b),
                (Some(a), Some(b)) => ElementId::from_bool(a || b),
                _ => ElementId::UNDEF,
            },
            _ => self.tables[symbol.index()]
                .get(args)
                .copied()
                .unwrap_or(ElementId::UNDEF),
        }
    }

    /// Sets `f(args) = value`. The symbol must be nonlogical and every
    /// element must lie in the base set.
    pub fn set(&mut self, symbol: SymbolId, args: Vec<ElementId>, value: ElementId) -> Result<()> {
        let sym = self.vocab.get(symbol).ok_or_else(|| {
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
        if let Some(e) = args.iter().chain([&value]).find(|e| !self.contains(**e)) {
            return Err(Error::NotInBaseSet(*e));
        }
        let table = &mut self.tables[symbol.index()];
        if value == ElementId::UNDEF {
            table.remove(&args);
        } else {
            table.insert(args, value);
        }
        Ok(())
    }

    /// Builder-style [`State::set`] by symbol name.
    pub fn with(mut self, name: &str, args: &[ElementId], value: ElementId) -> Result<State> {
        let id = self.vocab.resolve(name)?;
        self.set(id, args.to_vec(), value)?;
        Ok(self)
    }

    /// `Val_X(t)`.
    pub fn evaluate(&self, t: &Term) -> Result<ElementId> {
        let sym = self.vocab.get(t.symbol()).ok_or_else(|| {
            Error::VocabularyMismatch(format!("term symbol id {} not in vocabulary", t.symbol().0))
        })?;
        if sym.arity != t.args().len() {
            return Err(Error::VocabularyMismatch(format!(
                "term uses `{}` with {} argument(s), vocabulary arity is {}",
                sym.name,
                t.args().len(),
                sym.arity
            )));
        }
        let mut args = Vec::with_capacity(t.args().len());
        for a in t.args() {
            args.push(self.evaluate(a)?);
        }
        Ok(self.value(t.symbol(), &args))
    }

    /// `Val_X(T)`.
    pub fn evaluate_set(&self, terms: &WitnessSet) -> Result<BTreeSet<ElementId>> {
        terms.iter().map(|t| self.evaluate(t)).collect()
    }

    /// Values of the terms of `terms` in iteration order.
    pub fn evaluate_all(&self, terms: &WitnessSet) -> Result<Vec<ElementId>> {
        terms.iter().map(|t| self.evaluate(t)).collect()
    }

    /// The isomorphic copy of this state transported along `r`.
    pub fn apply_renaming(&self, r: &Renaming) -> Result<State> {
        let mut elements = self
            .elements
            .iter()
            .map(|e| r.apply(*e))
            .collect::<Result<Vec<_>>>()?;
        elements.sort_unstable();
        let tables = self
            .tables
            .iter()
            .map(|table| {
                table
                    .iter()
                    .map(|(args, v)| {
                        let args = args
                            .iter()
                            .map(|a| r.apply(*a))
                            .collect::<Result<Vec<_>>>()?;
                        Ok((args, r.apply(*v)?))
                    })
                    .collect::<Result<Table>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(State {
            vocab: self.vocab.clone(),
            elements,
            tables,
        })
    }

    pub fn check_in_universe(&self, universe: &Universe) -> Result<()> {
        match self.elements.iter().find(|e| !universe.contains(**e)) {
            Some(e) => Err(Error::OutsideUniverse {
                element: *e,
                size: universe.size(),
            }),
            None => Ok(()),
        }
    }

    /// Iterates the explicit table entries of all nonlogical symbols.
    pub fn entries(&self) -> impl Iterator<Item = (SymbolId, &[ElementId], ElementId)> + '_ {
        self.tables.iter().enumerate().flat_map(|(i, t)| {
            t.iter()
                .map(move |(args, v)| (SymbolId(i as u16), args.as_slice(), *v))
        })
    }
}

fn as_bool(e: ElementId) -> Option<bool> {
    match e {
        ElementId::TRUE => Some(true),
        ElementId::FALSE => Some(false),
        _ => None,
    }
}

/// Whether every term of `terms` has the same value in `x` and `y`.
pub fn coincides_over(x: &State, y: &State, terms: &WitnessSet) -> Result<bool> {
    x.check_same_vocabulary(y)?;
    for t in terms {
        if x.evaluate(t)? != y.evaluate(t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

impl PartialEq for State {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
            && self.tables == other.tables
            && self.same_vocabulary(other)
    }
}

impl Eq for State {}

impl Hash for State {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
        self.tables.hash(state);
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic over the state encoding (carrier, then tables); this fixes
/// the enumeration order of the checkers.
impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements
            .cmp(&other.elements)
            .then_with(|| self.tables.cmp(&other.tables))
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "State{self}")
    }
}

/// Canonical serialization: `{1 2 | f=1, g(1,2)=true}`.
impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(" |")?;
        for (i, (sym, args, v)) in self.entries().enumerate() {
            f.write_str(if i == 0 { " " } else { ", " })?;
            f.write_str(self.vocab.name(sym))?;
            if !args.is_empty() {
                let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                write!(f, "({})", args.join(","))?;
            }
            write!(f, "={v}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(label: u32) -> ElementId {
        ElementId::nonlogical(label)
    }

    /// f cycles 1→2→3→1, a=1, b=`b`.
    fn remark_state(b: u32) -> State {
        let vocab = Arc::new(Vocabulary::with_symbols([("a", 0), ("b", 0), ("f", 1)]).unwrap());
        State::new(vocab, [e(1), e(2), e(3)])
            .with("f", &[e(1)], e(2))
            .and_then(|s| s.with("f", &[e(2)], e(3)))
            .and_then(|s| s.with("f", &[e(3)], e(1)))
            .and_then(|s| s.with("a", &[], e(1)))
            .and_then(|s| s.with("b", &[], e(b)))
            .unwrap()
    }

    fn term(s: &State, text: &str) -> Term {
        crate::format::parse_term(s.vocabulary(), text).unwrap()
    }

    #[test]
    fn evaluates_constants_and_chains() {
        let x = remark_state(2);
        assert_eq!(x.evaluate(&term(&x, "a")).unwrap(), e(1));
        assert_eq!(x.evaluate(&term(&x, "true")).unwrap(), ElementId::TRUE);
        assert_eq!(x.evaluate(&term(&x, "f(f(a))")).unwrap(), e(3));
    }

    #[test]
    fn evaluates_sets() {
        let x = remark_state(2);
        let y = remark_state(3);
        let ab: WitnessSet = [term(&x, "a"), term(&x, "b")].into_iter().collect();
        assert_eq!(x.evaluate_set(&ab).unwrap(), BTreeSet::from([e(1), e(2)]));
        assert_eq!(y.evaluate_set(&ab).unwrap(), BTreeSet::from([e(1), e(3)]));
        assert!(x.evaluate_set(&WitnessSet::new()).unwrap().is_empty());
    }

    #[test]
    fn logical_semantics() {
        let x = remark_state(2);
        let cases = [
            ("eq(a,f(f(f(a))))", ElementId::TRUE),
            ("eq(a,b)", ElementId::FALSE),
            ("not(eq(a,b))", ElementId::TRUE),
            ("not(a)", ElementId::UNDEF),
            ("not(undef)", ElementId::UNDEF),
            ("and(true,eq(a,b))", ElementId::FALSE),
            ("or(true,eq(a,b))", ElementId::TRUE),
            ("and(a,true)", ElementId::UNDEF),
            ("or(false,undef)", ElementId::UNDEF),
        ];
        for (text, expected) in cases {
            assert_eq!(x.evaluate(&term(&x, text)).unwrap(), expected, "{text}");
        }
    }

    #[test]
    fn coincidence() {
        let x = remark_state(2);
        let y = remark_state(3);
        let a: WitnessSet = [term(&x, "a")].into_iter().collect();
        let ab: WitnessSet = [term(&x, "a"), term(&x, "b")].into_iter().collect();
        assert!(coincides_over(&x, &x, &ab).unwrap());
        assert!(coincides_over(&x, &y, &a).unwrap());
        assert!(!coincides_over(&x, &y, &ab).unwrap());
    }

    #[test]
    fn vocabulary_mismatch() {
        let x = remark_state(2);
        let other = Arc::new(Vocabulary::with_symbols([("c", 0)]).unwrap());
        let z = State::new(other, [e(1)]);
        assert!(matches!(
            coincides_over(&x, &z, &WitnessSet::new()),
            Err(Error::VocabularyMismatch(_))
        ));
        // `f` has arity 1 in x's vocabulary; a bare symbol id 9 does not exist in z's.
        assert!(matches!(
            z.evaluate(&term(&x, "f(a)")),
            Err(Error::VocabularyMismatch(_))
        ));
    }

    #[test]
    fn renaming_transports_tables() {
        let x = remark_state(2);
        let r = Renaming::from_pairs([(e(1), e(4)), (e(2), e(5)), (e(3), e(6))]).unwrap();
        let y = x.apply_renaming(&r).unwrap();
        assert_eq!(y.to_string(), "{4 5 6 | a=4, b=5, f(4)=5, f(5)=6, f(6)=4}");
        assert_eq!(
            x.apply_renaming(&Renaming::identity_on(x.base_set()))
                .unwrap(),
            x
        );
        let partial = Renaming::from_pairs([(e(1), e(4))]).unwrap();
        assert_eq!(x.apply_renaming(&partial), Err(Error::OutsideDomain(e(2))));
    }

    #[test]
    fn tables_are_normalized() {
        let x = remark_state(2);
        let mut y = x.clone().with("a", &[], ElementId::UNDEF).unwrap();
        assert!(y.table(y.vocabulary().resolve("a").unwrap()).is_empty());
        y.set(y.vocabulary().resolve("a").unwrap(), vec![], e(1))
            .unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn set_rejects_bad_locations() {
        let x = remark_state(2);
        assert_eq!(
            x.clone().with("a", &[], e(9)).unwrap_err(),
            Error::NotInBaseSet(e(9))
        );
        assert_eq!(
            x.clone().with("eq", &[e(1), e(1)], e(1)).unwrap_err(),
            Error::AssignToLogical("eq".into())
        );
    }
}
