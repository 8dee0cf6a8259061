use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::{ElementId, Renaming, State, SymbolId, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Location {
    pub symbol: SymbolId,
    pub args: Vec<ElementId>,
}

/// A triple `(f, (x1..xj), x0)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Update {
    pub symbol: SymbolId,
    pub args: Vec<ElementId>,
    pub value: ElementId,
}

impl Update {
    pub fn new(symbol: SymbolId, args: Vec<ElementId>, value: ElementId) -> Update {
        Update {
            symbol,
            args,
            value,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.args.iter().copied().chain(std::iter::once(self.value))
    }

    /// Whether applying this update to `state` changes it.
    pub fn is_nontrivial_in(&self, state: &State) -> bool {
        state.value(self.symbol, &self.args) != self.value
    }

    /// Applies `f` to every component.
    pub fn map_elements(
        &self,
        mut f: impl FnMut(ElementId) -> Result<ElementId>,
    ) -> Result<Update> {
        Ok(Update {
            symbol: self.symbol,
            args: self.args.iter().map(|a| f(*a)).collect::<Result<_>>()?,
            value: f(self.value)?,
        })
    }

    pub fn display<'a>(&'a self, vocab: &'a Vocabulary) -> impl fmt::Display + 'a {
        UpdateDisplay {
            update: self,
            vocab,
        }
    }
}

struct UpdateDisplay<'a> {
    update: &'a Update,
    vocab: &'a Vocabulary,
}

impl fmt::Display for UpdateDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.update.args.iter().map(|a| a.to_string()).collect();
        write!(
            f,
            "({},({}),{})",
            self.vocab.name(self.update.symbol),
            args.join(","),
            self.update.value
        )
    }
}

/// A consistent set of updates: at most one value per location.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpdateSet {
    updates: BTreeMap<Location, ElementId>,
}

impl UpdateSet {
    pub fn new() -> UpdateSet {
        UpdateSet::default()
    }

    /// Adds `u`; a second, different value for the same location is a clash.
    pub fn insert(&mut self, u: Update, vocab: &Vocabulary) -> Result<()> {
        let loc = Location {
            symbol: u.symbol,
            args: u.args,
        };
        if let Some(prev) = self.updates.get(&loc) {
            if *prev != u.value {
                let args: Vec<String> = loc.args.iter().map(|a| a.to_string()).collect();
                return Err(Error::Clash {
                    location: format!("{}({})", vocab.name(loc.symbol), args.join(",")),
                    first: *prev,
                    second: u.value,
                });
            }
            return Ok(());
        }
        self.updates.insert(loc, u.value);
        Ok(())
    }

    pub fn contains(&self, u: &Update) -> bool {
        // Borrowed lookup would need a Location; updates are small.
        self.updates
            .get(&Location {
                symbol: u.symbol,
                args: u.args.clone(),
            })
            .is_some_and(|v| *v == u.value)
    }

    pub fn len(&self) -> usize {
        self.updates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.updates.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Update> + '_ {
        self.updates
            .iter()
            .map(|(loc, v)| Update::new(loc.symbol, loc.args.clone(), *v))
    }

    /// Drops the updates that would not change `state`.
    pub fn retain_nontrivial(&mut self, state: &State) {
        self.updates
            .retain(|loc, v| state.value(loc.symbol, &loc.args) != *v);
    }

    /// `X + U`: the state with every update applied.
    pub fn apply_to(&self, state: &State) -> Result<State> {
        let mut next = state.clone();
        for (loc, v) in &self.updates {
            next.set(loc.symbol, loc.args.clone(), *v)?;
        }
        Ok(next)
    }

    /// The nontrivial updates turning `before` into `after`, read off the
    /// normalized tables.
    pub fn diff(before: &State, after: &State) -> Result<UpdateSet> {
        before.check_same_vocabulary(after)?;
        let mut out = UpdateSet::new();
        for sym in before.vocabulary().nonlogical() {
            let (t0, t1) = (before.table(sym), after.table(sym));
            for (args, v) in t1 {
                if t0.get(args) != Some(v) {
                    out.updates.insert(
                        Location {
                            symbol: sym,
                            args: args.clone(),
                        },
                        *v,
                    );
                }
            }
            for args in t0.keys() {
                if !t1.contains_key(args) {
                    out.updates.insert(
                        Location {
                            symbol: sym,
                            args: args.clone(),
                        },
                        ElementId::UNDEF,
                    );
                }
            }
        }
        Ok(out)
    }

    /// Lifts a renaming to update sets, component-wise.
    pub fn lift(&self, r: &Renaming) -> Result<UpdateSet> {
        let updates = self
            .updates
            .iter()
            .map(|(loc, v)| {
                let args = loc
                    .args
                    .iter()
                    .map(|a| r.apply(*a))
                    .collect::<Result<Vec<_>>>()?;
                Ok((
                    Location {
                        symbol: loc.symbol,
                        args,
                    },
                    r.apply(*v)?,
                ))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(UpdateSet { updates })
    }

    pub fn display<'a>(&'a self, vocab: &'a Vocabulary) -> impl fmt::Display + 'a {
        UpdateSetDisplay { set: self, vocab }
    }
}

impl FromIterator<Update> for UpdateSet {
    /// Collects updates, later values overwriting earlier ones at a location.
    fn from_iter<I: IntoIterator<Item = Update>>(iter: I) -> Self {
        UpdateSet {
            updates: iter
                .into_iter()
                .map(|u| {
                    (
                        Location {
                            symbol: u.symbol,
                            args: u.args,
                        },
                        u.value,
                    )
                })
                .collect(),
        }
    }
}

struct UpdateSetDisplay<'a> {
    set: &'a UpdateSet,
    vocab: &'a Vocabulary,
}

impl fmt::Display for UpdateSetDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, u) in self.set.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", u.display(self.vocab))?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    fn e(label: u32) -> ElementId {
        ElementId::nonlogical(label)
    }

    #[test]
    fn lift_identity_and_pointwise() {
        let vocab = Vocabulary::with_symbols([("f", 0), ("g", 1)]).unwrap();
        let f = vocab.resolve("f").unwrap();
        let g = vocab.resolve("g").unwrap();
        let set: UpdateSet = [Update::new(f, vec![], e(2))].into_iter().collect();
        assert_eq!(set.lift(&Renaming::identity_on([e(2)])).unwrap(), set);

        let b_to_c = Renaming::from_pairs([(e(1), e(1)), (e(2), e(3))]).unwrap();
        let lifted: UpdateSet = [Update::new(f, vec![], e(3))].into_iter().collect();
        assert_eq!(set.lift(&b_to_c).unwrap(), lifted);

        let r = Renaming::from_pairs([(e(1), e(4)), (e(2), e(5))]).unwrap();
        let g12: UpdateSet = [Update::new(g, vec![e(1)], e(2))].into_iter().collect();
        let g45: UpdateSet = [Update::new(g, vec![e(4)], e(5))].into_iter().collect();
        assert_eq!(g12.lift(&r).unwrap(), g45);

        let short = Renaming::from_pairs([(e(1), e(4))]).unwrap();
        assert_eq!(g12.lift(&short), Err(Error::OutsideDomain(e(2))));
    }

    #[test]
    fn diff_is_inverse_of_apply() {
        let vocab = Arc::new(Vocabulary::with_symbols([("f", 0), ("g", 1)]).unwrap());
        let x = State::new(vocab.clone(), [e(1), e(2)])
            .with("f", &[], e(1))
            .and_then(|s| s.with("g", &[e(1)], e(2)))
            .unwrap();
        let y = x
            .clone()
            .with("f", &[], e(2))
            .and_then(|s| s.with("g", &[e(1)], ElementId::UNDEF))
            .and_then(|s| s.with("g", &[ElementId::TRUE], e(1)))
            .unwrap();
        let d = UpdateSet::diff(&x, &y).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.apply_to(&x).unwrap(), y);
        assert!(UpdateSet::diff(&x, &x).unwrap().is_empty());
    }

    #[test]
    fn clash_is_reported() {
        let vocab = Vocabulary::with_symbols([("f", 0)]).unwrap();
        let f = vocab.resolve("f").unwrap();
        let mut set = UpdateSet::new();
        set.insert(Update::new(f, vec![], e(1)), &vocab).unwrap();
        set.insert(Update::new(f, vec![], e(1)), &vocab).unwrap();
        assert!(matches!(
            set.insert(Update::new(f, vec![], e(2)), &vocab),
            Err(Error::Clash { .. })
        ));
    }
}
