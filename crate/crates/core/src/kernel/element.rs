use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// An element of a state's base set, drawn from a global finite [`Universe`].
///
/// Ids 0, 1 and 2 are reserved for the logical elements interpreting `true`,
/// `false` and `undef`. Every other id is nonlogical and is displayed by its
/// label `id - 2`, so nonlogical element `1` is id 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub u32);

impl ElementId {
    pub const TRUE: ElementId = ElementId(0);
    pub const FALSE: ElementId = ElementId(1);
    pub const UNDEF: ElementId = ElementId(2);
    pub const LOGICAL: [ElementId; 3] = [Self::TRUE, Self::FALSE, Self::UNDEF];

    /// The nonlogical element with display label `label` (1-based).
    pub fn nonlogical(label: u32) -> ElementId {
        assert!(label >= 1, "nonlogical labels start at 1");
        ElementId(label + 2)
    }

    pub fn is_logical(self) -> bool {
        self.0 < 3
    }

    pub fn from_bool(b: bool) -> ElementId {
        if b {
            Self::TRUE
        } else {
            Self::FALSE
        }
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::TRUE => f.write_str("true"),
            Self::FALSE => f.write_str("false"),
            Self::UNDEF => f.write_str("undef"),
            ElementId(id) => write!(f, "{}", id - 2),
        }
    }
}

/// The finite pool of element ids hosting every carrier and every isomorphic
/// copy considered by the checkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Universe {
    size: usize,
}

impl Universe {
    pub fn new(size: usize) -> Result<Universe> {
        if size < 3 {
            return Err(Error::UniverseTooSmall { size, needed: 3 });
        }
        Ok(Universe { size })
    }

    /// The smallest universe with room for two disjoint copies of a carrier
    /// with `carrier` nonlogical elements.
    pub fn with_headroom(carrier: usize) -> Universe {
        Universe {
            size: Self::headroom_needed(carrier),
        }
    }

    pub fn headroom_needed(carrier: usize) -> usize {
        2 * carrier + 3
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, e: ElementId) -> bool {
        e.index() < self.size
    }

    pub fn nonlogical_ids(&self) -> impl DoubleEndedIterator<Item = ElementId> + Clone {
        (3..self.size as u32).map(ElementId)
    }

    pub fn nonlogical_count(&self) -> usize {
        self.size - 3
    }
}

/// An injective map of elements that fixes the logical elements.
///
/// Only nonlogical sources are stored; logical elements always map to
/// themselves.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Renaming {
    map: BTreeMap<ElementId, ElementId>,
}

impl Renaming {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (ElementId, ElementId)>) -> Result<Renaming> {
        let mut map = BTreeMap::new();
        for (from, to) in pairs {
            if from.is_logical() {
                if from != to {
                    return Err(Error::InvalidRenaming(format!(
                        "logical element {from} is moved to {to}"
                    )));
                }
                continue;
            }
            if to.is_logical() {
                return Err(Error::InvalidRenaming(format!(
                    "nonlogical element {from} is sent to logical element {to}"
                )));
            }
            if let Some(prev) = map.insert(from, to) {
                if prev != to {
                    return Err(Error::InvalidRenaming(format!(
                        "element {from} has two images {prev} and {to}"
                    )));
                }
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for (from, to) in &map {
            if !seen.insert(*to) {
                return Err(Error::InvalidRenaming(format!(
                    "not injective: {to} is hit twice (again by {from})"
                )));
            }
        }
        Ok(Renaming { map })
    }

    /// The identity on the given elements.
    pub fn identity_on(elements: impl IntoIterator<Item = ElementId>) -> Renaming {
        Renaming {
            map: elements
                .into_iter()
                .filter(|e| !e.is_logical())
                .map(|e| (e, e))
                .collect(),
        }
    }

    /// Image of `e`; logical elements are fixed, unmapped nonlogical elements
    /// yield `None`.
    pub fn get(&self, e: ElementId) -> Option<ElementId> {
        if e.is_logical() {
            Some(e)
        } else {
            self.map.get(&e).copied()
        }
    }

    pub fn apply(&self, e: ElementId) -> Result<ElementId> {
        self.get(e).ok_or(Error::OutsideDomain(e))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (ElementId, ElementId)> + '_ {
        self.map.iter().map(|(a, b)| (*a, *b))
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().all(|(a, b)| a == b)
    }

    pub fn inverse(&self) -> Renaming {
        Renaming {
            map: self.map.iter().map(|(a, b)| (*b, *a)).collect(),
        }
    }

    /// `self ∘ inner`: apply `inner` first, then `self`.
    pub fn compose(&self, inner: &Renaming) -> Result<Renaming> {
        let map = inner
            .map
            .iter()
            .map(|(a, b)| Ok((*a, self.apply(*b)?)))
            .collect::<Result<_>>()?;
        Ok(Renaming { map })
    }
}

impl fmt::Display for Renaming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, b)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}↦{b}")?;
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

    #[test]
    fn labels_and_display() {
        assert_eq!(e(1), ElementId(3));
        assert_eq!(e(4).to_string(), "4");
        assert_eq!(ElementId::UNDEF.to_string(), "undef");
    }

    #[test]
    fn renaming_rejects_moving_logical() {
        let err = Renaming::from_pairs([(ElementId::TRUE, e(1))]).unwrap_err();
        assert!(matches!(err, Error::InvalidRenaming(_)));
        let err = Renaming::from_pairs([(e(1), ElementId::FALSE)]).unwrap_err();
        assert!(matches!(err, Error::InvalidRenaming(_)));
    }

    #[test]
    fn renaming_rejects_non_injective() {
        let err = Renaming::from_pairs([(e(1), e(3)), (e(2), e(3))]).unwrap_err();
        assert!(matches!(err, Error::InvalidRenaming(_)));
    }

    #[test]
    fn compose_and_inverse() {
        let r = Renaming::from_pairs([(e(1), e(4)), (e(2), e(5))]).unwrap();
        let s = Renaming::from_pairs([(e(4), e(2)), (e(5), e(1))]).unwrap();
        let sr = s.compose(&r).unwrap();
        assert_eq!(sr.apply(e(1)).unwrap(), e(2));
        assert_eq!(sr.apply(e(2)).unwrap(), e(1));
        assert!(r.inverse().compose(&r).unwrap().is_identity());
        assert_eq!(r.apply(e(3)), Err(Error::OutsideDomain(e(3))));
    }

    #[test]
    fn universe_headroom() {
        assert_eq!(Universe::with_headroom(2).size(), 7);
        assert_eq!(Universe::new(7).unwrap().nonlogical_count(), 4);
        assert!(Universe::new(2).is_err());
    }
}
