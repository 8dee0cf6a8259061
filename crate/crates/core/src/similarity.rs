//! T-similarity, the similarity function and T-accessibility.
//!
//! Two states are T-similar when the terms of T realize the same equality
//! pattern in both. The similarity function then sends `Val_X(t)` to
//! `Val_Y(t)`; it agrees with the interpretations along every term of a
//! subterm-closed T, but need not be a partial isomorphism.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::kernel::{ElementId, State, WitnessSet};
use crate::report::{CheckReport, Requirement, Witness};
use crate::transition::Update;

/// A finite bijection `Val_X(T) → Val_Y(T)`. Unlike a [`Renaming`] it may
/// move logical elements.
///
/// [`Renaming`]: crate::kernel::Renaming
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimilarityFunction {
    map: BTreeMap<ElementId, ElementId>,
}

impl SimilarityFunction {
    /// Builds the bijection, failing if the pairs are not functional or not
    /// injective.
    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (ElementId, ElementId)>,
    ) -> Result<SimilarityFunction> {
        let mut map = BTreeMap::new();
        let mut image = BTreeMap::new();
        for (a, b) in pairs {
            if map.insert(a, b).is_some_and(|prev| prev != b) {
                return Err(Error::NotSimilar);
            }
            if image.insert(b, a).is_some_and(|prev| prev != a) {
                return Err(Error::NotSimilar);
            }
        }
        Ok(SimilarityFunction { map })
    }

    pub fn get(&self, e: ElementId) -> Option<ElementId> {
        self.map.get(&e).copied()
    }

    pub fn domain(&self) -> BTreeSet<ElementId> {
        self.map.keys().copied().collect()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (ElementId, ElementId)> + '_ {
        self.map.iter().map(|(a, b)| (*a, *b))
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().all(|(a, b)| a == b)
    }

    pub fn inverse(&self) -> SimilarityFunction {
        SimilarityFunction {
            map: self.map.iter().map(|(a, b)| (*b, *a)).collect(),
        }
    }

    /// Whether every logical element in the domain is fixed and no
    /// nonlogical element is sent to a logical one.
    pub fn preserves_logical(&self) -> bool {
        self.map
            .iter()
            .all(|(a, b)| a.is_logical() == b.is_logical() && (!a.is_logical() || a == b))
    }

    /// `σ(u)`; every component must be in the domain.
    pub fn lift(&self, u: &Update) -> Result<Update> {
        u.map_elements(|e| self.get(e).ok_or(Error::Inaccessible(e)))
    }
}

impl fmt::Display for SimilarityFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.map.iter().map(|(a, b)| format!("{a}↦{b}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// For each position, the index of the first position holding the same
/// value. Two value vectors are T-similar iff their patterns are equal.
pub fn equality_pattern(values: &[ElementId]) -> Vec<usize> {
    let mut first: HashMap<ElementId, usize> = HashMap::with_capacity(values.len());
    values
        .iter()
        .enumerate()
        .map(|(i, v)| *first.entry(*v).or_insert(i))
        .collect()
}

pub fn t_similar(x: &State, y: &State, terms: &WitnessSet) -> Result<bool> {
    x.check_same_vocabulary(y)?;
    let vx = x.evaluate_all(terms)?;
    let vy = y.evaluate_all(terms)?;
    Ok(equality_pattern(&vx) == equality_pattern(&vy))
}

/// `σ` with `σ(Val_X(t)) = Val_Y(t)`; an error when `X` and `Y` are not
/// T-similar.
pub fn similarity_function(x: &State, y: &State, terms: &WitnessSet) -> Result<SimilarityFunction> {
    x.check_same_vocabulary(y)?;
    let vx = x.evaluate_all(terms)?;
    let vy = y.evaluate_all(terms)?;
    SimilarityFunction::from_pairs(vx.into_iter().zip(vy))
}

/// Checks `σ(f_X(x1..xj)) = f_Y(σ(x1)..σ(xj))` for every term
/// `f(t1..tj)` of a subterm-closed `T`, with `xi = Val_X(ti)`.
pub fn check_lemma_identity(x: &State, y: &State, terms: &WitnessSet) -> Result<CheckReport> {
    if !terms.is_subterm_closed() {
        return Err(Error::NotSubtermClosed);
    }
    let sigma = similarity_function(x, y, terms)?;
    let vocab = x.vocabulary();
    let mut violation = None;
    for t in terms {
        let xs = t
            .args()
            .iter()
            .map(|a| x.evaluate(a))
            .collect::<Result<Vec<_>>>()?;
        let lhs = sigma
            .get(x.value(t.symbol(), &xs))
            .expect("Val_X(t) is in the domain for t in T");
        let ys: Vec<ElementId> = xs
            .iter()
            .map(|e| sigma.get(*e).expect("subterm values are in the domain"))
            .collect();
        let rhs = y.value(t.symbol(), &ys);
        if lhs != rhs {
            violation = Some(Witness::LemmaViolation {
                term: t.display(vocab).to_string(),
                lhs,
                rhs,
            });
            break;
        }
    }
    Ok(CheckReport::new("lemma-identity")
        .with(Requirement::from_witness("lemma-identity", violation)))
}

/// Checks the homomorphism identity for every tuple over the domain of `σ`
/// whose `f_X`-image is also in the domain, for every symbol.
pub fn check_partial_isomorphism(x: &State, y: &State, terms: &WitnessSet) -> Result<CheckReport> {
    let sigma = similarity_function(x, y, terms)?;
    let vocab = x.vocabulary();
    let domain: Vec<ElementId> = sigma.domain().into_iter().collect();
    let mut violation = None;
    'symbols: for sym in vocab.ids() {
        let arity = vocab.arity(sym);
        for args in std::iter::repeat_n(domain.iter().copied(), arity).multi_cartesian_product() {
            let Some(lhs) = sigma.get(x.value(sym, &args)) else {
                continue;
            };
            let mapped: Vec<ElementId> = args
                .iter()
                .map(|a| sigma.get(*a).expect("in domain"))
                .collect();
            let rhs = y.value(sym, &mapped);
            if lhs != rhs {
                violation = Some(Witness::PartialIsomorphismViolation {
                    symbol: vocab.name(sym).to_string(),
                    args,
                    lhs,
                    rhs,
                });
                break 'symbols;
            }
        }
    }
    Ok(CheckReport::new("partial-isomorphism")
        .with(Requirement::from_witness("partial-isomorphism", violation)))
}

/// The T-accessible elements of `X`, i.e. `Val_X(T)`.
pub fn accessible_elements(x: &State, terms: &WitnessSet) -> Result<BTreeSet<ElementId>> {
    x.evaluate_set(terms)
}

pub fn is_accessible_update(x: &State, terms: &WitnessSet, u: &Update) -> Result<bool> {
    let acc = accessible_elements(x, terms)?;
    Ok(u.elements().all(|e| acc.contains(&e)))
}

/// `σ(u)`; fails with an inaccessibility error if a component of `u` lies
/// outside the domain of `σ`.
pub fn lift_accessible_update(sigma: &SimilarityFunction, u: &Update) -> Result<Update> {
    sigma.lift(u)
}
