use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{Renaming, State, Universe};
use crate::transition::{Algorithm, UpdateSet};

/// The U-closure of an algorithm's canonical family, with `Δ` computed once
/// per state.
///
/// States are kept in ascending order of their encoding, which fixes the
/// order in which pairs are examined and witnesses reported.
pub struct Explorer<'a> {
    algorithm: &'a Algorithm,
    universe: Universe,
    states: Vec<State>,
    deltas: Vec<std::result::Result<UpdateSet, String>>,
    index: HashMap<State, usize>,
}

/// Every injective image of `state`'s nonlogical carrier in `universe`.
pub fn renamings_into<'a>(
    state: &'a State,
    universe: &Universe,
) -> impl Iterator<Item = Renaming> + 'a {
    let carrier = state.nonlogical_elements();
    universe
        .nonlogical_ids()
        .permutations(carrier.len())
        .map(move |image| {
            Renaming::from_pairs(carrier.iter().copied().zip(image))
                .expect("injective image of distinct elements")
        })
}

/// The U-closure of `states`: every renamed copy that fits in `universe`,
/// sorted and without duplicates.
pub fn closure(states: &[State], universe: &Universe) -> Vec<State> {
    let all: BTreeSet<State> = states
        .par_iter()
        .flat_map_iter(|s| {
            renamings_into(s, universe)
                .map(|r| s.apply_renaming(&r).expect("renaming covers the carrier"))
                .collect::<Vec<_>>()
        })
        .collect();
    all.into_iter().collect()
}

impl<'a> Explorer<'a> {
    /// Enumerates the closure of `algorithm` in `universe`. Bounded
    /// exploration checks need room for two disjoint copies of the largest
    /// carrier; a smaller universe makes them inconclusive.
    pub fn new(algorithm: &'a Algorithm, universe: Universe) -> Result<Explorer<'a>> {
        let needed = Universe::headroom_needed(algorithm.max_carrier());
        if universe.size() < needed {
            return Err(Error::InsufficientHeadroom {
                size: universe.size(),
                needed,
            });
        }
        let states = closure(algorithm.canonical_states(), &universe);
        let deltas = states
            .par_iter()
            .map(|s| algorithm.update_set(s).map_err(|e| e.to_string()))
            .collect();
        let index = states
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        Ok(Explorer {
            algorithm,
            universe,
            states,
            deltas,
            index,
        })
    }

    pub fn algorithm(&self) -> &Algorithm {
        self.algorithm
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `Δ` of the i-th closure state, or the error message of a failed step.
    pub fn delta(&self, i: usize) -> std::result::Result<&UpdateSet, &str> {
        self.deltas[i].as_ref().map_err(|e| e.as_str())
    }

    /// `Δ` of a closure state.
    pub fn delta_of(&self, state: &State) -> Option<std::result::Result<&UpdateSet, &str>> {
        self.index.get(state).map(|&i| self.delta(i))
    }

    pub fn position(&self, state: &State) -> Option<usize> {
        self.index.get(state).copied()
    }

    /// First closure state whose step failed.
    pub fn first_failure(&self) -> Option<(usize, &str)> {
        self.deltas
            .iter()
            .enumerate()
            .find_map(|(i, d)| d.as_ref().err().map(|e| (i, e.as_str())))
    }

    /// Closure states grouped by a key, groups in order of first member.
    pub fn group_by<K>(&self, key: impl Fn(&State) -> Result<K> + Sync) -> Result<Vec<Vec<usize>>>
    where
        K: std::hash::Hash + Eq + Send,
    {
        let keys = self
            .states
            .par_iter()
            .map(&key)
            .collect::<Result<Vec<K>>>()?;
        let mut slot: HashMap<K, usize> = HashMap::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, k) in keys.into_iter().enumerate() {
            let g = *slot.entry(k).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(i);
        }
        Ok(groups)
    }
}
