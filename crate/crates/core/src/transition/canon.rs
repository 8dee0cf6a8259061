use itertools::Itertools;

use crate::kernel::{ElementId, Renaming, State};

/// Canonical representative of the isomorphism class of `state` among states
/// whose nonlogical carrier is `{3, .., 3+n-1}`, and the renaming taking
/// `state` to it.
///
/// Brute force over the `n!` orderings of the carrier; carriers here are
/// desk-sized.
pub fn canonical_form(state: &State) -> (State, Renaming) {
    let elements = state.nonlogical_elements();
    let n = elements.len();
    let mut best: Option<(State, Renaming)> = None;
    for order in elements.iter().copied().permutations(n) {
        let r = Renaming::from_pairs(
            order
                .into_iter()
                .enumerate()
                .map(|(i, e)| (e, ElementId(3 + i as u32))),
        )
        .expect("ordering of distinct nonlogical elements is injective");
        let candidate = state
            .apply_renaming(&r)
            .expect("renaming is total on the carrier");
        if best.as_ref().is_none_or(|(b, _)| candidate < *b) {
            best = Some((candidate, r));
        }
    }
    best.unwrap_or_else(|| (state.clone(), Renaming::default()))
}

/// All automorphisms of `state`.
pub fn automorphisms(state: &State) -> Vec<Renaming> {
    let elements = state.nonlogical_elements();
    elements
        .iter()
        .copied()
        .permutations(elements.len())
        .filter_map(|image| {
            let r = Renaming::from_pairs(elements.iter().copied().zip(image)).ok()?;
            (state.apply_renaming(&r).ok()? == *state).then_some(r)
        })
        .collect()
}
