//! Checkers for the sequential-time, abstract-state and both bounded
//! exploration postulates over the closure of an algorithm in a finite
//! universe.

mod explorer;

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::kernel::{
    ground_terms, ElementId, State, SymbolId, TermPlan, Universe, Vocabulary, WitnessSet,
};
use crate::report::{CheckReport, Requirement, Witness};
use crate::similarity::{equality_pattern, similarity_function};
use crate::transition::{Algorithm, Update, UpdateSet};

pub use explorer::{closure, renamings_into, Explorer};

pub const SEQUENTIAL_TIME: &str = "sequential-time";
pub const ABSTRACT_STATE: &str = "abstract-state";
pub const OLD_BE: &str = "old-be";
pub const NEW_BE: &str = "new-be";
pub const MONOTONICITY: &str = "witness-monotonicity";

pub const REQ_ACCESSIBILITY: &str = "(i)-accessibility";
pub const REQ_TRANSPORT: &str = "(ii)-similarity-transport";

/// Ground terms of depth at most `depth` over the nonlogical symbols and
/// the logical constants `true`, `false`, `undef`.
pub fn full_ground_terms(vocab: &Vocabulary, depth: usize) -> WitnessSet {
    let symbols: Vec<SymbolId> = [SymbolId::TRUE, SymbolId::FALSE, SymbolId::UNDEF]
        .into_iter()
        .chain(vocab.nonlogical())
        .collect();
    ground_terms(vocab, &symbols, depth)
}

/// The logical constants `{true, false, undef}`.
pub fn logical_constants(vocab: &Vocabulary) -> WitnessSet {
    full_ground_terms(vocab, 0)
        .iter()
        .filter(|t| t.symbol().is_logical())
        .cloned()
        .collect()
}

pub fn check_sequential_time(a: &Algorithm) -> CheckReport {
    let states = a.canonical_states();
    let nonempty = if states.is_empty() {
        Some(Witness::EmptyStateSet)
    } else {
        None
    };
    let initial = if a.initial_flags().iter().any(|f| *f) {
        None
    } else {
        Some(Witness::NoInitialState)
    };
    let mut total = None;
    for x in states {
        match a.step(x) {
            Err(e) => {
                total = Some(Witness::StepFailed {
                    state: x.clone(),
                    error: e.to_string(),
                });
                break;
            }
            Ok(next) if !a.contains(&next) => {
                total = Some(Witness::SuccessorOutsideFamily {
                    state: x.clone(),
                    successor: next,
                });
                break;
            }
            Ok(_) => {}
        }
    }
    CheckReport::new(SEQUENTIAL_TIME)
        .with(Requirement::from_witness("nonempty-states", nonempty))
        .with(Requirement::from_witness(
            "nonempty-initial-states",
            initial,
        ))
        .with(Requirement::from_witness("step-total", total))
}

/// Checks that steps keep the base set and commute with every renaming of
/// every canonical state into `universe`.
pub fn check_abstract_state(a: &Algorithm, universe: Universe) -> Result<CheckReport> {
    let needed = a.max_carrier() + 3;
    if universe.size() < needed {
        return Err(Error::UniverseTooSmall {
            size: universe.size(),
            needed,
        });
    }
    let mut base = None;
    let mut natural = None;
    let mut copies = 0usize;
    'states: for x in a.canonical_states() {
        let next = match a.step(x) {
            Ok(n) => n,
            Err(e) => {
                natural = Some(Witness::StepFailed {
                    state: x.clone(),
                    error: e.to_string(),
                });
                break;
            }
        };
        if base.is_none() && !next.same_base_set(x) {
            base = Some(Witness::BaseSetChanged {
                state: x.clone(),
                successor: next.clone(),
            });
        }
        for r in renamings_into(x, &universe) {
            copies += 1;
            let z = x.apply_renaming(&r)?;
            let expected = next.apply_renaming(&r);
            let actual = a.step(&z);
            if let Ok(actual) = &actual {
                if base.is_none() && !actual.same_base_set(&z) {
                    base = Some(Witness::BaseSetChanged {
                        state: z.clone(),
                        successor: actual.clone(),
                    });
                }
            }
            let ok = matches!((&expected, &actual), (Ok(e), Ok(f)) if e == f);
            if !ok {
                natural = Some(Witness::NotNatural {
                    state: x.clone(),
                    renaming: r,
                    expected: match expected {
                        Ok(e) => e,
                        // The successor leaves the carrier: the renaming
                        // cannot transport it. Report the base-set issue.
                        Err(_) => next.clone(),
                    },
                    actual: match actual {
                        Ok(s) => s.to_string(),
                        Err(e) => format!("error: {e}"),
                    },
                });
                break 'states;
            }
        }
    }
    Ok(CheckReport::new(ABSTRACT_STATE)
        .with(Requirement::from_witness("base-set-preserved", base))
        .with(Requirement::from_witness("isomorphism-naturality", natural))
        .note(format!(
            "{copies} renamed copies checked in a universe of size {}; the family is closed under isomorphism by construction",
            universe.size()
        )))
}

pub fn check_old_be(a: &Algorithm, terms: &WitnessSet, universe: Universe) -> Result<CheckReport> {
    old_be(&Explorer::new(a, universe)?, terms)
}

pub fn check_new_be(a: &Algorithm, terms: &WitnessSet, universe: Universe) -> Result<CheckReport> {
    if !terms.is_subterm_closed() {
        return Err(Error::NotSubtermClosed);
    }
    new_be(&Explorer::new(a, universe)?, terms)
}

fn step_failure(ex: &Explorer<'_>) -> Option<Witness> {
    ex.first_failure().map(|(i, e)| Witness::StepFailed {
        state: ex.states()[i].clone(),
        error: e.to_string(),
    })
}

/// Original bounded exploration: states of the closure that coincide over
/// `terms` have equal update sets.
///
/// A reported pair is chosen to agree on as many ground terms as possible:
/// among violating pairs, one that also coincides over every ground term of
/// depth at most 2 is preferred.
pub fn old_be(ex: &Explorer<'_>, terms: &WitnessSet) -> Result<CheckReport> {
    let report = CheckReport::new(OLD_BE);
    if let Some(w) = step_failure(ex) {
        return Ok(report.with(Requirement::fail("bounded-exploration", w)));
    }
    let delta = |i: usize| ex.delta(i).expect("no step failures");
    let plan = TermPlan::new(terms);
    let groups = ex.group_by(|s| Ok(plan.evaluate(s)))?;
    let Some(group) = groups
        .iter()
        .find(|g| g.iter().any(|&j| delta(j) != delta(g[0])))
    else {
        return Ok(report
            .with(Requirement::pass("bounded-exploration"))
            .note(format!(
                "{} states in {} coincidence classes",
                ex.len(),
                groups.len()
            )));
    };

    let vocab = ex.algorithm().vocabulary();
    let everything = TermPlan::new(&full_ground_terms(vocab, 2).union(terms));
    let mut sub: HashMap<Vec<ElementId>, Vec<usize>> = HashMap::new();
    let mut order = Vec::new();
    for &j in group {
        let key = everything.evaluate(&ex.states()[j]);
        let entry = sub.entry(key.clone()).or_default();
        if entry.is_empty() {
            order.push(key);
        }
        entry.push(j);
    }
    let pick = |g: &[usize]| {
        g.iter()
            .find(|&&j| delta(j) != delta(g[0]))
            .map(|&j| (g[0], j))
    };
    let (i, j) = order
        .iter()
        .find_map(|k| pick(&sub[k]))
        .or_else(|| pick(group))
        .expect("group has a violating pair");
    Ok(report.with(Requirement::fail(
        "bounded-exploration",
        Witness::UpdateSetsDiffer {
            x: ex.states()[i].clone(),
            y: ex.states()[j].clone(),
            delta_x: delta(i).clone(),
            delta_y: delta(j).clone(),
        },
    )))
}

/// The accessible part of `Δ(X)` with each element replaced by the index of
/// the first term of `terms` naming it. Two T-similar states satisfy the
/// transport requirement exactly when these sets are equal.
fn abstract_accessible(
    values: &[ElementId],
    delta: &UpdateSet,
) -> BTreeSet<(SymbolId, Vec<usize>, usize)> {
    let mut class: HashMap<ElementId, usize> = HashMap::new();
    for (k, v) in values.iter().enumerate() {
        class.entry(*v).or_insert(k);
    }
    delta
        .iter()
        .filter_map(|u| {
            let args = u
                .args
                .iter()
                .map(|a| class.get(a).copied())
                .collect::<Option<Vec<_>>>()?;
            Some((u.symbol, args, *class.get(&u.value)?))
        })
        .collect()
}

pub fn accessibility_violation(a: &Algorithm, terms: &WitnessSet) -> Result<Option<Witness>> {
    for x in a.canonical_states() {
        let delta = match a.update_set(x) {
            Ok(d) => d,
            Err(e) => {
                return Ok(Some(Witness::StepFailed {
                    state: x.clone(),
                    error: e.to_string(),
                }))
            }
        };
        let accessible = x.evaluate_set(terms)?;
        let bad = delta
            .iter()
            .find(|u| !u.elements().all(|e| accessible.contains(&e)));
        if let Some(u) = bad {
            return Ok(Some(Witness::InaccessibleUpdate {
                state: x.clone(),
                update: u,
            }));
        }
    }
    Ok(None)
}

fn transport_violation(ex: &Explorer<'_>, terms: &WitnessSet) -> Result<Option<Witness>> {
    if let Some(w) = step_failure(ex) {
        return Ok(Some(w));
    }
    let delta = |i: usize| ex.delta(i).expect("no step failures");
    let plan = TermPlan::new(terms);
    let groups = ex.group_by(|s| Ok(equality_pattern(&plan.evaluate(s))))?;
    for group in &groups {
        let abstracts: Vec<_> = group
            .iter()
            .map(|&j| abstract_accessible(&plan.evaluate(&ex.states()[j]), delta(j)))
            .collect();
        let Some(k) = abstracts.iter().position(|s| *s != abstracts[0]) else {
            continue;
        };
        let (i, j) = (group[0], group[k]);
        let (x, y) = (&ex.states()[i], &ex.states()[j]);
        let sigma = similarity_function(x, y, terms)?;
        let (update, in_x) = match delta(i)
            .iter()
            .find(|u| sigma.lift(u).is_ok_and(|v| !delta(j).contains(&v)))
        {
            Some(u) => (u, true),
            None => {
                let inverse = sigma.inverse();
                let v = delta(j)
                    .iter()
                    .find(|v| inverse.lift(v).is_ok_and(|u| !delta(i).contains(&u)))
                    .expect("abstract sets differ");
                (inverse.lift(&v)?, false)
            }
        };
        let lifted = sigma.lift(&update)?;
        return Ok(Some(Witness::TransportFailure {
            x: x.clone(),
            y: y.clone(),
            in_y: !in_x,
            sigma,
            update,
            lifted,
            in_x,
        }));
    }
    Ok(None)
}

/// New bounded exploration: (i) every update set of a canonical state is
/// T-accessible; (ii) for T-similar states of the closure, accessible
/// updates are in `Δ(X)` exactly when their σ-images are in `Δ(Y)`.
pub fn new_be(ex: &Explorer<'_>, terms: &WitnessSet) -> Result<CheckReport> {
    if !terms.is_subterm_closed() {
        return Err(Error::NotSubtermClosed);
    }
    let (i, ii) = (
        accessibility_violation(ex.algorithm(), terms)?,
        transport_violation(ex, terms)?,
    );
    Ok(CheckReport::new(NEW_BE)
        .with(Requirement::from_witness(REQ_ACCESSIBILITY, i))
        .with(Requirement::from_witness(REQ_TRANSPORT, ii)))
}

/// Checks that a passing witness set stays passing when enlarged to
/// `larger`. The new postulate is compared only when both sets are closed
/// under subterms.
pub fn witness_monotonicity_check(
    a: &Algorithm,
    smaller: &WitnessSet,
    larger: &WitnessSet,
    universe: Universe,
) -> Result<CheckReport> {
    if !smaller.is_subset(larger) {
        return Err(Error::NotSubset);
    }
    let ex = Explorer::new(a, universe)?;
    let vocab = a.vocabulary();
    let violation = |postulate: &str, small: &CheckReport, large: &CheckReport| {
        (small.passed() && !large.passed()).then(|| Witness::Monotonicity {
            postulate: postulate.to_string(),
            smaller: smaller.display(vocab).to_string(),
            larger: larger.display(vocab).to_string(),
        })
    };
    let old = violation(OLD_BE, &old_be(&ex, smaller)?, &old_be(&ex, larger)?);
    let mut report = CheckReport::new(MONOTONICITY).with(Requirement::from_witness(OLD_BE, old));
    if smaller.is_subterm_closed() && larger.is_subterm_closed() {
        let new = violation(NEW_BE, &new_be(&ex, smaller)?, &new_be(&ex, larger)?);
        report = report.with(Requirement::from_witness(NEW_BE, new));
    } else {
        report =
            report.note("new postulate not compared: a witness set is not closed under subterms");
    }
    Ok(report)
}

/// `Δ` of a state, paired with the accessible updates; used by replay and
/// tests.
pub fn accessible_updates(
    state: &State,
    terms: &WitnessSet,
    delta: &UpdateSet,
) -> Result<Vec<Update>> {
    let acc = state.evaluate_set(terms)?;
    Ok(delta
        .iter()
        .filter(|u| u.elements().all(|e| acc.contains(&e)))
        .collect())
}
