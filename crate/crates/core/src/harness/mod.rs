//! The equivalence of the two bounded exploration postulates, checked on
//! finite algorithms: both verdicts, and a replay of the proof's Case 1 and
//! Case 2 constructions on every similar pair.

mod generate;
mod suite;

use std::borrow::Cow;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::{ElementId, Renaming, State, TermPlan, Universe, WitnessSet};
use crate::postulates::{self, accessible_updates, Explorer};
use crate::report::{CheckReport, Requirement, Verdict, Witness};
use crate::similarity::{equality_pattern, SimilarityFunction};
use crate::transition::{Algorithm, Update, UpdateSet};

pub use generate::{
    generate_algorithm_suite, generate_similar_pairs, random_state, GeneratorConfig, Strategy,
    SuiteInstance,
};
pub use suite::{run_suite, InstanceResult, SuiteReport};

pub const EQUIVALENCE: &str = "equivalence";

fn nonlogical(values: &[ElementId]) -> BTreeSet<ElementId> {
    values.iter().copied().filter(|e| !e.is_logical()).collect()
}

/// Case 1: replaces `Val_X(t)` by `Val_Y(t)` for every `t` in `T`.
///
/// Returns `X′` and the isomorphism `ξ : X → X′`, which agrees with `σ` on
/// `Val_X(T)` and is the identity elsewhere. Requires that `X` and `Y` are
/// T-similar, that `σ` fixes the logical elements, that no nonlogical
/// element is a value in both states, and that no element of `X` outside
/// `Val_X(T)` is a value in `Y`.
pub fn construct_case1_state(
    x: &State,
    y: &State,
    terms: &WitnessSet,
) -> Result<(State, Renaming)> {
    x.check_same_vocabulary(y)?;
    let plan = TermPlan::new(terms);
    case1(x, &plan.evaluate(x), &plan.evaluate(y))
}

fn case1(x: &State, vx: &[ElementId], vy: &[ElementId]) -> Result<(State, Renaming)> {
    let sigma = SimilarityFunction::from_pairs(vx.iter().copied().zip(vy.iter().copied()))?;
    if !sigma.preserves_logical() {
        return Err(Error::CaseHypothesis(format!(
            "the similarity function {sigma} moves a logical element"
        )));
    }
    let sx = nonlogical(vx);
    let sy = nonlogical(vy);
    let shared: Vec<String> = sx.intersection(&sy).map(|e| e.to_string()).collect();
    if !shared.is_empty() {
        return Err(Error::CaseHypothesis(format!(
            "values {{{}}} occur in both Val_X(T) and Val_Y(T)",
            shared.join(", ")
        )));
    }
    let xi = Renaming::from_pairs(x.nonlogical_elements().iter().map(|&e| match sigma.get(e) {
        Some(image) => (e, image),
        None => (e, e),
    }))
    .map_err(|_| {
        Error::CaseHypothesis("an element outside Val_X(T) is a value of a term in Y".into())
    })?;
    Ok((x.apply_renaming(&xi)?, xi))
}

/// Case 2: an isomorphic copy `X′ = η(X)` whose carrier avoids the
/// nonlogical values `Val_Y(T)`.
///
/// `η` is the identity when no element of `X` is such a value. Otherwise the
/// carrier of `X` is mapped, in order, to the smallest ids of `universe`
/// outside both carriers, then to ids of the two carriers that are not
/// values in `Y`.
pub fn construct_disjoint_copy(
    x: &State,
    y: &State,
    terms: &WitnessSet,
    universe: Universe,
) -> Result<(State, Renaming)> {
    disjoint_copy(x, y, &TermPlan::new(terms).evaluate(y), universe)
}

fn disjoint_copy(
    x: &State,
    y: &State,
    vy: &[ElementId],
    universe: Universe,
) -> Result<(State, Renaming)> {
    let avoid = nonlogical(vy);
    let carrier = x.nonlogical_elements();
    if carrier.iter().all(|e| !avoid.contains(e)) {
        return Ok((x.clone(), Renaming::identity_on(carrier.iter().copied())));
    }
    let used: BTreeSet<ElementId> = carrier
        .iter()
        .chain(y.nonlogical_elements())
        .copied()
        .collect();
    let fresh = universe.nonlogical_ids().filter(|e| !used.contains(e));
    let reused = used.iter().copied().filter(|e| !avoid.contains(e));
    let targets: Vec<ElementId> = fresh.chain(reused).take(carrier.len()).collect();
    if targets.len() < carrier.len() {
        return Err(Error::InsufficientHeadroom {
            size: universe.size(),
            needed: universe.size() + carrier.len() - targets.len(),
        });
    }
    let eta = Renaming::from_pairs(carrier.iter().copied().zip(targets))?;
    Ok((x.apply_renaming(&eta)?, eta))
}

/// Outcome of replaying the proof for one accessible update.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplayOutcome {
    Confirmed {
        route: Route,
    },
    /// The constructions do not apply; the reason says why.
    Skipped {
        reason: String,
    },
    Refuted {
        route: Route,
        reason: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    /// The states coincide over `T`, so `σ` is the identity.
    Coincide,
    Case1,
    Case2ThenCase1,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Coincide => "coincide",
            Route::Case1 => "case-1",
            Route::Case2ThenCase1 => "case-2+case-1",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReplayStats {
    pub pairs: usize,
    pub updates: usize,
    pub coincide: usize,
    pub case1: usize,
    pub case2: usize,
    pub skipped: usize,
    pub refuted: usize,
}

impl fmt::Display for ReplayStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "replayed {} update(s) over {} similar pair(s): {} coincide, {} case 1, {} case 2, {} skipped, {} refuted",
            self.updates, self.pairs, self.coincide, self.case1, self.case2, self.skipped, self.refuted
        )
    }
}

/// Transports `u ∈ Δ(X)` to `σ(u) ∈ Δ(Y)` through the proof's
/// constructions, checking every intermediate claim against the closure.
pub fn replay_update(
    ex: &Explorer<'_>,
    x: &State,
    y: &State,
    terms: &WitnessSet,
    u: &Update,
) -> Result<ReplayOutcome> {
    let replay = Replay::new(ex, terms);
    let outcome = replay.pair(x, y, std::slice::from_ref(u))?.pop();
    Ok(outcome.expect("one outcome per update"))
}

/// Term values of every closure state, shared by all pairs.
struct Replay<'e, 'a> {
    ex: &'e Explorer<'a>,
    plan: TermPlan,
    values: Vec<Vec<ElementId>>,
}

/// The chain `X → η(X) → X′` for one pair, built once for all its updates.
struct Chain {
    route: Route,
    start: State,
    eta: Renaming,
    x1: State,
    xi: Renaming,
}

impl<'e, 'a> Replay<'e, 'a> {
    fn new(ex: &'e Explorer<'a>, terms: &WitnessSet) -> Self {
        let plan = TermPlan::new(terms);
        let values = ex.states().iter().map(|s| plan.evaluate(s)).collect();
        Replay { ex, plan, values }
    }

    fn values(&self, s: &State) -> Cow<'_, [ElementId]> {
        match self.ex.position(s) {
            Some(i) => Cow::Borrowed(&self.values[i]),
            None => Cow::Owned(self.plan.evaluate(s)),
        }
    }

    /// Case 1 directly when the value sets are disjoint, otherwise after the
    /// disjoint copy of Case 2.
    fn chain(
        &self,
        x: &State,
        vx: &[ElementId],
        y: &State,
        vy: &[ElementId],
    ) -> Result<std::result::Result<Chain, String>> {
        let all_x: BTreeSet<ElementId> = vx.iter().copied().collect();
        if vy.iter().all(|e| !all_x.contains(e)) {
            match case1(x, vx, vy) {
                Ok((x1, xi)) => {
                    return Ok(Ok(Chain {
                        route: Route::Case1,
                        start: x.clone(),
                        eta: Renaming::identity_on(x.nonlogical_elements().iter().copied()),
                        x1,
                        xi,
                    }))
                }
                Err(Error::CaseHypothesis(_)) => {}
                Err(e) => return Err(e),
            }
        }
        let (start, eta) = match disjoint_copy(x, y, vy, self.ex.universe()) {
            Ok(c) => c,
            Err(e) => return Ok(Err(e.to_string())),
        };
        match case1(&start, &self.values(&start), vy) {
            Ok((x1, xi)) => Ok(Ok(Chain {
                route: Route::Case2ThenCase1,
                start,
                eta,
                x1,
                xi,
            })),
            Err(e @ Error::CaseHypothesis(_)) => Ok(Err(e.to_string())),
            Err(e) => Err(e),
        }
    }

    /// Outcomes for each accessible update of `X` against a T-similar `Y`.
    fn pair(&self, x: &State, y: &State, updates: &[Update]) -> Result<Vec<ReplayOutcome>> {
        x.check_same_vocabulary(y)?;
        let (vx, vy) = (self.values(x), self.values(y));
        let sigma = SimilarityFunction::from_pairs(vx.iter().copied().zip(vy.iter().copied()))?;
        let delta_y = match self.ex.delta_of(y) {
            Some(Ok(d)) => d,
            _ => {
                let reason = "Y is outside the closure".to_string();
                return Ok(updates
                    .iter()
                    .map(|_| ReplayOutcome::Skipped {
                        reason: reason.clone(),
                    })
                    .collect());
            }
        };
        if vx == vy {
            return updates
                .iter()
                .map(|u| {
                    let route = Route::Coincide;
                    Ok(if !sigma.is_identity() {
                        ReplayOutcome::Refuted {
                            route,
                            reason: format!("σ = {sigma} is not the identity"),
                        }
                    } else if delta_y.contains(u) {
                        ReplayOutcome::Confirmed { route }
                    } else {
                        ReplayOutcome::Refuted {
                            route,
                            reason: "coinciding states have different update sets".into(),
                        }
                    })
                })
                .collect();
        }
        let chain = match self.chain(x, &vx, y, &vy)? {
            Ok(c) => c,
            Err(reason) => {
                return Ok(updates
                    .iter()
                    .map(|_| ReplayOutcome::Skipped {
                        reason: reason.clone(),
                    })
                    .collect());
            }
        };
        updates
            .iter()
            .map(|u| self.transport(&chain, y, delta_y, &sigma, u))
            .collect()
    }

    /// Follows `u` from `X` to `η(X)`, then through Case 1 to `X′`, and
    /// checks `ξ(η(u)) = σ(u) ∈ Δ(X′) = Δ(Y)`.
    fn transport(
        &self,
        chain: &Chain,
        y: &State,
        delta_y: &UpdateSet,
        sigma: &SimilarityFunction,
        u: &Update,
    ) -> Result<ReplayOutcome> {
        let route = chain.route;
        let refuted = |reason: String| Ok(ReplayOutcome::Refuted { route, reason });
        let target = sigma.lift(u)?;
        let moved = u.map_elements(|e| chain.eta.apply(e))?;
        match self.ex.delta_of(&chain.start) {
            Some(Ok(d)) if d.contains(&moved) => {}
            Some(Ok(_)) => return refuted("η(u) is not in the update set of η(X)".into()),
            _ => {
                return refuted(format!(
                    "η(X) = {} is not a state of the closure",
                    chain.start
                ))
            }
        }
        if self.values(&chain.x1) != self.values(y) {
            return refuted("X′ does not coincide with Y over T".into());
        }
        let lifted = moved.map_elements(|e| chain.xi.apply(e))?;
        if lifted != target {
            return refuted("ξ(η(u)) differs from σ(u)".into());
        }
        match self.ex.delta_of(&chain.x1) {
            Some(Ok(d)) if !d.contains(&lifted) => refuted("ξ(u) is not in Δ(X′)".into()),
            Some(Ok(d)) if d != delta_y => {
                refuted("Δ(X′) ≠ Δ(Y) although X′ and Y coincide over T".into())
            }
            Some(Ok(_)) => Ok(ReplayOutcome::Confirmed { route }),
            _ => refuted(format!("X′ = {} is not a state of the closure", chain.x1)),
        }
    }
}

/// Replays the proof for every canonical `X`, every closure state `Y`
/// T-similar to it, and every accessible `u ∈ Δ(X)`.
pub fn replay_proof(
    ex: &Explorer<'_>,
    terms: &WitnessSet,
) -> Result<(ReplayStats, Option<Witness>)> {
    let mut stats = ReplayStats::default();
    let a = ex.algorithm();
    let replay = Replay::new(ex, terms);
    let patterns: Vec<Vec<usize>> = replay.values.iter().map(|v| equality_pattern(v)).collect();
    for x in a.canonical_states() {
        let delta = a.update_set(x)?;
        let updates = accessible_updates(x, terms, &delta)?;
        if updates.is_empty() {
            continue;
        }
        let px = equality_pattern(&replay.values(x));
        for (j, y) in ex.states().iter().enumerate() {
            if patterns[j] != px {
                continue;
            }
            stats.pairs += 1;
            for (u, outcome) in updates.iter().zip(replay.pair(x, y, &updates)?) {
                stats.updates += 1;
                match outcome {
                    ReplayOutcome::Confirmed { route } => match route {
                        Route::Coincide => stats.coincide += 1,
                        Route::Case1 => stats.case1 += 1,
                        Route::Case2ThenCase1 => stats.case2 += 1,
                    },
                    ReplayOutcome::Skipped { .. } => stats.skipped += 1,
                    ReplayOutcome::Refuted { route, reason } => {
                        stats.refuted += 1;
                        let w = Witness::ReplayRefuted {
                            x: x.clone(),
                            y: y.clone(),
                            update: u.clone(),
                            route: route.to_string(),
                            reason,
                        };
                        return Ok((stats, Some(w)));
                    }
                }
            }
        }
    }
    Ok((stats, None))
}

/// Verdicts of both postulates for one witness set, and the proof replay.
#[derive(Debug, Clone)]
pub struct Equivalence {
    pub old_be: CheckReport,
    pub new_be: CheckReport,
    pub replay: Option<ReplayStats>,
    pub report: CheckReport,
}

impl Equivalence {
    pub fn agree(&self) -> bool {
        self.old_be.verdict() == self.new_be.verdict()
    }
}

pub fn verify_equivalence(
    a: &Algorithm,
    terms: &WitnessSet,
    universe: Universe,
) -> Result<Equivalence> {
    if !terms.is_subterm_closed() {
        return Err(Error::NotSubtermClosed);
    }
    verify_equivalence_in(&Explorer::new(a, universe)?, terms)
}

/// Computes both verdicts over an existing closure. When both pass, the
/// proof is replayed as well; the report passes iff the verdicts agree and
/// no replayed claim is refuted.
pub fn verify_equivalence_in(ex: &Explorer<'_>, terms: &WitnessSet) -> Result<Equivalence> {
    let old_be = postulates::old_be(ex, terms)?;
    let new_be = postulates::new_be(ex, terms)?;
    let (ov, nv) = (old_be.verdict(), new_be.verdict());
    let mut report = CheckReport::new(EQUIVALENCE)
        .note(format!("original BE: {ov}"))
        .note(format!("new BE: {nv}"));
    let agreement = (ov != nv).then_some(Witness::Disagreement {
        old_be: ov,
        new_be: nv,
    });
    report = report.with(Requirement::from_witness("verdicts-agree", agreement));
    let mut replay = None;
    if ov == Verdict::Pass && nv == Verdict::Pass {
        let (stats, refuted) = replay_proof(ex, terms)?;
        report = report
            .note(stats.to_string())
            .with(Requirement::from_witness("proof-replay", refuted));
        replay = Some(stats);
    }
    Ok(Equivalence {
        old_be,
        new_be,
        replay,
        report,
    })
}

/// `σ` restricted to nonlogical elements, for display.
pub fn nonlogical_pairs(sigma: &SimilarityFunction) -> Vec<(ElementId, ElementId)> {
    sigma.pairs().filter(|(a, _)| !a.is_logical()).collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::kernel::{coincides_over, Term, Vocabulary};
    use crate::postulates::logical_constants;
    use crate::scenarios::{example_algorithm, example_algorithm_variant, remark_states};
    use crate::similarity::t_similar;

    fn e(label: u32) -> ElementId {
        ElementId::nonlogical(label)
    }

    fn with_logicals(a: &Algorithm, names: &[&str]) -> WitnessSet {
        let vocab = a.vocabulary();
        let mut t = logical_constants(vocab);
        for n in names {
            t.insert(vocab.constant(n).unwrap());
        }
        t
    }

    /// `c` flips between true and false on a one-element carrier.
    fn logical_flip() -> Algorithm {
        let vocab = Arc::new(Vocabulary::with_symbols([("c", 0)]).unwrap());
        let x = State::new(vocab.clone(), [e(1)])
            .with("c", &[], ElementId::TRUE)
            .unwrap();
        let y = x.clone().with("c", &[], ElementId::FALSE).unwrap();
        Algorithm::with_successors(
            vocab,
            vec![x.clone(), y.clone()],
            vec![true, true],
            vec![y, x],
        )
        .unwrap()
    }

    #[test]
    fn case1_moves_values_onto_the_other_state() {
        let a = example_algorithm();
        let terms = with_logicals(&a, &["f"]);
        let x = a.canonical_states()[0].clone();
        let y = x
            .apply_renaming(&Renaming::from_pairs([(e(1), e(3)), (e(2), e(4))]).unwrap())
            .unwrap();
        let (x1, xi) = construct_case1_state(&x, &y, &terms).unwrap();
        assert_eq!(xi.apply(e(1)).unwrap(), e(3));
        assert_eq!(xi.apply(e(2)).unwrap(), e(2));
        assert!(coincides_over(&x1, &y, &terms).unwrap());
    }

    #[test]
    fn case1_rejects_shared_values() {
        let (x, y, terms) = remark_states();
        let err = construct_case1_state(&x, &y, &terms).unwrap_err();
        assert!(matches!(err, Error::CaseHypothesis(_)), "{err}");
    }

    #[test]
    fn disjoint_copy_uses_smallest_fresh_ids() {
        let (x, y, terms) = remark_states();
        let (x1, eta) = construct_disjoint_copy(&x, &y, &terms, Universe::new(9).unwrap()).unwrap();
        let pairs: Vec<_> = eta.pairs().collect();
        assert_eq!(pairs, vec![(e(1), e(4)), (e(2), e(5)), (e(3), e(6))]);
        assert_eq!(x1.nonlogical_elements(), &[e(4), e(5), e(6)]);
    }

    #[test]
    fn disjoint_copy_reports_missing_headroom() {
        let (x, _, terms) = remark_states();
        let err = construct_disjoint_copy(&x, &x, &terms, Universe::new(6).unwrap()).unwrap_err();
        assert!(matches!(err, Error::InsufficientHeadroom { .. }), "{err}");
    }

    #[test]
    fn example_fails_both_postulates() {
        let a = example_algorithm();
        let eq =
            verify_equivalence(&a, &with_logicals(&a, &["f"]), Universe::new(7).unwrap()).unwrap();
        assert_eq!(eq.old_be.verdict(), Verdict::Fail);
        assert_eq!(eq.new_be.verdict(), Verdict::Fail);
        assert!(eq.agree() && eq.report.passed());
        assert!(eq.replay.is_none());
    }

    #[test]
    fn constant_algorithm_passes_and_replays() {
        let a = example_algorithm_variant(true);
        let eq =
            verify_equivalence(&a, &with_logicals(&a, &["f"]), Universe::new(7).unwrap()).unwrap();
        assert!(eq.old_be.passed() && eq.new_be.passed());
        let stats = eq.replay.expect("both pass");
        assert_eq!(stats.refuted, 0);
        assert!(eq.report.passed());
    }

    #[test]
    fn flip_replays_every_accessible_update() {
        let a = logical_flip();
        let eq =
            verify_equivalence(&a, &with_logicals(&a, &["c"]), Universe::new(5).unwrap()).unwrap();
        assert!(eq.report.passed(), "{:?}", eq.report.lines());
        let stats = eq.replay.unwrap();
        assert!(stats.updates > 0);
        assert_eq!(stats.refuted, 0);
    }

    #[test]
    fn witness_set_without_logical_constants_separates_the_postulates() {
        let a = logical_flip();
        let c: WitnessSet = [Term::constant(a.vocabulary().resolve("c").unwrap())]
            .into_iter()
            .collect();
        let eq = verify_equivalence(&a, &c, Universe::new(5).unwrap()).unwrap();
        assert_eq!(eq.old_be.verdict(), Verdict::Pass);
        assert_eq!(eq.new_be.verdict(), Verdict::Fail);
        assert!(!eq.agree());
        assert!(matches!(
            eq.report.witness(),
            Some(Witness::Disagreement { .. })
        ));
    }

    #[test]
    fn small_suite_is_deterministic_and_agrees() {
        let cfg = GeneratorConfig {
            instances: 12,
            max_carrier_size: 2,
            ..GeneratorConfig::default()
        };
        let first = run_suite(&cfg).unwrap();
        let second = run_suite(&cfg).unwrap();
        assert_eq!(first.instances, second.instances);
        assert_eq!(first.lines(), second.lines());
        assert!(first.passed(), "{first}");
    }

    #[test]
    fn similar_pairs_are_similar() {
        let cfg = GeneratorConfig::default();
        for (x, y, terms) in generate_similar_pairs(&cfg, 20).unwrap() {
            assert!(terms.is_subterm_closed());
            assert!(t_similar(&x, &y, &terms).unwrap());
        }
    }
}
