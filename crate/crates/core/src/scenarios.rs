//! Two built-in scenarios: a T-similar pair whose similarity function is
//! not a partial isomorphism, and a one-symbol algorithm that violates both
//! bounded exploration postulates.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use crate::error::Result;
use crate::kernel::{ElementId, State, Term, Universe, Vocabulary, WitnessSet};
use crate::postulates::{self, Explorer, REQ_ACCESSIBILITY, REQ_TRANSPORT};
use crate::report::Witness;
use crate::similarity::{
    check_lemma_identity, check_partial_isomorphism, similarity_function, t_similar,
};
use crate::transition::{Algorithm, Update};

/// One checked assertion of a scenario.
#[derive(Debug, Clone)]
pub struct Assertion {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct ScenarioReport {
    pub scenario: String,
    pub assertions: Vec<Assertion>,
}

impl ScenarioReport {
    fn new(scenario: &str) -> ScenarioReport {
        ScenarioReport {
            scenario: scenario.to_string(),
            assertions: Vec::new(),
        }
    }

    fn assert(&mut self, name: impl Into<String>, holds: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion {
            name: name.into(),
            holds,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.holds)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!(
            "{} verdict {}",
            self.scenario,
            if self.passed() { "pass" } else { "fail" }
        )];
        for a in &self.assertions {
            out.push(format!(
                "{} {} {}: {}",
                self.scenario,
                a.name,
                if a.holds { "pass" } else { "fail" },
                a.detail
            ));
        }
        out
    }
}

impl fmt::Display for ScenarioReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario: {}", self.scenario)?;
        writeln!(
            f,
            "verdict: {}",
            if self.passed() { "pass" } else { "fail" }
        )?;
        for a in &self.assertions {
            writeln!(
                f,
                "[{}] {}: {}",
                if a.holds { "ok" } else { "FAILED" },
                a.name,
                a.detail
            )?;
        }
        Ok(())
    }
}

fn e(label: u32) -> ElementId {
    ElementId::nonlogical(label)
}

fn constants(vocab: &Vocabulary, names: &[&str]) -> WitnessSet {
    names
        .iter()
        .map(|n| vocab.constant(n).expect("declared constant"))
        .collect()
}

/// The pair `X`, `Y` over `{1,2,3}` with `f` the cycle 1→2→3→1, `a = 1`,
/// `b_X = 2`, `b_Y = 3`, and `T = {a, b}`.
pub fn remark_states() -> (State, State, WitnessSet) {
    let vocab = Arc::new(
        Vocabulary::with_symbols([("a", 0), ("b", 0), ("f", 1)]).expect("valid vocabulary"),
    );
    let build = |b: u32| {
        State::new(vocab.clone(), [e(1), e(2), e(3)])
            .with("f", &[e(1)], e(2))
            .and_then(|s| s.with("f", &[e(2)], e(3)))
            .and_then(|s| s.with("f", &[e(3)], e(1)))
            .and_then(|s| s.with("a", &[], e(1)))
            .and_then(|s| s.with("b", &[], e(b)))
            .expect("elements are in the carrier")
    };
    let terms = constants(&vocab, &["a", "b"]);
    (build(2), build(3), terms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemarkVariant {
    /// The pair as stated, `T = {a, b}`.
    Original,
    /// `T = {a}`: the similarity function is `{1↦1}` and the check is vacuous.
    OnlyA,
    /// `Y` replaced by `X`: the similarity function is the identity.
    SameState,
}

pub fn run_scenario_remark() -> ScenarioReport {
    run_scenario_remark_variant(RemarkVariant::Original)
}

pub fn run_scenario_remark_variant(variant: RemarkVariant) -> ScenarioReport {
    let (x, y0, ab) = remark_states();
    let vocab = x.vocabulary().clone();
    let (y, terms, name) = match variant {
        RemarkVariant::Original => (y0, ab, "remark"),
        RemarkVariant::OnlyA => (y0, constants(&vocab, &["a"]), "remark-only-a"),
        RemarkVariant::SameState => (x.clone(), ab, "remark-same-state"),
    };
    let mut report = ScenarioReport::new(name);
    let shown = terms.display(&vocab).to_string();

    let similar = t_similar(&x, &y, &terms).unwrap_or(false);
    report.assert(
        "t-similar",
        similar,
        format!("X and Y are T-similar for T = {shown}"),
    );
    let Ok(sigma) = similarity_function(&x, &y, &terms) else {
        report.assert("similarity-function", false, "σ is not well defined");
        return report;
    };
    let expected_sigma = match variant {
        RemarkVariant::Original => vec![(e(1), e(1)), (e(2), e(3))],
        RemarkVariant::OnlyA => vec![(e(1), e(1))],
        RemarkVariant::SameState => vec![(e(1), e(1)), (e(2), e(2))],
    };
    report.assert(
        "similarity-function",
        sigma.pairs().collect::<Vec<_>>() == expected_sigma,
        format!("σ = {sigma}"),
    );
    let lemma = check_lemma_identity(&x, &y, &terms.subterm_closure()).is_ok_and(|r| r.passed());
    report.assert(
        "lemma-identity",
        lemma,
        "σ(f_X(x̄)) = f_Y(σ(x̄)) for every term of T",
    );

    let partial = check_partial_isomorphism(&x, &y, &terms);
    match (variant, partial) {
        (RemarkVariant::Original, Ok(r)) => {
            let chain = match r.witness() {
                Some(Witness::PartialIsomorphismViolation {
                    symbol,
                    args,
                    lhs,
                    rhs,
                }) => symbol == "f" && args == &vec![e(1)] && *lhs == e(3) && *rhs == e(2),
                _ => false,
            };
            let detail = match r.witness() {
                Some(w) => w.to_string(),
                None => "no violation found".into(),
            };
            report.assert("partial-isomorphism-fails", !r.passed(), detail.clone());
            report.assert(
                "violation-chain",
                chain,
                format!("expected σ(f_X(1)) = 3 ≠ 2 = f_Y(σ(1)); got {detail}"),
            );
        }
        (_, Ok(r)) => report.assert(
            "partial-isomorphism-holds",
            r.passed(),
            r.witness()
                .map_or("σ respects every symbol on its domain".into(), |w| {
                    w.to_string()
                }),
        ),
        (_, Err(err)) => report.assert("partial-isomorphism", false, err.to_string()),
    }
    report
}

/// One nullary `f`; states have two nonlogical elements `a`, `b`, and each
/// step moves `f` from one to the other. `identity` keeps every state fixed
/// instead.
pub fn example_algorithm_variant(identity: bool) -> Algorithm {
    let vocab = Arc::new(Vocabulary::with_symbols([("f", 0)]).expect("valid vocabulary"));
    let x = State::new(vocab.clone(), [e(1), e(2)])
        .with("f", &[], e(1))
        .expect("a is in the carrier");
    let x2 = x.clone().with("f", &[], e(2)).expect("b is in the carrier");
    let succ = if identity {
        vec![x.clone(), x2.clone()]
    } else {
        vec![x2.clone(), x.clone()]
    };
    Algorithm::with_successors(vocab, vec![x, x2], vec![true, true], succ)
        .expect("well-formed algorithm")
}

pub fn example_algorithm() -> Algorithm {
    example_algorithm_variant(false)
}

/// Every subset of `{true, false, undef, f}`; each is closed under subterms.
pub fn example_witness_sets(vocab: &Vocabulary) -> Vec<WitnessSet> {
    let atoms: Vec<Term> = ["true", "false", "undef", "f"]
        .iter()
        .map(|n| vocab.constant(n).expect("declared constant"))
        .collect();
    atoms
        .iter()
        .powerset()
        .map(|s| s.into_iter().cloned().collect())
        .collect()
}

pub fn run_scenario_example(universe_size: usize) -> Result<ScenarioReport> {
    run_scenario_example_variant(universe_size, false)
}

/// Runs the one-symbol scenario. With `identity`, the transition keeps
/// every state fixed and every check is expected to pass.
pub fn run_scenario_example_variant(
    universe_size: usize,
    identity: bool,
) -> Result<ScenarioReport> {
    let a = example_algorithm_variant(identity);
    let universe = Universe::new(universe_size)?;
    let explorer = Explorer::new(&a, universe)?;
    let vocab = a.vocabulary().clone();
    let mut report = ScenarioReport::new(if identity {
        "example-identity"
    } else {
        "example"
    });

    let st = postulates::check_sequential_time(&a);
    report.assert(
        "sequential-time",
        st.passed(),
        "all states are initial and τ is total",
    );
    let abs = postulates::check_abstract_state(&a, universe)?;
    report.assert(
        "abstract-state",
        abs.passed(),
        abs.witness()
            .map_or("τ commutes with every renaming".into(), |w| w.to_string()),
    );

    let f = vocab.resolve("f")?;
    for terms in example_witness_sets(&vocab) {
        let shown = terms.display(&vocab).to_string();
        let new = postulates::new_be(&explorer, &terms)?;
        let old = postulates::old_be(&explorer, &terms)?;
        let req = |name: &str| new.requirement(name).expect("requirement present");
        let (i, ii) = (req(REQ_ACCESSIBILITY), req(REQ_TRANSPORT));
        if identity {
            report.assert(
                format!("T = {shown}: (i)"),
                i.verdict.is_pass(),
                "no updates",
            );
            report.assert(
                format!("T = {shown}: (ii)"),
                ii.verdict.is_pass(),
                "no updates",
            );
            report.assert(
                format!("T = {shown}: old-be"),
                old.passed(),
                "all update sets empty",
            );
            continue;
        }
        let inaccessible = matches!(
            &i.witness,
            Some(Witness::InaccessibleUpdate { state, update })
                if *update == Update::new(f, vec![], e(2)) && state.value(f, &[]) == e(1)
        );
        report.assert(
            format!("T = {shown}: (i) fails"),
            !i.verdict.is_pass() && inaccessible,
            i.witness
                .as_ref()
                .map_or("no witness".into(), |w| w.to_string()),
        );
        report.assert(
            format!("T = {shown}: (ii) holds"),
            ii.verdict.is_pass(),
            ii.witness
                .as_ref()
                .map_or("no accessible updates".into(), |w| w.to_string()),
        );
        let fresh_pair = match old.witness() {
            Some(Witness::UpdateSetsDiffer {
                x,
                y,
                delta_x,
                delta_y,
            }) => is_fresh_element_pair(x, y, delta_x, delta_y, f),
            _ => false,
        };
        report.assert(
            format!("T = {shown}: old-be fails"),
            !old.passed() && fresh_pair,
            old.witness().map_or("no witness".into(), |w| w.to_string()),
        );
    }
    Ok(report)
}

/// `X` has carrier `{a, b}` and `f_X = a`; `Y` is `X` with `b` replaced by
/// a fresh `c`; `Δ(X) = {(f,(),b)}` and `Δ(Y) = {(f,(),c)}`.
fn is_fresh_element_pair(
    x: &State,
    y: &State,
    delta_x: &crate::transition::UpdateSet,
    delta_y: &crate::transition::UpdateSet,
    f: crate::kernel::SymbolId,
) -> bool {
    let a = x.value(f, &[]);
    let [p, q] = x.nonlogical_elements() else {
        return false;
    };
    let b = if a == *p { *q } else { *p };
    let [r, s] = y.nonlogical_elements() else {
        return false;
    };
    let c = if a == *r { *s } else { *r };
    y.value(f, &[]) == a
        && y.contains(a)
        && !x.contains(c)
        && delta_x.iter().collect::<Vec<_>>() == vec![Update::new(f, vec![], b)]
        && delta_y.iter().collect::<Vec<_>>() == vec![Update::new(f, vec![], c)]
}
