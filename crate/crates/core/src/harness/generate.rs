use std::collections::VecDeque;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{ElementId, Renaming, State, SymbolId, Term, Universe, Vocabulary, WitnessSet};
use crate::postulates::{check_sequential_time, full_ground_terms, logical_constants};
use crate::similarity::t_similar;
use crate::transition::canon::{automorphisms, canonical_form};
use crate::transition::{Algorithm, Rule};

/// Bounds for generated algorithms and witness sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorConfig {
    pub max_canonical_states: usize,
    pub max_carrier_size: usize,
    pub max_nonlogical_symbols: usize,
    pub max_arity: usize,
    pub max_term_depth: usize,
    pub instances: usize,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_canonical_states: 3,
            max_carrier_size: 4,
            max_nonlogical_symbols: 3,
            max_arity: 2,
            max_term_depth: 2,
            instances: 100,
            seed: 20_240_601,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("max_canonical_states", self.max_canonical_states),
            ("max_carrier_size", self.max_carrier_size),
            ("max_nonlogical_symbols", self.max_nonlogical_symbols),
            ("max_term_depth", self.max_term_depth),
            ("instances", self.instances),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidConfig(format!("{name} must be positive")));
        }
        if self.max_arity > crate::kernel::DEFAULT_MAX_ARITY {
            return Err(Error::InvalidConfig(format!(
                "max_arity {} exceeds the limit {}",
                self.max_arity,
                crate::kernel::DEFAULT_MAX_ARITY
            )));
        }
        Ok(())
    }

    /// Room for two disjoint copies of the largest carrier.
    pub fn universe(&self) -> Universe {
        Universe::with_headroom(self.max_carrier_size)
    }

    /// Seed of the i-th instance; instances are generated independently.
    pub fn instance_seed(&self, id: usize) -> u64 {
        self.seed ^ (id as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    /// A renamed copy of the one-symbol flip algorithm.
    Flip,
    /// A rule program with its orbit of states.
    Rules,
    /// Random states with successors copied from states of the same size.
    Explicit,
}

#[derive(Debug, Clone)]
pub struct SuiteInstance {
    pub id: usize,
    pub seed: u64,
    pub strategy: Strategy,
    pub algorithm: Algorithm,
    /// Candidate witness sets, each closed under subterms.
    pub witnesses: Vec<WitnessSet>,
}

const SYMBOL_NAMES: [&str; 6] = ["c", "f", "g", "h", "k", "p"];
const ATTEMPTS: usize = 200;

fn random_vocabulary(cfg: &GeneratorConfig, rng: &mut ChaCha8Rng) -> Arc<Vocabulary> {
    let count = rng.gen_range(1..=cfg.max_nonlogical_symbols.min(SYMBOL_NAMES.len()));
    let mut vocab = Vocabulary::new();
    for (i, name) in SYMBOL_NAMES.iter().take(count).enumerate() {
        // The first symbol is nullary so that nonlogical terms exist.
        let arity = if i == 0 {
            0
        } else {
            rng.gen_range(0..=cfg.max_arity)
        };
        vocab
            .add(name, arity)
            .expect("distinct names within the arity limit");
    }
    Arc::new(vocab)
}

fn random_value(carrier: &[ElementId], rng: &mut ChaCha8Rng) -> ElementId {
    match rng.gen_range(0..10) {
        0..=2 => ElementId::UNDEF,
        3 => ElementId::from_bool(rng.gen()),
        _ => *carrier.choose(rng).expect("nonempty carrier"),
    }
}

/// A random state over `{1..n}` with random tables on nonlogical tuples.
pub fn random_state(vocab: &Arc<Vocabulary>, n: usize, rng: &mut ChaCha8Rng) -> State {
    use itertools::Itertools;
    let carrier: Vec<ElementId> = (1..=n as u32).map(ElementId::nonlogical).collect();
    let mut state = State::new(vocab.clone(), carrier.iter().copied());
    for sym in vocab.nonlogical() {
        let arity = vocab.arity(sym);
        for args in std::iter::repeat_n(carrier.iter().copied(), arity).multi_cartesian_product() {
            let v = random_value(&carrier, rng);
            state.set(sym, args, v).expect("values lie in the base set");
        }
    }
    state
}

fn random_term(vocab: &Vocabulary, depth: usize, rng: &mut ChaCha8Rng) -> Term {
    let symbols: Vec<SymbolId> = vocab.nonlogical().collect();
    let compound: Vec<SymbolId> = symbols
        .iter()
        .copied()
        .filter(|s| vocab.arity(*s) > 0)
        .collect();
    if depth > 0 && !compound.is_empty() && rng.gen_bool(0.5) {
        let s = *compound.choose(rng).expect("nonempty");
        let args = (0..vocab.arity(s))
            .map(|_| random_term(vocab, depth - 1, rng))
            .collect();
        return Term::new(s, args);
    }
    if rng.gen_range(0..6) == 0 {
        return Term::constant(
            *[SymbolId::TRUE, SymbolId::FALSE, SymbolId::UNDEF]
                .choose(rng)
                .expect("nonempty"),
        );
    }
    let nullary: Vec<SymbolId> = symbols
        .iter()
        .copied()
        .filter(|s| vocab.arity(*s) == 0)
        .collect();
    Term::constant(*nullary.choose(rng).expect("first symbol is nullary"))
}

fn random_assignment(vocab: &Vocabulary, depth: usize, rng: &mut ChaCha8Rng) -> Rule {
    let symbols: Vec<SymbolId> = vocab.nonlogical().collect();
    let s = *symbols.choose(rng).expect("nonempty vocabulary");
    let arg_depth = depth.saturating_sub(1);
    let args = (0..vocab.arity(s))
        .map(|_| random_term(vocab, arg_depth, rng))
        .collect();
    Rule::assign(vocab, s, args, random_term(vocab, depth, rng))
        .expect("nonlogical target of the right arity")
}

fn random_rule(vocab: &Vocabulary, depth: usize, rng: &mut ChaCha8Rng) -> Rule {
    let parts = rng.gen_range(1..=3);
    let mut rules: Vec<Rule> = (0..parts)
        .map(|_| {
            if rng.gen_bool(0.4) {
                let guard = Term::new(
                    SymbolId::EQ,
                    vec![
                        random_term(vocab, depth.saturating_sub(1), rng),
                        random_term(vocab, depth.saturating_sub(1), rng),
                    ],
                );
                let otherwise = if rng.gen_bool(0.5) {
                    random_assignment(vocab, depth, rng)
                } else {
                    Rule::skip()
                };
                Rule::cond(guard, random_assignment(vocab, depth, rng), otherwise)
            } else {
                random_assignment(vocab, depth, rng)
            }
        })
        .collect();
    if rules.len() == 1 {
        rules.pop().expect("one rule")
    } else {
        Rule::Par(rules)
    }
}

fn random_carrier(cfg: &GeneratorConfig, rng: &mut ChaCha8Rng) -> usize {
    rng.gen_range(1..=cfg.max_carrier_size)
}

/// A rule program whose orbit from a few random states, up to isomorphism,
/// fits in the state bound.
fn rules_instance(cfg: &GeneratorConfig, rng: &mut ChaCha8Rng) -> Option<Algorithm> {
    for _ in 0..ATTEMPTS {
        let vocab = random_vocabulary(cfg, rng);
        let rule = random_rule(&vocab, cfg.max_term_depth, rng);
        let seeds = rng.gen_range(1..=cfg.max_canonical_states);
        let mut forms: Vec<State> = Vec::new();
        let mut initial = Vec::new();
        let mut queue = VecDeque::new();
        for _ in 0..seeds {
            let n = random_carrier(cfg, rng);
            let (form, _) = canonical_form(&random_state(&vocab, n, rng));
            if !forms.contains(&form) {
                forms.push(form.clone());
                initial.push(true);
                queue.push_back(form);
            }
        }
        let mut ok = true;
        while let Some(s) = queue.pop_front() {
            let next = match rule.apply(&s).and_then(|d| d.apply_to(&s)) {
                Ok(n) => n,
                Err(_) => {
                    ok = false;
                    break;
                }
            };
            let (form, _) = canonical_form(&next);
            if !forms.contains(&form) {
                if forms.len() == cfg.max_canonical_states {
                    ok = false;
                    break;
                }
                forms.push(form.clone());
                initial.push(false);
                queue.push_back(form);
            }
        }
        if !ok {
            continue;
        }
        let a = Algorithm::with_rules(vocab, forms, initial, rule).ok()?;
        if check_sequential_time(&a).passed() {
            return Some(a);
        }
    }
    None
}

/// Random non-isomorphic states; each successor is a copy of a state of the
/// same size placed on the source carrier, kept only if every automorphism
/// of the source fixes it.
fn explicit_instance(cfg: &GeneratorConfig, rng: &mut ChaCha8Rng) -> Option<Algorithm> {
    use itertools::Itertools;
    for _ in 0..ATTEMPTS {
        let vocab = random_vocabulary(cfg, rng);
        let count = rng.gen_range(1..=cfg.max_canonical_states);
        let mut forms: Vec<State> = Vec::new();
        for _ in 0..count {
            let n = random_carrier(cfg, rng);
            let (form, _) = canonical_form(&random_state(&vocab, n, rng));
            if !forms.contains(&form) {
                forms.push(form);
            }
        }
        let mut successors = Vec::new();
        for x in &forms {
            let carrier = x.nonlogical_elements();
            let autos = automorphisms(x);
            let mut candidates: Vec<(usize, Vec<ElementId>)> = forms
                .iter()
                .enumerate()
                .filter(|(_, s)| s.nonlogical_elements().len() == carrier.len())
                .flat_map(|(j, _)| {
                    carrier
                        .iter()
                        .copied()
                        .permutations(carrier.len())
                        .map(move |p| (j, p))
                })
                .collect();
            candidates.shuffle(rng);
            let succ = candidates
                .into_iter()
                .find_map(|(j, image)| {
                    let from = forms[j].nonlogical_elements();
                    let r = Renaming::from_pairs(from.iter().copied().zip(image)).ok()?;
                    let s = forms[j].apply_renaming(&r).ok()?;
                    autos
                        .iter()
                        .all(|a| s.apply_renaming(a).is_ok_and(|t| t == s))
                        .then_some(s)
                })
                .unwrap_or_else(|| x.clone());
            successors.push(succ);
        }
        let mut initial: Vec<bool> = forms.iter().map(|_| rng.gen_bool(0.5)).collect();
        initial[0] = true;
        let a = Algorithm::with_successors(vocab, forms, initial, successors).ok()?;
        if check_sequential_time(&a).passed() {
            return Some(a);
        }
    }
    None
}

/// The flip algorithm on a random two-element carrier.
fn flip_instance(cfg: &GeneratorConfig, rng: &mut ChaCha8Rng) -> Option<Algorithm> {
    if cfg.max_carrier_size < 2 {
        return None;
    }
    let vocab = Arc::new(Vocabulary::with_symbols([("f", 0)]).expect("valid"));
    let ids: Vec<ElementId> = cfg.universe().nonlogical_ids().collect();
    let pick: Vec<ElementId> = ids.choose_multiple(rng, 2).copied().collect();
    let (a, b) = (pick[0], pick[1]);
    let x = State::new(vocab.clone(), [a, b]).with("f", &[], a).ok()?;
    let y = x.clone().with("f", &[], b).ok()?;
    Algorithm::with_successors(
        vocab,
        vec![x.clone(), y.clone()],
        vec![true, true],
        vec![y, x],
    )
    .ok()
}

/// Terms occurring in a rule, including the assigned locations.
fn rule_terms(rule: &Rule) -> WitnessSet {
    fn locations(rule: &Rule, out: &mut WitnessSet) {
        match rule {
            Rule::Assign { symbol, args, .. } => {
                out.insert(Term::new(*symbol, args.clone()));
            }
            Rule::Par(rules) => rules.iter().for_each(|r| locations(r, out)),
            Rule::If {
                then, otherwise, ..
            } => {
                locations(then, out);
                locations(otherwise, out);
            }
        }
    }
    let mut out = rule.terms();
    locations(rule, &mut out);
    out.subterm_closure()
}

/// Candidate witness sets: the logical constants, every ground term up to
/// the depth bound, the terms of the rule program, and a random closed
/// subset. All contain the logical constants.
fn witness_candidates(
    cfg: &GeneratorConfig,
    a: &Algorithm,
    rng: &mut ChaCha8Rng,
) -> Vec<WitnessSet> {
    let vocab = a.vocabulary();
    let logical = logical_constants(vocab);
    let full = full_ground_terms(vocab, cfg.max_term_depth);
    let mut out = vec![logical.clone(), full.clone()];
    if let Some(rule) = a.rule() {
        out.push(rule_terms(rule).union(&logical));
    }
    let sample: WitnessSet = full.iter().filter(|_| rng.gen_bool(0.2)).cloned().collect();
    out.push(sample.subterm_closure().union(&logical));
    let shallow: WitnessSet = full_ground_terms(vocab, 1)
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect();
    out.push(shallow.subterm_closure().union(&logical));
    let mut unique = Vec::new();
    for w in out {
        if !unique.contains(&w) {
            unique.push(w);
        }
    }
    unique
}

fn instance(cfg: &GeneratorConfig, id: usize) -> Option<SuiteInstance> {
    let seed = cfg.instance_seed(id);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rotation = if id.is_multiple_of(10) {
        [Strategy::Flip, Strategy::Rules, Strategy::Explicit]
    } else if id % 2 == 1 {
        [Strategy::Rules, Strategy::Explicit, Strategy::Flip]
    } else {
        [Strategy::Explicit, Strategy::Rules, Strategy::Flip]
    };
    for strategy in rotation {
        let algorithm = match strategy {
            Strategy::Flip => flip_instance(cfg, &mut rng),
            Strategy::Rules => rules_instance(cfg, &mut rng),
            Strategy::Explicit => explicit_instance(cfg, &mut rng),
        };
        if let Some(algorithm) = algorithm {
            let witnesses = witness_candidates(cfg, &algorithm, &mut rng);
            return Some(SuiteInstance {
                id,
                seed,
                strategy,
                algorithm,
                witnesses,
            });
        }
    }
    None
}

/// A deterministic suite of `cfg.instances` algorithms with witness
/// candidates. Every tenth instance (starting with the first) is a copy of
/// the flip algorithm; the rest alternate between rule programs and explicit
/// successor tables.
pub fn generate_algorithm_suite(cfg: &GeneratorConfig) -> Result<Vec<SuiteInstance>> {
    cfg.validate()?;
    let suite: Vec<SuiteInstance> = (0..cfg.instances)
        .into_par_iter()
        .filter_map(|id| instance(cfg, id))
        .collect();
    if suite.is_empty() {
        return Err(Error::InvalidConfig("the bounds admit no instance".into()));
    }
    Ok(suite)
}

/// `count` T-similar pairs with subterm-closed `T` over random vocabularies.
/// `Y` is a random copy of `X` with some table entries changed, kept when
/// still T-similar to `X`.
pub fn generate_similar_pairs(
    cfg: &GeneratorConfig,
    count: usize,
) -> Result<Vec<(State, State, WitnessSet)>> {
    cfg.validate()?;
    let universe = cfg.universe();
    let ids: Vec<ElementId> = universe.nonlogical_ids().collect();
    let pairs = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.instance_seed(i) ^ 0x5151);
            let vocab = random_vocabulary(cfg, &mut rng);
            let n = random_carrier(cfg, &mut rng);
            let x = random_state(&vocab, n, &mut rng);
            let full = full_ground_terms(&vocab, cfg.max_term_depth);
            let terms: WitnessSet = full.iter().filter(|_| rng.gen_bool(0.3)).cloned().collect();
            let terms = terms.subterm_closure();
            let image: Vec<ElementId> = ids.choose_multiple(&mut rng, n).copied().collect();
            let r = Renaming::from_pairs(x.nonlogical_elements().iter().copied().zip(image))
                .expect("distinct ids");
            let copy = x.apply_renaming(&r).expect("renaming covers the carrier");
            let mut y = copy.clone();
            for _ in 0..ATTEMPTS {
                let mut candidate = copy.clone();
                let carrier = candidate.nonlogical_elements().to_vec();
                for _ in 0..rng.gen_range(1..=3) {
                    let syms: Vec<SymbolId> = vocab.nonlogical().collect();
                    let s = *syms.choose(&mut rng).expect("nonempty");
                    let args: Vec<ElementId> = (0..vocab.arity(s))
                        .map(|_| *carrier.choose(&mut rng).expect("nonempty"))
                        .collect();
                    let v = random_value(&carrier, &mut rng);
                    candidate
                        .set(s, args, v)
                        .expect("values lie in the base set");
                }
                if t_similar(&x, &candidate, &terms).unwrap_or(false) {
                    y = candidate;
                    break;
                }
            }
            (x, y, terms)
        })
        .collect();
    Ok(pairs)
}
