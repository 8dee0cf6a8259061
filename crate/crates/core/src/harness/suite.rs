use std::fmt;

use rayon::prelude::*;

use super::generate::{generate_algorithm_suite, GeneratorConfig, Strategy};
use super::{verify_equivalence_in, ReplayStats};
use crate::error::Result;
use crate::postulates::Explorer;
use crate::report::Verdict;

/// Both verdicts for one witness set of one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessOutcome {
    pub terms: usize,
    pub old_be: Verdict,
    pub new_be: Verdict,
    pub replay: Option<ReplayStats>,
    pub replay_passed: bool,
}

impl WitnessOutcome {
    pub fn agree(&self) -> bool {
        self.old_be == self.new_be
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceResult {
    pub id: usize,
    pub seed: u64,
    pub strategy: Strategy,
    pub states: usize,
    pub closure: usize,
    pub outcomes: Vec<WitnessOutcome>,
}

impl InstanceResult {
    pub fn agree(&self) -> bool {
        self.outcomes.iter().all(|o| o.agree() && o.replay_passed)
    }

    /// Overall verdict of a postulate: it holds if some witness set works.
    fn overall(&self, pick: impl Fn(&WitnessOutcome) -> Verdict) -> Verdict {
        Verdict::from_bool(self.outcomes.iter().any(|o| pick(o).is_pass()))
    }

    pub fn old_be(&self) -> Verdict {
        self.overall(|o| o.old_be)
    }

    pub fn new_be(&self) -> Verdict {
        self.overall(|o| o.new_be)
    }

    pub fn log_line(&self, seed: u64) -> String {
        format!(
            "seed={seed} instance={} old-be={} new-be={} agree={}",
            self.id,
            self.old_be(),
            self.new_be(),
            self.agree()
        )
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub config: GeneratorConfig,
    pub instances: Vec<InstanceResult>,
}

impl SuiteReport {
    pub fn agreements(&self) -> usize {
        self.instances.iter().filter(|r| r.agree()).count()
    }

    pub fn passed(&self) -> bool {
        self.agreements() == self.instances.len()
    }

    /// Witness sets on which both postulates passed.
    pub fn replayed(&self) -> usize {
        self.instances
            .iter()
            .flat_map(|r| &r.outcomes)
            .filter(|o| o.replay.is_some())
            .count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn lines(&self) -> Vec<String> {
        self.instances
            .iter()
            .map(|r| r.log_line(self.config.seed))
            .collect()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.lines() {
            writeln!(f, "{line}")?;
        }
        write!(
            f,
            "agreement: {}/{} instances, {} witness sets replayed",
            self.agreements(),
            self.instances.len(),
            self.replayed()
        )
    }
}

/// Generates the suite and checks both postulates on every candidate witness
/// set, replaying the proof where both pass.
pub fn run_suite(cfg: &GeneratorConfig) -> Result<SuiteReport> {
    let universe = cfg.universe();
    let suite = generate_algorithm_suite(cfg)?;
    let instances = suite
        .par_iter()
        .map(|inst| {
            let ex = Explorer::new(&inst.algorithm, universe)?;
            let outcomes = inst
                .witnesses
                .iter()
                .map(|terms| {
                    let eq = verify_equivalence_in(&ex, terms)?;
                    Ok(WitnessOutcome {
                        terms: terms.len(),
                        old_be: eq.old_be.verdict(),
                        new_be: eq.new_be.verdict(),
                        replay_passed: eq
                            .report
                            .requirement("proof-replay")
                            .is_none_or(|r| r.verdict.is_pass()),
                        replay: eq.replay,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(InstanceResult {
                id: inst.id,
                seed: inst.seed,
                strategy: inst.strategy,
                states: inst.algorithm.canonical_states().len(),
                closure: ex.len(),
                outcomes,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport {
        config: cfg.clone(),
        instances,
    })
}
