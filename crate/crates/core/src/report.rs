//! Check verdicts and counterexample witnesses.

use std::fmt;

use crate::kernel::{ElementId, Renaming, State};
use crate::similarity::SimilarityFunction;
use crate::transition::{Update, UpdateSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

/// A concrete, re-checkable counterexample.
#[derive(Debug, Clone)]
pub enum Witness {
    EmptyStateSet,
    NoInitialState,
    StepFailed {
        state: State,
        error: String,
    },
    SuccessorOutsideFamily {
        state: State,
        successor: State,
    },
    BaseSetChanged {
        state: State,
        successor: State,
    },
    /// `τ(r(X)) ≠ r(τ(X))`.
    NotNatural {
        state: State,
        renaming: Renaming,
        expected: State,
        actual: String,
    },
    /// `X` and `Y` coincide over the witness set but have different update sets.
    UpdateSetsDiffer {
        x: State,
        y: State,
        delta_x: UpdateSet,
        delta_y: UpdateSet,
    },
    InaccessibleUpdate {
        state: State,
        update: Update,
    },
    /// `u ∈ Δ(X)` and `σ(u) ∈ Δ(Y)` disagree for a T-similar pair.
    TransportFailure {
        x: State,
        y: State,
        sigma: SimilarityFunction,
        update: Update,
        lifted: Update,
        in_x: bool,
        in_y: bool,
    },
    LemmaViolation {
        term: String,
        lhs: ElementId,
        rhs: ElementId,
    },
    /// `σ(f_X(args)) = lhs` but `f_Y(σ(args)) = rhs`.
    PartialIsomorphismViolation {
        symbol: String,
        args: Vec<ElementId>,
        lhs: ElementId,
        rhs: ElementId,
    },
    Monotonicity {
        postulate: String,
        smaller: String,
        larger: String,
    },
    Disagreement {
        old_be: Verdict,
        new_be: Verdict,
    },
    ReplayRefuted {
        x: State,
        y: State,
        update: Update,
        route: String,
        reason: String,
    },
}

fn tuple(args: &[ElementId]) -> String {
    let v: Vec<String> = args.iter().map(|a| a.to_string()).collect();
    format!("({})", v.join(","))
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::EmptyStateSet => f.write_str("empty state set"),
            Witness::NoInitialState => f.write_str("no initial state"),
            Witness::StepFailed { state, error } => write!(f, "step undefined at {state}: {error}"),
            Witness::SuccessorOutsideFamily { state, successor } => {
                write!(
                    f,
                    "successor {successor} of {state} is not in the state family"
                )
            }
            Witness::BaseSetChanged { state, successor } => {
                write!(
                    f,
                    "successor {successor} of {state} has a different base set"
                )
            }
            Witness::NotNatural {
                state,
                renaming,
                expected,
                actual,
            } => write!(
                f,
                "renaming {renaming} of {state}: expected successor {expected}, got {actual}"
            ),
            Witness::UpdateSetsDiffer {
                x,
                y,
                delta_x,
                delta_y,
            } => {
                let v = x.vocabulary();
                write!(
                    f,
                    "X = {x} and Y = {y} coincide but Δ(X) = {} ≠ {} = Δ(Y)",
                    delta_x.display(v),
                    delta_y.display(v)
                )
            }
            Witness::InaccessibleUpdate { state, update } => write!(
                f,
                "update {} of {state} is not accessible",
                update.display(state.vocabulary())
            ),
            Witness::TransportFailure {
                x,
                y,
                sigma,
                update,
                lifted,
                in_x,
                in_y,
            } => {
                let v = x.vocabulary();
                write!(
                    f,
                    "X = {x}, Y = {y}, σ = {sigma}: u = {} {} Δ(X) but σ(u) = {} {} Δ(Y)",
                    update.display(v),
                    if *in_x { "∈" } else { "∉" },
                    lifted.display(v),
                    if *in_y { "∈" } else { "∉" },
                )
            }
            Witness::LemmaViolation { term, lhs, rhs } => {
                write!(f, "term {term}: σ(f_X(x̄)) = {lhs} ≠ {rhs} = f_Y(σ(x̄))")
            }
            Witness::PartialIsomorphismViolation {
                symbol,
                args,
                lhs,
                rhs,
            } => {
                let sigma_args: String = tuple(args);
                write!(
                    f,
                    "{symbol} at {}: σ({symbol}_X{}) = {lhs} ≠ {rhs} = {symbol}_Y(σ{})",
                    sigma_args, sigma_args, sigma_args
                )
            }
            Witness::Monotonicity {
                postulate,
                smaller,
                larger,
            } => write!(
                f,
                "{postulate} holds for {smaller} but not for its superset {larger}"
            ),
            Witness::Disagreement { old_be, new_be } => {
                write!(f, "original BE {old_be}, new BE {new_be}")
            }
            Witness::ReplayRefuted {
                x,
                y,
                update,
                route,
                reason,
            } => write!(
                f,
                "{route} replay for X = {x}, Y = {y}, u = {}: {reason}",
                update.display(x.vocabulary())
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Requirement {
    pub name: String,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

impl Requirement {
    pub fn pass(name: &str) -> Requirement {
        Requirement {
            name: name.to_string(),
            verdict: Verdict::Pass,
            witness: None,
        }
    }

    pub fn fail(name: &str, witness: Witness) -> Requirement {
        Requirement {
            name: name.to_string(),
            verdict: Verdict::Fail,
            witness: Some(witness),
        }
    }

    pub fn from_witness(name: &str, witness: Option<Witness>) -> Requirement {
        match witness {
            Some(w) => Requirement::fail(name, w),
            None => Requirement::pass(name),
        }
    }
}

/// Outcome of one checker: a list of named requirements, each with its own
/// verdict. A failed requirement always carries a witness.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub check: String,
    pub requirements: Vec<Requirement>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(check: &str) -> CheckReport {
        CheckReport {
            check: check.to_string(),
            requirements: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with(mut self, req: Requirement) -> CheckReport {
        self.requirements.push(req);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> CheckReport {
        self.notes.push(note.into());
        self
    }

    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.requirements.iter().all(|r| r.verdict.is_pass()))
    }

    pub fn passed(&self) -> bool {
        self.verdict().is_pass()
    }

    pub fn requirement(&self, name: &str) -> Option<&Requirement> {
        self.requirements.iter().find(|r| r.name == name)
    }

    /// First witness of a failed requirement.
    pub fn witness(&self) -> Option<&Witness> {
        self.requirements.iter().find_map(|r| r.witness.as_ref())
    }

    /// Exit-code convention: 0 pass, 1 fail.
    pub fn exit_code(&self) -> i32 {
        match self.verdict() {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
        }
    }

    /// Machine-readable form, one assertion per line.
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!("{} verdict {}", self.check, self.verdict())];
        for r in &self.requirements {
            let mut line = format!("{} {} {}", self.check, r.name, r.verdict);
            if let Some(w) = &r.witness {
                line.push_str(&format!(" witness: {w}"));
            }
            out.push(line);
        }
        out
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check: {}", self.check)?;
        writeln!(f, "verdict: {}", self.verdict())?;
        for r in &self.requirements {
            writeln!(f, "requirement {}: {}", r.name, r.verdict)?;
            if let Some(w) = &r.witness {
                writeln!(f, "  witness: {w}")?;
            }
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}
