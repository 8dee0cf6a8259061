//! Acceptance criteria, one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use asm_core::harness::{
    generate_algorithm_suite, generate_similar_pairs, run_suite, GeneratorConfig, SuiteInstance,
};
use asm_core::postulates::{check_abstract_state, witness_monotonicity_check, Explorer};
use asm_core::scenarios::{run_scenario_example, run_scenario_remark};
use asm_core::similarity::check_lemma_identity;
use asm_core::WitnessSet;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn timed(limit: Duration, run: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = run();
    let took = start.elapsed();
    if took > limit {
        out.ok = false;
    }
    out.detail = format!("{} ({:.2?}, limit {:?})", out.detail, took, limit);
    out
}

fn remark() -> Outcome {
    let report = run_scenario_remark();
    let detail = report
        .assertions
        .iter()
        .find(|a| a.name == "partial-isomorphism-fails")
        .map_or_else(
            || "no partial-isomorphism assertion".to_string(),
            |a| a.detail.clone(),
        );
    outcome(report.passed(), detail)
}

fn example() -> Outcome {
    match run_scenario_example(7) {
        Ok(report) => {
            let failed: Vec<&str> = report
                .assertions
                .iter()
                .filter(|a| !a.holds)
                .map(|a| a.name.as_str())
                .collect();
            outcome(
                report.passed(),
                format!(
                    "{} assertions over 16 witness sets, failed: {:?}",
                    report.assertions.len(),
                    failed
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn lemma() -> Outcome {
    let pairs = match generate_similar_pairs(&GeneratorConfig::default(), 1000) {
        Ok(p) => p,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut failures = 0;
    let mut distinct = 0;
    for (x, y, terms) in &pairs {
        if x != y {
            distinct += 1;
        }
        if !check_lemma_identity(x, y, terms).is_ok_and(|r| r.passed()) {
            failures += 1;
        }
    }
    outcome(
        failures == 0 && pairs.len() == 1000,
        format!(
            "{} pairs ({distinct} with X ≠ Y), {failures} failure(s)",
            pairs.len()
        ),
    )
}

fn theorem() -> Outcome {
    match run_suite(&GeneratorConfig::default()) {
        Ok(report) => {
            let replayed: usize = report
                .instances
                .iter()
                .flat_map(|r| &r.outcomes)
                .filter_map(|o| o.replay.as_ref())
                .map(|s| s.case1 + s.case2 + s.coincide)
                .sum();
            outcome(
                report.passed() && report.instances.len() == 100,
                format!(
                    "{}/{} instances agree, {} witness sets replayed, {replayed} confirmed transports",
                    report.agreements(),
                    report.instances.len(),
                    report.replayed()
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn naturality(suite: &[SuiteInstance], cfg: &GeneratorConfig) -> Outcome {
    let mut violations = 0;
    for inst in suite {
        if !check_abstract_state(&inst.algorithm, cfg.universe()).is_ok_and(|r| r.passed()) {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("{} instances, {violations} violation(s)", suite.len()),
    )
}

fn monotonicity(suite: &[SuiteInstance], cfg: &GeneratorConfig) -> Outcome {
    let mut checked = 0;
    let mut violations = 0;
    for inst in suite {
        if checked == 50 {
            break;
        }
        let ex = match Explorer::new(&inst.algorithm, cfg.universe()) {
            Ok(ex) => ex,
            Err(_) => continue,
        };
        // The smallest candidate that passes either postulate, enlarged by
        // every other candidate.
        let passing = inst.witnesses.iter().find(|t| {
            asm_core::postulates::old_be(&ex, t).is_ok_and(|r| r.passed())
                || asm_core::postulates::new_be(&ex, t).is_ok_and(|r| r.passed())
        });
        let Some(small) = passing else { continue };
        let large = inst
            .witnesses
            .iter()
            .fold(small.clone(), |acc: WitnessSet, w| acc.union(w));
        checked += 1;
        match witness_monotonicity_check(&inst.algorithm, small, &large, cfg.universe()) {
            Ok(r) if r.passed() => {}
            _ => violations += 1,
        }
    }
    outcome(
        checked == 50 && violations == 0,
        format!("{checked} instances, {violations} violation(s)"),
    )
}

fn cross_validation(suite: &[SuiteInstance], cfg: &GeneratorConfig) -> Outcome {
    let mut instances = 0;
    let mut states = 0;
    let mut discrepancies = 0;
    for inst in suite.iter().filter(|i| i.algorithm.rule().is_some()) {
        instances += 1;
        let ex = match Explorer::new(&inst.algorithm, cfg.universe()) {
            Ok(ex) => ex,
            Err(_) => {
                discrepancies += 1;
                continue;
            }
        };
        for (i, s) in ex.states().iter().enumerate() {
            states += 1;
            let from_rule = inst.algorithm.rule_update_set(s).expect("rule-based");
            match (from_rule, ex.delta(i)) {
                (Ok(r), Ok(d)) if r == *d => {}
                _ => discrepancies += 1,
            }
        }
    }
    outcome(
        instances > 0 && discrepancies == 0,
        format!("{instances} rule-based instances, {states} states, {discrepancies} discrepancies"),
    )
}

fn main() -> ExitCode {
    let cfg = GeneratorConfig::default();
    let suite = generate_algorithm_suite(&cfg).expect("default suite");
    let criteria: Vec<(&str, Outcome)> = vec![
        (
            "1 remark reproduction",
            timed(Duration::from_secs(1), remark),
        ),
        (
            "2 example reproduction",
            timed(Duration::from_secs(5), example),
        ),
        ("3 lemma property", timed(Duration::from_secs(60), lemma)),
        (
            "4 theorem at desk scale",
            timed(Duration::from_secs(300), theorem),
        ),
        ("5 naturality", naturality(&suite, &cfg)),
        ("6 witness monotonicity", monotonicity(&suite, &cfg)),
        (
            "7 cross-validation of update sets",
            cross_validation(&suite, &cfg),
        ),
    ];
    let mut all = true;
    for (name, out) in &criteria {
        all &= out.ok;
        println!(
            "{} criterion {name}: {}",
            if out.ok { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
