use std::path::PathBuf;
use std::process::{Command, Output};

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../specs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asmcheck"))
        .args(args)
        .env_remove("ASM_UNIVERSE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn old_be_on_the_example_fails_with_the_fresh_element_pair() {
    let path = spec("paper-example.spec");
    let out = run(&[
        "check",
        "old-be",
        "--witness",
        "T1",
        path.to_str().unwrap(),
        "--universe",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("verdict: fail"), "{text}");
    assert!(
        text.contains("Δ(X) = {(f,(),2)} ≠ {(f,(),3)} = Δ(Y)"),
        "{text}"
    );
}

#[test]
fn sequential_time_holds_on_the_example() {
    let out = run(&[
        "check",
        "sequential-time",
        spec("paper-example.spec").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn new_be_with_all_logical_constants_fails_requirement_i() {
    let path = spec("paper-example.spec");
    let out = run(&[
        "check",
        "new-be",
        "--witness",
        "Full",
        path.to_str().unwrap(),
        "--format",
        "lines",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("new-be (i)-accessibility fail"), "{text}");
    assert!(
        text.contains("new-be (ii)-similarity-transport pass"),
        "{text}"
    );
}

#[test]
fn equivalence_on_a_spec_checks_every_witness_set() {
    let path = spec("paper-example.spec");
    let out = run(&[
        "check",
        "equivalence",
        path.to_str().unwrap(),
        "--format",
        "lines",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out)
            .matches("equivalence verdicts-agree pass")
            .count(),
        2
    );
}

#[test]
fn rule_spec_passes_every_check() {
    let path = spec("swap.spec");
    for check in [
        "sequential-time",
        "abstract-state",
        "old-be",
        "new-be",
        "equivalence",
    ] {
        let out = run(&["check", check, path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{check}: {}", stdout(&out));
    }
}

#[test]
fn universe_comes_from_the_environment() {
    let path = spec("paper-example.spec");
    let out = Command::new(env!("CARGO_BIN_EXE_asmcheck"))
        .args(["check", "old-be", "--witness", "T1", path.to_str().unwrap()])
        .env("ASM_UNIVERSE", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("headroom"));
}

#[test]
fn small_suite_from_a_config_file() {
    let dir = std::env::temp_dir().join(format!("asmcheck-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("suite.toml");
    std::fs::write(&cfg, "instances = 6\nmax_carrier_size = 2\nseed = 3\n").unwrap();
    let out = run(&[
        "check",
        "equivalence",
        "--suite",
        cfg.to_str().unwrap(),
        "--format",
        "lines",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(
        text.lines()
            .filter(|l| l.starts_with("seed=3 instance="))
            .count(),
        6
    );
    assert!(text.contains("agreement: 6/6 instances"), "{text}");

    std::fs::write(&cfg, "instances = 0\n").unwrap();
    let out = run(&["check", "equivalence", "--suite", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    let out = run(&["check", "equivalence", "--suite", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn scenarios_pass_and_are_deterministic() {
    for args in [
        vec!["scenario", "remark"],
        vec!["scenario", "remark", "--variant", "only-a"],
        vec!["scenario", "remark", "--variant", "same-state"],
        vec!["scenario", "example"],
        vec!["scenario", "example", "--variant", "identity"],
    ] {
        let first = run(&args);
        assert_eq!(first.status.code(), Some(0), "{args:?}: {}", stdout(&first));
        assert_eq!(stdout(&first), stdout(&run(&args)));
    }
}

#[test]
fn remark_lines_show_the_violation_chain() {
    let out = run(&["scenario", "remark", "--format", "lines"]);
    let text = stdout(&out);
    assert!(text.contains("σ = {1↦1, 2↦3}"), "{text}");
    assert!(text.contains("σ(f_X(1)) = 3 ≠ 2 = f_Y(σ(1))"), "{text}");
}

#[test]
fn example_needs_headroom() {
    let out = run(&["scenario", "example", "--universe", "6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    let missing = spec("does-not-exist.spec");
    let remark = spec("paper-example.spec");
    for args in [
        vec!["check", "bogus"],
        vec!["frobnicate"],
        vec!["check", "old-be", missing.to_str().unwrap()],
        vec!["check", "old-be", remark.to_str().unwrap()],
        vec![
            "check",
            "old-be",
            "--witness",
            "Nope",
            remark.to_str().unwrap(),
        ],
        vec!["check", "old-be", "--suite", "default"],
        vec!["scenario", "remark", "--variant", "identity"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn parse_errors_are_positioned() {
    let dir = std::env::temp_dir().join(format!("asmcheck-parse-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.spec");
    std::fs::write(
        &bad,
        "vocabulary:\n  f/0\nstate X:\n  elements: a\n  f = a\ntransition:\n  true := f\n",
    )
    .unwrap();
    let out = run(&["check", "sequential-time", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("assignment to logical symbol"), "{err}");
    assert!(err.contains("line 7, column 3"), "{err}");
    std::fs::write(&bad, "").unwrap();
    let err =
        String::from_utf8_lossy(&run(&["check", "sequential-time", bad.to_str().unwrap()]).stderr)
            .into_owned();
    assert!(err.contains("missing vocabulary section"), "{err}");
    std::fs::remove_dir_all(&dir).ok();
}
