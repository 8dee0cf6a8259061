//! `asmcheck`: checks the sequential-algorithm postulates on spec files and
//! runs the built-in scenarios.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use asm_core::format::{parse_spec, SpecDocument};
use asm_core::harness::{run_suite, verify_equivalence, GeneratorConfig};
use asm_core::postulates::{
    check_abstract_state, check_new_be, check_old_be, check_sequential_time,
};
use asm_core::scenarios::{
    run_scenario_example_variant, run_scenario_remark_variant, RemarkVariant,
};
use asm_core::{Algorithm, CheckReport, Universe, WitnessSet};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "asmcheck",
    version,
    about = "Executable checks of the sequential-algorithm postulates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a postulate on a spec file.
    Check(CheckArgs),
    /// Run a built-in scenario.
    Scenario(ScenarioArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Postulate {
    SequentialTime,
    AbstractState,
    OldBe,
    NewBe,
    Equivalence,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Lines,
}

#[derive(clap::Args)]
struct CheckArgs {
    postulate: Postulate,
    /// Spec file; not needed with `--suite`.
    spec: Option<PathBuf>,
    /// Name of a witness set declared in the spec.
    #[arg(long)]
    witness: Option<String>,
    /// Universe size; defaults to twice the largest carrier plus the
    /// logical elements.
    #[arg(long, env = "ASM_UNIVERSE")]
    universe: Option<usize>,
    /// Generated suite for `equivalence`: `default` or a TOML file of
    /// generator bounds.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scenario {
    Remark,
    Example,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    /// `T = {a}` in the remark.
    OnlyA,
    /// `Y` replaced by `X` in the remark.
    SameState,
    /// The example with an identity transition.
    Identity,
}

#[derive(clap::Args)]
struct ScenarioArgs {
    scenario: Scenario,
    #[arg(long, value_enum)]
    variant: Option<Variant>,
    #[arg(long, env = "ASM_UNIVERSE", default_value_t = 7)]
    universe: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn print(lines: Vec<String>, text: String, format: Format) {
    match format {
        Format::Lines => lines.iter().for_each(|l| println!("{l}")),
        Format::Text => print!("{text}"),
    }
}

fn print_report(report: &CheckReport, format: Format) {
    print(report.lines(), report.to_string(), format);
}

fn load(path: &Path) -> anyhow::Result<(SpecDocument, Algorithm)> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let doc = parse_spec(&text).with_context(|| format!("{}", path.display()))?;
    let algorithm = doc
        .to_algorithm()
        .with_context(|| format!("{}", path.display()))?;
    Ok((doc, algorithm))
}

fn universe(requested: Option<usize>, algorithm: &Algorithm) -> anyhow::Result<Universe> {
    match requested {
        Some(n) => Ok(Universe::new(n)?),
        None => Ok(Universe::with_headroom(algorithm.max_carrier())),
    }
}

/// The witness sets to check: the named one, or the only one declared.
fn witnesses<'d>(
    doc: &'d SpecDocument,
    name: Option<&'d str>,
    all: bool,
) -> anyhow::Result<Vec<(&'d str, &'d WitnessSet)>> {
    match name {
        Some(n) => {
            let w = doc.witness(n).ok_or_else(|| {
                let known: Vec<&str> = doc.witness_names().collect();
                anyhow!("unknown witness set `{n}` (declared: {})", known.join(", "))
            })?;
            Ok(vec![(n, w)])
        }
        None if all || doc.witnesses.len() == 1 => {
            if doc.witnesses.is_empty() {
                bail!("the spec declares no witness set");
            }
            Ok(doc.witnesses.iter().map(|(n, w)| (n.as_str(), w)).collect())
        }
        None => bail!("--witness is required when the spec declares several witness sets"),
    }
}

fn element_legend(doc: &SpecDocument) -> String {
    let names: Vec<String> = doc
        .element_names
        .iter()
        .enumerate()
        .map(|(i, n)| format!("{}={n}", i + 1))
        .collect();
    format!("elements: {}\n", names.join(" "))
}

fn suite_config(arg: &str) -> anyhow::Result<GeneratorConfig> {
    if arg == "default" {
        return Ok(GeneratorConfig::default());
    }
    let text =
        std::fs::read_to_string(arg).with_context(|| format!("cannot read suite config {arg}"))?;
    let cfg: GeneratorConfig =
        toml::from_str(&text).with_context(|| format!("invalid suite config {arg}"))?;
    cfg.validate()?;
    Ok(cfg)
}

fn check(args: CheckArgs) -> anyhow::Result<u8> {
    if let Some(suite) = &args.suite {
        if args.postulate != Postulate::Equivalence {
            bail!("--suite applies to `check equivalence` only");
        }
        if args.spec.is_some() {
            bail!("give either a spec file or --suite, not both");
        }
        let report = run_suite(&suite_config(suite)?)?;
        let summary = format!(
            "agreement: {}/{} instances",
            report.agreements(),
            report.instances.len()
        );
        let mut lines = report.lines();
        lines.push(summary);
        print(lines, format!("{report}\n"), args.format);
        return Ok(report.exit_code() as u8);
    }
    let path = args
        .spec
        .as_deref()
        .ok_or_else(|| anyhow!("missing spec file"))?;
    let (doc, algorithm) = load(path)?;
    if args.format == Format::Text {
        print!("{}", element_legend(&doc));
    }
    let reports: Vec<CheckReport> = match args.postulate {
        Postulate::SequentialTime => vec![check_sequential_time(&algorithm)],
        Postulate::AbstractState => vec![check_abstract_state(
            &algorithm,
            universe(args.universe, &algorithm)?,
        )?],
        Postulate::OldBe | Postulate::NewBe | Postulate::Equivalence => {
            let u = universe(args.universe, &algorithm)?;
            let all = args.postulate == Postulate::Equivalence;
            let mut out = Vec::new();
            for (name, terms) in witnesses(&doc, args.witness.as_deref(), all)? {
                let report = match args.postulate {
                    Postulate::OldBe => check_old_be(&algorithm, terms, u),
                    Postulate::NewBe => check_new_be(&algorithm, terms, u),
                    _ => verify_equivalence(&algorithm, terms, u).map(|e| e.report),
                }
                .with_context(|| format!("witness set `{name}`"))?;
                out.push(report.note(format!(
                    "witness set {name} = {}",
                    terms.display(&doc.vocabulary)
                )));
            }
            out
        }
    };
    for r in &reports {
        print_report(r, args.format);
    }
    Ok(reports.iter().map(|r| r.exit_code()).max().unwrap_or(0) as u8)
}

fn scenario(args: ScenarioArgs) -> anyhow::Result<u8> {
    let report = match (args.scenario, args.variant) {
        (Scenario::Remark, None) => run_scenario_remark_variant(RemarkVariant::Original),
        (Scenario::Remark, Some(Variant::OnlyA)) => {
            run_scenario_remark_variant(RemarkVariant::OnlyA)
        }
        (Scenario::Remark, Some(Variant::SameState)) => {
            run_scenario_remark_variant(RemarkVariant::SameState)
        }
        (Scenario::Example, None) => run_scenario_example_variant(args.universe, false)?,
        (Scenario::Example, Some(Variant::Identity)) => {
            run_scenario_example_variant(args.universe, true)?
        }
        (Scenario::Remark, Some(Variant::Identity)) => {
            bail!("variant `identity` belongs to the example scenario")
        }
        (Scenario::Example, Some(_)) => {
            bail!("the example scenario only has the `identity` variant")
        }
    };
    print(report.lines(), report.to_string(), args.format);
    Ok(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(args) => check(args),
        Command::Scenario(args) => scenario(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
