use std::fmt::Write;

use crate::format::{DocTransition, SpecDocument};
use crate::kernel::{ElementId, State, Vocabulary};
use crate::transition::Rule;

fn indent(depth: usize) -> String {
    "  ".repeat(depth)
}

fn write_rule(out: &mut String, vocab: &Vocabulary, rule: &Rule, depth: usize) {
    let pad = indent(depth);
    match rule {
        Rule::Assign { symbol, args, rhs } => {
            out.push_str(&pad);
            out.push_str(vocab.name(*symbol));
            if !args.is_empty() {
                let args: Vec<String> = args.iter().map(|a| a.display(vocab).to_string()).collect();
                let _ = write!(out, "({})", args.join(","));
            }
            let _ = writeln!(out, " := {}", rhs.display(vocab));
        }
        Rule::Par(rules) if rules.is_empty() => {
            let _ = writeln!(out, "{pad}par endpar");
        }
        Rule::Par(rules) => {
            let _ = writeln!(out, "{pad}par");
            for r in rules {
                write_rule(out, vocab, r, depth + 1);
            }
            let _ = writeln!(out, "{pad}endpar");
        }
        Rule::If {
            guard,
            then,
            otherwise,
        } => {
            let _ = writeln!(out, "{pad}if {} then", guard.display(vocab));
            write_rule(out, vocab, then, depth + 1);
            if **otherwise != Rule::skip() {
                let _ = writeln!(out, "{pad}else");
                write_rule(out, vocab, otherwise, depth + 1);
            }
            let _ = writeln!(out, "{pad}endif");
        }
    }
}

/// Prints a rule program, one construct per line, in the form
/// [`parse_rule`](crate::format::parse_rule) reads back.
pub fn print_rule(vocab: &Vocabulary, rule: &Rule) -> String {
    let mut out = String::new();
    match rule {
        // A top-level block of two or more rules is written unwrapped.
        Rule::Par(rules) if rules.len() >= 2 => {
            for r in rules {
                write_rule(&mut out, vocab, r, 0);
            }
        }
        _ => write_rule(&mut out, vocab, rule, 0),
    }
    out
}

/// Prints the body of a state section using `name` for element labels.
pub fn print_state(state: &State, name: impl Fn(ElementId) -> String) -> String {
    let vocab = state.vocabulary();
    let mut out = String::from("elements:");
    for &e in state.nonlogical_elements() {
        let _ = write!(out, " {}", name(e));
    }
    out.push('\n');
    for (sym, args, value) in state.entries() {
        out.push_str(vocab.name(sym));
        if !args.is_empty() {
            let args: Vec<String> = args.iter().map(|&a| name(a)).collect();
            let _ = write!(out, "({})", args.join(","));
        }
        let _ = writeln!(out, " = {}", name(value));
    }
    out
}

fn indented(out: &mut String, body: &str) {
    for line in body.lines() {
        let _ = writeln!(out, "  {line}");
    }
}

pub(crate) fn print_document(doc: &SpecDocument) -> String {
    let vocab = &doc.vocabulary;
    let mut out = String::from("vocabulary:\n");
    let decls: Vec<String> = vocab
        .nonlogical()
        .map(|s| format!("{}/{}", vocab.name(s), vocab.arity(s)))
        .collect();
    if !decls.is_empty() {
        let _ = writeln!(out, "  {}", decls.join(" "));
    }
    for (name, state) in &doc.states {
        let _ = writeln!(out, "state {name}:");
        indented(&mut out, &print_state(state, |e| doc.element_name(e)));
    }
    out.push_str("transition:\n");
    match &doc.transition {
        DocTransition::Rules(rule) => indented(&mut out, &print_rule(vocab, rule)),
        DocTransition::Explicit(pairs) => {
            for (from, to) in pairs {
                let _ = writeln!(out, "  state {from} -> {to}");
            }
        }
    }
    if !doc.initial.is_empty() {
        let _ = writeln!(out, "initial:\n  {}", doc.initial.join(" "));
    }
    for (name, set) in &doc.witnesses {
        let _ = writeln!(out, "witness {name}:");
        for t in set {
            let _ = writeln!(out, "  {}", t.display(vocab));
        }
    }
    out
}
