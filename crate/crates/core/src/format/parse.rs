use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::format::lexer::{lex_line, Cursor, Tok, Token};
use crate::format::{DocTransition, SpecDocument, KEYWORDS};
use crate::kernel::{ElementId, State, Term, Vocabulary, WitnessSet};
use crate::transition::Rule;

fn positioned(line: usize, column: usize, err: Error) -> Error {
    match err {
        e @ Error::Parse { .. } => e,
        other => Error::Parse {
            line,
            column,
            message: other.to_string(),
        },
    }
}

fn lex_snippet(text: &str) -> Result<Vec<Token>> {
    let mut toks = Vec::new();
    for (i, line) in text.lines().enumerate() {
        lex_line(strip_comment(line), i + 1, &mut toks)?;
    }
    Ok(toks)
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// Parses a single ground term such as `g(f,f)`.
pub fn parse_term(vocab: &Vocabulary, text: &str) -> Result<Term> {
    let toks = lex_snippet(text)?;
    let mut cur = Cursor::new(&toks, (1, text.len() + 1));
    let t = term(&mut cur, vocab)?;
    if !cur.at_end() {
        return cur.error("trailing input after term");
    }
    Ok(t)
}

/// Parses a rule program; several top-level rules form a parallel block.
pub fn parse_rule(vocab: &Vocabulary, text: &str) -> Result<Rule> {
    let toks = lex_snippet(text)?;
    let mut cur = Cursor::new(&toks, (text.lines().count().max(1), 1));
    program(&mut cur, vocab)
}

fn term(cur: &mut Cursor<'_>, vocab: &Vocabulary) -> Result<Term> {
    let (name, line, column) = cur.ident()?;
    let mut args = Vec::new();
    if cur.eat(&Tok::LParen) && !cur.eat(&Tok::RParen) {
        loop {
            args.push(term(cur, vocab)?);
            if cur.eat(&Tok::RParen) {
                break;
            }
            cur.expect(Tok::Comma)?;
        }
    }
    vocab
        .term(name, args)
        .map_err(|e| positioned(line, column, e))
}

fn program(cur: &mut Cursor<'_>, vocab: &Vocabulary) -> Result<Rule> {
    let mut rules = Vec::new();
    while !cur.at_end() {
        rules.push(rule(cur, vocab)?);
    }
    Ok(if rules.len() == 1 {
        rules.pop().expect("one rule")
    } else {
        Rule::Par(rules)
    })
}

fn rule(cur: &mut Cursor<'_>, vocab: &Vocabulary) -> Result<Rule> {
    if cur.eat_keyword("par") {
        let mut rules = Vec::new();
        while !cur.eat_keyword("endpar") {
            if cur.at_end() {
                return cur.error("missing `endpar`");
            }
            rules.push(rule(cur, vocab)?);
        }
        return Ok(Rule::Par(rules));
    }
    if cur.eat_keyword("if") {
        let guard = term(cur, vocab)?;
        if !cur.eat_keyword("then") {
            return cur.error("expected `then`");
        }
        let then = rule(cur, vocab)?;
        let otherwise = if cur.eat_keyword("else") {
            rule(cur, vocab)?
        } else {
            Rule::skip()
        };
        if !cur.eat_keyword("endif") {
            return cur.error("expected `endif`");
        }
        return Ok(Rule::cond(guard, then, otherwise));
    }
    let (line, column) = cur.here();
    let lhs = term(cur, vocab)?;
    if lhs.symbol().is_logical() {
        let name = vocab.name(lhs.symbol()).to_string();
        return Err(positioned(line, column, Error::AssignToLogical(name)));
    }
    cur.expect(Tok::Assign)?;
    let rhs = term(cur, vocab)?;
    Rule::assign(vocab, lhs.symbol(), lhs.args().to_vec(), rhs)
        .map_err(|e| positioned(line, column, e))
}

enum SectionKind {
    Vocabulary,
    State(String),
    Transition,
    Initial,
    Witness(String),
}

struct Section {
    kind: SectionKind,
    line: usize,
    toks: Vec<Token>,
    /// Token lists per non-empty source line, for line-oriented sections.
    lines: Vec<Vec<Token>>,
}

fn header(text: &str) -> Option<SectionKind> {
    let t = text.trim();
    let body = t.strip_suffix(':')?;
    let mut words = body.split_whitespace();
    let first = words.next()?;
    let second = words.next();
    if words.next().is_some() {
        return None;
    }
    match (first, second) {
        ("vocabulary", None) => Some(SectionKind::Vocabulary),
        ("transition", None) => Some(SectionKind::Transition),
        ("initial", None) => Some(SectionKind::Initial),
        ("state", Some(name)) => Some(SectionKind::State(name.to_string())),
        ("witness", Some(name)) => Some(SectionKind::Witness(name.to_string())),
        _ => None,
    }
}

fn split_sections(text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = strip_comment(raw);
        if content.trim().is_empty() {
            continue;
        }
        if let Some(kind) = header(content) {
            sections.push(Section {
                kind,
                line,
                toks: Vec::new(),
                lines: Vec::new(),
            });
            continue;
        }
        let Some(section) = sections.last_mut() else {
            let column = content.len() - content.trim_start().len() + 1;
            return Err(Error::Parse {
                line,
                column,
                message: "content before the first section header".into(),
            });
        };
        let mut toks = Vec::new();
        lex_line(content, line, &mut toks)?;
        section.toks.extend(toks.iter().cloned());
        section.lines.push(toks);
    }
    Ok(sections)
}

fn check_name(name: &str, line: usize, column: usize) -> Result<()> {
    if KEYWORDS.contains(&name) {
        return Err(Error::Parse {
            line,
            column,
            message: format!("`{name}` is a keyword"),
        });
    }
    Ok(())
}

pub(crate) fn parse_document(text: &str) -> Result<SpecDocument> {
    let sections = split_sections(text)?;

    let vocab_sections: Vec<&Section> = sections
        .iter()
        .filter(|s| matches!(s.kind, SectionKind::Vocabulary))
        .collect();
    let vocab_section = match vocab_sections.as_slice() {
        [] => {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "missing vocabulary section".into(),
            })
        }
        [one] => *one,
        [_, second, ..] => {
            return Err(Error::Parse {
                line: second.line,
                column: 1,
                message: "duplicate vocabulary section".into(),
            })
        }
    };
    let vocab = Arc::new(parse_vocabulary(vocab_section)?);

    // Element labels are global across the document, numbered by first
    // appearance in an `elements:` line.
    let mut element_names: Vec<String> = Vec::new();
    let mut element_ids: HashMap<String, ElementId> = HashMap::new();
    let mut states: Vec<(String, State)> = Vec::new();
    let mut state_lines: HashMap<String, usize> = HashMap::new();
    let mut transition: Option<(usize, DocTransition)> = None;
    let mut initial: Option<Vec<String>> = None;
    let mut witnesses: Vec<(String, WitnessSet)> = Vec::new();
    let mut initial_pos: Vec<(String, usize, usize)> = Vec::new();

    for section in &sections {
        match &section.kind {
            SectionKind::Vocabulary => {}
            SectionKind::State(name) => {
                check_name(name, section.line, 1)?;
                if state_lines.insert(name.clone(), section.line).is_some() {
                    return Err(Error::Parse {
                        line: section.line,
                        column: 1,
                        message: format!("duplicate state `{name}`"),
                    });
                }
                let state = parse_state(section, &vocab, &mut element_names, &mut element_ids)?;
                states.push((name.clone(), state));
            }
            SectionKind::Transition => {
                if transition.is_some() {
                    return Err(Error::Parse {
                        line: section.line,
                        column: 1,
                        message: "duplicate transition section".into(),
                    });
                }
                transition = Some((section.line, parse_transition(section, &vocab)?));
            }
            SectionKind::Initial => {
                if initial.is_some() {
                    return Err(Error::Parse {
                        line: section.line,
                        column: 1,
                        message: "duplicate initial section".into(),
                    });
                }
                let mut cur = Cursor::new(&section.toks, (section.line, 1));
                let mut names = Vec::new();
                while !cur.at_end() {
                    let (n, line, column) = cur.ident()?;
                    initial_pos.push((n.to_string(), line, column));
                    names.push(n.to_string());
                }
                initial = Some(names);
            }
            SectionKind::Witness(name) => {
                check_name(name, section.line, 1)?;
                if witnesses.iter().any(|(n, _)| n == name) {
                    return Err(Error::Parse {
                        line: section.line,
                        column: 1,
                        message: format!("duplicate witness `{name}`"),
                    });
                }
                let mut cur = Cursor::new(&section.toks, (section.line, 1));
                let mut set = WitnessSet::new();
                while !cur.at_end() {
                    set.insert(term(&mut cur, &vocab)?);
                    cur.eat(&Tok::Comma);
                }
                witnesses.push((name.clone(), set));
            }
        }
    }

    let Some((transition_line, transition)) = transition else {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            column: 1,
            message: "missing transition section".into(),
        });
    };

    for (name, line, column) in &initial_pos {
        if !state_lines.contains_key(name) {
            return Err(Error::Parse {
                line: *line,
                column: *column,
                message: format!("unknown state `{name}`"),
            });
        }
    }

    if let DocTransition::Explicit(pairs) = &transition {
        let index: HashMap<&str, &State> = states.iter().map(|(n, s)| (n.as_str(), s)).collect();
        let mut sources = BTreeSet::new();
        for (from, to) in pairs {
            let err = |message: String| Error::Parse {
                line: transition_line,
                column: 1,
                message,
            };
            let src = index
                .get(from.as_str())
                .ok_or_else(|| err(format!("unknown state `{from}`")))?;
            let dst = index
                .get(to.as_str())
                .ok_or_else(|| err(format!("unknown state `{to}`")))?;
            if !sources.insert(from.as_str()) {
                return Err(err(format!("state `{from}` has two successors")));
            }
            if !src.same_base_set(dst) {
                return Err(err(format!(
                    "base-set violation: `{to}` does not have the base set of `{from}`"
                )));
            }
        }
        if let Some((missing, _)) = states.iter().find(|(n, _)| !sources.contains(n.as_str())) {
            return Err(Error::Parse {
                line: transition_line,
                column: 1,
                message: format!("state `{missing}` has no successor"),
            });
        }
    }

    Ok(SpecDocument {
        vocabulary: vocab,
        element_names,
        states,
        transition,
        initial: initial.unwrap_or_default(),
        witnesses,
    })
}

fn parse_vocabulary(section: &Section) -> Result<Vocabulary> {
    let mut vocab = Vocabulary::new();
    let mut cur = Cursor::new(&section.toks, (section.line, 1));
    while !cur.at_end() {
        let (name, line, column) = cur.ident()?;
        check_name(name, line, column)?;
        if !name.starts_with(|c: char| c.is_alphabetic() || c == '_') {
            return Err(Error::Parse {
                line,
                column,
                message: format!("symbol name `{name}` must start with a letter"),
            });
        }
        cur.expect(Tok::Slash)?;
        let (arity, aline, acol) = cur.ident()?;
        let arity: usize = arity.parse().map_err(|_| Error::Parse {
            line: aline,
            column: acol,
            message: format!("arity `{arity}` is not a number"),
        })?;
        vocab
            .add(name, arity)
            .map_err(|e| positioned(line, column, e))?;
    }
    Ok(vocab)
}

fn element(
    name: &str,
    line: usize,
    column: usize,
    bound: &HashMap<String, ElementId>,
) -> Result<ElementId> {
    match name {
        "TRUE" => Ok(ElementId::TRUE),
        "FALSE" => Ok(ElementId::FALSE),
        "UNDEF" => Ok(ElementId::UNDEF),
        _ => bound.get(name).copied().ok_or_else(|| Error::Parse {
            line,
            column,
            message: format!("element `{name}` is not in this state's elements"),
        }),
    }
}

fn parse_state(
    section: &Section,
    vocab: &Arc<Vocabulary>,
    element_names: &mut Vec<String>,
    element_ids: &mut HashMap<String, ElementId>,
) -> Result<State> {
    let mut bound: HashMap<String, ElementId> = HashMap::new();
    let mut state: Option<State> = None;
    for toks in &section.lines {
        let first = &toks[0];
        let mut cur = Cursor::new(toks, (first.line, 1));
        if matches!(&first.tok, Tok::Ident(s) if s == "elements")
            && toks.get(1).map(|t| &t.tok) == Some(&Tok::Colon)
        {
            if state.is_some() {
                return cur.error("duplicate `elements:` line");
            }
            cur.next();
            cur.next();
            while !cur.at_end() {
                let (name, line, column) = cur.ident()?;
                if matches!(name, "TRUE" | "FALSE" | "UNDEF") {
                    return Err(Error::Parse {
                        line,
                        column,
                        message: format!("`{name}` is a logical element"),
                    });
                }
                let next_id = ElementId(3 + element_names.len() as u32);
                let id = *element_ids.entry(name.to_string()).or_insert_with(|| {
                    element_names.push(name.to_string());
                    next_id
                });
                if bound.insert(name.to_string(), id).is_some() {
                    return Err(Error::Parse {
                        line,
                        column,
                        message: format!("element `{name}` listed twice"),
                    });
                }
            }
            state = Some(State::new(vocab.clone(), bound.values().copied()));
            continue;
        }
        let Some(st) = state.as_mut() else {
            return cur.error("state entries must follow an `elements:` line");
        };
        let (name, line, column) = cur.ident()?;
        let mut args = Vec::new();
        if cur.eat(&Tok::LParen) && !cur.eat(&Tok::RParen) {
            loop {
                let (a, l, c) = cur.ident()?;
                args.push(element(a, l, c, &bound)?);
                if cur.eat(&Tok::RParen) {
                    break;
                }
                cur.expect(Tok::Comma)?;
            }
        }
        cur.expect(Tok::Equals)?;
        let (v, vl, vc) = cur.ident()?;
        let value = element(v, vl, vc, &bound)?;
        if !cur.at_end() {
            return cur.error("trailing input after state entry");
        }
        let sym = vocab
            .resolve(name)
            .map_err(|e| positioned(line, column, e))?;
        if st.table(sym).contains_key(&args) && !sym.is_logical() {
            return Err(Error::Parse {
                line,
                column,
                message: format!("location `{name}` assigned twice"),
            });
        }
        st.set(sym, args, value)
            .map_err(|e| positioned(line, column, e))?;
    }
    Ok(state.unwrap_or_else(|| State::new(vocab.clone(), [])))
}

fn parse_transition(section: &Section, vocab: &Vocabulary) -> Result<DocTransition> {
    let explicit =
        matches!(section.toks.first(), Some(Token { tok: Tok::Ident(s), .. }) if s == "state");
    let mut cur = Cursor::new(&section.toks, (section.line, 1));
    if !explicit {
        return Ok(DocTransition::Rules(program(&mut cur, vocab)?));
    }
    let mut pairs = Vec::new();
    while !cur.at_end() {
        if !cur.eat_keyword("state") {
            return cur.error("expected `state <name> -> <name>`");
        }
        let (from, _, _) = cur.ident()?;
        cur.expect(Tok::Arrow)?;
        let (to, _, _) = cur.ident()?;
        pairs.push((from.to_string(), to.to_string()));
    }
    Ok(DocTransition::Explicit(pairs))
}
