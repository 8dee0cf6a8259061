use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Slash,
    Colon,
    Assign,
    Equals,
    Arrow,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Arrow => "`->`".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Tokenizes one source line (comments already stripped).
pub(crate) fn lex_line(text: &str, line: usize, out: &mut Vec<Token>) -> Result<()> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line, column });
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                push(out, Tok::LParen);
                i += 1;
            }
            ')' => {
                push(out, Tok::RParen);
                i += 1;
            }
            ',' => {
                push(out, Tok::Comma);
                i += 1;
            }
            '/' => {
                push(out, Tok::Slash);
                i += 1;
            }
            '=' => {
                push(out, Tok::Equals);
                i += 1;
            }
            ':' if chars.get(i + 1) == Some(&'=') => {
                push(out, Tok::Assign);
                i += 2;
            }
            ':' => {
                push(out, Tok::Colon);
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                push(out, Tok::Arrow);
                i += 2;
            }
            c if is_ident_char(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                push(out, Tok::Ident(chars[start..i].iter().collect()));
            }
            other => {
                return Err(Error::Parse {
                    line,
                    column,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(())
}

/// A cursor over a token list with positioned errors.
pub(crate) struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    /// Position reported when input runs out.
    end: (usize, usize),
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(toks: &'a [Token], end: (usize, usize)) -> Cursor<'a> {
        Cursor { toks, pos: 0, end }
    }

    pub(crate) fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    pub(crate) fn peek_tok(&self) -> Option<&'a Tok> {
        self.peek().map(|t| &t.tok)
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn next(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    pub(crate) fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.column)).unwrap_or(self.end)
    }

    pub(crate) fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Parse {
            line,
            column,
            message: message.into(),
        })
    }

    pub(crate) fn expect(&mut self, tok: Tok) -> Result<&'a Token> {
        match self.peek() {
            Some(t) if t.tok == tok => {
                self.pos += 1;
                Ok(t)
            }
            Some(t) => self.error(format!(
                "expected {}, found {}",
                tok.describe(),
                t.tok.describe()
            )),
            None => self.error(format!("expected {}, found end of section", tok.describe())),
        }
    }

    pub(crate) fn ident(&mut self) -> Result<(&'a str, usize, usize)> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s),
                line,
                column,
            }) => {
                self.pos += 1;
                Ok((s.as_str(), *line, *column))
            }
            Some(t) => self.error(format!("expected a name, found {}", t.tok.describe())),
            None => self.error("expected a name, found end of section"),
        }
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek_tok() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek_tok(), Some(Tok::Ident(s)) if s == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
}
