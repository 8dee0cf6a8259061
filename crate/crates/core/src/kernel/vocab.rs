use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::Term;

/// Default bound on symbol arities.
pub const DEFAULT_MAX_ARITY: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(pub u16);

impl SymbolId {
    pub const TRUE: SymbolId = SymbolId(0);
    pub const FALSE: SymbolId = SymbolId(1);
    pub const UNDEF: SymbolId = SymbolId(2);
    pub const EQ: SymbolId = SymbolId(3);
    pub const NOT: SymbolId = SymbolId(4);
    pub const AND: SymbolId = SymbolId(5);
    pub const OR: SymbolId = SymbolId(6);

    pub fn is_logical(self) -> bool {
        (self.0 as usize) < LOGICAL_SYMBOLS.len()
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Logical,
    Nonlogical,
}

/// The logical symbols every vocabulary contains, in id order.
pub const LOGICAL_SYMBOLS: [(&str, usize); 7] = [
    ("true", 0),
    ("false", 0),
    ("undef", 0),
    ("eq", 2),
    ("not", 1),
    ("and", 2),
    ("or", 2),
];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
    pub kind: SymbolKind,
}

/// A finite set of arity-tagged function symbols, always including the
/// logical symbols. Relation symbols are just symbols whose values happen to
/// be Boolean.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    symbols: Vec<Symbol>,
    by_name: HashMap<String, SymbolId>,
    max_arity: usize,
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols && self.max_arity == other.max_arity
    }
}

impl Eq for Vocabulary {}

impl Default for Vocabulary {
    fn default() -> Self {
        Self::new()
    }
}

impl Vocabulary {
    pub fn new() -> Vocabulary {
        Self::with_max_arity(DEFAULT_MAX_ARITY)
    }

    pub fn with_max_arity(max_arity: usize) -> Vocabulary {
        let mut vocab = Vocabulary {
            symbols: Vec::new(),
            by_name: HashMap::new(),
            max_arity,
        };
        for (name, arity) in LOGICAL_SYMBOLS {
            vocab.push(name, arity, SymbolKind::Logical);
        }
        vocab
    }

    /// Builds a vocabulary from nonlogical `(name, arity)` declarations.
    pub fn with_symbols<'a>(
        decls: impl IntoIterator<Item = (&'a str, usize)>,
    ) -> Result<Vocabulary> {
        let mut vocab = Vocabulary::new();
        for (name, arity) in decls {
            vocab.add(name, arity)?;
        }
        Ok(vocab)
    }

    fn push(&mut self, name: &str, arity: usize, kind: SymbolKind) -> SymbolId {
        let id = SymbolId(self.symbols.len() as u16);
        self.symbols.push(Symbol {
            name: name.to_string(),
            arity,
            kind,
        });
        self.by_name.insert(name.to_string(), id);
        id
    }

    /// Declares a nonlogical symbol.
    pub fn add(&mut self, name: &str, arity: usize) -> Result<SymbolId> {
        if let Some(id) = self.by_name.get(name) {
            return Err(if id.is_logical() {
                Error::ReservedSymbol(name.to_string())
            } else {
                Error::DuplicateSymbol(name.to_string())
            });
        }
        if arity > self.max_arity {
            return Err(Error::ArityLimit {
                symbol: name.to_string(),
                arity,
                limit: self.max_arity,
            });
        }
        Ok(self.push(name, arity, SymbolKind::Nonlogical))
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.by_name.get(name).copied()
    }

    pub fn resolve(&self, name: &str) -> Result<SymbolId> {
        self.lookup(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn symbol(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id.index()]
    }

    pub fn get(&self, id: SymbolId) -> Option<&Symbol> {
        self.symbols.get(id.index())
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.symbol(id).name
    }

    pub fn arity(&self, id: SymbolId) -> usize {
        self.symbol(id).arity
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn ids(&self) -> impl Iterator<Item = SymbolId> {
        (0..self.symbols.len() as u16).map(SymbolId)
    }

    pub fn nonlogical(&self) -> impl Iterator<Item = SymbolId> {
        (LOGICAL_SYMBOLS.len() as u16..self.symbols.len() as u16).map(SymbolId)
    }

    /// Builds the term `name(args..)`, checking the arity.
    pub fn term(&self, name: &str, args: Vec<Term>) -> Result<Term> {
        let id = self.resolve(name)?;
        let arity = self.arity(id);
        if arity != args.len() {
            return Err(Error::ArityMismatch {
                symbol: name.to_string(),
                expected: arity,
                found: args.len(),
            });
        }
        Ok(Term::new(id, args))
    }

    pub fn constant(&self, name: &str) -> Result<Term> {
        self.term(name, Vec::new())
    }
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let decls: Vec<String> = self
            .nonlogical()
            .map(|id| format!("{}/{}", self.name(id), self.arity(id)))
            .collect();
        f.write_str(&decls.join(" "))
    }
}
