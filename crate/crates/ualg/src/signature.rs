//! Graded signatures and variable sets.
//!
//! A signature is a finite family of operation symbols, each with a fixed
//! arity (its grade). Terms are built from these symbols and from variables;
//! variable names must not clash with symbol names, otherwise words in Polish
//! notation become ambiguous. Both kinds of name are plain tokens: nonempty,
//! no whitespace, and none of the punctuation used by the functional term
//! syntax (`(`, `)`, `,`, `=`).

use std::collections::BTreeMap;
use thiserror::Error;

/// Errors raised while building signatures or variable sets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    /// A symbol name appears twice in the signature.
    #[error("DuplicateSymbol: operation symbol {0:?} declared twice")]
    DuplicateSymbol(String),
    /// A variable name appears twice in the variable set.
    #[error("DuplicateVariable: variable {0:?} declared twice")]
    DuplicateVariable(String),
    /// A variable name collides with an operation symbol.
    #[error("ClashesWithSignature: variable {0:?} is already an operation symbol")]
    ClashesWithSignature(String),
    /// A name is empty, contains whitespace, or contains reserved punctuation.
    #[error("InvalidName: {0:?} is not a valid token")]
    InvalidName(String),
}

fn check_token(name: &str) -> Result<(), SignatureError> {
    let ok = !name.is_empty()
        && !name.chars().any(|c| c.is_whitespace() || "(),=".contains(c));
    if ok {
        Ok(())
    } else {
        Err(SignatureError::InvalidName(name.to_string()))
    }
}

/// A graded set of operation symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    symbols: Vec<(String, usize)>,
    index: BTreeMap<String, usize>,
}

impl Signature {
    /// Builds a signature from `(name, arity)` pairs, keeping declaration order.
    pub fn new<I, S>(symbols: I) -> Result<Self, SignatureError>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut out = Signature {
            symbols: Vec::new(),
            index: BTreeMap::new(),
        };
        for (name, arity) in symbols {
            let name = name.into();
            check_token(&name)?;
            if out.index.contains_key(&name) {
                return Err(SignatureError::DuplicateSymbol(name));
            }
            out.index.insert(name.clone(), out.symbols.len());
            out.symbols.push((name, arity));
        }
        Ok(out)
    }

    /// The arity of `name`, or `None` if it is not a symbol.
    pub fn arity(&self, name: &str) -> Option<usize> {
        self.index.get(name).map(|&i| self.symbols[i].1)
    }

    /// True if `name` is an operation symbol.
    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Symbols in declaration order.
    pub fn symbols(&self) -> impl Iterator<Item = (&str, usize)> {
        self.symbols.iter().map(|(n, a)| (n.as_str(), *a))
    }

    /// Symbols of a given arity, in declaration order.
    pub fn symbols_of_arity(&self, arity: usize) -> impl Iterator<Item = &str> {
        self.symbols
            .iter()
            .filter(move |(_, a)| *a == arity)
            .map(|(n, _)| n.as_str())
    }

    /// Number of symbols.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// True if there are no symbols.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// The largest arity among the symbols (0 for an empty signature).
    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|(_, a)| *a).max().unwrap_or(0)
    }
}

/// A finite set of variables, disjoint from a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSet {
    names: Vec<String>,
}

impl VariableSet {
    /// Builds a variable set, checking name validity, duplicates, and
    /// disjointness from `sig`.
    pub fn new<I, S>(names: I, sig: &Signature) -> Result<Self, SignatureError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = VariableSet { names: Vec::new() };
        for name in names {
            let name = name.into();
            check_token(&name)?;
            if sig.contains(&name) {
                return Err(SignatureError::ClashesWithSignature(name));
            }
            if out.names.contains(&name) {
                return Err(SignatureError::DuplicateVariable(name));
            }
            out.names.push(name);
        }
        Ok(out)
    }

    /// True if `name` is one of the variables.
    pub fn contains(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
    }

    /// Variable names in declaration order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(|n| n.as_str())
    }

    /// Number of variables.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// True if there are no variables.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}
