//! Terms over a graded signature, and the Polish-notation codec.
//!
//! A term is an ordered tree: leaves are variables or nullary symbols,
//! internal nodes carry a symbol whose arity equals the number of children.
//! Well-formedness is enforced at construction, so every `Term` value is
//! valid for the signature and variable set it was built against.
//!
//! The Polish word of a term is the preorder sequence of its node labels.
//! Because every token has a known arity (variables count as arity 0), a
//! word determines at most one term: reading left to right, each symbol of
//! arity `n` opens `n` pending slots, and the word is a term exactly when
//! the last token closes the last slot. `parse_polish` and `to_polish` are
//! mutually inverse on well-formed data, and no proper prefix of a term's
//! word is itself a term (it always ends with open slots).

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::signature::{Signature, VariableSet};

/// Default ceiling on the number of nodes a single term may have.
///
/// Parsing and substitution refuse to build anything larger instead of
/// silently truncating; the bound exists to keep runaway inputs from
/// exhausting memory, not to constrain ordinary use.
pub const DEFAULT_MAX_NODES: usize = 1_000_000;

/// Errors raised by term construction and the two parsers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    /// A token is neither an operation symbol nor a variable.
    #[error("UnknownToken: {0:?} is neither an operation symbol nor a variable")]
    UnknownToken(String),
    /// The word ended while argument slots were still open.
    #[error("Underflow: word ends before all argument slots are filled")]
    Underflow,
    /// The word continued after the term closed.
    #[error("TrailingTokens: word continues after the term is complete")]
    TrailingTokens,
    /// A symbol was applied to the wrong number of arguments.
    #[error("ArityMismatch: symbol {symbol:?} has arity {expected}, got {found} arguments")]
    ArityMismatch {
        /// The offending symbol.
        symbol: String,
        /// Its declared arity.
        expected: usize,
        /// How many arguments were supplied.
        found: usize,
    },
    /// Construction would exceed the configured node budget.
    #[error("TooManyNodes: term would exceed the configured bound of {limit} nodes")]
    TooManyNodes {
        /// The bound that was exceeded.
        limit: usize,
    },
    /// The functional-notation parser hit malformed syntax.
    #[error("Syntax: {0}")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Node {
    Var(String),
    App(String, Vec<Term>),
}

/// A well-formed term over some signature and variable set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term(Node);

/// A borrowed view of the root of a term, for pattern matching.
#[derive(Debug, Clone, Copy)]
pub enum TermView<'a> {
    /// A variable leaf.
    Var(&'a str),
    /// An operation symbol applied to its arguments (empty for constants).
    App(&'a str, &'a [Term]),
}

impl Term {
    /// A variable leaf. Fails if `name` is not in `vars`.
    pub fn var(name: &str, vars: &VariableSet) -> Result<Term, TermError> {
        if vars.contains(name) {
            Ok(Term(Node::Var(name.to_string())))
        } else {
            Err(TermError::UnknownToken(name.to_string()))
        }
    }

    /// An application node. Fails if `name` is not a symbol of `sig` or the
    /// argument count does not match its arity.
    pub fn app(name: &str, args: Vec<Term>, sig: &Signature) -> Result<Term, TermError> {
        match sig.arity(name) {
            None => Err(TermError::UnknownToken(name.to_string())),
            Some(a) if a != args.len() => Err(TermError::ArityMismatch {
                symbol: name.to_string(),
                expected: a,
                found: args.len(),
            }),
            Some(_) => Ok(Term(Node::App(name.to_string(), args))),
        }
    }

    /// The root label and children of this term.
    pub fn view(&self) -> TermView<'_> {
        match &self.0 {
            Node::Var(x) => TermView::Var(x),
            Node::App(f, args) => TermView::App(f, args),
        }
    }

    /// The label at the root (variable name or symbol name).
    pub fn root(&self) -> &str {
        match &self.0 {
            Node::Var(x) => x,
            Node::App(f, _) => f,
        }
    }

    /// The children of the root (empty for variables and constants).
    pub fn children(&self) -> &[Term] {
        match &self.0 {
            Node::Var(_) => &[],
            Node::App(_, args) => args,
        }
    }

    /// True if the term is a single variable.
    pub fn is_var(&self) -> bool {
        matches!(self.0, Node::Var(_))
    }

    /// Total number of nodes.
    pub fn node_count(&self) -> usize {
        let mut count = 0;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            count += 1;
            stack.extend(t.children());
        }
        count
    }

    /// Height of the tree: 0 for a leaf, 1 + max child height otherwise.
    pub fn depth(&self) -> usize {
        self.children()
            .iter()
            .map(Term::depth)
            .max()
            .map_or(0, |d| d + 1)
    }

    /// All subterm occurrences in preorder (the term itself comes first).
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            for c in t.children().iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// Distinct subterms, ordered by first occurrence in preorder.
    pub fn distinct_subterms(&self) -> Vec<&Term> {
        let mut seen = BTreeSet::new();
        self.subterms()
            .into_iter()
            .filter(|t| seen.insert(*t))
            .collect()
    }

    /// The set of variable names occurring in the term.
    pub fn variables(&self) -> BTreeSet<&str> {
        self.subterms()
            .into_iter()
            .filter_map(|t| match &t.0 {
                Node::Var(x) => Some(x.as_str()),
                Node::App(..) => None,
            })
            .collect()
    }

    /// Number of occurrences of the variable `x`.
    pub fn occurrences(&self, x: &str) -> usize {
        self.subterms()
            .iter()
            .filter(|t| matches!(&t.0, Node::Var(y) if y == x))
            .count()
    }

    /// True if `x` occurs exactly once.
    pub fn is_linear_in(&self, x: &str) -> bool {
        self.occurrences(x) == 1
    }

    /// Replaces every occurrence of the variable `x` by `replacement`,
    /// refusing to build a result larger than `max_nodes`.
    pub fn substitute_bounded(
        &self,
        x: &str,
        replacement: &Term,
        max_nodes: usize,
    ) -> Result<Term, TermError> {
        let occ = self.occurrences(x);
        let result_nodes = self.node_count() + occ * (replacement.node_count().saturating_sub(1));
        if result_nodes > max_nodes {
            return Err(TermError::TooManyNodes { limit: max_nodes });
        }
        Ok(self.substitute_unchecked(x, replacement))
    }

    /// Replaces every occurrence of the variable `x` by `replacement`.
    ///
    /// Panics if the result would exceed [`DEFAULT_MAX_NODES`]; use
    /// [`Term::substitute_bounded`] to choose the bound.
    pub fn substitute(&self, x: &str, replacement: &Term) -> Term {
        self.substitute_bounded(x, replacement, DEFAULT_MAX_NODES)
            .expect("substitution exceeded the default node budget")
    }

    fn substitute_unchecked(&self, x: &str, replacement: &Term) -> Term {
        match &self.0 {
            Node::Var(y) if y == x => replacement.clone(),
            Node::Var(_) => self.clone(),
            Node::App(f, args) => Term(Node::App(
                f.clone(),
                args.iter()
                    .map(|a| a.substitute_unchecked(x, replacement))
                    .collect(),
            )),
        }
    }

    /// The Polish word of the term: node labels in preorder.
    pub fn to_polish(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.node_count());
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t.root().to_string());
            for c in t.children().iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// The Polish word joined with single spaces.
    pub fn polish_string(&self) -> String {
        self.to_polish().join(" ")
    }

    /// The shape of the term: child counts in preorder, labels forgotten.
    pub fn shape(&self) -> Shape {
        let mut out = Vec::with_capacity(self.node_count());
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t.children().len());
            for c in t.children().iter().rev() {
                stack.push(c);
            }
        }
        Shape(out)
    }

    /// Multi-line rendering of the tree with box-drawing connectors.
    pub fn render_tree(&self) -> String {
        fn go(t: &Term, prefix: &str, out: &mut String) {
            let args = t.children();
            for (i, c) in args.iter().enumerate() {
                let last = i + 1 == args.len();
                out.push_str(prefix);
                out.push_str(if last { "└─ " } else { "├─ " });
                out.push_str(c.root());
                out.push('\n');
                let ext = if last { "   " } else { "│  " };
                go(c, &format!("{prefix}{ext}"), out);
            }
        }
        let mut out = String::new();
        out.push_str(self.root());
        out.push('\n');
        go(self, "", &mut out);
        out
    }
}

impl fmt::Display for Term {
    /// Functional notation: variables and constants bare, otherwise
    /// `f(arg, .., arg)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Node::Var(x) => write!(f, "{x}"),
            Node::App(op, args) if args.is_empty() => write!(f, "{op}"),
            Node::App(op, args) => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({self})")
    }
}

/// The unlabeled skeleton of a term: child counts in preorder.
///
/// Two terms have equal shapes exactly when their trees agree after
/// forgetting node labels, which happens exactly when their Polish words
/// have the same arity sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Shape(pub Vec<usize>);

/// Parses a whitespace-separated Polish word. See [`parse_polish_tokens`].
pub fn parse_polish(word: &str, sig: &Signature, vars: &VariableSet) -> Result<Term, TermError> {
    parse_polish_tokens(word.split_whitespace(), sig, vars, DEFAULT_MAX_NODES)
}

/// Parses a Polish token sequence into the unique term it denotes.
///
/// Tokens must be operation symbols of `sig` or variables of `vars`
/// (`UnknownToken` otherwise). The word must close exactly at its last
/// token: `Underflow` if slots remain open at the end, `TrailingTokens` if
/// tokens remain after the term closes. Words longer than `max_nodes`
/// tokens are rejected with `TooManyNodes`.
pub fn parse_polish_tokens<'a, I>(
    tokens: I,
    sig: &Signature,
    vars: &VariableSet,
    max_nodes: usize,
) -> Result<Term, TermError>
where
    I: IntoIterator<Item = &'a str>,
{
    // Stack of partially filled applications: (symbol, arity, children so far).
    let mut stack: Vec<(String, usize, Vec<Term>)> = Vec::new();
    let mut consumed = 0usize;
    let mut iter = tokens.into_iter();

    while let Some(token) = iter.next() {
        consumed += 1;
        if consumed > max_nodes {
            return Err(TermError::TooManyNodes { limit: max_nodes });
        }
        let leaf = if vars.contains(token) {
            Some(Term(Node::Var(token.to_string())))
        } else {
            match sig.arity(token) {
                Some(0) => Some(Term(Node::App(token.to_string(), Vec::new()))),
                Some(n) => {
                    stack.push((token.to_string(), n, Vec::with_capacity(n)));
                    None
                }
                None => return Err(TermError::UnknownToken(token.to_string())),
            }
        };
        if let Some(mut term) = leaf {
            // Attach the completed term upward, popping every frame it fills.
            loop {
                match stack.last_mut() {
                    None => {
                        // The outermost term closed; anything left is trailing.
                        return if iter.next().is_some() {
                            Err(TermError::TrailingTokens)
                        } else {
                            Ok(term)
                        };
                    }
                    Some((_, arity, children)) => {
                        children.push(term);
                        if children.len() == *arity {
                            let (sym, _, children) = stack.pop().expect("frame exists");
                            term = Term(Node::App(sym, children));
                        } else {
                            break;
                        }
                    }
                }
            }
        }
    }
    Err(TermError::Underflow)
}

/// Parses functional notation: `f(a, g(x), c)`, variables and constants bare.
pub fn parse_functional(
    input: &str,
    sig: &Signature,
    vars: &VariableSet,
) -> Result<Term, TermError> {
    let mut p = FunctionalParser {
        rest: input.trim(),
        sig,
        vars,
    };
    let term = p.term()?;
    if !p.rest.is_empty() {
        return Err(TermError::TrailingTokens);
    }
    Ok(term)
}

struct FunctionalParser<'a> {
    rest: &'a str,
    sig: &'a Signature,
    vars: &'a VariableSet,
}

impl<'a> FunctionalParser<'a> {
    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start();
    }

    fn name(&mut self) -> Result<&'a str, TermError> {
        self.skip_ws();
        let end = self
            .rest
            .find(|c: char| c.is_whitespace() || "(),=".contains(c))
            .unwrap_or(self.rest.len());
        if end == 0 {
            return Err(TermError::Syntax(format!(
                "expected a name at {:?}",
                truncated(self.rest)
            )));
        }
        let (name, rest) = self.rest.split_at(end);
        self.rest = rest;
        Ok(name)
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if let Some(rest) = self.rest.strip_prefix(c) {
            self.rest = rest;
            true
        } else {
            false
        }
    }

    fn term(&mut self) -> Result<Term, TermError> {
        let name = self.name()?;
        if self.eat('(') {
            let mut args = Vec::new();
            if !self.eat(')') {
                loop {
                    args.push(self.term()?);
                    if self.eat(')') {
                        break;
                    }
                    if !self.eat(',') {
                        return Err(TermError::Syntax(format!(
                            "expected ',' or ')' at {:?}",
                            truncated(self.rest)
                        )));
                    }
                }
            }
            Term::app(name, args, self.sig)
        } else if self.vars.contains(name) {
            Ok(Term(Node::Var(name.to_string())))
        } else if self.sig.arity(name) == Some(0) {
            Ok(Term(Node::App(name.to_string(), Vec::new())))
        } else if self.sig.contains(name) {
            Err(TermError::ArityMismatch {
                symbol: name.to_string(),
                expected: self.sig.arity(name).unwrap_or(0),
                found: 0,
            })
        } else {
            Err(TermError::UnknownToken(name.to_string()))
        }
    }
}

fn truncated(s: &str) -> String {
    s.chars().take(16).collect()
}
