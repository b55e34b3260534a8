//! Subterm algebras: finite separators for pairs of distinct terms.
//!
//! Given a base term, its distinct subterms plus a sink element form a
//! finite algebra: applying a symbol to subterms yields the subterm that
//! has exactly that (retracted) label and those children if one exists,
//! and the sink otherwise. The induced evaluation fixes every subterm of
//! the base pointwise, so two distinct terms always get distinct values —
//! the base term maps to itself while anything else maps to a different
//! subterm or to the sink.
//!
//! The retraction data (`alpha` on variables, `beta` on symbols) lets a
//! term over a larger variable set or symbol set be folded onto the base
//! term's own alphabet first.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{tuples, AlgebraError, FiniteAlgebra};
use crate::signature::{Signature, VariableSet};
use crate::term::{Term, TermView};

/// The retraction data for a subterm algebra: a base term, a finite
/// variable subset containing its variables, a variable retraction, and an
/// arity-preserving symbol retraction fixing the base term's symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaConfig {
    base: Term,
    sig: Signature,
    vars: VariableSet,
    kept_vars: BTreeSet<String>,
    alpha: BTreeMap<String, String>,
    beta: BTreeMap<String, String>,
}

impl SigmaConfig {
    /// Validates the retraction data.
    ///
    /// Requirements: `kept_vars` contains the base term's variables;
    /// `alpha` is total on the declared variables, lands in `kept_vars`,
    /// and fixes `kept_vars` pointwise; `beta` is total on the signature,
    /// preserves arity, fixes the base term's symbols, and fixes its own
    /// image pointwise.
    pub fn new(
        base: Term,
        sig: Signature,
        vars: VariableSet,
        kept_vars: BTreeSet<String>,
        alpha: BTreeMap<String, String>,
        beta: BTreeMap<String, String>,
    ) -> Result<Self, AlgebraError> {
        let base_vars = base.variables();
        if !base_vars.iter().all(|&x| kept_vars.contains(x)) {
            return Err(AlgebraError::SignatureMismatch);
        }
        for x in vars.names() {
            let ax = alpha.get(x).ok_or(AlgebraError::SignatureMismatch)?;
            if !kept_vars.contains(ax) {
                return Err(AlgebraError::SignatureMismatch);
            }
            if kept_vars.contains(x) && ax != x {
                return Err(AlgebraError::SignatureMismatch);
            }
        }
        if !kept_vars.iter().all(|x| vars.contains(x)) {
            return Err(AlgebraError::SignatureMismatch);
        }
        let mut base_symbols = BTreeSet::new();
        for s in base.subterms() {
            if let TermView::App(f, _) = s.view() {
                base_symbols.insert(f.to_string());
            }
        }
        for (f, arity) in sig.symbols() {
            let bf = beta.get(f).ok_or(AlgebraError::SignatureMismatch)?;
            if sig.arity(bf) != Some(arity) {
                return Err(AlgebraError::SignatureMismatch);
            }
            if base_symbols.contains(f) && bf != f {
                return Err(AlgebraError::SignatureMismatch);
            }
            // Retraction: the image is fixed pointwise.
            if beta.get(bf) != Some(bf) {
                return Err(AlgebraError::SignatureMismatch);
            }
        }
        Ok(SigmaConfig {
            base,
            sig,
            vars,
            kept_vars,
            alpha,
            beta,
        })
    }

    /// The identity retraction: every variable and symbol is kept.
    pub fn identity(base: Term, sig: Signature, vars: VariableSet) -> Self {
        let kept_vars: BTreeSet<String> = vars.names().map(|x| x.to_string()).collect();
        let alpha = vars
            .names()
            .map(|x| (x.to_string(), x.to_string()))
            .collect();
        let beta = sig
            .symbols()
            .map(|(f, _)| (f.to_string(), f.to_string()))
            .collect();
        SigmaConfig {
            base,
            sig,
            vars,
            kept_vars,
            alpha,
            beta,
        }
    }

    /// The base term.
    pub fn base(&self) -> &Term {
        &self.base
    }
}

/// The subterm algebra of a base term: carrier = distinct subterms plus a
/// sink, together with the evaluation assignment induced by the variable
/// retraction.
#[derive(Debug, Clone)]
pub struct SigmaAlgebra {
    config: SigmaConfig,
    algebra: FiniteAlgebra,
    subterms: Vec<Term>,
    sink: usize,
    assignment: BTreeMap<String, usize>,
}

impl SigmaAlgebra {
    /// Builds the subterm algebra for the given retraction data.
    ///
    /// The carrier lists the distinct subterms of the base in
    /// first-occurrence order, with the sink as the final element. A
    /// symbol `f` applied to subterm elements yields the subterm whose
    /// label is the retracted symbol and whose children are exactly those
    /// subterms; every other application (including any involving the
    /// sink) yields the sink.
    pub fn build(config: SigmaConfig) -> SigmaAlgebra {
        let subterm_refs = config.base.distinct_subterms();
        let sink = subterm_refs.len();
        let size = sink + 1;
        let index_of: BTreeMap<&Term, usize> = subterm_refs
            .iter()
            .enumerate()
            .map(|(i, &t)| (t, i))
            .collect();
        // Key each application node of the base by (label, child indices):
        // structural equality makes this map conflict-free.
        let mut node: BTreeMap<(String, Vec<usize>), usize> = BTreeMap::new();
        for (i, s) in subterm_refs.iter().enumerate() {
            if let TermView::App(f, args) = s.view() {
                let children: Vec<usize> = args.iter().map(|a| index_of[a]).collect();
                node.insert((f.to_string(), children), i);
            }
        }
        let mut tables = BTreeMap::new();
        for (f, arity) in config.sig.symbols() {
            let retracted = config.beta[f].clone();
            let mut table = Vec::with_capacity(size.pow(arity as u32));
            for args in tuples(size, arity) {
                let value = if args.contains(&sink) {
                    sink
                } else {
                    node.get(&(retracted.clone(), args)).copied().unwrap_or(sink)
                };
                table.push(value);
            }
            tables.insert(f.to_string(), table);
        }
        let algebra = FiniteAlgebra::new(config.sig.clone(), size, tables)
            .expect("subterm tables are total and in range");
        // A variable evaluates to its retraction when that occurs in the
        // base, and to the sink otherwise.
        let assignment = config
            .vars
            .names()
            .map(|x| {
                let ax = &config.alpha[x];
                let target = subterm_refs
                    .iter()
                    .position(|s| matches!(s.view(), TermView::Var(v) if v == ax))
                    .unwrap_or(sink);
                (x.to_string(), target)
            })
            .collect();
        let subterms: Vec<Term> = subterm_refs.iter().map(|&t| t.clone()).collect();
        SigmaAlgebra {
            config,
            algebra,
            subterms,
            sink,
            assignment,
        }
    }

    /// The retraction data this algebra was built from.
    pub fn config(&self) -> &SigmaConfig {
        &self.config
    }

    /// The underlying finite algebra (carrier: subterms then sink).
    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    /// The distinct subterms of the base, in carrier order.
    pub fn subterms(&self) -> &[Term] {
        &self.subterms
    }

    /// The sink element (the last carrier index).
    pub fn sink(&self) -> usize {
        self.sink
    }

    /// The assignment realising the variable retraction.
    pub fn assignment(&self) -> &BTreeMap<String, usize> {
        &self.assignment
    }

    /// Carrier index of a term equal to one of the base's subterms.
    pub fn subterm_index(&self, t: &Term) -> Option<usize> {
        self.subterms.iter().position(|s| s == t)
    }

    /// Evaluates a term in the subterm algebra. Under the identity
    /// retraction this yields the term's own index when it is a subterm of
    /// the base and the sink otherwise.
    pub fn eval(&self, t: &Term) -> Result<usize, AlgebraError> {
        self.algebra.eval(t, &self.assignment)
    }
}
