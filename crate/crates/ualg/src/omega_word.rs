//! Words over a monoid alphabet extended with ω-powers.
//!
//! An `OmegaWord` is built from letters by concatenation, finite powers,
//! and the unary operations `_^ω` and `_^(ω+1)`. In a finite monoid the
//! ω-power of `s` is the unique idempotent among the positive powers of
//! `s`, so every ω-word evaluates under an assignment of letters to
//! monoid elements.
//!
//! [`not_faithful_equation`] builds three distinct ω-words in two letters
//! that evaluate equally in every finite monoid — the ω-signature does
//! not faithfully record how such equalities are witnessed by plain words
//! over each finite quotient.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::monoid::FiniteMonoid;

/// Errors from building or evaluating ω-words.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OmegaWordError {
    /// Finite powers must have positive exponent.
    #[error("ZeroExponent: finite powers need a positive exponent")]
    ZeroExponent,
    /// A letter without a value under the given assignment.
    #[error("UnassignedLetter: no value for letter {0}")]
    UnassignedLetter(String),
}

/// A word over letters with concatenation, finite powers, and ω-powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OmegaWord {
    /// A single letter.
    Letter(String),
    /// Concatenation of parts, left to right; empty = the unit.
    Concat(Vec<OmegaWord>),
    /// A finite positive power.
    Power(Box<OmegaWord>, u32),
    /// The ω-power: the idempotent power of the value.
    Omega(Box<OmegaWord>),
    /// The (ω+1)-power: ω-power times the value.
    OmegaPlusOne(Box<OmegaWord>),
}

impl OmegaWord {
    /// A single letter.
    pub fn letter(name: impl Into<String>) -> Self {
        OmegaWord::Letter(name.into())
    }

    /// Concatenation of parts.
    pub fn concat(parts: impl IntoIterator<Item = OmegaWord>) -> Self {
        OmegaWord::Concat(parts.into_iter().collect())
    }

    /// A finite power with positive exponent.
    pub fn power(base: OmegaWord, exponent: u32) -> Result<Self, OmegaWordError> {
        if exponent == 0 {
            return Err(OmegaWordError::ZeroExponent);
        }
        Ok(OmegaWord::Power(Box::new(base), exponent))
    }

    /// The ω-power of a word.
    pub fn omega(base: OmegaWord) -> Self {
        OmegaWord::Omega(Box::new(base))
    }

    /// The (ω+1)-power of a word.
    pub fn omega_plus_one(base: OmegaWord) -> Self {
        OmegaWord::OmegaPlusOne(Box::new(base))
    }

    /// The letters occurring in the word, in alphabetical order.
    pub fn letters(&self) -> Vec<String> {
        fn collect(word: &OmegaWord, out: &mut Vec<String>) {
            match word {
                OmegaWord::Letter(name) => {
                    if !out.contains(name) {
                        out.push(name.clone());
                    }
                }
                OmegaWord::Concat(parts) => parts.iter().for_each(|p| collect(p, out)),
                OmegaWord::Power(base, _)
                | OmegaWord::Omega(base)
                | OmegaWord::OmegaPlusOne(base) => collect(base, out),
            }
        }
        let mut out = Vec::new();
        collect(self, &mut out);
        out.sort();
        out
    }

    /// The value in a finite monoid under an assignment of letters.
    pub fn eval(
        &self,
        monoid: &FiniteMonoid,
        assignment: &BTreeMap<String, usize>,
    ) -> Result<usize, OmegaWordError> {
        match self {
            OmegaWord::Letter(name) => assignment
                .get(name)
                .copied()
                .ok_or_else(|| OmegaWordError::UnassignedLetter(name.clone())),
            OmegaWord::Concat(parts) => {
                let mut value = monoid.unit();
                for part in parts {
                    value = monoid.mul(value, part.eval(monoid, assignment)?);
                }
                Ok(value)
            }
            OmegaWord::Power(base, k) => {
                Ok(monoid.pow(base.eval(monoid, assignment)?, u64::from(*k)))
            }
            OmegaWord::Omega(base) => Ok(monoid.omega_power(base.eval(monoid, assignment)?)),
            OmegaWord::OmegaPlusOne(base) => {
                Ok(monoid.omega_plus_one_power(base.eval(monoid, assignment)?))
            }
        }
    }

    /// Exponent bases: anything but a bare letter is parenthesized.
    fn fmt_base(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaWord::Letter(name) => write!(f, "{name}"),
            compound => write!(f, "({compound})"),
        }
    }

    /// Concatenation factors: exponents bind tighter than juxtaposition,
    /// so only nested concatenations need parentheses.
    fn fmt_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaWord::Concat(_) => write!(f, "({self})"),
            other => write!(f, "{other}"),
        }
    }
}

impl fmt::Display for OmegaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaWord::Letter(name) => write!(f, "{name}"),
            OmegaWord::Concat(parts) if parts.is_empty() => write!(f, "1"),
            OmegaWord::Concat(parts) => {
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    part.fmt_factor(f)?;
                }
                Ok(())
            }
            OmegaWord::Power(base, k) => {
                base.fmt_base(f)?;
                write!(f, "^{k}")
            }
            OmegaWord::Omega(base) => {
                base.fmt_base(f)?;
                write!(f, "^w")
            }
            OmegaWord::OmegaPlusOne(base) => {
                base.fmt_base(f)?;
                write!(f, "^(w+1)")
            }
        }
    }
}

/// Three distinct ω-words in the letters `u` and `x` that evaluate equally
/// in every finite monoid.
///
/// With `g = u^ω x^(ω+1)` the words are
/// `e1 = u^ω g^(ω+1)`, `e2 = g^(ω+1)`, `e3 = u^ω e1 x^ω`.
/// Writing `a = u^ω` (idempotent): `a·g = g` gives `e1 = e2`, and
/// `x^(ω+1)·x^ω = x^(ω+1)` gives `e3 = e2`.
pub fn not_faithful_equation(u: &str, x: &str) -> [OmegaWord; 3] {
    let g = OmegaWord::concat([
        OmegaWord::omega(OmegaWord::letter(u)),
        OmegaWord::omega_plus_one(OmegaWord::letter(x)),
    ]);
    let e2 = OmegaWord::omega_plus_one(g);
    let e1 = OmegaWord::concat([OmegaWord::omega(OmegaWord::letter(u)), e2.clone()]);
    let e3 = OmegaWord::concat([
        OmegaWord::omega(OmegaWord::letter(u)),
        e1.clone(),
        OmegaWord::omega(OmegaWord::letter(x)),
    ]);
    [e1, e2, e3]
}
