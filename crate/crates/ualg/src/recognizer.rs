//! Recognizers: finite-algebra acceptors for tree languages.
//!
//! A recognizer is a finite algebra, an assignment of the declared
//! variables into its carrier, and an accepting subset; it accepts a term
//! when the term's value lies in the accepting set. Union, intersection,
//! and complement of recognized languages are computed on the recognizers
//! themselves, pairing algebras through the direct product. The
//! `two_constant_algebra` (two elements, every operation constantly 0) is
//! the smallest algebra whose subsets separate generator values.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{tuple_to_index, AlgebraError, FiniteAlgebra, Homomorphism};
use crate::signature::Signature;
use crate::term::Term;

/// A finite-algebra acceptor: assignment plus accepting subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recognizer {
    algebra: FiniteAlgebra,
    assignment: BTreeMap<String, usize>,
    accepting: BTreeSet<usize>,
}

impl Recognizer {
    /// Builds a recognizer, checking that assignment values and accepting
    /// elements lie in the carrier.
    pub fn new(
        algebra: FiniteAlgebra,
        assignment: BTreeMap<String, usize>,
        accepting: BTreeSet<usize>,
    ) -> Result<Self, AlgebraError> {
        let size = algebra.size();
        for &v in assignment.values().chain(accepting.iter()) {
            if v >= size {
                return Err(AlgebraError::ValueOutOfRange { value: v, size });
            }
        }
        Ok(Recognizer {
            algebra,
            assignment,
            accepting,
        })
    }

    /// The underlying algebra.
    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    /// The variable assignment.
    pub fn assignment(&self) -> &BTreeMap<String, usize> {
        &self.assignment
    }

    /// The accepting subset.
    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    /// Whether the term's value lies in the accepting set.
    pub fn recognizes(&self, term: &Term) -> Result<bool, AlgebraError> {
        Ok(self
            .accepting
            .contains(&self.algebra.eval(term, &self.assignment)?))
    }

    /// The recognizer of the complementary language: same algebra and
    /// assignment, complemented accepting set.
    pub fn complement(&self) -> Recognizer {
        let accepting = self
            .algebra
            .elements()
            .filter(|e| !self.accepting.contains(e))
            .collect();
        Recognizer {
            algebra: self.algebra.clone(),
            assignment: self.assignment.clone(),
            accepting,
        }
    }

    /// Recognizer of the union of the two languages.
    pub fn union(&self, other: &Recognizer) -> Result<Recognizer, AlgebraError> {
        self.pair(other, |a, b| a || b)
    }

    /// Recognizer of the intersection of the two languages.
    pub fn intersection(&self, other: &Recognizer) -> Result<Recognizer, AlgebraError> {
        self.pair(other, |a, b| a && b)
    }

    /// Pairs two recognizers through the product algebra, accepting the
    /// pointwise Boolean combination `keep` of the component verdicts.
    /// Both must share the signature and the declared variable set (the
    /// assignments themselves may differ).
    fn pair(
        &self,
        other: &Recognizer,
        keep: impl Fn(bool, bool) -> bool,
    ) -> Result<Recognizer, AlgebraError> {
        if self.algebra.signature() != other.algebra.signature()
            || self.assignment.keys().ne(other.assignment.keys())
        {
            return Err(AlgebraError::SignatureMismatch);
        }
        let (product, _) = FiniteAlgebra::product(&[self.algebra.clone(), other.algebra.clone()])?;
        let sizes = [self.algebra.size(), other.algebra.size()];
        let assignment = self
            .assignment
            .iter()
            .map(|(x, &a)| {
                let b = other.assignment[x];
                (x.clone(), tuple_to_index(&sizes, &[a, b]))
            })
            .collect();
        let accepting = (0..sizes[0])
            .flat_map(|a| (0..sizes[1]).map(move |b| (a, b)))
            .filter(|&(a, b)| {
                keep(self.accepting.contains(&a), other.accepting.contains(&b))
            })
            .map(|(a, b)| tuple_to_index(&sizes, &[a, b]))
            .collect();
        Ok(Recognizer {
            algebra: product,
            assignment,
            accepting,
        })
    }
}

/// Whether the accepting set is recovered exactly from its image: the
/// preimage under `phi` of the image of the accepting set equals the
/// accepting set. Equivalently, the accepting set is a union of kernel
/// classes of `phi`.
pub fn is_recognized_exactly(
    r: &Recognizer,
    phi: &Homomorphism,
) -> Result<bool, AlgebraError> {
    if phi.source() != r.algebra() {
        return Err(AlgebraError::SignatureMismatch);
    }
    Ok(phi.kernel().saturates(r.accepting()))
}

/// The two-element algebra in which every operation is constantly 0.
/// Subsets of its carrier, pulled back along characteristic assignments,
/// separate any two distinct generator values.
pub fn two_constant_algebra(sig: &Signature) -> FiniteAlgebra {
    crate::catalog::null_algebra(sig, 2, 0)
}
