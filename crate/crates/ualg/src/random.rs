//! Seeded random generators for algebras, terms, subsets, congruences, and
//! Boolean algebras.
//!
//! These exist to build test corpora: callers pass an explicit RNG (tests
//! use a counter-seeded ChaCha stream) so every run draws the same
//! instances.

use std::collections::BTreeSet;

use rand::Rng;

use crate::algebra::FiniteAlgebra;
use crate::bitset::BitSet;
use crate::boole::{generate_boolean_algebra, SetBooleanAlgebra};
use crate::congruence::Congruence;
use crate::signature::{Signature, VariableSet};
use crate::term::Term;

/// An algebra with uniformly random tables over the given signature.
pub fn random_algebra<R: Rng>(rng: &mut R, sig: &Signature, size: usize) -> FiniteAlgebra {
    assert!(size > 0, "carrier must be nonempty");
    let tables = sig
        .symbols()
        .map(|(name, arity)| {
            let len = size.pow(arity as u32);
            let table = (0..len).map(|_| rng.random_range(0..size)).collect();
            (name.to_string(), table)
        })
        .collect();
    FiniteAlgebra::new(sig.clone(), size, tables).expect("random tables are well-formed")
}

/// A random term of height at most `max_depth`.
///
/// Leaves are variables or nullary symbols; there must be at least one of
/// either. Inner nodes pick uniformly among symbols of positive arity and
/// fall back to a leaf when none exist.
pub fn random_term<R: Rng>(
    rng: &mut R,
    sig: &Signature,
    vars: &VariableSet,
    max_depth: usize,
) -> Term {
    let leaves: Vec<Term> = vars
        .names()
        .map(|x| Term::var(x, vars).expect("declared variable"))
        .chain(
            sig.symbols_of_arity(0)
                .map(|c| Term::app(c, Vec::new(), sig).expect("declared constant")),
        )
        .collect();
    assert!(
        !leaves.is_empty(),
        "need a variable or a constant to build terms"
    );
    let inner: Vec<(String, usize)> = sig
        .symbols()
        .filter(|&(_, a)| a > 0)
        .map(|(s, a)| (s.to_string(), a))
        .collect();
    fn go<R: Rng>(
        rng: &mut R,
        sig: &Signature,
        leaves: &[Term],
        inner: &[(String, usize)],
        depth: usize,
    ) -> Term {
        if depth == 0 || inner.is_empty() || rng.random_bool(0.25) {
            return leaves[rng.random_range(0..leaves.len())].clone();
        }
        let (symbol, arity) = &inner[rng.random_range(0..inner.len())];
        let args = (0..*arity)
            .map(|_| go(rng, sig, leaves, inner, depth - 1))
            .collect();
        Term::app(symbol, args, sig).expect("declared symbol")
    }
    go(rng, sig, &leaves, &inner, max_depth)
}

/// A random term containing exactly one occurrence of `distinguished`
/// (hence linear in it), of height at most `max_depth`. Other leaf
/// positions are filled with random parameter terms.
pub fn random_linear_term<R: Rng>(
    rng: &mut R,
    sig: &Signature,
    vars: &VariableSet,
    distinguished: &str,
    max_depth: usize,
) -> Term {
    assert!(vars.contains(distinguished), "unknown distinguished variable");
    let hole = Term::var(distinguished, vars).expect("declared variable");
    let inner: Vec<(String, usize)> = sig
        .symbols()
        .filter(|&(_, a)| a > 0)
        .map(|(s, a)| (s.to_string(), a))
        .collect();
    let mut term = hole;
    let mut depth = 0;
    // Wrap the distinguished occurrence in random contexts until the depth
    // budget (or a coin flip) stops the growth.
    while depth < max_depth && !inner.is_empty() && rng.random_bool(0.7) {
        let (symbol, arity) = &inner[rng.random_range(0..inner.len())];
        let slot = rng.random_range(0..*arity);
        let args = (0..*arity)
            .map(|i| {
                if i == slot {
                    term.clone()
                } else {
                    random_parameter_term(rng, sig, vars, distinguished, 1)
                }
            })
            .collect();
        term = Term::app(symbol, args, sig).expect("declared symbol");
        depth += 1;
    }
    term
}

/// A random term avoiding the distinguished variable entirely.
fn random_parameter_term<R: Rng>(
    rng: &mut R,
    sig: &Signature,
    vars: &VariableSet,
    distinguished: &str,
    max_depth: usize,
) -> Term {
    let names: Vec<String> = vars
        .names()
        .filter(|&x| x != distinguished)
        .map(|x| x.to_string())
        .collect();
    if names.is_empty() {
        // Only the distinguished variable exists; fall back to a constant.
        let c = sig
            .symbols_of_arity(0)
            .next()
            .expect("need a parameter variable or a constant");
        return Term::app(c, Vec::new(), sig).expect("declared constant");
    }
    let param_vars = VariableSet::new(names, sig).expect("subset of declared variables");
    random_term(rng, sig, &param_vars, max_depth)
}

/// A uniformly random subset of `0..size`.
pub fn random_subset<R: Rng>(rng: &mut R, size: usize) -> BTreeSet<usize> {
    (0..size).filter(|_| rng.random_bool(0.5)).collect()
}

/// A random congruence: the congruence generated by a few random pairs
/// (possibly the identity when no pairs are drawn).
pub fn random_congruence<R: Rng>(rng: &mut R, algebra: &FiniteAlgebra) -> Congruence {
    let n = algebra.size();
    let pair_count = rng.random_range(0..=n);
    let pairs: Vec<(usize, usize)> = (0..pair_count)
        .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
        .collect();
    Congruence::generated_by(algebra.clone(), &pairs).expect("pairs lie in the carrier")
}

/// A random Boolean algebra of sets: the one generated by a few random
/// subsets of the universe.
pub fn random_boolean_algebra<R: Rng>(
    rng: &mut R,
    universe: usize,
    max_generators: usize,
) -> SetBooleanAlgebra {
    let count = rng.random_range(0..=max_generators);
    let generators: Vec<BitSet> = (0..count)
        .map(|_| {
            BitSet::from_indices(
                universe,
                (0..universe).filter(|_| rng.random_bool(0.5)),
            )
        })
        .collect();
    generate_boolean_algebra(universe, &generators).expect("generators fit the universe")
}
