//! A small stock of concrete finite algebras.
//!
//! These are the running examples used throughout the crate's tests, the
//! command-line demos, and the documentation: chains of semilattices,
//! cyclic groups, and constant ("null") structures. Each comes with the
//! one-symbol signature it needs.

use std::collections::BTreeMap;

use crate::algebra::FiniteAlgebra;
use crate::signature::Signature;

/// The two-element meet-semilattice `{0, 1}` with `meet = min`.
pub fn semilattice2() -> FiniteAlgebra {
    chain_semilattice(2)
}

/// The `n`-element chain `{0 < 1 < .. < n-1}` with `meet = min`.
///
/// Panics if `n == 0`.
pub fn chain_semilattice(n: usize) -> FiniteAlgebra {
    let sig = Signature::new([("meet", 2)]).expect("valid signature");
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            table.push(a.min(b));
        }
    }
    FiniteAlgebra::new(sig, n, BTreeMap::from([("meet".to_string(), table)]))
        .expect("valid algebra")
}

/// The cyclic group of order `n` with addition as its single binary symbol.
///
/// Panics if `n == 0`.
pub fn cyclic_group(n: usize) -> FiniteAlgebra {
    let sig = Signature::new([("add", 2)]).expect("valid signature");
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            table.push((a + b) % n);
        }
    }
    FiniteAlgebra::new(sig, n, BTreeMap::from([("add".to_string(), table)]))
        .expect("valid algebra")
}

/// A null structure: every operation of `sig` is constant to `point`.
///
/// Panics if `point >= size` or `size == 0`.
pub fn null_algebra(sig: &Signature, size: usize, point: usize) -> FiniteAlgebra {
    assert!(point < size, "constant point must lie in the carrier");
    let tables = sig
        .symbols()
        .map(|(name, arity)| (name.to_string(), vec![point; size.pow(arity as u32)]))
        .collect();
    FiniteAlgebra::new(sig.clone(), size, tables).expect("valid algebra")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_meet_is_min() {
        let c3 = chain_semilattice(3);
        assert_eq!(c3.apply("meet", &[2, 1]), 1);
        assert_eq!(c3.apply("meet", &[0, 2]), 0);
        assert_eq!(semilattice2().apply("meet", &[1, 1]), 1);
    }

    #[test]
    fn cyclic_addition_wraps() {
        let z4 = cyclic_group(4);
        assert_eq!(z4.apply("add", &[3, 2]), 1);
        assert_eq!(z4.apply("add", &[0, 3]), 3);
    }

    #[test]
    fn null_algebra_is_constant() {
        let sig = Signature::new([("u", 2), ("k", 0)]).unwrap();
        let a = null_algebra(&sig, 3, 1);
        assert_eq!(a.apply("u", &[0, 2]), 1);
        assert_eq!(a.apply("k", &[]), 1);
    }
}
