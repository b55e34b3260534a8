//! Finite algebras over a graded signature, and their homomorphisms.
//!
//! A finite algebra has carrier `{0, .., size-1}` and, for every operation
//! symbol of arity `n`, a total evaluation table with `size^n` entries stored
//! row-major by argument order (first argument most significant). All
//! structural maps — homomorphisms, embeddings, projections — are verified
//! at construction, so holding a value of one of these types is proof that
//! the defining equations were checked.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::signature::Signature;
use crate::term::{Term, TermView};

/// Largest carrier size accepted by the exact isomorphism search.
pub const ISO_SIZE_LIMIT: usize = 8;

/// Default ceiling on table entries for product constructions.
pub const DEFAULT_TABLE_LIMIT: usize = 1 << 22;

/// Errors raised by finite-algebra constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// The carrier must have at least one element.
    #[error("ZeroSize: carrier must be nonempty")]
    ZeroSize,
    /// A symbol of the signature has no evaluation table.
    #[error("MissingTable: no table for operation symbol {0:?}")]
    MissingTable(String),
    /// A table was supplied for a symbol outside the signature.
    #[error("UnexpectedTable: table for unknown symbol {0:?}")]
    UnexpectedTable(String),
    /// A table has the wrong number of entries for its arity.
    #[error("WrongTableLength: symbol {symbol:?} expects {expected} entries, got {found}")]
    WrongTableLength {
        /// The offending symbol.
        symbol: String,
        /// `size^arity`.
        expected: usize,
        /// The supplied length.
        found: usize,
    },
    /// A table entry or map value falls outside the carrier.
    #[error("ValueOutOfRange: value {value} outside carrier of size {size}")]
    ValueOutOfRange {
        /// The offending value.
        value: usize,
        /// The carrier size it should lie below.
        size: usize,
    },
    /// Two structures that must share a signature do not.
    #[error("SignatureMismatch: the operands are over different signatures")]
    SignatureMismatch,
    /// A carrier-indexed map has the wrong length.
    #[error("WrongLength: expected a map of length {expected}, got {found}")]
    WrongLength {
        /// Expected length.
        expected: usize,
        /// Supplied length.
        found: usize,
    },
    /// The map does not commute with an operation.
    #[error("NotHomomorphism: the map does not commute with symbol {symbol:?}")]
    NotHomomorphism {
        /// A symbol witnessing the failure.
        symbol: String,
    },
    /// The partition is not compatible with an operation.
    #[error("NotCongruence: the partition is not compatible with symbol {symbol:?}")]
    NotCongruence {
        /// A symbol witnessing the failure.
        symbol: String,
    },
    /// An operation expected a nonempty list of algebras.
    #[error("EmptyList: expected at least one algebra")]
    EmptyList,
    /// A generated subalgebra came out empty (no generators, no constants).
    #[error("EmptyCarrier: no generators and no constants to start from")]
    EmptyCarrier,
    /// The map was required to be onto but is not.
    #[error("NotOnto: the homomorphism is not onto")]
    NotOnto,
    /// The binary operation is not associative.
    #[error("NotAssociative: the binary operation is not associative")]
    NotAssociative,
    /// The binary operation has no two-sided unit.
    #[error("NoUnit: the binary operation has no two-sided unit")]
    NoUnit,
    /// A term variable has no value under the given assignment.
    #[error("UnassignedVariable: no value for variable {0:?}")]
    UnassignedVariable(String),
    /// A term was required to be linear in a variable but is not.
    #[error("NotLinear: term is not linear in variable {0:?}")]
    NotLinear(String),
    /// An exact search was asked to exceed its size bound.
    #[error("BoundExceeded: instance size {size} exceeds the supported bound {limit}")]
    BoundExceeded {
        /// The offending size.
        size: usize,
        /// The bound.
        limit: usize,
    },
    /// A product construction would exceed the table-size budget.
    #[error("ProductTooLarge: construction exceeds {limit} table entries")]
    ProductTooLarge {
        /// The budget that would be exceeded.
        limit: usize,
    },
}

/// Iterates over all `len`-tuples with entries in `0..base`, in row-major
/// order (first position most significant). Yields the empty tuple once
/// when `len == 0`.
pub fn tuples(base: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if base == 0 && len > 0 {
        0
    } else {
        base.checked_pow(len as u32).expect("tuple space overflow")
    };
    (0..total).map(move |mut idx| {
        let mut t = vec![0; len];
        for slot in t.iter_mut().rev() {
            *slot = idx % base.max(1);
            idx /= base.max(1);
        }
        t
    })
}

/// Iterates over all tuples `(t_0, .., t_{k-1})` with `t_i < sizes[i]`,
/// row-major (first coordinate most significant).
pub(crate) fn mixed_tuples(sizes: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = sizes.iter().product();
    (0..total).map(move |idx| index_to_tuple(sizes, idx))
}

/// Row-major index of a tuple in the product of the given coordinate sizes.
pub fn tuple_to_index(sizes: &[usize], tuple: &[usize]) -> usize {
    debug_assert_eq!(sizes.len(), tuple.len());
    sizes
        .iter()
        .zip(tuple)
        .fold(0, |acc, (&s, &t)| {
            debug_assert!(t < s);
            acc * s + t
        })
}

/// Inverse of [`tuple_to_index`].
pub fn index_to_tuple(sizes: &[usize], mut index: usize) -> Vec<usize> {
    let mut t = vec![0; sizes.len()];
    for (slot, &s) in t.iter_mut().zip(sizes).rev() {
        *slot = index % s;
        index /= s;
    }
    t
}

/// A finite algebra: carrier `{0, .., size-1}` plus one table per symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    sig: Signature,
    size: usize,
    tables: BTreeMap<String, Vec<usize>>,
}

impl FiniteAlgebra {
    /// Builds an algebra, validating every table against the signature.
    pub fn new(
        sig: Signature,
        size: usize,
        tables: BTreeMap<String, Vec<usize>>,
    ) -> Result<Self, AlgebraError> {
        if size == 0 {
            return Err(AlgebraError::ZeroSize);
        }
        for name in tables.keys() {
            if !sig.contains(name) {
                return Err(AlgebraError::UnexpectedTable(name.clone()));
            }
        }
        for (name, arity) in sig.symbols() {
            let table = tables
                .get(name)
                .ok_or_else(|| AlgebraError::MissingTable(name.to_string()))?;
            let expected = size
                .checked_pow(arity as u32)
                .ok_or(AlgebraError::ProductTooLarge {
                    limit: DEFAULT_TABLE_LIMIT,
                })?;
            if table.len() != expected {
                return Err(AlgebraError::WrongTableLength {
                    symbol: name.to_string(),
                    expected,
                    found: table.len(),
                });
            }
            if let Some(&bad) = table.iter().find(|&&v| v >= size) {
                return Err(AlgebraError::ValueOutOfRange { value: bad, size });
            }
        }
        Ok(FiniteAlgebra { sig, size, tables })
    }

    /// The signature of the algebra.
    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// Carrier size.
    pub fn size(&self) -> usize {
        self.size
    }

    /// The carrier, as the range `0..size`.
    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    /// The raw table of a symbol. Panics if the symbol is unknown.
    pub fn table(&self, symbol: &str) -> &[usize] {
        &self.tables[symbol]
    }

    /// Applies the operation named `symbol` to `args`.
    ///
    /// Panics if the symbol is unknown, the argument count is wrong, or an
    /// argument is outside the carrier; callers hold validated data.
    pub fn apply(&self, symbol: &str, args: &[usize]) -> usize {
        let table = &self.tables[symbol];
        debug_assert_eq!(Some(args.len()), self.sig.arity(symbol));
        let idx = args.iter().fold(0, |acc, &a| {
            debug_assert!(a < self.size);
            acc * self.size + a
        });
        table[idx]
    }

    /// Evaluates a term under an assignment of carrier values to variables.
    ///
    /// Fails with `UnassignedVariable` when the term uses a variable missing
    /// from the assignment, `SignatureMismatch` when it uses an operation
    /// symbol that this algebra does not interpret (or interprets at a
    /// different arity), and `ValueOutOfRange` when an assigned value falls
    /// outside the carrier.
    pub fn eval(
        &self,
        term: &Term,
        assignment: &BTreeMap<String, usize>,
    ) -> Result<usize, AlgebraError> {
        match term.view() {
            TermView::Var(x) => {
                let &v = assignment
                    .get(x)
                    .ok_or_else(|| AlgebraError::UnassignedVariable(x.to_string()))?;
                if v >= self.size {
                    return Err(AlgebraError::ValueOutOfRange {
                        value: v,
                        size: self.size,
                    });
                }
                Ok(v)
            }
            TermView::App(f, args) => {
                if self.sig.arity(f) != Some(args.len()) {
                    return Err(AlgebraError::SignatureMismatch);
                }
                let vals = args
                    .iter()
                    .map(|a| self.eval(a, assignment))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(self.apply(f, &vals))
            }
        }
    }

    /// Direct product of a nonempty family of algebras over one signature.
    ///
    /// The carrier is the set of tuples indexed row-major (first factor most
    /// significant); operations act coordinatewise. Also returns the
    /// coordinate projections, which are onto homomorphisms.
    pub fn product(
        factors: &[FiniteAlgebra],
    ) -> Result<(FiniteAlgebra, Vec<Homomorphism>), AlgebraError> {
        Self::product_bounded(factors, DEFAULT_TABLE_LIMIT)
    }

    /// [`FiniteAlgebra::product`] with an explicit table-entry budget.
    pub fn product_bounded(
        factors: &[FiniteAlgebra],
        max_table_entries: usize,
    ) -> Result<(FiniteAlgebra, Vec<Homomorphism>), AlgebraError> {
        let first = factors.first().ok_or(AlgebraError::EmptyList)?;
        if factors.iter().any(|a| a.sig != first.sig) {
            return Err(AlgebraError::SignatureMismatch);
        }
        let sizes: Vec<usize> = factors.iter().map(|a| a.size).collect();
        let size = sizes
            .iter()
            .try_fold(1usize, |acc, &s| acc.checked_mul(s))
            .filter(|&s| s <= max_table_entries)
            .ok_or(AlgebraError::ProductTooLarge {
                limit: max_table_entries,
            })?;

        let mut tables = BTreeMap::new();
        for (name, arity) in first.sig.symbols() {
            let entries = size
                .checked_pow(arity as u32)
                .filter(|&e| e <= max_table_entries)
                .ok_or(AlgebraError::ProductTooLarge {
                    limit: max_table_entries,
                })?;
            let mut table = Vec::with_capacity(entries);
            for args in tuples(size, arity) {
                let arg_tuples: Vec<Vec<usize>> =
                    args.iter().map(|&a| index_to_tuple(&sizes, a)).collect();
                let result: Vec<usize> = factors
                    .iter()
                    .enumerate()
                    .map(|(i, f)| {
                        let coords: Vec<usize> = arg_tuples.iter().map(|t| t[i]).collect();
                        f.apply(name, &coords)
                    })
                    .collect();
                table.push(tuple_to_index(&sizes, &result));
            }
            tables.insert(name.to_string(), table);
        }
        let prod = FiniteAlgebra::new(first.sig.clone(), size, tables)?;
        let projections = factors
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let map = (0..size).map(|p| index_to_tuple(&sizes, p)[i]).collect();
                Homomorphism::new(prod.clone(), f.clone(), map)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((prod, projections))
    }

    /// The subalgebra generated by `generators`, with its embedding.
    ///
    /// The returned algebra's carrier lists the reached elements of `self`
    /// in increasing order; the homomorphism maps new indices to old ones.
    /// Fails with `EmptyCarrier` when there are neither generators nor
    /// constants.
    pub fn generated_subalgebra(
        &self,
        generators: &[usize],
    ) -> Result<(FiniteAlgebra, Homomorphism), AlgebraError> {
        if let Some(&bad) = generators.iter().find(|&&g| g >= self.size) {
            return Err(AlgebraError::ValueOutOfRange {
                value: bad,
                size: self.size,
            });
        }
        let mut reached: BTreeSet<usize> = generators.iter().copied().collect();
        loop {
            let current: Vec<usize> = reached.iter().copied().collect();
            let mut grew = false;
            for (name, arity) in self.sig.symbols() {
                for combo in tuples(current.len(), arity) {
                    let args: Vec<usize> = combo.iter().map(|&i| current[i]).collect();
                    if reached.insert(self.apply(name, &args)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        if reached.is_empty() {
            return Err(AlgebraError::EmptyCarrier);
        }
        let old_of_new: Vec<usize> = reached.iter().copied().collect();
        let new_of_old: BTreeMap<usize, usize> = old_of_new
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        let mut tables = BTreeMap::new();
        for (name, arity) in self.sig.symbols() {
            let table = tuples(old_of_new.len(), arity)
                .map(|combo| {
                    let args: Vec<usize> = combo.iter().map(|&i| old_of_new[i]).collect();
                    new_of_old[&self.apply(name, &args)]
                })
                .collect();
            tables.insert(name.to_string(), table);
        }
        let sub = FiniteAlgebra::new(self.sig.clone(), old_of_new.len(), tables)?;
        let embedding = Homomorphism::new(sub.clone(), self.clone(), old_of_new)?;
        Ok((sub, embedding))
    }
}

/// Exact isomorphism test by backtracking over images, for carriers of at
/// most [`ISO_SIZE_LIMIT`] elements.
///
/// Returns a witnessing bijection `map: a -> b` when one exists. Fails with
/// `SignatureMismatch` for different signatures and `BoundExceeded` above
/// the size limit; differing sizes simply yield `None`.
pub fn are_isomorphic(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
) -> Result<Option<Vec<usize>>, AlgebraError> {
    if a.sig != b.sig {
        return Err(AlgebraError::SignatureMismatch);
    }
    if a.size != b.size {
        return Ok(None);
    }
    if a.size > ISO_SIZE_LIMIT {
        return Err(AlgebraError::BoundExceeded {
            size: a.size,
            limit: ISO_SIZE_LIMIT,
        });
    }
    let mut map: Vec<Option<usize>> = vec![None; a.size];
    let mut used = vec![false; b.size];
    if extend_isomorphism(a, b, &mut map, &mut used, 0) {
        Ok(Some(map.into_iter().map(|m| m.expect("total")).collect()))
    } else {
        Ok(None)
    }
}

/// Checks every operation instance whose arguments are all assigned:
/// if the result is assigned it must map correctly, and if not, its
/// future image must still be free.
fn consistent_so_far(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[Option<usize>]) -> bool {
    let assigned: Vec<usize> = (0..a.size).filter(|&x| map[x].is_some()).collect();
    for (name, arity) in a.sig.symbols() {
        for combo in tuples(assigned.len(), arity) {
            let args: Vec<usize> = combo.iter().map(|&i| assigned[i]).collect();
            let image_args: Vec<usize> = args.iter().map(|&x| map[x].expect("assigned")).collect();
            let r = a.apply(name, &args);
            let fb = b.apply(name, &image_args);
            match map[r] {
                Some(mr) => {
                    if mr != fb {
                        return false;
                    }
                }
                None => {
                    // `r` must eventually map to `fb`; prune if `fb` is taken.
                    if map.iter().any(|m| *m == Some(fb)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn extend_isomorphism(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    map: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    pos: usize,
) -> bool {
    if pos == a.size {
        return true;
    }
    for im in 0..b.size {
        if used[im] {
            continue;
        }
        map[pos] = Some(im);
        used[im] = true;
        if consistent_so_far(a, b, map) && extend_isomorphism(a, b, map, used, pos + 1) {
            return true;
        }
        map[pos] = None;
        used[im] = false;
    }
    false
}

/// A homomorphism between two finite algebras, checked at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    source: FiniteAlgebra,
    target: FiniteAlgebra,
    map: Vec<usize>,
}

impl Homomorphism {
    /// Builds a homomorphism, verifying that `map` commutes with every
    /// operation of the common signature.
    pub fn new(
        source: FiniteAlgebra,
        target: FiniteAlgebra,
        map: Vec<usize>,
    ) -> Result<Self, AlgebraError> {
        if source.sig != target.sig {
            return Err(AlgebraError::SignatureMismatch);
        }
        if map.len() != source.size {
            return Err(AlgebraError::WrongLength {
                expected: source.size,
                found: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= target.size) {
            return Err(AlgebraError::ValueOutOfRange {
                value: bad,
                size: target.size,
            });
        }
        for (name, arity) in source.sig.symbols() {
            for args in tuples(source.size, arity) {
                let image_args: Vec<usize> = args.iter().map(|&x| map[x]).collect();
                if map[source.apply(name, &args)] != target.apply(name, &image_args) {
                    return Err(AlgebraError::NotHomomorphism {
                        symbol: name.to_string(),
                    });
                }
            }
        }
        Ok(Homomorphism {
            source,
            target,
            map,
        })
    }

    /// The source algebra.
    pub fn source(&self) -> &FiniteAlgebra {
        &self.source
    }

    /// The target algebra.
    pub fn target(&self) -> &FiniteAlgebra {
        &self.target
    }

    /// The underlying map as a slice indexed by source elements.
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Image of a single element.
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// The image set, sorted and deduplicated.
    pub fn image(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.map.iter().copied().collect();
        set.into_iter().collect()
    }

    /// True if every target element is hit.
    pub fn is_onto(&self) -> bool {
        self.image().len() == self.target.size
    }

    /// True if no two source elements share an image.
    pub fn is_injective(&self) -> bool {
        self.image().len() == self.source.size
    }

    /// Preimage of a set of target elements.
    pub fn preimage(&self, targets: &BTreeSet<usize>) -> BTreeSet<usize> {
        (0..self.source.size)
            .filter(|&x| targets.contains(&self.map[x]))
            .collect()
    }

    /// Composition `other . self` (apply `self` first). The target of
    /// `self` must equal the source of `other`.
    pub fn then(&self, other: &Homomorphism) -> Result<Homomorphism, AlgebraError> {
        if self.target != other.source {
            return Err(AlgebraError::SignatureMismatch);
        }
        let map = self.map.iter().map(|&x| other.map[x]).collect();
        Homomorphism::new(self.source.clone(), other.target.clone(), map)
    }
}
