//! Congruences on finite algebras.
//!
//! A congruence is an equivalence relation compatible with every operation:
//! replacing any argument by a related one moves the result within its
//! class. (Checking one argument position at a time suffices — related
//! tuples are linked by a chain of single-coordinate replacements, and
//! relatedness is transitive.)
//!
//! Partitions are stored as class-index arrays normalized by first
//! occurrence: element 0 is in class 0, and each later element either
//! reuses an earlier class or opens the next fresh index. Two partitions
//! are equal exactly when their normalized arrays are equal, so partition
//! comparison is array comparison throughout.
//!
//! `enumerate_congruences` walks all set partitions in restricted-growth-
//! string order and keeps the compatible ones. It is deliberately
//! brute-force: the rest of the crate treats it as the ground truth that
//! cleverer constructions (syntactic congruences, joins, kernels) are
//! measured against.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{tuples, AlgebraError, FiniteAlgebra, Homomorphism};

/// Largest carrier size accepted by [`enumerate_congruences`].
pub const CONGRUENCE_ENUM_LIMIT: usize = 6;

/// Renumbers labels by first occurrence; returns the normalized class-index
/// array and the number of classes.
pub fn normalize_by_key<K: Ord>(keys: impl IntoIterator<Item = K>) -> (Vec<usize>, usize) {
    let mut seen: BTreeMap<K, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for key in keys {
        let next = seen.len();
        out.push(*seen.entry(key).or_insert(next));
    }
    (out, seen.len())
}

/// A minimal union-find over `0..n` with path halving.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; returns true if they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            false
        } else {
            self.parent[ra.max(rb)] = ra.min(rb);
            true
        }
    }

    /// Normalized class-index array of the current partition.
    pub fn to_classes(&mut self) -> Vec<usize> {
        let roots: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        normalize_by_key(roots).0
    }
}

/// A congruence on a finite algebra, stored as a normalized partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    algebra: FiniteAlgebra,
    class_of: Vec<usize>,
    num_classes: usize,
}

impl Congruence {
    /// Wraps a partition of the carrier as a congruence, checking
    /// compatibility with every operation. Labels may be arbitrary; the
    /// stored array is normalized by first occurrence.
    pub fn new(algebra: FiniteAlgebra, class_of: Vec<usize>) -> Result<Self, AlgebraError> {
        if class_of.len() != algebra.size() {
            return Err(AlgebraError::WrongLength {
                expected: algebra.size(),
                found: class_of.len(),
            });
        }
        let (class_of, num_classes) = normalize_by_key(class_of);
        if let Some(symbol) = compatibility_violation(&algebra, &class_of) {
            return Err(AlgebraError::NotCongruence { symbol });
        }
        Ok(Congruence {
            algebra,
            class_of,
            num_classes,
        })
    }

    /// The identity (finest) congruence: every class a singleton.
    pub fn identity(algebra: FiniteAlgebra) -> Self {
        let class_of = (0..algebra.size()).collect();
        Congruence {
            num_classes: algebra.size(),
            algebra,
            class_of,
        }
    }

    /// The universal (coarsest) congruence: a single class.
    pub fn universal(algebra: FiniteAlgebra) -> Self {
        let class_of = vec![0; algebra.size()];
        Congruence {
            algebra,
            class_of,
            num_classes: 1,
        }
    }

    /// The smallest congruence relating every listed pair: the transitive
    /// closure of the pairs, re-saturated under compatibility to a fixpoint.
    pub fn generated_by(
        algebra: FiniteAlgebra,
        pairs: &[(usize, usize)],
    ) -> Result<Self, AlgebraError> {
        for &(a, b) in pairs {
            for v in [a, b] {
                if v >= algebra.size() {
                    return Err(AlgebraError::ValueOutOfRange {
                        value: v,
                        size: algebra.size(),
                    });
                }
            }
        }
        let mut uf = UnionFind::new(algebra.size());
        for &(a, b) in pairs {
            uf.union(a, b);
        }
        saturate_compatible(&algebra, &mut uf);
        let class_of = uf.to_classes();
        let num_classes = class_of.iter().max().map_or(0, |m| m + 1);
        Ok(Congruence {
            algebra,
            class_of,
            num_classes,
        })
    }

    /// The algebra this congruence lives on.
    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    /// Normalized class index of each element.
    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    /// Number of classes (the index of the congruence).
    pub fn index(&self) -> usize {
        self.num_classes
    }

    /// True if `a` and `b` lie in the same class.
    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    /// The classes as sorted lists of elements, indexed by class.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_classes];
        for (x, &c) in self.class_of.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    /// True if `set` is a union of classes.
    pub fn saturates(&self, set: &BTreeSet<usize>) -> bool {
        self.classes()
            .iter()
            .all(|class| class.iter().all(|x| set.contains(x)) || class.iter().all(|x| !set.contains(x)))
    }

    /// True if every class of `self` lies within a class of `other`.
    pub fn refines(&self, other: &Congruence) -> bool {
        debug_assert_eq!(self.algebra, other.algebra);
        let mut image: Vec<Option<usize>> = vec![None; self.num_classes];
        for (x, &c) in self.class_of.iter().enumerate() {
            match image[c] {
                None => image[c] = Some(other.class_of[x]),
                Some(haven) => {
                    if haven != other.class_of[x] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Join in the congruence lattice: the smallest congruence containing
    /// both. Computed as the transitive closure of the union of the two
    /// partitions followed by compatibility saturation (which is already a
    /// fixpoint for genuine congruences, but is re-run as a guard).
    pub fn join(&self, other: &Congruence) -> Result<Congruence, AlgebraError> {
        if self.algebra != other.algebra {
            return Err(AlgebraError::SignatureMismatch);
        }
        let mut pairs = partition_pairs(&self.class_of);
        pairs.extend(partition_pairs(&other.class_of));
        Congruence::generated_by(self.algebra.clone(), &pairs)
    }

    /// Meet in the congruence lattice: classes are intersections of classes.
    pub fn meet(&self, other: &Congruence) -> Result<Congruence, AlgebraError> {
        if self.algebra != other.algebra {
            return Err(AlgebraError::SignatureMismatch);
        }
        let keys: Vec<(usize, usize)> = self
            .class_of
            .iter()
            .zip(&other.class_of)
            .map(|(&a, &b)| (a, b))
            .collect();
        let (class_of, num_classes) = normalize_by_key(keys);
        Ok(Congruence {
            algebra: self.algebra.clone(),
            class_of,
            num_classes,
        })
    }

    /// The quotient algebra and the canonical projection onto it.
    pub fn quotient(&self) -> (FiniteAlgebra, Homomorphism) {
        let reps = self.classes().iter().map(|c| c[0]).collect::<Vec<_>>();
        let sig = self.algebra.signature().clone();
        let mut tables = BTreeMap::new();
        for (name, arity) in sig.symbols() {
            let table = tuples(self.num_classes, arity)
                .map(|classes| {
                    let args: Vec<usize> = classes.iter().map(|&c| reps[c]).collect();
                    self.class_of[self.algebra.apply(name, &args)]
                })
                .collect();
            tables.insert(name.to_string(), table);
        }
        let q = FiniteAlgebra::new(sig, self.num_classes, tables)
            .expect("quotient tables are valid by construction");
        let projection = Homomorphism::new(self.algebra.clone(), q.clone(), self.class_of.clone())
            .expect("projection is a homomorphism because the partition is compatible");
        (q, projection)
    }

    /// Pulls a congruence on the target of `phi` back along `phi`.
    ///
    /// The result relates `a, a'` exactly when `phi(a)` and `phi(a')` are
    /// related; it is a congruence because `phi` is a homomorphism.
    pub fn pullback(theta: &Congruence, phi: &Homomorphism) -> Result<Congruence, AlgebraError> {
        if theta.algebra != *phi.target() {
            return Err(AlgebraError::SignatureMismatch);
        }
        let labels: Vec<usize> = phi.map().iter().map(|&b| theta.class_of[b]).collect();
        let (class_of, num_classes) = normalize_by_key(labels);
        Ok(Congruence {
            algebra: phi.source().clone(),
            class_of,
            num_classes,
        })
    }
}

impl Homomorphism {
    /// The kernel congruence: classes are the fibers of the map.
    pub fn kernel(&self) -> Congruence {
        let (class_of, num_classes) = normalize_by_key(self.map().iter().copied());
        Congruence {
            algebra: self.source().clone(),
            class_of,
            num_classes,
        }
    }
}

/// Returns a symbol witnessing incompatibility, or `None` if the partition
/// is a congruence.
fn compatibility_violation(algebra: &FiniteAlgebra, class_of: &[usize]) -> Option<String> {
    let size = algebra.size();
    for (name, arity) in algebra.signature().symbols() {
        for args in tuples(size, arity) {
            let base = algebra.apply(name, &args);
            for i in 0..arity {
                for b in 0..size {
                    if class_of[b] != class_of[args[i]] {
                        continue;
                    }
                    let mut moved = args.clone();
                    moved[i] = b;
                    if class_of[algebra.apply(name, &moved)] != class_of[base] {
                        return Some(name.to_string());
                    }
                }
            }
        }
    }
    None
}

/// Merges classes until the union-find partition is compatible with every
/// operation of the algebra.
fn saturate_compatible(algebra: &FiniteAlgebra, uf: &mut UnionFind) {
    let size = algebra.size();
    loop {
        let mut changed = false;
        for (name, arity) in algebra.signature().symbols() {
            for args in tuples(size, arity) {
                let base = algebra.apply(name, &args);
                for i in 0..arity {
                    for b in 0..size {
                        if uf.find(b) != uf.find(args[i]) {
                            continue;
                        }
                        let mut moved = args.clone();
                        moved[i] = b;
                        let image = algebra.apply(name, &moved);
                        if uf.union(image, base) {
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// All pairs `(class representative, element)` of a partition — enough to
/// regenerate it inside a union-find.
fn partition_pairs(class_of: &[usize]) -> Vec<(usize, usize)> {
    let mut rep: BTreeMap<usize, usize> = BTreeMap::new();
    let mut pairs = Vec::new();
    for (x, &c) in class_of.iter().enumerate() {
        match rep.get(&c) {
            None => {
                rep.insert(c, x);
            }
            Some(&r) => pairs.push((r, x)),
        }
    }
    pairs
}

/// Enumerates every congruence of the algebra, finest first, by filtering
/// all set partitions (walked in restricted-growth-string order) through
/// the compatibility check. Exact but exponential: sizes above
/// [`CONGRUENCE_ENUM_LIMIT`] are rejected with `BoundExceeded`.
pub fn enumerate_congruences(
    algebra: &FiniteAlgebra,
) -> Result<Vec<Congruence>, AlgebraError> {
    let n = algebra.size();
    if n > CONGRUENCE_ENUM_LIMIT {
        return Err(AlgebraError::BoundExceeded {
            size: n,
            limit: CONGRUENCE_ENUM_LIMIT,
        });
    }
    let mut out = Vec::new();
    for rgs in restricted_growth_strings(n) {
        if compatibility_violation(algebra, &rgs).is_none() {
            let num_classes = rgs.iter().max().map_or(0, |m| m + 1);
            out.push(Congruence {
                algebra: algebra.clone(),
                class_of: rgs,
                num_classes,
            });
        }
    }
    // Finest first: fewer merged elements means more classes.
    out.sort_by(|a, b| b.num_classes.cmp(&a.num_classes));
    Ok(out)
}

/// All restricted growth strings of length `n`: `a[0] = 0` and
/// `a[i] <= 1 + max(a[..i])`. These are exactly the normalized class-index
/// arrays, one per set partition.
fn restricted_growth_strings(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut current = vec![0usize; n];
    fn go(current: &mut Vec<usize>, pos: usize, max_used: usize, out: &mut Vec<Vec<usize>>) {
        if pos == current.len() {
            out.push(current.clone());
            return;
        }
        for label in 0..=max_used + 1 {
            current[pos] = label;
            go(current, pos + 1, max_used.max(label), out);
        }
    }
    go(&mut current, 1, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic_group, semilattice2};

    #[test]
    fn restricted_growth_strings_count_set_partitions() {
        // Bell numbers: 1, 1, 2, 5, 15, 52, 203.
        let bell = [1usize, 1, 2, 5, 15, 52, 203];
        for (n, &b) in bell.iter().enumerate().skip(1) {
            assert_eq!(restricted_growth_strings(n).len(), b, "n = {n}");
        }
    }

    #[test]
    fn congruences_of_small_cyclic_groups_match_subgroups() {
        // Congruences of Z_n correspond to divisors of n.
        assert_eq!(enumerate_congruences(&cyclic_group(4)).unwrap().len(), 3);
        assert_eq!(enumerate_congruences(&cyclic_group(6)).unwrap().len(), 4);
        assert_eq!(enumerate_congruences(&cyclic_group(5)).unwrap().len(), 2);
        // Both partitions of a two-element semilattice are congruences.
        assert_eq!(enumerate_congruences(&semilattice2()).unwrap().len(), 2);
    }

    #[test]
    fn enumeration_is_bounded() {
        assert_eq!(
            enumerate_congruences(&cyclic_group(7)).err(),
            Some(AlgebraError::BoundExceeded { size: 7, limit: 6 })
        );
    }

    #[test]
    fn construction_normalizes_and_checks() {
        let z4 = cyclic_group(4);
        let theta = Congruence::new(z4.clone(), vec![7, 3, 7, 3]).unwrap();
        assert_eq!(theta.class_of(), &[0, 1, 0, 1]);
        assert_eq!(theta.index(), 2);
        assert!(theta.related(0, 2) && !theta.related(0, 1));

        let bad = Congruence::new(z4, vec![0, 0, 1, 2]);
        assert_eq!(
            bad.err(),
            Some(AlgebraError::NotCongruence {
                symbol: "add".into()
            })
        );
    }

    #[test]
    fn generated_congruences_saturate() {
        let z4 = cyclic_group(4);
        let even = Congruence::generated_by(z4.clone(), &[(0, 2)]).unwrap();
        assert_eq!(even.class_of(), &[0, 1, 0, 1]);
        // Relating adjacent elements collapses everything.
        let all = Congruence::generated_by(z4, &[(0, 1)]).unwrap();
        assert_eq!(all.index(), 1);
    }

    #[test]
    fn join_and_meet_behave_like_lattice_operations() {
        let z6 = cyclic_group(6);
        let by2 = Congruence::generated_by(z6.clone(), &[(0, 2)]).unwrap();
        let by3 = Congruence::generated_by(z6.clone(), &[(0, 3)]).unwrap();
        assert_eq!(by2.index(), 2);
        assert_eq!(by3.index(), 3);
        // lcm-style meet, gcd-style join.
        assert_eq!(by2.meet(&by3).unwrap(), Congruence::identity(z6.clone()));
        assert_eq!(by2.join(&by3).unwrap(), Congruence::universal(z6.clone()));
        let id = Congruence::identity(z6.clone());
        assert_eq!(id.join(&by2).unwrap(), by2);
        assert_eq!(Congruence::universal(z6).meet(&by2).unwrap(), by2);
    }

    #[test]
    fn quotient_and_kernel_are_inverse_views() {
        let z4 = cyclic_group(4);
        let even = Congruence::generated_by(z4.clone(), &[(0, 2)]).unwrap();
        let (q, pi) = even.quotient();
        assert_eq!(q, cyclic_group(2));
        assert!(pi.is_onto());
        assert_eq!(pi.kernel(), even);
        // Quotient by the identity congruence is the algebra itself.
        let (same, _) = Congruence::identity(z4.clone()).quotient();
        assert_eq!(same, z4);
    }

    #[test]
    fn pullback_along_projection_recovers_the_kernel() {
        let z4 = cyclic_group(4);
        let even = Congruence::generated_by(z4.clone(), &[(0, 2)]).unwrap();
        let (q, pi) = even.quotient();
        let pulled = Congruence::pullback(&Congruence::identity(q), &pi).unwrap();
        assert_eq!(pulled, even);
    }

    #[test]
    fn saturation_and_refinement() {
        let z6 = cyclic_group(6);
        let by3 = Congruence::generated_by(z6.clone(), &[(0, 3)]).unwrap();
        // {0, 3} is a class; {0, 3, 1, 4} is a union of classes.
        assert!(by3.saturates(&BTreeSet::from([0, 3])));
        assert!(by3.saturates(&BTreeSet::from([0, 1, 3, 4])));
        assert!(!by3.saturates(&BTreeSet::from([0, 1])));
        assert!(Congruence::identity(z6.clone()).refines(&by3));
        assert!(by3.refines(&Congruence::universal(z6.clone())));
        assert!(!by3.refines(&Congruence::identity(z6)));
    }

    #[test]
    fn quotient_by_the_kernel_is_isomorphic_to_the_image() {
        // Random homomorphisms: project along a random congruence,
        // relabel the quotient by a random permutation, and embed it as
        // the low indices of a larger algebra with junk entries above.
        use crate::algebra::{are_isomorphic, tuples};
        use crate::random::{random_algebra, random_congruence};
        use crate::signature::Signature;
        use rand::{Rng, SeedableRng};

        let sig = Signature::new([("f".to_string(), 2), ("g".to_string(), 1)]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let size = rng.random_range(2..=5);
            let a = random_algebra(&mut rng, &sig, size);
            let theta = random_congruence(&mut rng, &a);
            let (q, pi) = theta.clone().quotient();

            let mut perm: Vec<usize> = (0..q.size()).collect();
            for i in (1..perm.len()).rev() {
                perm.swap(i, rng.random_range(0..=i));
            }
            let extra = rng.random_range(0..=2);
            let big = q.size() + extra;
            let mut tables = BTreeMap::new();
            for (symbol, arity) in sig.symbols() {
                let table: Vec<usize> = tuples(big, arity)
                    .map(|args| {
                        // Pull the argument tuple back through the
                        // permutation when it lies in the embedded copy.
                        let inner: Option<Vec<usize>> = args
                            .iter()
                            .map(|&x| perm.iter().position(|&p| p == x))
                            .collect();
                        match inner {
                            Some(inner) if args.iter().all(|&x| x < q.size()) => {
                                perm[q.apply(symbol, &inner)]
                            }
                            _ => rng.random_range(0..big),
                        }
                    })
                    .collect();
                tables.insert(symbol.to_string(), table);
            }
            let c = FiniteAlgebra::new(sig.clone(), big, tables).unwrap();
            let map: Vec<usize> = (0..size).map(|x| perm[pi.apply(x)]).collect();
            let phi = Homomorphism::new(a.clone(), c.clone(), map).unwrap();

            let kernel = phi.kernel();
            assert_eq!(kernel, theta, "relabelling must not disturb the kernel");
            let (quotient, _) = kernel.quotient();
            let image: Vec<usize> = phi.image().iter().copied().collect();
            let (image_algebra, _) = c.generated_subalgebra(&image).unwrap();
            assert_eq!(image_algebra.size(), q.size());
            assert!(
                are_isomorphic(&quotient, &image_algebra).unwrap().is_some(),
                "quotient by the kernel must be isomorphic to the image"
            );
        }
    }
}
