//! Finite Boolean algebras of sets, tensor products, meshes, and duality.
//!
//! A `SetBooleanAlgebra` is a Boolean subalgebra of the powerset of a
//! finite universe, stored by its atom partition: the elements are exactly
//! the unions of atoms. Tensor products live over the product universe
//! with products of atoms as atoms, and membership of a set in a tensor is
//! a bitset test (is it a union of tensor atoms?).
//!
//! `canonical_mesh` decomposes a member of a tensor into a disjoint union
//! of boxes whose sides are classes of the per-coordinate slice
//! equivalences — the coarsest mesh that works.
//!
//! The duality layer identifies ultrafilters of a finite Boolean algebra
//! with its atoms. When an algebra of sets over a finite algebra's carrier
//! satisfies the star condition (operation preimages of elements decompose
//! inside the tensor), the atoms themselves carry algebra operations
//! (`ultrafilter_op`), giving a finite algebra back (`algebra_from_dual`).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::algebra::{
    are_isomorphic, index_to_tuple, mixed_tuples, tuple_to_index, tuples, AlgebraError,
    FiniteAlgebra, Homomorphism,
};
use crate::bitset::BitSet;
use crate::congruence::{normalize_by_key, Congruence};

/// Default cap on the number of points of a tensor universe.
pub const TENSOR_UNIVERSE_LIMIT: usize = 1 << 16;

/// Errors from Boolean set algebras and the duality layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BooleError {
    /// The proposed atoms do not disjointly cover the universe.
    #[error("NotPartition: atoms must disjointly cover the universe")]
    NotPartition,
    /// Two operands live over different universes (or one does not match
    /// the relevant carrier).
    #[error("UniverseMismatch: operands live over different universes")]
    UniverseMismatch,
    /// A product universe exceeds the configured bound.
    #[error("UniverseTooLarge: product universe of {size} points exceeds the limit {limit}")]
    UniverseTooLarge {
        /// The requested universe size.
        size: usize,
        /// The configured limit.
        limit: usize,
    },
    /// The set is not a union of tensor atoms.
    #[error("NotInTensor: the set is not a union of tensor atoms")]
    NotInTensor,
    /// An operation image of an atom box meets more than one atom, so the
    /// ultrafilter operation is undefined.
    #[error("StarViolated: the image of an atom box under {symbol} meets several atoms")]
    StarViolated {
        /// The operation symbol whose image straddles atoms.
        symbol: String,
    },
    /// The first algebra's elements are not all elements of the second.
    #[error("NotSubalgebra: the atoms do not refine the claimed subalgebra")]
    NotSubalgebra,
    /// The set is not an element of the algebra (not a union of atoms).
    #[error("NotElement: the set is not a union of atoms")]
    NotElement,
    /// An atom index outside the atom list.
    #[error("AtomOutOfRange: atom {atom} of {count}")]
    AtomOutOfRange {
        /// The offending index.
        atom: usize,
        /// How many atoms there are.
        count: usize,
    },
    /// An empty list where at least one operand is required.
    #[error("EmptyList: need at least one operand")]
    EmptyList,
    /// A symbol/arity disagreement with the relevant signature.
    #[error("SignatureMismatch: symbol or arity disagrees with the signature")]
    SignatureMismatch,
    /// An underlying algebra-layer error.
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A finite-case ultrafilter: an atom index.
pub type Ultrafilter = usize;

/// A Boolean subalgebra of the powerset of `{0..universe-1}`, stored by
/// its atom partition. Elements are exactly the unions of atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetBooleanAlgebra {
    universe: usize,
    atoms: Vec<BitSet>,
}

impl SetBooleanAlgebra {
    /// Builds an algebra from an explicit atom partition. Atoms are
    /// reordered canonically by least point.
    pub fn new(universe: usize, mut atoms: Vec<BitSet>) -> Result<Self, BooleError> {
        let mut seen = BitSet::empty(universe);
        for atom in &atoms {
            if atom.len() != universe || atom.is_empty() || !seen.is_disjoint(atom) {
                return Err(BooleError::NotPartition);
            }
            seen = seen.union(atom);
        }
        if seen != BitSet::full(universe) {
            return Err(BooleError::NotPartition);
        }
        atoms.sort_by_key(|a| a.iter().next().expect("atoms are nonempty"));
        Ok(SetBooleanAlgebra { universe, atoms })
    }

    /// The two-element algebra `{∅, universe}`.
    pub fn trivial(universe: usize) -> Self {
        let atoms = if universe == 0 {
            Vec::new()
        } else {
            vec![BitSet::full(universe)]
        };
        SetBooleanAlgebra { universe, atoms }
    }

    /// The full powerset: singleton atoms.
    pub fn powerset(universe: usize) -> Self {
        let atoms = (0..universe)
            .map(|i| BitSet::singleton(universe, i))
            .collect();
        SetBooleanAlgebra { universe, atoms }
    }

    /// The algebra of sets saturated by a congruence: atoms = classes.
    pub fn from_congruence(theta: &Congruence) -> Self {
        let universe = theta.algebra().size();
        let atoms = theta
            .classes()
            .into_iter()
            .map(|class| BitSet::from_indices(universe, class))
            .collect();
        SetBooleanAlgebra { universe, atoms }
    }

    /// Number of points of the universe.
    pub fn universe(&self) -> usize {
        self.universe
    }

    /// The atom partition, ordered by least point.
    pub fn atoms(&self) -> &[BitSet] {
        &self.atoms
    }

    /// Number of atoms.
    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// Index of the atom containing a point.
    pub fn atom_of_point(&self, point: usize) -> usize {
        assert!(point < self.universe, "point outside the universe");
        self.atoms
            .iter()
            .position(|a| a.contains(point))
            .expect("atoms cover the universe")
    }

    /// Whether a set is an element: a union of atoms.
    pub fn contains_set(&self, set: &BitSet) -> bool {
        set.len() == self.universe
            && set
                .iter()
                .all(|p| self.atoms[self.atom_of_point(p)].is_subset(set))
    }

    /// All elements: the `2^atom_count` unions of atoms. Exponential —
    /// callers keep atom counts small.
    pub fn elements(&self) -> impl Iterator<Item = BitSet> + '_ {
        let n = self.atoms.len();
        assert!(n < 64, "too many atoms to enumerate elements");
        (0..(1u64 << n)).map(move |mask| {
            let mut e = BitSet::empty(self.universe);
            for (i, atom) in self.atoms.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    e = e.union(atom);
                }
            }
            e
        })
    }

    /// The element that is the union of the listed atoms.
    pub fn element_from_atoms(
        &self,
        atom_indices: impl IntoIterator<Item = usize>,
    ) -> Result<BitSet, BooleError> {
        let mut e = BitSet::empty(self.universe);
        for i in atom_indices {
            let atom = self.atoms.get(i).ok_or(BooleError::AtomOutOfRange {
                atom: i,
                count: self.atoms.len(),
            })?;
            e = e.union(atom);
        }
        Ok(e)
    }

    /// Whether every element of `self` is an element of `other` (i.e.
    /// `self` is a Boolean subalgebra of `other`). Holds exactly when each
    /// atom of `self` is a union of atoms of `other`.
    pub fn is_subalgebra_of(&self, other: &SetBooleanAlgebra) -> bool {
        self.universe == other.universe && self.atoms.iter().all(|a| other.contains_set(a))
    }
}

/// The least Boolean algebra of sets containing the generators: atoms are
/// the nonempty intersections over all sign patterns, computed by grouping
/// points by their membership profile.
pub fn generate_boolean_algebra(
    universe: usize,
    generators: &[BitSet],
) -> Result<SetBooleanAlgebra, BooleError> {
    if generators.iter().any(|g| g.len() != universe) {
        return Err(BooleError::UniverseMismatch);
    }
    let mut blocks: BTreeMap<Vec<bool>, BitSet> = BTreeMap::new();
    for p in 0..universe {
        let profile: Vec<bool> = generators.iter().map(|g| g.contains(p)).collect();
        blocks
            .entry(profile)
            .or_insert_with(|| BitSet::empty(universe))
            .insert(p);
    }
    SetBooleanAlgebra::new(universe, blocks.into_values().collect())
}

/// The intersection of two Boolean algebras of sets over one universe: the
/// largest algebra contained in both. Its atoms are found by merging the
/// two atom partitions with a union-find (points sharing an atom on either
/// side must share an atom in the intersection).
pub fn intersect_algebras(
    a: &SetBooleanAlgebra,
    b: &SetBooleanAlgebra,
) -> Result<SetBooleanAlgebra, BooleError> {
    if a.universe != b.universe {
        return Err(BooleError::UniverseMismatch);
    }
    let mut uf = crate::congruence::UnionFind::new(a.universe);
    for atom in a.atoms.iter().chain(b.atoms.iter()) {
        let mut points = atom.iter();
        if let Some(first) = points.next() {
            for p in points {
                uf.union(first, p);
            }
        }
    }
    let class_of = uf.to_classes();
    let count = class_of.iter().copied().max().map_or(0, |m| m + 1);
    let mut atoms = vec![BitSet::empty(a.universe); count];
    for (p, &c) in class_of.iter().enumerate() {
        atoms[c].insert(p);
    }
    SetBooleanAlgebra::new(a.universe, atoms)
}

/// The join of two Boolean algebras of sets: the algebra generated by
/// their union, whose atoms are the nonempty pairwise intersections of
/// atoms (the common refinement).
pub fn join_algebras(
    a: &SetBooleanAlgebra,
    b: &SetBooleanAlgebra,
) -> Result<SetBooleanAlgebra, BooleError> {
    if a.universe != b.universe {
        return Err(BooleError::UniverseMismatch);
    }
    let mut atoms = Vec::new();
    for x in &a.atoms {
        for y in &b.atoms {
            let meet = x.intersect(y);
            if !meet.is_empty() {
                atoms.push(meet);
            }
        }
    }
    SetBooleanAlgebra::new(a.universe, atoms)
}

/// [`tensor_bounded`] with the default universe cap.
pub fn tensor(factors: &[SetBooleanAlgebra]) -> Result<SetBooleanAlgebra, BooleError> {
    tensor_bounded(factors, TENSOR_UNIVERSE_LIMIT)
}

/// The tensor product: over the product universe (row-major, first factor
/// most significant), with products of atoms as atoms. Elements are
/// exactly the finite unions of boxes with element sides.
pub fn tensor_bounded(
    factors: &[SetBooleanAlgebra],
    max_universe: usize,
) -> Result<SetBooleanAlgebra, BooleError> {
    if factors.is_empty() {
        return Err(BooleError::EmptyList);
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.universe).collect();
    let universe = sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .filter(|&u| u <= max_universe)
        .ok_or(BooleError::UniverseTooLarge {
            size: usize::MAX,
            limit: max_universe,
        })
        .map_err(|e| match e {
            BooleError::UniverseTooLarge { limit, .. } => {
                let size = sizes.iter().fold(1f64, |a, &s| a * s as f64) as usize;
                BooleError::UniverseTooLarge { size, limit }
            }
            other => other,
        })?;
    let mut atoms = Vec::new();
    let counts: Vec<usize> = factors.iter().map(|f| f.atom_count()).collect();
    for combo in mixed_tuples(&counts) {
        let blocks: Vec<Vec<usize>> = combo
            .iter()
            .zip(factors)
            .map(|(&i, f)| f.atoms[i].iter().collect())
            .collect();
        let mut atom = BitSet::empty(universe);
        for point in block_tuples(&blocks) {
            atom.insert(tuple_to_index(&sizes, &point));
        }
        atoms.push(atom);
    }
    SetBooleanAlgebra::new(universe, atoms)
}

/// Whether `p` (over the product universe of the factors) is an element of
/// the tensor of the factors: a union of tensor atoms. Decided pointwise
/// without materialising the tensor.
pub fn tensor_member(
    p: &BitSet,
    factors: &[SetBooleanAlgebra],
) -> Result<bool, BooleError> {
    if factors.is_empty() {
        return Err(BooleError::EmptyList);
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.universe).collect();
    let universe: usize = sizes.iter().product();
    if p.len() != universe {
        return Err(BooleError::UniverseMismatch);
    }
    for point in p.iter() {
        let tuple = index_to_tuple(&sizes, point);
        let blocks: Vec<Vec<usize>> = tuple
            .iter()
            .zip(factors)
            .map(|(&s, f)| f.atoms[f.atom_of_point(s)].iter().collect())
            .collect();
        for other in block_tuples(&blocks) {
            if !p.contains(tuple_to_index(&sizes, &other)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A box: the Cartesian product of one factor set per coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parallelepiped {
    /// One side per coordinate, each a subset of that coordinate universe.
    pub factors: Vec<BitSet>,
}

impl Parallelepiped {
    /// The set of product-universe points the box denotes.
    pub fn points(&self) -> BitSet {
        let sizes: Vec<usize> = self.factors.iter().map(|f| f.len()).collect();
        let universe: usize = sizes.iter().product();
        let blocks: Vec<Vec<usize>> = self.factors.iter().map(|f| f.iter().collect()).collect();
        let mut set = BitSet::empty(universe);
        for tuple in block_tuples(&blocks) {
            set.insert(tuple_to_index(&sizes, &tuple));
        }
        set
    }
}

/// Per-coordinate partitions witnessing a set as a union of boxes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mesh {
    /// One partition per coordinate; every class is an element of the
    /// respective coordinate algebra.
    pub partitions: Vec<Vec<BitSet>>,
}

/// The canonical mesh and box decomposition of a tensor element.
///
/// For each coordinate, two points are slice-equivalent when exchanging
/// them preserves membership in `p` whatever the other coordinates are;
/// the mesh partitions are the classes of these equivalences, and `p`
/// decomposes as the disjoint union of the class boxes of its points.
/// Checked on the way out: each class is an element of its coordinate
/// algebra, and the decomposition is disjoint and exactly covers `p`.
pub fn canonical_mesh(
    p: &BitSet,
    factors: &[SetBooleanAlgebra],
) -> Result<(Mesh, Vec<Parallelepiped>), BooleError> {
    if !tensor_member(p, factors)? {
        return Err(BooleError::NotInTensor);
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.universe).collect();

    // Slice signature of point s in coordinate i: which contexts (tuples
    // over the other coordinates) put s inside p.
    let mut class_of_per_coord: Vec<Vec<usize>> = Vec::with_capacity(sizes.len());
    let mut partitions: Vec<Vec<BitSet>> = Vec::with_capacity(sizes.len());
    for (i, &size_i) in sizes.iter().enumerate() {
        let other_sizes: Vec<usize> = sizes
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &s)| s)
            .collect();
        let contexts: Vec<Vec<usize>> = mixed_tuples(&other_sizes).collect();
        let keys: Vec<Vec<bool>> = (0..size_i)
            .map(|s| {
                contexts
                    .iter()
                    .map(|ctx| {
                        let mut tuple = ctx.clone();
                        tuple.insert(i, s);
                        p.contains(tuple_to_index(&sizes, &tuple))
                    })
                    .collect()
            })
            .collect();
        let (class_of, count) = normalize_by_key(keys);
        let mut classes = vec![BitSet::empty(size_i); count];
        for (s, &c) in class_of.iter().enumerate() {
            classes[c].insert(s);
        }
        for class in &classes {
            if !factors[i].contains_set(class) {
                // For a tensor element every slice class is a union of
                // coordinate atoms; reaching this line means the
                // membership check above is broken.
                unreachable!("slice class escapes its coordinate algebra");
            }
        }
        class_of_per_coord.push(class_of);
        partitions.push(classes);
    }

    // One box per class-tuple met by a point of p.
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for point in p.iter() {
        let tuple = index_to_tuple(&sizes, point);
        let class_tuple: Vec<usize> = tuple
            .iter()
            .enumerate()
            .map(|(i, &s)| class_of_per_coord[i][s])
            .collect();
        seen.insert(class_tuple);
    }
    let cells: Vec<Parallelepiped> = seen
        .into_iter()
        .map(|class_tuple| Parallelepiped {
            factors: class_tuple
                .iter()
                .enumerate()
                .map(|(i, &c)| partitions[i][c].clone())
                .collect(),
        })
        .collect();

    // Exactness: distinct class tuples give disjoint boxes, and the box of
    // a member point stays inside p (slice equivalence moves one
    // coordinate at a time without leaving p).
    let mut union = BitSet::empty(p.len());
    for cell in &cells {
        let pts = cell.points();
        debug_assert!(union.is_disjoint(&pts), "decomposition cells overlap");
        union = union.union(&pts);
    }
    assert_eq!(union, *p, "decomposition must cover p exactly");

    Ok((Mesh { partitions }, cells))
}

/// Membership of `p` on both sides of the tensor-of-intersections
/// equation: the left side intersects the per-`j` tensors, the right side
/// tensors the per-coordinate intersections. Returns the two memberships
/// `(in every tensor, in the tensor of intersections)`; they agree on
/// every valid input.
pub fn check_oplus_vs_cap(
    families: &[Vec<SetBooleanAlgebra>],
    p: &BitSet,
) -> Result<(bool, bool), BooleError> {
    if families.is_empty() || families.iter().any(|f| f.is_empty()) {
        return Err(BooleError::EmptyList);
    }
    let j_count = families[0].len();
    if families.iter().any(|f| f.len() != j_count) {
        return Err(BooleError::UniverseMismatch);
    }
    for family in families {
        if family.iter().any(|b| b.universe != family[0].universe) {
            return Err(BooleError::UniverseMismatch);
        }
    }

    let mut left = true;
    for j in 0..j_count {
        let slice: Vec<SetBooleanAlgebra> =
            families.iter().map(|f| f[j].clone()).collect();
        left &= tensor_member(p, &slice)?;
    }

    let meets: Vec<SetBooleanAlgebra> = families
        .iter()
        .map(|family| {
            let mut acc = family[0].clone();
            for b in &family[1..] {
                acc = intersect_algebras(&acc, b)?;
            }
            Ok(acc)
        })
        .collect::<Result<_, BooleError>>()?;
    let right = tensor_member(p, &meets)?;
    Ok((left, right))
}

/// The star condition at finite scale: for every operation symbol of
/// positive arity and every element `L` of `B`, the preimage of `L` under
/// the operation is an element of the tensor of arity-many copies of `B`.
/// (Nullary symbols pass trivially: their preimage lives over a one-point
/// universe.)
pub fn star_check(
    algebra: &FiniteAlgebra,
    b: &SetBooleanAlgebra,
) -> Result<bool, BooleError> {
    if b.universe != algebra.size() {
        return Err(BooleError::UniverseMismatch);
    }
    let size = algebra.size();
    for (symbol, arity) in algebra.signature().symbols() {
        if arity == 0 {
            continue;
        }
        let arg_sizes = vec![size; arity];
        let copies = vec![b.clone(); arity];
        for element in b.elements() {
            let mut preimage = BitSet::empty(size.pow(arity as u32));
            for args in tuples(size, arity) {
                if element.contains(algebra.apply(symbol, &args)) {
                    preimage.insert(tuple_to_index(&arg_sizes, &args));
                }
            }
            if !tensor_member(&preimage, &copies)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The operation induced on ultrafilters (= atoms): the image of the atom
/// box under the symbol must land inside a single atom, which is returned.
/// Straddling several atoms means the star condition fails at this box.
pub fn ultrafilter_op(
    algebra: &FiniteAlgebra,
    b: &SetBooleanAlgebra,
    symbol: &str,
    atom_args: &[Ultrafilter],
) -> Result<Ultrafilter, BooleError> {
    if b.universe != algebra.size() {
        return Err(BooleError::UniverseMismatch);
    }
    let arity = algebra
        .signature()
        .arity(symbol)
        .ok_or(BooleError::SignatureMismatch)?;
    if arity != atom_args.len() {
        return Err(BooleError::SignatureMismatch);
    }
    let blocks: Vec<Vec<usize>> = atom_args
        .iter()
        .map(|&i| {
            b.atoms
                .get(i)
                .map(|a| a.iter().collect())
                .ok_or(BooleError::AtomOutOfRange {
                    atom: i,
                    count: b.atom_count(),
                })
        })
        .collect::<Result<_, _>>()?;
    let mut image = BitSet::empty(algebra.size());
    for tuple in block_tuples(&blocks) {
        image.insert(algebra.apply(symbol, &tuple));
    }
    let first = image.iter().next().expect("atom boxes are nonempty");
    let atom = b.atom_of_point(first);
    if !image.is_subset(&b.atoms[atom]) {
        return Err(BooleError::StarViolated {
            symbol: symbol.to_string(),
        });
    }
    Ok(atom)
}

/// The finite algebra carried by the dual space: carrier = atoms of `B`,
/// operations = [`ultrafilter_op`]. Fails with `StarViolated` when some
/// atom box has an image straddling atoms.
pub fn algebra_from_dual(
    algebra: &FiniteAlgebra,
    b: &SetBooleanAlgebra,
) -> Result<FiniteAlgebra, BooleError> {
    if b.universe != algebra.size() {
        return Err(BooleError::UniverseMismatch);
    }
    let size = b.atom_count();
    let mut tables = BTreeMap::new();
    for (symbol, arity) in algebra.signature().symbols() {
        let mut table = Vec::with_capacity(size.pow(arity as u32));
        for args in tuples(size, arity) {
            table.push(ultrafilter_op(algebra, b, symbol, &args)?);
        }
        tables.insert(symbol.to_string(), table);
    }
    Ok(FiniteAlgebra::new(
        algebra.signature().clone(),
        size,
        tables,
    )?)
}

/// The dual space: one ultrafilter per atom.
pub fn dual_space(b: &SetBooleanAlgebra) -> Vec<Ultrafilter> {
    (0..b.atom_count()).collect()
}

/// The basic open set of an element: the ultrafilters (atoms) below it,
/// as a bitset over atom indices. The element must belong to the algebra.
pub fn basic_open(b: &SetBooleanAlgebra, element: &BitSet) -> Result<BitSet, BooleError> {
    if !b.contains_set(element) {
        return Err(BooleError::NotElement);
    }
    Ok(BitSet::from_indices(
        b.atom_count(),
        b.atoms
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_subset(element))
            .map(|(i, _)| i),
    ))
}

/// The dual of a Boolean-algebra inclusion `B ⊆ C`: the map sending each
/// `C`-atom to the `B`-atom containing it, as a checked onto homomorphism
/// from the dual algebra of `C` to the dual algebra of `B`.
pub fn dual_of_inclusion(
    algebra: &FiniteAlgebra,
    b: &SetBooleanAlgebra,
    c: &SetBooleanAlgebra,
) -> Result<Homomorphism, BooleError> {
    if b.universe != c.universe || b.universe != algebra.size() {
        return Err(BooleError::UniverseMismatch);
    }
    if !b.is_subalgebra_of(c) {
        return Err(BooleError::NotSubalgebra);
    }
    let map: Vec<usize> = c
        .atoms
        .iter()
        .map(|atom| {
            let point = atom.iter().next().expect("atoms are nonempty");
            b.atom_of_point(point)
        })
        .collect();
    let dual_c = algebra_from_dual(algebra, c)?;
    let dual_b = algebra_from_dual(algebra, b)?;
    let hom = Homomorphism::new(dual_c, dual_b, map)?;
    debug_assert!(hom.is_onto());
    Ok(hom)
}

/// Full duality roundtrip for a generated finite algebra: the powerset of
/// the carrier (every subset is recognizable at finite scale) dualizes
/// back to an algebra isomorphic to the original. `gens` must generate the
/// algebra.
pub fn reconstruct_check(
    s: &FiniteAlgebra,
    gens: &[usize],
) -> Result<bool, BooleError> {
    let (sub, _) = s.generated_subalgebra(gens)?;
    if sub.size() != s.size() {
        return Err(BooleError::NotSubalgebra);
    }
    let b = SetBooleanAlgebra::powerset(s.size());
    let dual = algebra_from_dual(s, &b)?;
    Ok(are_isomorphic(s, &dual)?.is_some())
}

/// All point tuples of a list of blocks (one point per block), in
/// row-major order of block positions.
fn block_tuples(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let lens: Vec<usize> = blocks.iter().map(|b| b.len()).collect();
    mixed_tuples(&lens)
        .map(|idx| idx.iter().zip(blocks).map(|(&k, b)| b[k]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic_group, semilattice2};
    use crate::random::{random_algebra, random_boolean_algebra, random_congruence};
    use crate::signature::Signature;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bits(universe: usize, points: &[usize]) -> BitSet {
        BitSet::from_indices(universe, points.iter().copied())
    }

    #[test]
    fn generation_groups_points_by_membership_profile() {
        let b = generate_boolean_algebra(3, &[]).unwrap();
        assert_eq!(b.atom_count(), 1);
        let b = generate_boolean_algebra(3, &[bits(3, &[0, 1]), bits(3, &[1, 2])]).unwrap();
        assert_eq!(b.atom_count(), 3);
        assert_eq!(b.atoms(), SetBooleanAlgebra::powerset(3).atoms());
        let singletons: Vec<BitSet> = (0..4).map(|i| BitSet::singleton(4, i)).collect();
        let b = generate_boolean_algebra(4, &singletons).unwrap();
        assert_eq!(b.atom_count(), 4);
    }

    #[test]
    fn partition_validation_rejects_overlaps_and_gaps() {
        assert_eq!(
            SetBooleanAlgebra::new(3, vec![bits(3, &[0, 1]), bits(3, &[1, 2])]).err(),
            Some(BooleError::NotPartition)
        );
        assert_eq!(
            SetBooleanAlgebra::new(3, vec![bits(3, &[0, 1])]).err(),
            Some(BooleError::NotPartition)
        );
        assert_eq!(
            SetBooleanAlgebra::new(3, vec![bits(3, &[0, 1, 2]), BitSet::empty(3)]).err(),
            Some(BooleError::NotPartition)
        );
    }

    #[test]
    fn elements_are_exactly_unions_of_atoms() {
        let b = SetBooleanAlgebra::new(4, vec![bits(4, &[0, 1]), bits(4, &[2, 3])]).unwrap();
        let all: Vec<BitSet> = b.elements().collect();
        assert_eq!(all.len(), 4);
        assert!(b.contains_set(&bits(4, &[0, 1])));
        assert!(b.contains_set(&bits(4, &[0, 1, 2, 3])));
        assert!(!b.contains_set(&bits(4, &[0])));
        assert!(!b.contains_set(&bits(4, &[0, 2])));
        assert_eq!(b.element_from_atoms([1]).unwrap(), bits(4, &[2, 3]));
        assert!(b.element_from_atoms([5]).is_err());
    }

    #[test]
    fn intersection_and_join_are_lattice_bounds() {
        let halves = SetBooleanAlgebra::new(4, vec![bits(4, &[0, 1]), bits(4, &[2, 3])]).unwrap();
        let stripes = SetBooleanAlgebra::new(4, vec![bits(4, &[0, 2]), bits(4, &[1, 3])]).unwrap();
        let meet = intersect_algebras(&halves, &stripes).unwrap();
        assert_eq!(meet.atom_count(), 1, "only ∅ and the universe survive");
        let join = join_algebras(&halves, &stripes).unwrap();
        assert_eq!(join.atom_count(), 4, "common refinement is the powerset");
        // Bounds: meet inside both, both inside join.
        assert!(meet.is_subalgebra_of(&halves) && meet.is_subalgebra_of(&stripes));
        assert!(halves.is_subalgebra_of(&join) && stripes.is_subalgebra_of(&join));
    }

    #[test]
    fn tensor_multiplies_atoms_and_respects_bounds() {
        let p2 = SetBooleanAlgebra::powerset(2);
        let t = tensor(&[p2.clone(), p2.clone()]).unwrap();
        assert_eq!(t.universe(), 4);
        assert_eq!(t.atom_count(), 4);
        assert_eq!(t.atoms(), SetBooleanAlgebra::powerset(4).atoms());
        let trivial = SetBooleanAlgebra::trivial(3);
        let t = tensor(&[trivial.clone(), trivial.clone()]).unwrap();
        assert_eq!(t.atom_count(), 1);
        assert!(matches!(
            tensor_bounded(&[p2.clone(), p2.clone()], 3).err(),
            Some(BooleError::UniverseTooLarge { size: 4, limit: 3 })
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        for _ in 0..50 {
            let ua = rng.random_range(1..=4);
            let ub = rng.random_range(1..=4);
            let a = random_boolean_algebra(&mut rng, ua, 3);
            let b = random_boolean_algebra(&mut rng, ub, 3);
            let t = tensor(&[a.clone(), b.clone()]).unwrap();
            assert_eq!(t.atom_count(), a.atom_count() * b.atom_count());
        }
    }

    #[test]
    fn tensor_membership_is_the_union_of_atom_boxes_test() {
        let p2 = SetBooleanAlgebra::powerset(2);
        let trivial = SetBooleanAlgebra::trivial(2);
        let diagonal = bits(4, &[0, 3]);
        assert!(tensor_member(&diagonal, &[p2.clone(), p2.clone()]).unwrap());
        assert!(!tensor_member(&diagonal, &[trivial.clone(), trivial.clone()]).unwrap());
        assert!(tensor_member(&bits(4, &[]), &[trivial.clone(), trivial.clone()]).unwrap());
        assert!(
            tensor_member(&bits(4, &[0, 1, 2, 3]), &[trivial.clone(), trivial]).unwrap()
        );
    }

    #[test]
    fn canonical_mesh_of_the_diagonal_is_the_equality_partition() {
        let p2 = SetBooleanAlgebra::powerset(2);
        let diagonal = bits(4, &[0, 3]);
        let (mesh, cells) = canonical_mesh(&diagonal, &[p2.clone(), p2.clone()]).unwrap();
        assert_eq!(mesh.partitions[0].len(), 2);
        assert_eq!(mesh.partitions[1].len(), 2);
        assert_eq!(cells.len(), 2);
        let union = cells
            .iter()
            .fold(BitSet::empty(4), |acc, c| acc.union(&c.points()));
        assert_eq!(union, diagonal);
    }

    #[test]
    fn canonical_mesh_handles_trivial_and_rejects_non_members() {
        let p2 = SetBooleanAlgebra::powerset(2);
        let full = bits(4, &[0, 1, 2, 3]);
        let (mesh, cells) = canonical_mesh(&full, &[p2.clone(), p2.clone()]).unwrap();
        assert_eq!(cells.len(), 1);
        assert!(mesh.partitions.iter().all(|p| p.len() == 1));
        let (_, cells) = canonical_mesh(&bits(4, &[]), &[p2.clone(), p2.clone()]).unwrap();
        assert!(cells.is_empty());
        let trivial = SetBooleanAlgebra::trivial(2);
        assert_eq!(
            canonical_mesh(&bits(4, &[0, 3]), &[trivial.clone(), trivial]).err(),
            Some(BooleError::NotInTensor)
        );
    }

    #[test]
    fn every_mesh_partition_for_p_coarsens_to_the_canonical_one() {
        // All partitions of each coordinate into algebra elements that
        // write p as a union of cells must refine the slice classes.
        let p2 = SetBooleanAlgebra::powerset(2);
        let p3 = SetBooleanAlgebra::powerset(3);
        let p = bits(6, &[0, 1, 3, 4]); // {0,1}x{0,1} over 2x3
        let factors = [p2.clone(), p3.clone()];
        let (mesh, _) = canonical_mesh(&p, &factors).unwrap();
        // Candidate meshes: group coordinate-0 atoms and coordinate-1
        // atoms arbitrarily (both are powersets, so any partition works),
        // keep those whose cells tile p.
        let partitions_of = |n: usize| -> Vec<Vec<BitSet>> {
            // All partitions of {0..n-1} as lists of blocks.
            fn go(n: usize, next: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
                if next == n {
                    out.push(blocks.clone());
                    return;
                }
                for i in 0..blocks.len() {
                    blocks[i].push(next);
                    go(n, next + 1, blocks, out);
                    blocks[i].pop();
                }
                blocks.push(vec![next]);
                go(n, next + 1, blocks, out);
                blocks.pop();
            }
            let mut out = Vec::new();
            go(n, 0, &mut Vec::new(), &mut out);
            out.into_iter()
                .map(|blocks| {
                    blocks
                        .into_iter()
                        .map(|b| BitSet::from_indices(n, b))
                        .collect()
                })
                .collect()
        };
        let mut meshes_seen = 0;
        for part0 in partitions_of(2) {
            'next: for part1 in partitions_of(3) {
                // Does this mesh tile p? Every cell must be inside or outside.
                for c0 in &part0 {
                    for c1 in &part1 {
                        let cell = Parallelepiped {
                            factors: vec![c0.clone(), c1.clone()],
                        }
                        .points();
                        let inter = cell.intersect(&p);
                        if !inter.is_empty() && inter != cell {
                            continue 'next;
                        }
                    }
                }
                meshes_seen += 1;
                // Each block lies inside one canonical class.
                for (coord, part) in [&part0, &part1].into_iter().enumerate() {
                    for block in part {
                        let hit = mesh.partitions[coord]
                            .iter()
                            .filter(|class| !class.is_disjoint(block))
                            .count();
                        assert_eq!(hit, 1, "mesh block straddles slice classes");
                    }
                }
            }
        }
        assert!(meshes_seen > 1, "the scan should see several meshes");
    }

    #[test]
    fn oplus_vs_cap_agrees_on_small_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..60 {
            let n = rng.random_range(1..=2);
            let j = rng.random_range(1..=3);
            let universes: Vec<usize> = (0..n).map(|_| rng.random_range(1..=4)).collect();
            let families: Vec<Vec<SetBooleanAlgebra>> = universes
                .iter()
                .map(|&u| {
                    (0..j)
                        .map(|_| random_boolean_algebra(&mut rng, u, 2))
                        .collect()
                })
                .collect();
            let product: usize = universes.iter().product();
            // A candidate p: a random element of the left side, or a
            // random subset (which may be in neither).
            let p = BitSet::from_indices(
                product,
                (0..product).filter(|_| rng.random_bool(0.5)),
            );
            let (left, right) = check_oplus_vs_cap(&families, &p).unwrap();
            assert_eq!(left, right, "the two memberships must agree");
        }
    }

    #[test]
    fn star_holds_for_powersets_trivial_and_congruence_algebras() {
        let sl = semilattice2();
        assert!(star_check(&sl, &SetBooleanAlgebra::powerset(2)).unwrap());
        assert!(star_check(&sl, &SetBooleanAlgebra::trivial(2)).unwrap());
        let z4 = cyclic_group(4);
        let parity = Congruence::generated_by(z4.clone(), &[(0, 2)]).unwrap();
        let b = SetBooleanAlgebra::from_congruence(&parity);
        assert!(star_check(&z4, &b).unwrap());
        // A non-congruence partition fails: {0,1} | {2,3} on Z4.
        let bad =
            SetBooleanAlgebra::new(4, vec![bits(4, &[0, 1]), bits(4, &[2, 3])]).unwrap();
        assert!(!star_check(&z4, &bad).unwrap());
    }

    #[test]
    fn star_survives_intersections_and_joins() {
        let sig = Signature::new([("f".to_string(), 2), ("g".to_string(), 1)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for _ in 0..50 {
            let size = rng.random_range(2..=4);
            let a = random_algebra(&mut rng, &sig, size);
            let b1 = SetBooleanAlgebra::from_congruence(&random_congruence(&mut rng, &a));
            let b2 = SetBooleanAlgebra::from_congruence(&random_congruence(&mut rng, &a));
            assert!(star_check(&a, &b1).unwrap());
            assert!(star_check(&a, &b2).unwrap());
            assert!(star_check(&a, &intersect_algebras(&b1, &b2).unwrap()).unwrap());
            assert!(star_check(&a, &join_algebras(&b1, &b2).unwrap()).unwrap());
        }
    }

    #[test]
    fn ultrafilter_op_on_the_powerset_is_the_operation_table() {
        let z4 = cyclic_group(4);
        let b = SetBooleanAlgebra::powerset(4);
        for x in 0..4 {
            for y in 0..4 {
                // Powerset atoms are singletons in carrier order.
                assert_eq!(
                    ultrafilter_op(&z4, &b, "add", &[x, y]).unwrap(),
                    z4.apply("add", &[x, y])
                );
            }
        }
        let bad = SetBooleanAlgebra::new(4, vec![bits(4, &[0, 1]), bits(4, &[2, 3])]).unwrap();
        assert_eq!(
            ultrafilter_op(&z4, &bad, "add", &[0, 0]).err(),
            Some(BooleError::StarViolated {
                symbol: "add".to_string()
            })
        );
    }

    #[test]
    fn ultrafilter_op_matches_the_witness_exhausting_definition() {
        // The definitional ultrafilter: all elements L admitting witness
        // elements L_i containing the argument atoms with image(box) ⊆ L.
        // It must be the principal filter of the returned atom.
        let z4 = cyclic_group(4);
        let parity = Congruence::generated_by(z4.clone(), &[(0, 2)]).unwrap();
        let b = SetBooleanAlgebra::from_congruence(&parity);
        for x in 0..b.atom_count() {
            for y in 0..b.atom_count() {
                let fast = ultrafilter_op(&z4, &b, "add", &[x, y]).unwrap();
                let mut definitional: Vec<BitSet> = Vec::new();
                for l in b.elements() {
                    let mut witnessed = false;
                    for lx in b.elements().filter(|e| b.atoms()[x].is_subset(e)) {
                        for ly in b.elements().filter(|e| b.atoms()[y].is_subset(e)) {
                            let mut image = BitSet::empty(4);
                            for px in lx.iter() {
                                for py in ly.iter() {
                                    image.insert(z4.apply("add", &[px, py]));
                                }
                            }
                            if image.is_subset(&l) {
                                witnessed = true;
                            }
                        }
                    }
                    if witnessed {
                        definitional.push(l.clone());
                    }
                }
                let principal: Vec<BitSet> = b
                    .elements()
                    .filter(|l| b.atoms()[fast].is_subset(l))
                    .collect();
                assert_eq!(definitional, principal);
            }
        }
    }

    #[test]
    fn dual_space_is_a_boolean_isomorphism_onto_the_atom_powerset() {
        let b = SetBooleanAlgebra::new(5, vec![bits(5, &[0, 2]), bits(5, &[1]), bits(5, &[3, 4])])
            .unwrap();
        assert_eq!(dual_space(&b).len(), 3);
        let e = bits(5, &[0, 2, 1]);
        let f = bits(5, &[1, 3, 4]);
        let ue = basic_open(&b, &e).unwrap();
        let uf = basic_open(&b, &f).unwrap();
        assert_eq!(basic_open(&b, &e.intersect(&f)).unwrap(), ue.intersect(&uf));
        assert_eq!(basic_open(&b, &e.union(&f)).unwrap(), ue.union(&uf));
        assert_eq!(basic_open(&b, &e.complement()).unwrap(), ue.complement());
        assert_eq!(
            basic_open(&b, &BitSet::empty(5)).unwrap(),
            BitSet::empty(3)
        );
        assert_eq!(basic_open(&b, &BitSet::full(5)).unwrap(), BitSet::full(3));
        assert_eq!(
            basic_open(&b, &bits(5, &[0])).err(),
            Some(BooleError::NotElement)
        );
    }

    #[test]
    fn powerset_dual_reconstructs_the_algebra() {
        let z4 = cyclic_group(4);
        let dual = algebra_from_dual(&z4, &SetBooleanAlgebra::powerset(4)).unwrap();
        assert_eq!(dual, z4, "powerset atoms are singletons in carrier order");
        let sl = semilattice2();
        assert!(reconstruct_check(&sl, &[0, 1]).unwrap());
        assert!(reconstruct_check(&z4, &[1]).unwrap());
        assert_eq!(
            reconstruct_check(&z4, &[0]).err(),
            Some(BooleError::NotSubalgebra),
            "0 generates only the trivial subgroup"
        );
        let trivial_dual = algebra_from_dual(&z4, &SetBooleanAlgebra::trivial(4)).unwrap();
        assert_eq!(trivial_dual.size(), 1);
    }

    #[test]
    fn inclusion_dualizes_to_an_onto_homomorphism() {
        let z4 = cyclic_group(4);
        let parity = SetBooleanAlgebra::from_congruence(
            &Congruence::generated_by(z4.clone(), &[(0, 2)]).unwrap(),
        );
        let powerset = SetBooleanAlgebra::powerset(4);
        let hom = dual_of_inclusion(&z4, &parity, &powerset).unwrap();
        assert!(hom.is_onto());
        assert_eq!(hom.source().size(), 4);
        assert_eq!(hom.target().size(), 2);
        // Equal algebras give a bijection.
        let ident = dual_of_inclusion(&z4, &powerset, &powerset).unwrap();
        assert!(ident.is_injective() && ident.is_onto());
        // Trivial B collapses everything.
        let collapse =
            dual_of_inclusion(&z4, &SetBooleanAlgebra::trivial(4), &powerset).unwrap();
        assert_eq!(collapse.target().size(), 1);
        // Non-nested pair is rejected.
        assert_eq!(
            dual_of_inclusion(&z4, &powerset, &parity).err(),
            Some(BooleError::NotSubalgebra)
        );
    }

    #[test]
    fn inclusion_duals_commute_on_random_nested_pairs() {
        let sig = Signature::new([("f".to_string(), 2)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        for _ in 0..50 {
            let size = rng.random_range(2..=4);
            let a = random_algebra(&mut rng, &sig, size);
            let theta = random_congruence(&mut rng, &a);
            let finer = SetBooleanAlgebra::from_congruence(&theta);
            let coarser = SetBooleanAlgebra::from_congruence(
                &theta.join(&random_congruence(&mut rng, &a)).unwrap(),
            );
            assert!(coarser.is_subalgebra_of(&finer));
            let hom = dual_of_inclusion(&a, &coarser, &finer).unwrap();
            assert!(hom.is_onto());
        }
    }
}
