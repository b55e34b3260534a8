//! Identities, free algebras of finitely generated classes, and quotients.
//!
//! An identity is a pair of terms; an algebra satisfies it when both sides
//! evaluate equally under every assignment of the identity's variables.
//! The free algebra on a variable set `X` relative to a list of generating
//! algebras is computed concretely: one coordinate per (generator algebra,
//! assignment `X -> A`) pair, and the carrier is the closure of the
//! variable tuples under coordinatewise operations. The ambient product is
//! never materialised — only the tuples actually reachable are stored.
//!
//! `finite_quotient_membership` decides by bounded search whether an
//! algebra is a homomorphic image of a subalgebra of a product of at most
//! `bound` generator copies, and `pushout_quotient` glues two onto
//! homomorphisms along their common source by joining their kernels.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{tuples, AlgebraError, FiniteAlgebra, Homomorphism};
use crate::congruence::Congruence;
use crate::signature::VariableSet;
use crate::term::{Term, TermError};

/// Default cap on the number of coordinates of the ambient free-algebra
/// product (after deduplication).
pub const FREE_COORDINATE_LIMIT: usize = 1024;

/// Default cap on the carrier size of a computed free algebra.
pub const FREE_ELEMENT_LIMIT: usize = 4096;

/// Cap on the carrier of a membership-search product.
pub const MEMBERSHIP_PRODUCT_LIMIT: usize = 1 << 14;

/// Cap on the number of candidate generator maps tried per product during
/// membership search.
pub const MEMBERSHIP_SEARCH_LIMIT: u128 = 2_000_000;

/// A formal equality between two terms over a shared signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    lhs: Term,
    rhs: Term,
}

impl Identity {
    /// Pairs two (already validated) terms.
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity { lhs, rhs }
    }

    /// Parses a line of the form `lhs-word = rhs-word`, both sides in
    /// Polish notation.
    pub fn parse(
        line: &str,
        sig: &crate::signature::Signature,
        vars: &VariableSet,
    ) -> Result<Self, TermError> {
        let (left, right) = line.split_once('=').ok_or_else(|| {
            TermError::Syntax("an identity needs two sides separated by '='".to_string())
        })?;
        Ok(Identity {
            lhs: crate::term::parse_polish(left, sig, vars)?,
            rhs: crate::term::parse_polish(right, sig, vars)?,
        })
    }

    /// Left-hand term.
    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    /// Right-hand term.
    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    /// The variables occurring on either side.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut vars = self.lhs.variables();
        vars.extend(self.rhs.variables());
        vars.into_iter().map(str::to_string).collect()
    }
}

impl std::fmt::Display for Identity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} = {}", self.lhs.polish_string(), self.rhs.polish_string())
    }
}

/// Whether `algebra` satisfies the identity under every assignment of its
/// variables (`|A|^#vars` assignments, checked exhaustively).
pub fn satisfies(algebra: &FiniteAlgebra, id: &Identity) -> Result<bool, AlgebraError> {
    let vars: Vec<String> = id.variables().into_iter().collect();
    for tuple in tuples(algebra.size(), vars.len()) {
        let assignment: BTreeMap<String, usize> =
            vars.iter().cloned().zip(tuple.iter().copied()).collect();
        if algebra.eval(id.lhs(), &assignment)? != algebra.eval(id.rhs(), &assignment)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One coordinate of the ambient product of a free algebra: which generator
/// algebra it projects into and which assignment of the variables it
/// realises.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeCoordinate {
    /// Index into the deduplicated list of generator algebras.
    pub algebra: usize,
    /// The assignment `X -> A` this coordinate evaluates.
    pub assignment: BTreeMap<String, usize>,
}

/// The free algebra on a variable set relative to finitely many generating
/// algebras, realised as tuples over the deduplicated coordinates.
#[derive(Debug, Clone)]
pub struct FreeAlgebraResult {
    algebra: FiniteAlgebra,
    generators: BTreeMap<String, usize>,
    coordinates: Vec<FreeCoordinate>,
    elements: Vec<Vec<usize>>,
    factors: Vec<FiniteAlgebra>,
}

impl FreeAlgebraResult {
    /// The abstract finite algebra on the closed tuple set.
    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    /// Carrier index of the tuple generated by a variable.
    pub fn generator(&self, var: &str) -> Option<usize> {
        self.generators.get(var).copied()
    }

    /// All variable generators as carrier indices.
    pub fn generators(&self) -> &BTreeMap<String, usize> {
        &self.generators
    }

    /// Description of the ambient product, one entry per coordinate.
    pub fn coordinates(&self) -> &[FreeCoordinate] {
        &self.coordinates
    }

    /// The concrete tuple realising a carrier element.
    pub fn element_tuple(&self, element: usize) -> &[usize] {
        &self.elements[element]
    }

    /// The deduplicated generator algebras the coordinates point into.
    pub fn factors(&self) -> &[FiniteAlgebra] {
        &self.factors
    }

    /// The projection onto one coordinate, as a checked homomorphism into
    /// that coordinate's generator algebra. It sends each variable
    /// generator to the value the coordinate's assignment gives it.
    pub fn projection(&self, coordinate: usize) -> Result<Homomorphism, AlgebraError> {
        let coord = &self.coordinates[coordinate];
        let map: Vec<usize> = self.elements.iter().map(|t| t[coordinate]).collect();
        Homomorphism::new(
            self.algebra.clone(),
            self.factors[coord.algebra].clone(),
            map,
        )
    }
}

/// [`free_algebra_bounded`] with the default coordinate and element caps.
pub fn free_algebra(
    gens: &[FiniteAlgebra],
    vars: &VariableSet,
) -> Result<FreeAlgebraResult, AlgebraError> {
    free_algebra_bounded(gens, vars, FREE_COORDINATE_LIMIT, FREE_ELEMENT_LIMIT)
}

/// Computes the free algebra on `vars` relative to `gens`.
///
/// Coordinates are the pairs (generator algebra, assignment of `vars` into
/// it), deduplicated; the carrier is the closure of the variable tuples
/// (plus constants) under coordinatewise operations. Exceeding either cap
/// reports `ProductTooLarge`; an empty variable set over a signature with
/// no constants reports `EmptyCarrier`.
pub fn free_algebra_bounded(
    gens: &[FiniteAlgebra],
    vars: &VariableSet,
    max_coordinates: usize,
    max_elements: usize,
) -> Result<FreeAlgebraResult, AlgebraError> {
    let first = gens.first().ok_or(AlgebraError::EmptyList)?;
    if gens.iter().any(|a| a.signature() != first.signature()) {
        return Err(AlgebraError::SignatureMismatch);
    }
    let sig = first.signature().clone();

    // Deduplicate the generator list: a repeated algebra contributes the
    // same assignments, hence the same coordinates.
    let mut factors: Vec<FiniteAlgebra> = Vec::new();
    for g in gens {
        if !factors.contains(g) {
            factors.push(g.clone());
        }
    }

    // One coordinate per (factor, assignment) pair.
    let var_names: Vec<String> = vars.names().map(|s| s.to_string()).collect();
    let mut coordinates: Vec<FreeCoordinate> = Vec::new();
    for (i, factor) in factors.iter().enumerate() {
        let within_budget = factor
            .size()
            .checked_pow(var_names.len() as u32)
            .is_some_and(|c| coordinates.len() + c <= max_coordinates);
        if !within_budget {
            return Err(AlgebraError::ProductTooLarge {
                limit: max_coordinates,
            });
        }
        for tuple in tuples(factor.size(), var_names.len()) {
            coordinates.push(FreeCoordinate {
                algebra: i,
                assignment: var_names.iter().cloned().zip(tuple).collect(),
            });
        }
    }

    // Closure of the variable tuples (and constants) under coordinatewise
    // operations. Elements are indexed in discovery order.
    let mut elements: Vec<Vec<usize>> = Vec::new();
    let mut index_of: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let intern = |tuple: Vec<usize>,
                  elements: &mut Vec<Vec<usize>>,
                  index_of: &mut BTreeMap<Vec<usize>, usize>|
     -> Result<usize, AlgebraError> {
        if let Some(&i) = index_of.get(&tuple) {
            return Ok(i);
        }
        if elements.len() >= max_elements {
            return Err(AlgebraError::ProductTooLarge {
                limit: max_elements,
            });
        }
        let i = elements.len();
        index_of.insert(tuple.clone(), i);
        elements.push(tuple);
        Ok(i)
    };

    let mut generators: BTreeMap<String, usize> = BTreeMap::new();
    for x in &var_names {
        let tuple: Vec<usize> = coordinates.iter().map(|c| c.assignment[x]).collect();
        let i = intern(tuple, &mut elements, &mut index_of)?;
        generators.insert(x.clone(), i);
    }

    let apply_coordinatewise = |symbol: &str, args: &[&Vec<usize>]| -> Vec<usize> {
        coordinates
            .iter()
            .enumerate()
            .map(|(c, coord)| {
                let at_c: Vec<usize> = args.iter().map(|a| a[c]).collect();
                factors[coord.algebra].apply(symbol, &at_c)
            })
            .collect()
    };

    loop {
        let mut grew = false;
        let snapshot = elements.len();
        for (symbol, arity) in sig.symbols().map(|(s, a)| (s.to_string(), a)).collect::<Vec<_>>() {
            for arg_indices in tuples(snapshot, arity) {
                let args: Vec<&Vec<usize>> = arg_indices.iter().map(|&i| &elements[i]).collect();
                let result = apply_coordinatewise(&symbol, &args);
                if !index_of.contains_key(&result) {
                    intern(result, &mut elements, &mut index_of)?;
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }

    if elements.is_empty() {
        return Err(AlgebraError::EmptyCarrier);
    }

    // Read the operation tables off the closed tuple set.
    let size = elements.len();
    let mut tables = BTreeMap::new();
    for (symbol, arity) in sig.symbols() {
        let mut table = Vec::with_capacity(size.pow(arity as u32));
        for arg_indices in tuples(size, arity) {
            let args: Vec<&Vec<usize>> = arg_indices.iter().map(|&i| &elements[i]).collect();
            let result = apply_coordinatewise(symbol, &args);
            table.push(index_of[&result]);
        }
        tables.insert(symbol.to_string(), table);
    }
    let algebra = FiniteAlgebra::new(sig, size, tables)?;

    Ok(FreeAlgebraResult {
        algebra,
        generators,
        coordinates,
        elements,
        factors,
    })
}

/// Decides whether `s` is a homomorphic image of a subalgebra of a product
/// of at most `bound` generator copies (factors drawn from `gens` with
/// repetition).
///
/// For each candidate product `P` the search tries every injective choice
/// of preimages `p_x` for the elements `x` of `s` and closes the pair set
/// `{(p_x, x)}` under coordinatewise operations; `s` is a member exactly
/// when some closure stays functional. Candidates whose search space
/// exceeds the configured caps report `BoundExceeded`.
pub fn finite_quotient_membership(
    s: &FiniteAlgebra,
    gens: &[FiniteAlgebra],
    bound: usize,
) -> Result<bool, AlgebraError> {
    let first = gens.first().ok_or(AlgebraError::EmptyList)?;
    if gens.iter().any(|a| a.signature() != first.signature())
        || s.signature() != first.signature()
    {
        return Err(AlgebraError::SignatureMismatch);
    }

    for count in 1..=bound {
        for multiset in multisets(gens.len(), count) {
            let factors: Vec<FiniteAlgebra> =
                multiset.iter().map(|&i| gens[i].clone()).collect();
            let product_size: usize = factors.iter().map(|a| a.size()).product();
            if product_size > MEMBERSHIP_PRODUCT_LIMIT {
                return Err(AlgebraError::BoundExceeded {
                    size: product_size,
                    limit: MEMBERSHIP_PRODUCT_LIMIT,
                });
            }
            let candidates = (product_size as u128).pow(s.size() as u32);
            if candidates > MEMBERSHIP_SEARCH_LIMIT {
                return Err(AlgebraError::BoundExceeded {
                    size: product_size,
                    limit: MEMBERSHIP_PRODUCT_LIMIT,
                });
            }
            let (product, _) = FiniteAlgebra::product(&factors)?;
            for preimages in tuples(product.size(), s.size()) {
                // Distinct elements need distinct preimages.
                let mut seen = vec![false; product.size()];
                if preimages.iter().any(|&p| std::mem::replace(&mut seen[p], true)) {
                    continue;
                }
                let seed: Vec<(usize, usize)> = preimages
                    .iter()
                    .copied()
                    .zip(0..s.size())
                    .collect();
                if functional_closure(&product, s, &seed).is_some() {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Closes `seed ⊆ P x S` under coordinatewise operations, returning the
/// closure as a partial map `P -> S` if it stays functional and `None` the
/// moment two pairs share a first component.
fn functional_closure(
    p: &FiniteAlgebra,
    s: &FiniteAlgebra,
    seed: &[(usize, usize)],
) -> Option<Vec<Option<usize>>> {
    let mut map: Vec<Option<usize>> = vec![None; p.size()];
    for &(pe, se) in seed {
        match map[pe] {
            None => map[pe] = Some(se),
            Some(old) if old != se => return None,
            _ => {}
        }
    }
    loop {
        let domain: Vec<usize> = (0..p.size()).filter(|&i| map[i].is_some()).collect();
        let mut grew = false;
        for (symbol, arity) in p.signature().symbols() {
            for arg_indices in tuples(domain.len(), arity) {
                let p_args: Vec<usize> = arg_indices.iter().map(|&k| domain[k]).collect();
                let s_args: Vec<usize> = arg_indices
                    .iter()
                    .map(|&k| map[domain[k]].expect("in domain"))
                    .collect();
                let pr = p.apply(symbol, &p_args);
                let sr = s.apply(symbol, &s_args);
                match map[pr] {
                    None => {
                        map[pr] = Some(sr);
                        grew = true;
                    }
                    Some(old) if old != sr => return None,
                    _ => {}
                }
            }
        }
        if !grew {
            return Some(map);
        }
    }
}

/// Non-decreasing index sequences of the given length over `0..n`:
/// multisets of factor choices.
fn multisets(n: usize, len: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, len: usize, start: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for i in start..n {
            prefix.push(i);
            go(n, len, i, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, len, 0, &mut Vec::new(), &mut out);
    out
}

/// Glues two onto homomorphisms `phi: S -> T` and `psi: S -> U` along `S`:
/// returns the quotient `Q = S / join(ker phi, ker psi)` together with the
/// induced maps `delta: T -> Q` and `epsilon: U -> Q`, which satisfy
/// `delta . phi = epsilon . psi`.
pub fn pushout_quotient(
    phi: &Homomorphism,
    psi: &Homomorphism,
) -> Result<(FiniteAlgebra, Homomorphism, Homomorphism), AlgebraError> {
    if phi.source() != psi.source() {
        return Err(AlgebraError::SignatureMismatch);
    }
    if !phi.is_onto() || !psi.is_onto() {
        return Err(AlgebraError::NotOnto);
    }
    let theta = phi.kernel().join(&psi.kernel())?;
    let (q, pi) = theta.quotient();

    let induced = |onto: &Homomorphism| -> Result<Homomorphism, AlgebraError> {
        let mut map = vec![0; onto.target().size()];
        for s in 0..onto.source().size() {
            map[onto.apply(s)] = pi.apply(s);
        }
        Homomorphism::new(onto.target().clone(), q.clone(), map)
    };
    let delta = induced(phi)?;
    let epsilon = induced(psi)?;
    Ok((q, delta, epsilon))
}

/// The kernel of the composite `delta . phi` — used to cross-check that it
/// equals the congruence join of the two kernels.
pub fn pushout_kernel(
    phi: &Homomorphism,
    delta: &Homomorphism,
) -> Result<Congruence, AlgebraError> {
    Ok(phi.then(delta)?.kernel())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{chain_semilattice, cyclic_group, null_algebra, semilattice2};
    use crate::congruence::enumerate_congruences;
    use crate::signature::{Signature, VariableSet};

    fn meet_sig() -> Signature {
        Signature::new([("meet".to_string(), 2)]).unwrap()
    }

    fn xy(sig: &Signature) -> VariableSet {
        VariableSet::new(["x".to_string(), "y".to_string()], sig).unwrap()
    }

    #[test]
    fn satisfaction_of_commutativity_and_idempotence() {
        let sig = meet_sig();
        let vars = xy(&sig);
        let commutative = Identity::parse("meet x y = meet y x", &sig, &vars).unwrap();
        let idempotent = Identity::parse("meet x x = x", &sig, &vars).unwrap();
        let sl = semilattice2();
        assert!(satisfies(&sl, &commutative).unwrap());
        assert!(satisfies(&sl, &idempotent).unwrap());
        // Z2 written with "meet" as its operation: commutative but not
        // idempotent (1 + 1 = 0).
        let xor = FiniteAlgebra::new(
            sig.clone(),
            2,
            [("meet".to_string(), vec![0, 1, 1, 0])].into_iter().collect(),
        )
        .unwrap();
        assert!(satisfies(&xor, &commutative).unwrap());
        assert!(!satisfies(&xor, &idempotent).unwrap());
    }

    #[test]
    fn trivial_algebra_satisfies_everything() {
        let sig = meet_sig();
        let vars = xy(&sig);
        let point = null_algebra(&sig, 1, 0);
        for line in ["meet x y = meet y x", "meet x x = y", "x = y"] {
            let id = Identity::parse(line, &sig, &vars).unwrap();
            assert!(satisfies(&point, &id).unwrap(), "{line}");
        }
    }

    #[test]
    fn identity_display_round_trips_through_parse() {
        let sig = meet_sig();
        let vars = xy(&sig);
        let id = Identity::parse("meet x y = meet y x", &sig, &vars).unwrap();
        let shown = id.to_string();
        assert_eq!(shown, "meet x y = meet y x");
        assert_eq!(Identity::parse(&shown, &sig, &vars).unwrap(), id);
        assert!(Identity::parse("meet x y", &sig, &vars).is_err());
    }

    #[test]
    fn free_semilattice_on_two_generators_has_three_elements() {
        let sig = meet_sig();
        let vars = xy(&sig);
        let free = free_algebra(&[semilattice2()], &vars).unwrap();
        assert_eq!(free.algebra().size(), 3);
        // Coordinates: the four assignments {x,y} -> {0,1}.
        assert_eq!(free.coordinates().len(), 4);
        let x = free.generator("x").unwrap();
        let y = free.generator("y").unwrap();
        assert_ne!(x, y);
        // The third element is x ∧ y.
        let meet = free.algebra().apply("meet", &[x, y]);
        assert_ne!(meet, x);
        assert_ne!(meet, y);
    }

    #[test]
    fn free_semilattice_on_three_generators_has_seven_elements() {
        let sig = meet_sig();
        let vars = VariableSet::new(
            ["x".to_string(), "y".to_string(), "z".to_string()],
            &sig,
        )
        .unwrap();
        let free = free_algebra(&[semilattice2()], &vars).unwrap();
        // One element per nonempty subset of the generators.
        assert_eq!(free.algebra().size(), 7);
    }

    #[test]
    fn free_two_generated_group_of_exponent_two_is_klein_four() {
        let z2 = cyclic_group(2);
        let vars = VariableSet::new(["x".to_string(), "y".to_string()], z2.signature()).unwrap();
        let free = free_algebra(&[z2.clone()], &vars).unwrap();
        assert_eq!(free.algebra().size(), 4);
        // Every element squares to the same element (the identity tuple).
        let a = free.algebra();
        let sq: BTreeSet<usize> = a.elements().map(|e| a.apply("add", &[e, e])).collect();
        assert_eq!(sq.len(), 1);
    }

    #[test]
    fn generator_tuples_realise_their_coordinate_assignments() {
        let sig = meet_sig();
        let vars = xy(&sig);
        let free = free_algebra(&[semilattice2(), chain_semilattice(3)], &vars).unwrap();
        for (var, &e) in free.generators() {
            let tuple = free.element_tuple(e);
            for (c, coord) in free.coordinates().iter().enumerate() {
                assert_eq!(tuple[c], coord.assignment[var]);
            }
        }
        // Every coordinate yields a checked projection homomorphism.
        for c in 0..free.coordinates().len() {
            let proj = free.projection(c).unwrap();
            for (var, &e) in free.generators() {
                assert_eq!(proj.apply(e), free.coordinates()[c].assignment[var]);
            }
        }
    }

    #[test]
    fn free_algebra_satisfies_exactly_the_common_identities() {
        let sig = meet_sig();
        let vars = xy(&sig);
        let sl = semilattice2();
        let free = free_algebra(&[sl.clone()], &vars).unwrap();
        for line in [
            "meet x y = meet y x",
            "meet x x = x",
            "meet meet x y x = meet x y",
            "meet x y = x",
            "x = y",
        ] {
            let id = Identity::parse(line, &sig, &vars).unwrap();
            assert_eq!(
                satisfies(free.algebra(), &id).unwrap(),
                satisfies(&sl, &id).unwrap(),
                "{line}"
            );
        }
    }

    #[test]
    fn free_algebra_rejects_bad_inputs() {
        let sig = meet_sig();
        let vars = xy(&sig);
        assert_eq!(
            free_algebra(&[], &vars).err(),
            Some(AlgebraError::EmptyList)
        );
        let mixed = [semilattice2(), cyclic_group(2)];
        assert_eq!(
            free_algebra(&mixed, &vars).err(),
            Some(AlgebraError::SignatureMismatch)
        );
        // No variables and no constants: nothing generates the carrier.
        let empty_vars = VariableSet::new(Vec::<String>::new(), &sig).unwrap();
        assert_eq!(
            free_algebra(&[semilattice2()], &empty_vars).err(),
            Some(AlgebraError::EmptyCarrier)
        );
        // Tiny coordinate budget trips the product bound.
        assert_eq!(
            free_algebra_bounded(&[semilattice2()], &vars, 3, 100).err(),
            Some(AlgebraError::ProductTooLarge { limit: 3 })
        );
    }

    #[test]
    fn membership_accepts_quotients_of_subalgebras_of_powers() {
        let sl = semilattice2();
        // The trivial algebra is an image of anything.
        let point = null_algebra(sl.signature(), 1, 0);
        assert!(finite_quotient_membership(&point, &[sl.clone()], 1).unwrap());
        // A generator is a member at bound 1.
        assert!(finite_quotient_membership(&sl, &[sl.clone()], 1).unwrap());
        // The 3-chain embeds in the square of the 2-element semilattice.
        let chain = chain_semilattice(3);
        assert!(!finite_quotient_membership(&chain, &[sl.clone()], 1).unwrap());
        assert!(finite_quotient_membership(&chain, &[sl.clone()], 2).unwrap());
    }

    #[test]
    fn membership_rejects_non_members() {
        let sl = semilattice2();
        // Z2 with the operation renamed "meet" is not idempotent, so it is
        // in no power of a semilattice.
        let xor = FiniteAlgebra::new(
            meet_sig(),
            2,
            [("meet".to_string(), vec![0, 1, 1, 0])].into_iter().collect(),
        )
        .unwrap();
        assert!(!finite_quotient_membership(&xor, &[sl.clone()], 3).unwrap());
        // Signature mismatch is an error, not a "no".
        assert_eq!(
            finite_quotient_membership(&cyclic_group(2), &[sl], 1).err(),
            Some(AlgebraError::SignatureMismatch)
        );
    }

    #[test]
    fn pushout_of_identity_recovers_the_other_map() {
        let z4 = cyclic_group(4);
        let z2 = cyclic_group(2);
        let phi = Homomorphism::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let ident = Homomorphism::new(z4.clone(), z4.clone(), vec![0, 1, 2, 3]).unwrap();
        let (q, delta, epsilon) = pushout_quotient(&phi, &ident).unwrap();
        // ψ = id means Q ≅ T and δ is an isomorphism.
        assert_eq!(q.size(), 2);
        assert!(delta.is_onto() && delta.is_injective());
        // ε realises φ up to the relabeling δ.
        for s in 0..4 {
            assert_eq!(epsilon.apply(s), delta.apply(phi.apply(s)));
        }
    }

    #[test]
    fn pushout_kernel_is_the_join_of_the_kernels() {
        let z4 = cyclic_group(4);
        let z2 = cyclic_group(2);
        let phi = Homomorphism::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let (q1, p1) = Congruence::generated_by(z4.clone(), &[(0, 2)])
            .unwrap()
            .quotient();
        let _ = q1;
        let (_, delta, _) = pushout_quotient(&phi, &p1).unwrap();
        let composite = pushout_kernel(&phi, &delta).unwrap();
        let join = phi.kernel().join(&p1.kernel()).unwrap();
        assert_eq!(composite.class_of(), join.class_of());
        // Oracle: the join is the least congruence above both kernels.
        let above: Vec<_> = enumerate_congruences(&z4)
            .unwrap()
            .into_iter()
            .filter(|c| phi.kernel().refines(c) && p1.kernel().refines(c))
            .collect();
        assert!(above
            .iter()
            .all(|c| join.refines(c)));
        assert!(above.iter().any(|c| c.class_of() == join.class_of()));
    }

    #[test]
    fn pushout_requires_onto_maps_with_a_common_source() {
        let z4 = cyclic_group(4);
        let z2 = cyclic_group(2);
        let phi = Homomorphism::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let not_onto = Homomorphism::new(z2.clone(), z4.clone(), vec![0, 2]).unwrap();
        let from_z2 = Homomorphism::new(z2.clone(), z2.clone(), vec![0, 1]).unwrap();
        assert_eq!(
            pushout_quotient(&phi, &from_z2).err(),
            Some(AlgebraError::SignatureMismatch)
        );
        assert_eq!(
            pushout_quotient(&not_onto, &not_onto).err(),
            Some(AlgebraError::NotOnto)
        );
    }
}
