//! Translations and syntactic congruences of a finite algebra.
//!
//! A translation is the self-map of the carrier obtained by evaluating a
//! term that uses one distinguished variable exactly once, all other
//! variables being frozen to carrier values. The translation monoid `M(A)`
//! is generated under composition by the identity together with the
//! elementary translations — one argument slot of one operation, all other
//! slots frozen — and every linear term evaluates into it.
//!
//! The syntactic congruence of a subset `L` of the carrier relates `a` and
//! `a'` when no translation can tell them apart relative to `L`:
//! `f(a) in L  iff  f(a') in L` for every `f` in `M(A)`. It is the largest
//! congruence saturating `L`. Two independent routes are implemented — the
//! pairwise definition and the intersection of the pulled-back two-block
//! partitions `(f x f)^{-1}{L, co-L}` — and they must agree.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::Rng;

use crate::algebra::{tuples, AlgebraError, FiniteAlgebra, Homomorphism};
use crate::congruence::{normalize_by_key, Congruence};
use crate::signature::{Signature, VariableSet};
use crate::term::Term;

/// A self-map of a carrier arising from a one-variable-linear term.
///
/// The witness records which term produced the map (its distinguished
/// variable and the frozen values of the remaining variables); composite
/// translations found during monoid closure carry no witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    map: Vec<usize>,
    witness: Option<TranslationWitness>,
}

/// The term, distinguished variable, and frozen parameters behind a
/// translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationWitness {
    /// A term linear in the distinguished variable.
    pub term: Term,
    /// The variable that stays free.
    pub distinguished: String,
    /// Values frozen into the remaining variables.
    pub params: BTreeMap<String, usize>,
}

impl Translation {
    /// The underlying self-map, indexed by carrier elements.
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Applies the translation to one element.
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// The witness term, if this translation carries one.
    pub fn witness(&self) -> Option<&TranslationWitness> {
        self.witness.as_ref()
    }

    /// Evaluates a term that is linear in `distinguished` into a
    /// translation of `algebra`, freezing all other variables to `params`.
    ///
    /// Fails with `NotLinear` if the variable does not occur exactly once.
    pub fn from_linear_term(
        algebra: &FiniteAlgebra,
        term: &Term,
        distinguished: &str,
        params: &BTreeMap<String, usize>,
    ) -> Result<Translation, AlgebraError> {
        if !term.is_linear_in(distinguished) {
            return Err(AlgebraError::NotLinear(distinguished.to_string()));
        }
        let mut assignment = params.clone();
        let map = algebra
            .elements()
            .map(|a| {
                assignment.insert(distinguished.to_string(), a);
                algebra.eval(term, &assignment)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Translation {
            map,
            witness: Some(TranslationWitness {
                term: term.clone(),
                distinguished: distinguished.to_string(),
                params: params.clone(),
            }),
        })
    }
}

/// Picks `count` variable names avoiding the symbols of `sig`: the
/// distinguished variable first, then parameter names.
fn fresh_var_names(sig: &Signature, count: usize) -> Vec<String> {
    (0..count)
        .map(|i| {
            let mut name = if i == 0 {
                "x".to_string()
            } else {
                format!("p{}", i - 1)
            };
            while sig.contains(&name) {
                name.insert(0, '_');
            }
            name
        })
        .collect()
}

/// The translation monoid `M(A)`: identity and elementary translations,
/// closed under composition. Returned in a deterministic order (sorted by
/// map); elementary members carry witnesses, composites do not.
pub fn translation_monoid(algebra: &FiniteAlgebra) -> Vec<Translation> {
    let size = algebra.size();
    let sig = algebra.signature();
    let max_needed = sig.max_arity().max(1);
    let names = fresh_var_names(sig, max_needed);
    let vars = VariableSet::new(names.clone(), sig).expect("fresh names are valid");
    let distinguished = &names[0];

    let mut monoid: BTreeMap<Vec<usize>, Translation> = BTreeMap::new();
    let identity_term = Term::var(distinguished, &vars).expect("distinguished variable exists");
    monoid.insert(
        algebra.elements().collect(),
        Translation {
            map: algebra.elements().collect(),
            witness: Some(TranslationWitness {
                term: identity_term,
                distinguished: distinguished.clone(),
                params: BTreeMap::new(),
            }),
        },
    );

    // Elementary translations: one slot of one operation left open.
    for (symbol, arity) in sig.symbols() {
        if arity == 0 {
            continue;
        }
        for slot in 0..arity {
            for params in tuples(size, arity - 1) {
                let map: Vec<usize> = algebra
                    .elements()
                    .map(|a| {
                        let mut args = params.clone();
                        args.insert(slot, a);
                        algebra.apply(symbol, &args)
                    })
                    .collect();
                if monoid.contains_key(&map) {
                    continue;
                }
                // Witness term: symbol applied to parameter variables with
                // the distinguished variable in the open slot.
                let mut arg_terms: Vec<Term> = (0..arity - 1)
                    .map(|j| Term::var(&names[j + 1], &vars).expect("param variable exists"))
                    .collect();
                arg_terms.insert(
                    slot,
                    Term::var(distinguished, &vars).expect("distinguished variable exists"),
                );
                let term = Term::app(symbol, arg_terms, sig).expect("arity matches");
                let witness = TranslationWitness {
                    term,
                    distinguished: distinguished.clone(),
                    params: params
                        .iter()
                        .enumerate()
                        .map(|(j, &v)| (names[j + 1].clone(), v))
                        .collect(),
                };
                monoid.insert(
                    map.clone(),
                    Translation {
                        map,
                        witness: Some(witness),
                    },
                );
            }
        }
    }

    // Close under composition: every element of the monoid is a product of
    // generators, so composing known members with generators on the right
    // reaches everything.
    let generators: Vec<Vec<usize>> = monoid.keys().cloned().collect();
    let mut queue: VecDeque<Vec<usize>> = monoid.keys().cloned().collect();
    while let Some(f) = queue.pop_front() {
        for g in &generators {
            let composed: Vec<usize> = (0..size).map(|a| f[g[a]]).collect();
            if !monoid.contains_key(&composed) {
                monoid.insert(
                    composed.clone(),
                    Translation {
                        map: composed.clone(),
                        witness: None,
                    },
                );
                queue.push_back(composed);
            }
        }
    }

    monoid.into_values().collect()
}

/// The syntactic congruence of `accepting` by the pairwise definition:
/// `a ~ a'` when every translation sends both inside or both outside.
///
/// This is the largest congruence saturating the set.
pub fn syntactic_congruence(
    algebra: &FiniteAlgebra,
    accepting: &BTreeSet<usize>,
) -> Congruence {
    let monoid = translation_monoid(algebra);
    let size = algebra.size();
    let related = |a: usize, b: usize| {
        monoid
            .iter()
            .all(|f| accepting.contains(&f.apply(a)) == accepting.contains(&f.apply(b)))
    };
    // Label each element by the first element it is related to.
    let mut class_of = vec![0usize; size];
    for a in 0..size {
        let leader = (0..a).find(|&b| related(b, a)).unwrap_or(a);
        class_of[a] = leader;
    }
    let (labels, _) = normalize_by_key(class_of);
    Congruence::new(algebra.clone(), labels)
        .expect("the syntactic partition is compatible with every operation")
}

/// The syntactic congruence computed as an intersection of partitions:
/// meet over all translations `f` of the pullback along `f` of the
/// two-block partition `{accepting, complement}`.
pub fn syntactic_congruence_by_intersection(
    algebra: &FiniteAlgebra,
    accepting: &BTreeSet<usize>,
) -> Congruence {
    let monoid = translation_monoid(algebra);
    let size = algebra.size();
    // Start from the universal partition and refine one translation at a time.
    let mut labels = vec![0usize; size];
    for f in &monoid {
        let keys: Vec<(usize, bool)> = (0..size)
            .map(|a| (labels[a], accepting.contains(&f.apply(a))))
            .collect();
        labels = normalize_by_key(keys).0;
    }
    Congruence::new(algebra.clone(), labels)
        .expect("an intersection of pulled-back partitions saturating L is a congruence")
}

/// Checks that syntactic congruences commute with pulling back along an
/// onto homomorphism: the pullback of the syntactic congruence of
/// `accepting` equals the syntactic congruence of its preimage.
///
/// Returns the comparison outcome; fails with `NotOnto` when `phi` is not
/// onto (the statement needs ontoness).
pub fn lift_check(
    phi: &Homomorphism,
    accepting: &BTreeSet<usize>,
) -> Result<bool, AlgebraError> {
    if !phi.is_onto() {
        return Err(AlgebraError::NotOnto);
    }
    let sigma_target = syntactic_congruence(phi.target(), accepting);
    let pulled = Congruence::pullback(&sigma_target, phi)?;
    let sigma_source = syntactic_congruence(phi.source(), &phi.preimage(accepting));
    Ok(pulled == sigma_source)
}

/// Mutual-reachability classes of the carrier under translations:
/// `s` and `t` are in one class when some translation maps `s` to `t` and
/// some translation maps `t` back to `s`.
pub fn j_classes(algebra: &FiniteAlgebra) -> Vec<Vec<usize>> {
    let monoid = translation_monoid(algebra);
    let size = algebra.size();
    let reaches = |s: usize, t: usize| monoid.iter().any(|f| f.apply(s) == t);
    let mut class_of = vec![0usize; size];
    for s in 0..size {
        let leader = (0..s)
            .find(|&t| reaches(s, t) && reaches(t, s))
            .unwrap_or(s);
        class_of[s] = leader;
    }
    let (labels, count) = normalize_by_key(class_of);
    let mut classes = vec![Vec::new(); count];
    for (x, &c) in labels.iter().enumerate() {
        classes[c].push(x);
    }
    classes
}

/// True if every translation-reachability class is a singleton.
pub fn is_j_trivial(algebra: &FiniteAlgebra) -> bool {
    j_classes(algebra).iter().all(|c| c.len() == 1)
}

/// Outcome of scanning subsets of a carrier for syntactic-congruence
/// behaviour. At finite scale every syntactic congruence trivially has
/// finite index; the informative parts are the index profile and the
/// saturation check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfinitenessReport {
    /// Carrier size of the algebra scanned.
    pub algebra_size: usize,
    /// True when every subset of the carrier was examined.
    pub exhaustive: bool,
    /// How many subsets were examined.
    pub subsets_checked: usize,
    /// True when each examined subset is saturated by its syntactic
    /// congruence (the defining property; a failure indicates a bug).
    pub all_saturated: bool,
    /// The syntactic index (number of classes) of each examined subset,
    /// in scan order.
    pub indices: Vec<usize>,
    /// The largest syntactic index observed.
    pub max_index: usize,
}

/// How many carrier elements still allow exhausting all subsets.
pub const PROFINITE_EXHAUSTIVE_LIMIT: usize = 12;

/// Scans subsets of the carrier, computing each syntactic congruence and
/// recording indices and saturation. Exhaustive for carriers of at most
/// [`PROFINITE_EXHAUSTIVE_LIMIT`] elements; otherwise `samples` random
/// subsets are drawn from `rng`.
pub fn is_profinite_finite_scale<R: Rng>(
    algebra: &FiniteAlgebra,
    samples: usize,
    rng: &mut R,
) -> ProfinitenessReport {
    let size = algebra.size();
    let exhaustive = size <= PROFINITE_EXHAUSTIVE_LIMIT;
    let subset_list: Vec<BTreeSet<usize>> = if exhaustive {
        (0..(1usize << size))
            .map(|mask| (0..size).filter(|&i| mask >> i & 1 == 1).collect())
            .collect()
    } else {
        (0..samples)
            .map(|_| (0..size).filter(|_| rng.random_bool(0.5)).collect())
            .collect()
    };
    let mut all_saturated = true;
    let mut indices = Vec::with_capacity(subset_list.len());
    for subset in &subset_list {
        let sigma = syntactic_congruence(algebra, subset);
        all_saturated &= sigma.saturates(subset);
        indices.push(sigma.index());
    }
    let max_index = indices.iter().copied().max().unwrap_or(0);
    ProfinitenessReport {
        algebra_size: size,
        exhaustive,
        subsets_checked: subset_list.len(),
        all_saturated,
        indices,
        max_index,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{chain_semilattice, cyclic_group, null_algebra, semilattice2};
    use crate::term::parse_polish;

    fn maps_of(monoid: &[Translation]) -> Vec<Vec<usize>> {
        monoid.iter().map(|t| t.map().to_vec()).collect()
    }

    #[test]
    fn semilattice_translations_are_identity_and_bottom() {
        let monoid = translation_monoid(&semilattice2());
        assert_eq!(maps_of(&monoid), vec![vec![0, 0], vec![0, 1]]);
    }

    #[test]
    fn null_structure_translations_are_identity_and_constant() {
        let sig = Signature::new([("u", 2), ("v", 1)]).unwrap();
        let a = null_algebra(&sig, 3, 1);
        let monoid = translation_monoid(&a);
        assert_eq!(maps_of(&monoid), vec![vec![0, 1, 2], vec![1, 1, 1]]);
    }

    #[test]
    fn group_translations_are_the_group_acting_on_itself() {
        let monoid = translation_monoid(&cyclic_group(3));
        // a -> a + c for each c: three maps, all bijective.
        assert_eq!(monoid.len(), 3);
        assert!(maps_of(&monoid).contains(&vec![1, 2, 0]));
    }

    #[test]
    fn witnesses_evaluate_to_their_maps() {
        for algebra in [semilattice2(), cyclic_group(4), chain_semilattice(3)] {
            for t in translation_monoid(&algebra) {
                if let Some(w) = t.witness() {
                    let rebuilt =
                        Translation::from_linear_term(&algebra, &w.term, &w.distinguished, &w.params)
                            .unwrap();
                    assert_eq!(rebuilt.map(), t.map());
                }
            }
        }
    }

    #[test]
    fn linear_terms_evaluate_into_the_monoid() {
        let algebra = chain_semilattice(3);
        let vars = VariableSet::new(["x", "y"], algebra.signature()).unwrap();
        let term = parse_polish("meet x meet y y", algebra.signature(), &vars).unwrap();
        let monoid = translation_monoid(&algebra);
        for y in 0..3 {
            let params = BTreeMap::from([("y".to_string(), y)]);
            let t = Translation::from_linear_term(&algebra, &term, "x", &params).unwrap();
            assert!(maps_of(&monoid).contains(&t.map().to_vec()), "y = {y}");
        }
        // Nonlinear terms are rejected.
        let square = parse_polish("meet x x", algebra.signature(), &vars).unwrap();
        assert_eq!(
            Translation::from_linear_term(&algebra, &square, "x", &BTreeMap::new()).err(),
            Some(AlgebraError::NotLinear("x".into()))
        );
    }

    #[test]
    fn syntactic_congruence_of_small_examples() {
        let s2 = semilattice2();
        // Nontrivial subsets of the two-chain are separated down to points.
        assert_eq!(
            syntactic_congruence(&s2, &BTreeSet::from([1])).class_of(),
            &[0, 1]
        );
        // Trivial subsets yield the universal congruence.
        assert_eq!(
            syntactic_congruence(&s2, &BTreeSet::new()).index(),
            1
        );
        assert_eq!(
            syntactic_congruence(&s2, &BTreeSet::from([0, 1])).index(),
            1
        );
        // Even elements of Z4: parity congruence.
        let z4 = cyclic_group(4);
        assert_eq!(
            syntactic_congruence(&z4, &BTreeSet::from([0, 2])).class_of(),
            &[0, 1, 0, 1]
        );
    }

    #[test]
    fn the_two_syntactic_routes_agree_on_examples() {
        for algebra in [semilattice2(), cyclic_group(4), chain_semilattice(3)] {
            let size = algebra.size();
            for mask in 0..(1usize << size) {
                let subset: BTreeSet<usize> =
                    (0..size).filter(|&i| mask >> i & 1 == 1).collect();
                assert_eq!(
                    syntactic_congruence(&algebra, &subset),
                    syntactic_congruence_by_intersection(&algebra, &subset),
                    "subset {subset:?}"
                );
            }
        }
    }

    #[test]
    fn syntactic_congruence_is_largest_saturating() {
        use crate::congruence::enumerate_congruences;
        let algebra = chain_semilattice(3);
        let all = enumerate_congruences(&algebra).unwrap();
        for mask in 0..8usize {
            let subset: BTreeSet<usize> = (0..3).filter(|&i| mask >> i & 1 == 1).collect();
            let sigma = syntactic_congruence(&algebra, &subset);
            assert!(sigma.saturates(&subset));
            for theta in &all {
                if theta.saturates(&subset) {
                    assert!(theta.refines(&sigma), "mask {mask}");
                }
            }
        }
    }

    #[test]
    fn lifting_holds_for_a_group_quotient() {
        let z4 = cyclic_group(4);
        let even = Congruence::generated_by(z4, &[(0, 2)]).unwrap();
        let (_, pi) = even.quotient();
        for mask in 0..4usize {
            let subset: BTreeSet<usize> = (0..2).filter(|&i| mask >> i & 1 == 1).collect();
            assert_eq!(lift_check(&pi, &subset), Ok(true));
        }
    }

    #[test]
    fn lift_check_requires_onto() {
        let z2 = cyclic_group(2);
        let z4 = cyclic_group(4);
        let embed = Homomorphism::new(z2, z4, vec![0, 2]).unwrap();
        assert_eq!(
            lift_check(&embed, &BTreeSet::from([0])).err(),
            Some(AlgebraError::NotOnto)
        );
    }

    #[test]
    fn reachability_classes_distinguish_groups_from_chains() {
        // In a group every element reaches every other: one class.
        assert_eq!(j_classes(&cyclic_group(2)), vec![vec![0, 1]]);
        assert!(!is_j_trivial(&cyclic_group(2)));
        // In a meet-chain translations only go down: all classes singletons.
        assert!(is_j_trivial(&chain_semilattice(3)));
        assert!(is_j_trivial(&semilattice2()));
    }

    #[test]
    fn profiniteness_scan_saturates_small_algebras() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let report = is_profinite_finite_scale(&chain_semilattice(3), 0, &mut rng);
        assert!(report.exhaustive);
        assert_eq!(report.subsets_checked, 8);
        assert!(report.all_saturated);
        assert_eq!(report.max_index, 3);
    }

    #[test]
    fn linear_term_translations_land_in_the_elementary_closure() {
        // The monoid is generated by one-step (elementary) translations;
        // the map of any term linear in its distinguished variable must
        // already be in it, whatever the term's depth.
        use crate::random::{random_algebra, random_linear_term};
        use rand::{Rng, SeedableRng};

        let sig = Signature::new([("u", 2), ("v", 3), ("s", 1)]).unwrap();
        let vars = VariableSet::new(["x", "y", "z"], &sig).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let size = rng.random_range(1..=4);
            let algebra = random_algebra(&mut rng, &sig, size);
            let monoid = translation_monoid(&algebra);
            let maps = maps_of(&monoid);

            let term = random_linear_term(&mut rng, &sig, &vars, "x", 4);
            let mut params = BTreeMap::new();
            for v in term.variables() {
                if v != "x" {
                    params.insert(v.to_string(), rng.random_range(0..size));
                }
            }
            let translation =
                Translation::from_linear_term(&algebra, &term, "x", &params).unwrap();
            assert!(
                maps.contains(&translation.map().to_vec()),
                "linear-term translation escapes the elementary closure"
            );

            // Elementary members carry witnesses; each witness must
            // re-evaluate to the map it came with.
            let mut witnessed = 0;
            for t in &monoid {
                let Some(w) = t.witness() else { continue };
                witnessed += 1;
                let again = Translation::from_linear_term(
                    &algebra,
                    &w.term,
                    &w.distinguished,
                    &w.params,
                )
                .unwrap();
                assert_eq!(again.map(), t.map());
            }
            assert!(witnessed >= 1, "at least the identity is witnessed");
        }
    }
}
