//! Self-checking counterexample demonstrations.
//!
//! Each demonstration scans a family of instances for violations of a
//! claimed property and returns a [`DemoReport`]; an empty violation list
//! means the claim survived the scan.
//!
//! * `run_not_faithful` — a family of term pairs, one per wrapping depth,
//!   each separated by a fixed two-element algebra, while the associated
//!   ω-words collapse to a single value in every finite monoid.
//! * `nonprofinite_check` — a unary structure on the extended naturals
//!   with no continuous finite quotient separating 0 from the point at
//!   infinity.
//! * `run_jonsson_tarski` — a pairing signature whose defining identities
//!   admit no model with two or more elements.
//! * `run_omega_law` — the ω-power is the unique idempotent among the
//!   positive powers of each element of each small monoid.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{tuples, AlgebraError, FiniteAlgebra};
use crate::monoid::{enumerate_monoids, sample_transformation_submonoids, FiniteMonoid};
use crate::omega_word::not_faithful_equation;
use crate::signature::{Signature, VariableSet};
use crate::term::Term;
use crate::variety::{satisfies, Identity};

/// Largest size for the exhaustive non-profiniteness scan.
pub const NONPROFINITE_BOUND_LIMIT: usize = 4;

/// Errors from the demonstration builders.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CounterexampleError {
    /// The wrapping symbol needs arity at least two.
    #[error("ArityTooSmall: need arity at least 2, got {arity}")]
    ArityTooSmall {
        /// The offending arity.
        arity: usize,
    },
    /// Wrapping depths must be positive.
    #[error("ZeroDepth: wrapping depth must be positive")]
    ZeroDepth,
    /// A scan bound beyond the supported limit.
    #[error("BoundExceeded: size {size} exceeds the limit {limit}")]
    BoundExceeded {
        /// The requested bound.
        size: usize,
        /// The supported limit.
        limit: usize,
    },
    /// An underlying algebra-layer error.
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Outcome of a demonstration scan.
#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    /// Which demonstration ran.
    pub case: String,
    /// The input parameters, echoed as JSON.
    pub parameters: serde_json::Value,
    /// How many instances were scanned.
    pub instances_checked: u64,
    /// Human-readable descriptions of every violation found.
    pub violations: Vec<String>,
}

impl DemoReport {
    /// Whether the scan found no violations.
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The signature (one symbol `u` of arity `n`) and variable set (`x`)
/// for the non-faithfulness family.
pub fn not_faithful_signature(
    n: usize,
) -> Result<(Signature, VariableSet), CounterexampleError> {
    if n < 2 {
        return Err(CounterexampleError::ArityTooSmall { arity: n });
    }
    let sig = Signature::new([("u".to_string(), n)]).expect("one symbol");
    let vars = VariableSet::new(["x".to_string()], &sig).expect("fresh variable");
    Ok((sig, vars))
}

/// The wrapped term family: `u(a, b,…,b)` (with `n-1` copies of `b`),
/// then `k-1` further wraps `u(previous, c,…,c)`.
fn wk_term(sig: &Signature, n: usize, k: usize, a: &Term, b: &Term, c: &Term) -> Term {
    let mut args = vec![a.clone()];
    args.extend(std::iter::repeat_with(|| b.clone()).take(n - 1));
    let mut term = Term::app("u", args, sig).expect("arity n by construction");
    for _ in 1..k {
        let mut args = vec![term];
        args.extend(std::iter::repeat_with(|| c.clone()).take(n - 1));
        term = Term::app("u", args, sig).expect("arity n by construction");
    }
    term
}

/// `w_k`: the wrap family applied to the variable alone.
pub fn build_wk(n: usize, k: usize) -> Result<Term, CounterexampleError> {
    check_family(n, k)?;
    let (sig, vars) = not_faithful_signature(n)?;
    let x = Term::var("x", &vars).expect("x is declared");
    Ok(wk_term(&sig, n, k, &x, &x, &x))
}

/// `t_k`: the wrap family applied to three copies of `w_k`.
pub fn build_tk(n: usize, k: usize) -> Result<Term, CounterexampleError> {
    let w = build_wk(n, k)?;
    let (sig, _) = not_faithful_signature(n)?;
    Ok(wk_term(&sig, n, k, &w, &w, &w))
}

/// `s_k`: the wrap family applied to `t_k` and the variable.
pub fn build_sk(n: usize, k: usize) -> Result<Term, CounterexampleError> {
    let t = build_tk(n, k)?;
    let (sig, vars) = not_faithful_signature(n)?;
    let x = Term::var("x", &vars).expect("x is declared");
    Ok(wk_term(&sig, n, k, &t, &x, &x))
}

fn check_family(n: usize, k: usize) -> Result<(), CounterexampleError> {
    if n < 2 {
        return Err(CounterexampleError::ArityTooSmall { arity: n });
    }
    if k == 0 {
        return Err(CounterexampleError::ZeroDepth);
    }
    Ok(())
}

fn push_repeated(tokens: &mut Vec<String>, token: &str, count: usize) {
    tokens.extend(std::iter::repeat_with(|| token.to_string()).take(count));
}

/// Prefix-word tokens of `w_k`, derived arithmetically rather than from
/// the term: `u^k x^{k(n-1)+1}`.
pub fn flat_wk(n: usize, k: usize) -> Result<Vec<String>, CounterexampleError> {
    check_family(n, k)?;
    let mut tokens = Vec::new();
    push_repeated(&mut tokens, "u", k);
    push_repeated(&mut tokens, "x", k * (n - 1) + 1);
    Ok(tokens)
}

/// Prefix-word tokens of `t_k`: `u^k` followed by `k(n-1)+1` copies of the
/// tokens of `w_k`.
pub fn flat_tk(n: usize, k: usize) -> Result<Vec<String>, CounterexampleError> {
    let w = flat_wk(n, k)?;
    let mut tokens = Vec::new();
    push_repeated(&mut tokens, "u", k);
    for _ in 0..k * (n - 1) + 1 {
        tokens.extend(w.iter().cloned());
    }
    Ok(tokens)
}

/// Prefix-word tokens of `s_k`: `u^k`, the tokens of `t_k`, then
/// `x^{k(n-1)}`.
pub fn flat_sk(n: usize, k: usize) -> Result<Vec<String>, CounterexampleError> {
    let t = flat_tk(n, k)?;
    let mut tokens = Vec::new();
    push_repeated(&mut tokens, "u", k);
    tokens.extend(t);
    push_repeated(&mut tokens, "x", k * (n - 1));
    Ok(tokens)
}

/// The two-element algebra separating `t_k` from `s_k` for every `k`:
/// `u` returns the toggle of its last argument.
pub fn separating_algebra(n: usize) -> Result<FiniteAlgebra, CounterexampleError> {
    let (sig, _) = not_faithful_signature(n)?;
    let table: Vec<usize> = tuples(2, n).map(|args| 1 - args[n - 1]).collect();
    let mut tables = BTreeMap::new();
    tables.insert("u".to_string(), table);
    Ok(FiniteAlgebra::new(sig, 2, tables)?)
}

/// Scans the non-faithfulness family: for each depth `k` the terms `t_k`
/// and `s_k` are separated by [`separating_algebra`], their prefix words
/// match the arithmetic oracles, and the limiting ω-words evaluate equally
/// in every small monoid (exhaustively to size 3, then in sampled
/// transformation monoids of sizes 4 and 5).
pub fn run_not_faithful(
    n: usize,
    ks: &[usize],
    sample_count: usize,
    seed: u64,
) -> Result<DemoReport, CounterexampleError> {
    for &k in ks {
        check_family(n, k)?;
    }
    if ks.is_empty() {
        check_family(n, 1)?;
    }
    let mut checked = 0u64;
    let mut violations = Vec::new();

    let algebra = separating_algebra(n)?;
    let xi: BTreeMap<String, usize> = [("x".to_string(), 0)].into();
    for &k in ks {
        let t = build_tk(n, k)?;
        let s = build_sk(n, k)?;
        if t.to_polish() != flat_tk(n, k)? {
            violations.push(format!("t_{k} prefix word disagrees with the oracle (n={n})"));
        }
        if s.to_polish() != flat_sk(n, k)? {
            violations.push(format!("s_{k} prefix word disagrees with the oracle (n={n})"));
        }
        let tv = algebra.eval(&t, &xi)?;
        let sv = algebra.eval(&s, &xi)?;
        if tv != 0 || sv != 1 {
            violations.push(format!(
                "separating algebra fails at depth {k}: t ↦ {tv}, s ↦ {sv} (n={n})"
            ));
        }
        checked += 3;
    }

    let [e1, e2, e3] = not_faithful_equation("u", "x");
    let mut scan_monoid = |m: &FiniteMonoid, saturated_words: bool| {
        for mu in 0..m.size() {
            for mx in 0..m.size() {
                let assignment: BTreeMap<String, usize> =
                    [("u".to_string(), mu), ("x".to_string(), mx)].into();
                let v1 = e1.eval(m, &assignment).expect("letters assigned");
                let v2 = e2.eval(m, &assignment).expect("letters assigned");
                let v3 = e3.eval(m, &assignment).expect("letters assigned");
                checked += 1;
                if v1 != v2 || v2 != v3 {
                    violations.push(format!(
                        "ω-words split in a monoid of size {}: {v1} {v2} {v3}",
                        m.size()
                    ));
                }
                if saturated_words {
                    // At the saturation exponent k', the plain words for
                    // t_{k'} and s_{k'} must already take the ω-word value.
                    let k = m.saturation_exponent();
                    let u_pow = m.pow(mu, k as u64);
                    let x_block = m.pow(mx, (k * (n - 1) + 1) as u64);
                    let w_val = m.mul(u_pow, x_block);
                    let t_val = m.mul(u_pow, m.pow(w_val, (k * (n - 1) + 1) as u64));
                    let s_val = m.mul(m.mul(u_pow, t_val), m.pow(mx, (k * (n - 1)) as u64));
                    checked += 1;
                    if t_val != s_val || t_val != v2 {
                        violations.push(format!(
                            "saturated words split in a monoid of size {}: t={t_val} s={s_val} ω={v2}",
                            m.size()
                        ));
                    }
                }
            }
        }
    };
    for size in 1..=3 {
        for m in enumerate_monoids(size)? {
            scan_monoid(&m, true);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for m in sample_transformation_submonoids(4, &[4, 5], sample_count, &mut rng) {
        scan_monoid(&m, false);
    }

    Ok(DemoReport {
        case: "not-faithful".to_string(),
        parameters: serde_json::json!({
            "arity": n,
            "depths": ks,
            "sampled_monoids": sample_count,
            "seed": seed,
        }),
        instances_checked: checked,
        violations,
    })
}

/// Exhaustive scan showing no continuous map to a finite unary structure
/// separates 0 from the limit point.
///
/// The source structure is the extended naturals with a decrement `u`
/// (fixing 0 and the limit point) and an increment `v` (fixing the limit
/// point). A continuous map into a finite structure is determined by the
/// image of 0; its image orbit under `v` must stabilise, the limit point
/// must go to the stable value, and the decrement conditions force the
/// whole orbit back onto the image of 0. The scan confirms that every
/// surviving map sends 0 and the limit point to the same element.
pub fn nonprofinite_check(bound: usize) -> Result<DemoReport, CounterexampleError> {
    if bound == 0 || bound > NONPROFINITE_BOUND_LIMIT {
        return Err(CounterexampleError::BoundExceeded {
            size: bound,
            limit: NONPROFINITE_BOUND_LIMIT,
        });
    }
    let mut checked = 0u64;
    let mut violations = Vec::new();
    for size in 1..=bound {
        let unary_tables: Vec<Vec<usize>> = tuples(size, size).collect();
        for u_table in &unary_tables {
            for v_table in &unary_tables {
                for c in 0..size {
                    checked += 1;
                    // Orbit of c under v, recorded until the first repeat.
                    let mut orbit = vec![c];
                    let mut seen = vec![usize::MAX; size];
                    seen[c] = 0;
                    let (cycle_start, cycle_len) = loop {
                        let next = v_table[*orbit.last().expect("orbit nonempty")];
                        if seen[next] != usize::MAX {
                            break (seen[next], orbit.len() - seen[next]);
                        }
                        seen[next] = orbit.len();
                        orbit.push(next);
                    };
                    if cycle_len != 1 {
                        continue; // the image sequence has no limit
                    }
                    let p = orbit[cycle_start];
                    if u_table[c] != c || u_table[p] != p {
                        continue;
                    }
                    if (1..orbit.len()).any(|m| u_table[orbit[m]] != orbit[m - 1]) {
                        continue;
                    }
                    if c != p {
                        violations.push(format!(
                            "separating continuous map: size {size}, u={u_table:?}, v={v_table:?}, 0 ↦ {c}, limit ↦ {p}"
                        ));
                    }
                }
            }
        }
    }
    Ok(DemoReport {
        case: "non-profinite".to_string(),
        parameters: serde_json::json!({ "max_size": bound }),
        instances_checked: checked,
        violations,
    })
}

/// An element of the extended naturals, for symbolic decrement powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtendedNatural {
    /// A finite value.
    Nat(u64),
    /// The limit point.
    Infinity,
}

/// The `n`-fold decrement: finite values drop (stopping at 0), the limit
/// point is fixed. As `n` grows these maps converge pointwise to a map
/// sending every finite value to 0 but fixing the limit point — a
/// discontinuous limit, witnessing why no finite continuous quotient
/// separates 0 from the limit point.
pub fn decrement_power(n: u64, e: ExtendedNatural) -> ExtendedNatural {
    match e {
        ExtendedNatural::Nat(m) => ExtendedNatural::Nat(m.saturating_sub(n)),
        ExtendedNatural::Infinity => ExtendedNatural::Infinity,
    }
}

/// The pairing signature: two unary projections `alpha`, `beta` and one
/// binary pairing `gamma`.
pub fn pairing_signature() -> (Signature, VariableSet) {
    let sig = Signature::new([
        ("alpha".to_string(), 1),
        ("beta".to_string(), 1),
        ("gamma".to_string(), 2),
    ])
    .expect("three symbols");
    let vars = VariableSet::new(["x".to_string(), "y".to_string()], &sig).expect("fresh");
    (sig, vars)
}

/// The pairing identities: `alpha(gamma(x,y)) = x`, `beta(gamma(x,y)) = y`,
/// `gamma(alpha(x), beta(x)) = x`. They pair the carrier with its own
/// square, so only a one-element carrier can satisfy all three.
pub fn pairing_identities() -> Vec<Identity> {
    let (sig, vars) = pairing_signature();
    let x = Term::var("x", &vars).expect("x is declared");
    let y = Term::var("y", &vars).expect("y is declared");
    let gxy = Term::app("gamma", vec![x.clone(), y.clone()], &sig).expect("arity 2");
    vec![
        Identity::new(
            Term::app("alpha", vec![gxy.clone()], &sig).expect("arity 1"),
            x.clone(),
        ),
        Identity::new(Term::app("beta", vec![gxy], &sig).expect("arity 1"), y),
        Identity::new(
            Term::app(
                "gamma",
                vec![
                    Term::app("alpha", vec![x.clone()], &sig).expect("arity 1"),
                    Term::app("beta", vec![x.clone()], &sig).expect("arity 1"),
                ],
                &sig,
            )
            .expect("arity 2"),
            x,
        ),
    ]
}

/// Scans for models of the pairing identities: exhaustively over all
/// two-element algebras, then over `samples` random algebras of each size
/// from 3 to `max_size`. Any satisfier with at least two elements is a
/// violation.
pub fn run_jonsson_tarski(
    max_size: usize,
    samples: u64,
    seed: u64,
) -> Result<DemoReport, CounterexampleError> {
    let (sig, _) = pairing_signature();
    let identities = pairing_identities();
    let mut checked = 0u64;
    let mut violations = Vec::new();
    let mut consider = |algebra: &FiniteAlgebra| -> Result<(), AlgebraError> {
        checked += 1;
        let mut all = true;
        for id in &identities {
            all &= satisfies(algebra, id)?;
        }
        if all {
            violations.push(format!(
                "pairing identities hold in a {}-element algebra: alpha={:?} beta={:?} gamma={:?}",
                algebra.size(),
                algebra.table("alpha"),
                algebra.table("beta"),
                algebra.table("gamma"),
            ));
        }
        Ok(())
    };

    if max_size >= 2 {
        for alpha in tuples(2, 2) {
            for beta in tuples(2, 2) {
                for gamma in tuples(2, 4) {
                    let tables: BTreeMap<String, Vec<usize>> = [
                        ("alpha".to_string(), alpha.clone()),
                        ("beta".to_string(), beta.clone()),
                        ("gamma".to_string(), gamma),
                    ]
                    .into();
                    let algebra = FiniteAlgebra::new(sig.clone(), 2, tables)?;
                    consider(&algebra)?;
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for size in 3..=max_size {
        for _ in 0..samples {
            let algebra = crate::random::random_algebra(&mut rng, &sig, size);
            consider(&algebra)?;
        }
    }

    Ok(DemoReport {
        case: "jonsson-tarski".to_string(),
        parameters: serde_json::json!({
            "max_size": max_size,
            "samples": samples,
            "seed": seed,
        }),
        instances_checked: checked,
        violations,
    })
}

/// Scans every monoid up to `max_size` (enumeration limit 3): for each
/// element, the ω-power must be idempotent and must be the only idempotent
/// among the positive powers, and the saturation exponent must realise it.
pub fn run_omega_law(max_size: usize) -> Result<DemoReport, CounterexampleError> {
    let mut checked = 0u64;
    let mut violations = Vec::new();
    for size in 1..=max_size {
        for m in enumerate_monoids(size)? {
            let k = m.saturation_exponent();
            for s in 0..m.size() {
                checked += 1;
                let omega = m.omega_power(s);
                // Idempotents among the positive powers of s.
                let mut idempotents = Vec::new();
                let mut power = s;
                let mut seen = vec![false; m.size()];
                while !seen[power] {
                    seen[power] = true;
                    if m.mul(power, power) == power && !idempotents.contains(&power) {
                        idempotents.push(power);
                    }
                    power = m.mul(power, s);
                }
                if idempotents != vec![omega] {
                    violations.push(format!(
                        "powers of {s} in a monoid of size {} have idempotents {idempotents:?}, ω-power {omega}",
                        m.size()
                    ));
                }
                if m.pow(s, k as u64) != omega || m.pow(s, (k + 1) as u64) != m.omega_plus_one_power(s)
                {
                    violations.push(format!(
                        "saturation exponent {k} misses the ω-powers of {s} in a monoid of size {}",
                        m.size()
                    ));
                }
            }
        }
    }
    Ok(DemoReport {
        case: "omega-law".to_string(),
        parameters: serde_json::json!({ "max_size": max_size }),
        instances_checked: checked,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_polish;

    #[test]
    fn flat_oracles_match_the_built_terms() {
        for n in [2usize, 3] {
            for k in 1..=3 {
                assert_eq!(build_wk(n, k).unwrap().to_polish(), flat_wk(n, k).unwrap());
                assert_eq!(build_tk(n, k).unwrap().to_polish(), flat_tk(n, k).unwrap());
                assert_eq!(build_sk(n, k).unwrap().to_polish(), flat_sk(n, k).unwrap());
            }
        }
    }

    #[test]
    fn depth_one_binary_terms_have_the_expected_words() {
        assert_eq!(flat_wk(2, 1).unwrap().join(" "), "u x x");
        assert_eq!(flat_tk(2, 1).unwrap().join(" "), "u u x x u x x");
        assert_eq!(flat_sk(2, 1).unwrap().join(" "), "u u u x x u x x x");
        let (sig, vars) = not_faithful_signature(2).unwrap();
        let t = parse_polish("u u x x u x x", &sig, &vars).unwrap();
        assert_eq!(t, build_tk(2, 1).unwrap());
    }

    #[test]
    fn the_toggle_algebra_separates_every_depth() {
        for n in [2usize, 3] {
            let algebra = separating_algebra(n).unwrap();
            let xi: BTreeMap<String, usize> = [("x".to_string(), 0)].into();
            for k in 1..=4 {
                let w = build_wk(n, k).unwrap();
                let t = build_tk(n, k).unwrap();
                let s = build_sk(n, k).unwrap();
                assert_eq!(algebra.eval(&w, &xi).unwrap(), 1);
                assert_eq!(algebra.eval(&t, &xi).unwrap(), 0);
                assert_eq!(algebra.eval(&s, &xi).unwrap(), 1);
            }
        }
    }

    #[test]
    fn family_builders_reject_degenerate_parameters() {
        assert_eq!(
            build_wk(1, 1).err(),
            Some(CounterexampleError::ArityTooSmall { arity: 1 })
        );
        assert_eq!(build_wk(2, 0).err(), Some(CounterexampleError::ZeroDepth));
        assert_eq!(
            not_faithful_signature(0).err(),
            Some(CounterexampleError::ArityTooSmall { arity: 0 })
        );
    }

    #[test]
    fn not_faithful_demo_passes_on_a_small_run() {
        let report = run_not_faithful(2, &[1, 2], 10, 5).unwrap();
        assert!(report.passed(), "violations: {:?}", report.violations);
        assert!(report.instances_checked > 0);
        assert_eq!(report.case, "not-faithful");
    }

    #[test]
    fn nonprofinite_scan_finds_no_separating_map() {
        let report = nonprofinite_check(3).unwrap();
        assert!(report.passed(), "violations: {:?}", report.violations);
        assert_eq!(report.instances_checked, 1 + 16 * 2 + 729 * 3);
        assert!(matches!(
            nonprofinite_check(5).err(),
            Some(CounterexampleError::BoundExceeded { size: 5, limit: 4 })
        ));
    }

    #[test]
    fn decrement_powers_converge_to_a_discontinuous_map() {
        for m in [0u64, 1, 7, 100] {
            // Beyond n = m the finite point has reached 0 and stays.
            assert_eq!(decrement_power(m, ExtendedNatural::Nat(m)), ExtendedNatural::Nat(0));
            assert_eq!(
                decrement_power(m + 10, ExtendedNatural::Nat(m)),
                ExtendedNatural::Nat(0)
            );
            assert_eq!(
                decrement_power(m, ExtendedNatural::Infinity),
                ExtendedNatural::Infinity
            );
        }
        assert_eq!(
            decrement_power(3, ExtendedNatural::Nat(10)),
            ExtendedNatural::Nat(7)
        );
    }

    #[test]
    fn pairing_identities_have_no_two_element_model() {
        let report = run_jonsson_tarski(2, 0, 0).unwrap();
        assert!(report.passed(), "violations: {:?}", report.violations);
        assert_eq!(report.instances_checked, 256);
    }

    #[test]
    fn pairing_identities_hold_in_the_one_element_algebra() {
        let (sig, _) = pairing_signature();
        let algebra = crate::catalog::null_algebra(&sig, 1, 0);
        for id in pairing_identities() {
            assert!(satisfies(&algebra, &id).unwrap());
        }
    }

    #[test]
    fn omega_law_demo_passes_on_small_monoids() {
        let report = run_omega_law(2).unwrap();
        assert!(report.passed(), "violations: {:?}", report.violations);
        assert_eq!(report.instances_checked, 1 + 4 * 2);
    }
}
