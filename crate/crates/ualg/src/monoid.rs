//! Finite monoids and idempotent (omega) powers.
//!
//! A finite monoid is a carrier `{0, .., n-1}` with an associative binary
//! table and a two-sided unit; both properties are checked exhaustively at
//! construction. Inside a finite monoid the powers of any element are
//! eventually periodic, and the cycle they enter contains exactly one
//! idempotent — the omega power of the element. `omega_power` locates it by
//! scanning the power sequence, and `saturation_exponent` returns a single
//! exponent `k` with `s^k = omega(s)` for every element `s` at once, which
//! is how symbolic omega exponents are replaced by concrete ones.
//!
//! `enumerate_monoids` is the brute-force source of test instances: every
//! associative unital table on up to three points. Larger samples come from
//! `sample_transformation_submonoids`, which closes random self-maps of a
//! small point set under composition.

use rand::Rng;

use crate::algebra::{AlgebraError, FiniteAlgebra};

/// Largest size for which [`enumerate_monoids`] will enumerate tables.
pub const MONOID_ENUM_LIMIT: usize = 3;

/// A finite monoid with a checked associative table and two-sided unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    size: usize,
    table: Vec<usize>,
    unit: usize,
}

impl FiniteMonoid {
    /// Builds a monoid from a row-major multiplication table.
    ///
    /// Fails with `NotAssociative` or `NoUnit` when the table lacks either
    /// property; associativity is checked over all triples.
    pub fn from_table(size: usize, table: Vec<usize>) -> Result<Self, AlgebraError> {
        if size == 0 {
            return Err(AlgebraError::ZeroSize);
        }
        if table.len() != size * size {
            return Err(AlgebraError::WrongTableLength {
                symbol: "*".to_string(),
                expected: size * size,
                found: table.len(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= size) {
            return Err(AlgebraError::ValueOutOfRange { value: bad, size });
        }
        let mul = |a: usize, b: usize| table[a * size + b];
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(AlgebraError::NotAssociative);
                    }
                }
            }
        }
        let unit = (0..size)
            .find(|&e| (0..size).all(|a| mul(e, a) == a && mul(a, e) == a))
            .ok_or(AlgebraError::NoUnit)?;
        Ok(FiniteMonoid { size, table, unit })
    }

    /// Wraps one binary operation of a finite algebra as a monoid.
    pub fn from_algebra(algebra: &FiniteAlgebra, symbol: &str) -> Result<Self, AlgebraError> {
        if algebra.signature().arity(symbol) != Some(2) {
            return Err(AlgebraError::SignatureMismatch);
        }
        Self::from_table(algebra.size(), algebra.table(symbol).to_vec())
    }

    /// Carrier size.
    pub fn size(&self) -> usize {
        self.size
    }

    /// The two-sided unit.
    pub fn unit(&self) -> usize {
        self.unit
    }

    /// The raw multiplication table, row-major.
    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Product of two elements.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    /// `s` raised to the `k`-th power (`k = 0` gives the unit).
    pub fn pow(&self, s: usize, mut k: u64) -> usize {
        let mut base = s;
        let mut acc = self.unit;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// The index and period of `s`: the smallest `i >= 1` and `p >= 1` with
    /// `s^(i+p) = s^i`.
    pub fn index_period(&self, s: usize) -> (usize, usize) {
        // Walk the power sequence recording first-visit times.
        let mut seen = vec![usize::MAX; self.size];
        let mut value = s;
        let mut step = 1;
        loop {
            if seen[value] != usize::MAX {
                let index = seen[value];
                return (index, step - index);
            }
            seen[value] = step;
            value = self.mul(value, s);
            step += 1;
        }
    }

    /// The unique idempotent among the powers of `s`.
    pub fn omega_power(&self, s: usize) -> usize {
        let (index, period) = self.index_period(s);
        // The idempotent is s^m for the unique multiple m of the period
        // within the cycle [index, index + period).
        let m = period * index.div_ceil(period);
        let e = self.pow(s, m as u64);
        debug_assert_eq!(self.mul(e, e), e);
        e
    }

    /// `s^(omega + 1) = s^omega * s`, the cycle successor of the idempotent.
    pub fn omega_plus_one_power(&self, s: usize) -> usize {
        self.mul(self.omega_power(s), s)
    }

    /// An exponent `k >= 1` with `s^k = omega_power(s)` for every `s`:
    /// the least common multiple of all periods, scaled until it reaches
    /// every index.
    pub fn saturation_exponent(&self) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        let mut lcm = 1usize;
        let mut max_index = 1usize;
        for s in 0..self.size {
            let (index, period) = self.index_period(s);
            lcm = lcm / gcd(lcm, period) * period;
            max_index = max_index.max(index);
        }
        lcm * max_index.div_ceil(lcm).max(1)
    }
}

/// Every monoid structure on `{0, .., size-1}`: all binary tables filtered
/// by associativity and existence of a unit. Exact but exponential; sizes
/// above [`MONOID_ENUM_LIMIT`] are rejected with `BoundExceeded`.
pub fn enumerate_monoids(size: usize) -> Result<Vec<FiniteMonoid>, AlgebraError> {
    if size > MONOID_ENUM_LIMIT {
        return Err(AlgebraError::BoundExceeded {
            size,
            limit: MONOID_ENUM_LIMIT,
        });
    }
    if size == 0 {
        return Ok(Vec::new());
    }
    let entries = size * size;
    let total = size.pow(entries as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut table = Vec::with_capacity(entries);
        let mut rest = code;
        for _ in 0..entries {
            table.push(rest % size);
            rest /= size;
        }
        if let Ok(m) = FiniteMonoid::from_table(size, table) {
            out.push(m);
        }
    }
    Ok(out)
}

/// Draws submonoids of the full transformation monoid on `points` points:
/// closes one or two random self-maps (plus the identity) under
/// composition. Keeps only closures whose size lies in `accept_sizes`,
/// returning `count` of them.
pub fn sample_transformation_submonoids<R: Rng>(
    points: usize,
    accept_sizes: &[usize],
    count: usize,
    rng: &mut R,
) -> Vec<FiniteMonoid> {
    let mut out = Vec::new();
    while out.len() < count {
        let num_generators = if rng.random_bool(0.5) { 1 } else { 2 };
        let generators: Vec<Vec<usize>> = (0..num_generators)
            .map(|_| (0..points).map(|_| rng.random_range(0..points)).collect())
            .collect();
        let maps = close_under_composition(points, &generators);
        if !accept_sizes.contains(&maps.len()) {
            continue;
        }
        // Index the maps and read composition off as a table.
        let index_of = |m: &[usize]| maps.iter().position(|x| x == m).expect("closed");
        let size = maps.len();
        let mut table = vec![0; size * size];
        for (i, f) in maps.iter().enumerate() {
            for (j, g) in maps.iter().enumerate() {
                let composed: Vec<usize> = (0..points).map(|x| f[g[x]]).collect();
                table[i * size + j] = index_of(&composed);
            }
        }
        out.push(FiniteMonoid::from_table(size, table).expect("composition is associative"));
    }
    out
}

/// The set of maps generated by `generators` under composition, with the
/// identity adjoined, in sorted order.
fn close_under_composition(points: usize, generators: &[Vec<usize>]) -> Vec<Vec<usize>> {
    use std::collections::BTreeSet;
    let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
    set.insert((0..points).collect());
    for g in generators {
        set.insert(g.clone());
    }
    loop {
        let mut grew = false;
        let current: Vec<Vec<usize>> = set.iter().cloned().collect();
        for f in &current {
            for g in generators {
                let composed: Vec<usize> = (0..points).map(|x| f[g[x]]).collect();
                if set.insert(composed) {
                    grew = true;
                }
            }
        }
        if !grew {
            return set.into_iter().collect();
        }
    }
}
