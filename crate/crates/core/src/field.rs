//! Prime-field context, multiplicative subgroups and invariant sets.
//!
//! All residue sets are kept in a canonical form: strictly increasing vectors
//! of residues in `[0, p)`. Everything here is immutable after construction.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Exclusive upper bound on supported moduli.
pub const MODULUS_MAX: u64 = 1 << 62;

/// A prime modulus together with its smallest primitive root and the
/// factorization of `p - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
    g: u64,
    /// Prime factorization of `p - 1` as `(prime, exponent)` pairs, ascending.
    factors: Vec<(u64, u32)>,
}

impl PrimeField {
    /// Builds the field context for a prime `p`, `2 < p < 2^62`.
    ///
    /// Primality is decided by a deterministic Miller-Rabin witness set that
    /// covers the whole supported range, `p - 1` is fully factored, and the
    /// smallest primitive root is found by trial against that factorization.
    pub fn new(p: u64) -> Result<Self> {
        if p <= 2 || p >= MODULUS_MAX {
            return Err(Error::Overflow(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let factors = factorize(p - 1);
        let g = smallest_primitive_root(p, &factors);
        Ok(PrimeField { p, g, factors })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn primitive_root(&self) -> u64 {
        self.g
    }

    pub fn factorization(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// All divisors of `p - 1`, ascending.
    pub fn order_divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(q, e) in &self.factors {
            let prev = divs.clone();
            let mut qe = 1u64;
            for _ in 0..e {
                qe *= q;
                divs.extend(prev.iter().map(|d| d * qe));
            }
        }
        divs.sort_unstable();
        divs
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b; // p < 2^62 so no u64 overflow
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p), "inverse of zero");
        self.pow(a, self.p - 2)
    }

    /// Canonical residue of a signed value.
    pub fn reduce_i128(&self, v: i128) -> u64 {
        let p = self.p as i128;
        (((v % p) + p) % p) as u64
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin. The witness set is complete for all
/// `n < 3.3 * 10^24`, which covers the supported modulus range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        r += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Pollard rho with deterministic polynomial increments.
fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime(n) && !n.is_multiple_of(2));
    for c in 1..10_000u64 {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        loop {
            x = f(x);
            y = f(f(y));
            let d = gcd(x.abs_diff(y), n);
            if d == n {
                break;
            }
            if d > 1 {
                return d;
            }
        }
    }
    unreachable!("pollard rho exhausted increments for {n}");
}

/// Full prime factorization, ascending `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut primes: Vec<u64> = Vec::new();
    let mut stack = Vec::new();
    for q in [2u64, 3, 5, 7, 11, 13] {
        while n.is_multiple_of(q) {
            primes.push(q);
            n /= q;
        }
    }
    if n > 1 {
        stack.push(n);
    }
    while let Some(m) = stack.pop() {
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((lq, e)) if *lq == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

fn smallest_primitive_root(p: u64, factors: &[(u64, u32)]) -> u64 {
    'g: for g in 2..p {
        for &(q, _) in factors {
            if powmod(g, (p - 1) / q, p) == 1 {
                continue 'g;
            }
        }
        return g;
    }
    unreachable!("no primitive root below {p}");
}

/// Canonical sorted set of residues in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSet {
    field: PrimeField,
    elems: Vec<u64>,
}

impl ResidueSet {
    /// Builds a set from arbitrary residues; rejects duplicates and values
    /// outside `[0, p)`.
    pub fn new(field: PrimeField, mut elems: Vec<u64>) -> Result<Self> {
        elems.sort_unstable();
        for w in elems.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidArgument(format!(
                    "duplicate residue {}",
                    w[0]
                )));
            }
        }
        if let Some(&last) = elems.last() {
            if last >= field.p() {
                return Err(Error::InvalidArgument(format!(
                    "residue {last} not below p = {}",
                    field.p()
                )));
            }
        }
        Ok(ResidueSet { field, elems })
    }

    pub fn empty(field: PrimeField) -> Self {
        ResidueSet {
            field,
            elems: Vec::new(),
        }
    }

    pub(crate) fn from_sorted(field: PrimeField, elems: Vec<u64>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elems.last().is_none_or(|&x| x < field.p()));
        ResidueSet { field, elems }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[u64] {
        &self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u64> {
        self.elems.iter()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub(crate) fn check_same_field(&self, other: &ResidueSet) -> Result<()> {
        if self.field.p() != other.field.p() {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Set intersection.
    pub fn intersect(&self, other: &ResidueSet) -> Result<ResidueSet> {
        self.check_same_field(other)?;
        let (mut i, mut j) = (0usize, 0usize);
        let mut out = Vec::new();
        while i < self.elems.len() && j < other.elems.len() {
            match self.elems[i].cmp(&other.elems[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(self.elems[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(ResidueSet::from_sorted(self.field.clone(), out))
    }

    /// The translate `{x + c mod p}`.
    pub fn translate(&self, c: u64) -> ResidueSet {
        let mut out: Vec<u64> = self
            .elems
            .iter()
            .map(|&x| self.field.add(x, c % self.field.p()))
            .collect();
        out.sort_unstable();
        ResidueSet::from_sorted(self.field.clone(), out)
    }

    /// The dilate `{c * x mod p}` for nonzero `c`.
    pub fn dilate(&self, c: u64) -> Result<ResidueSet> {
        if c.is_multiple_of(self.field.p()) {
            return Err(Error::ZeroShift);
        }
        let mut out: Vec<u64> = self.elems.iter().map(|&x| self.field.mul(x, c)).collect();
        out.sort_unstable();
        Ok(ResidueSet::from_sorted(self.field.clone(), out))
    }

    /// The reflection `{-x mod p}`.
    pub fn negate(&self) -> ResidueSet {
        let mut out: Vec<u64> = self.elems.iter().map(|&x| self.field.neg(x)).collect();
        out.sort_unstable();
        ResidueSet::from_sorted(self.field.clone(), out)
    }
}

/// The unique multiplicative subgroup of a given order `t | p - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    set: ResidueSet,
    order: u64,
    generator: u64,
}

impl Subgroup {
    /// Constructs `{ g^(i*(p-1)/t) : 0 <= i < t }`.
    pub fn of_order(field: &PrimeField, t: u64) -> Result<Self> {
        let pm1 = field.p() - 1;
        if t == 0 || !pm1.is_multiple_of(t) {
            return Err(Error::NotADivisor { t, pm1 });
        }
        let generator = field.pow(field.primitive_root(), pm1 / t);
        let mut elems = Vec::with_capacity(t as usize);
        let mut x = 1u64;
        for _ in 0..t {
            elems.push(x);
            x = field.mul(x, generator);
        }
        debug_assert_eq!(x, 1, "generator order mismatch");
        elems.sort_unstable();
        Ok(Subgroup {
            set: ResidueSet::from_sorted(field.clone(), elems),
            order: t,
            generator,
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn set(&self) -> &ResidueSet {
        &self.set
    }

    pub fn field(&self) -> &PrimeField {
        self.set.field()
    }

    pub fn elems(&self) -> &[u64] {
        self.set.elems()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.set.contains(x)
    }

    /// Whether `a` and `b` lie in the same multiplicative coset, i.e.
    /// `a / b` is in the subgroup. Both must be nonzero.
    pub fn same_coset(&self, a: u64, b: u64) -> bool {
        debug_assert!(a != 0 && b != 0);
        let f = self.field();
        self.contains(f.mul(a, f.inv(b)))
    }

    /// Union of the cosets `rep * R`; representatives must be nonzero and
    /// pairwise in distinct cosets.
    pub fn invariant_set(&self, reps: &[u64]) -> Result<ResidueSet> {
        let f = self.field().clone();
        for &r in reps {
            if r % f.p() == 0 {
                return Err(Error::ZeroRep);
            }
        }
        for i in 0..reps.len() {
            for j in (i + 1)..reps.len() {
                if self.same_coset(reps[i], reps[j]) {
                    return Err(Error::DuplicateCoset {
                        a: reps[i],
                        b: reps[j],
                    });
                }
            }
        }
        let mut elems = Vec::with_capacity(reps.len() * self.order as usize);
        for &r in reps {
            for &x in self.elems() {
                elems.push(f.mul(r, x));
            }
        }
        elems.sort_unstable();
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        Ok(ResidueSet::from_sorted(f, elems))
    }

    /// One representative (the smallest member) per coset of `Z_p^* / R`,
    /// ascending.
    pub fn coset_representatives(&self) -> Vec<u64> {
        let p = self.field().p();
        let mut seen = vec![false; p as usize];
        let mut reps = Vec::with_capacity(((p - 1) / self.order) as usize);
        for x in 1..p {
            if seen[x as usize] {
                continue;
            }
            reps.push(x);
            for &r in self.elems() {
                seen[self.field().mul(x, r) as usize] = true;
            }
        }
        reps
    }

    /// Splits an invariant set into its coset representatives (the smallest
    /// member of each coset). Errors if `Q` is not `R`-invariant or contains 0.
    pub fn split_into_cosets(&self, q: &ResidueSet) -> Result<Vec<u64>> {
        self.set.check_same_field(q)?;
        if q.contains(0) {
            return Err(Error::InvalidArgument(
                "invariant set must not contain 0".into(),
            ));
        }
        let f = self.field();
        let mut seen: std::collections::HashSet<u64> = std::collections::HashSet::new();
        let mut reps = Vec::new();
        for &x in q.iter() {
            if seen.contains(&x) {
                continue;
            }
            reps.push(x);
            for &r in self.elems() {
                let y = f.mul(x, r);
                if !q.contains(y) {
                    return Err(Error::InvalidArgument(format!(
                        "set is not invariant: {x} * {r} = {y} missing"
                    )));
                }
                seen.insert(y);
            }
        }
        Ok(reps)
    }
}
