//! Higher convolutions, additive energies, tensor sets and shifted fibers.
//!
//! `C_k(f_1, ..., f_k)(x_1, ..., x_{k-1})` counts the `z` with `z` in `f_1`
//! and `z + x_i` in `f_{i+1}` for every `i`; `k = 2` is the correlation
//! `(f o g)(x) = #{y in f : y + x in g}`. Tables are sparse maps keyed by the
//! shift vector, so the support never materializes a dense power of `Z_p`.

use std::collections::BTreeMap;

use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::field::{PrimeField, ResidueSet};

/// Sparse table of a `k`-fold convolution; zero counts are omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvolutionTable {
    field: PrimeField,
    k: usize,
    entries: BTreeMap<Vec<u64>, u64>,
}

impl ConvolutionTable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    /// Count at a shift vector (0 when absent). The key length must be `k - 1`.
    pub fn get(&self, key: &[u64]) -> u64 {
        debug_assert_eq!(key.len(), self.k - 1);
        self.entries.get(key).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[u64], u64)> {
        self.entries.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    /// Sum of all counts; equals the product of the set sizes.
    pub fn mass(&self) -> u128 {
        self.entries.values().map(|&v| v as u128).sum()
    }

    /// Sum of squared counts (the energy associated with this table).
    pub fn energy(&self) -> u128 {
        self.entries
            .values()
            .map(|&v| v as u128 * v as u128)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `(f o g)(x) = #{y in f : y + x in g}`, as a `k = 2` table.
pub fn circ(f: &ResidueSet, g: &ResidueSet) -> Result<ConvolutionTable> {
    f.check_same_field(g)?;
    let fld = f.field();
    let mut entries: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for &a in f.iter() {
        for &b in g.iter() {
            *entries.entry(vec![fld.sub(b, a)]).or_insert(0) += 1;
        }
    }
    Ok(ConvolutionTable {
        field: fld.clone(),
        k: 2,
        entries,
    })
}

/// `(f * g)(x) = #{(a, b) : a + b = x}`; the sign-flipped variant of `circ`.
pub fn star(f: &ResidueSet, g: &ResidueSet) -> Result<ConvolutionTable> {
    f.check_same_field(g)?;
    let fld = f.field();
    let mut entries: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for &a in f.iter() {
        for &b in g.iter() {
            *entries.entry(vec![fld.add(a, b)]).or_insert(0) += 1;
        }
    }
    Ok(ConvolutionTable {
        field: fld.clone(),
        k: 2,
        entries,
    })
}

/// Full `k`-fold convolution table of the given sets (`k = sets.len()`).
///
/// For `k = 1` the table holds the single entry at the empty key with value
/// `|f_1|`.
pub fn convolution_k(sets: &[&ResidueSet], budgets: &Budgets) -> Result<ConvolutionTable> {
    if sets.is_empty() {
        return Err(Error::InvalidArgument("need at least one set".into()));
    }
    let k = sets.len();
    if k > budgets.conv_k_max {
        return Err(Error::BudgetExceeded {
            what: "convolution arity",
            need: k as u128,
            cap: budgets.conv_k_max as u128,
        });
    }
    let first = sets[0];
    for s in &sets[1..] {
        first.check_same_field(s)?;
    }
    let work: u128 = sets.iter().map(|s| s.len() as u128).product();
    if work > budgets.conv_work {
        return Err(Error::BudgetExceeded {
            what: "convolution table",
            need: work,
            cap: budgets.conv_work,
        });
    }
    let fld = first.field().clone();
    let mut entries: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    if k == 1 {
        if !first.is_empty() {
            entries.insert(Vec::new(), first.len() as u64);
        }
        return Ok(ConvolutionTable {
            field: fld,
            k,
            entries,
        });
    }
    let mut key = vec![0u64; k - 1];
    for &z in sets[0].iter() {
        fill_keys(&fld, z, &sets[1..], 0, &mut key, &mut entries);
    }
    Ok(ConvolutionTable {
        field: fld,
        k,
        entries,
    })
}

fn fill_keys(
    fld: &PrimeField,
    z: u64,
    tails: &[&ResidueSet],
    depth: usize,
    key: &mut Vec<u64>,
    entries: &mut BTreeMap<Vec<u64>, u64>,
) {
    if depth == tails.len() {
        *entries.entry(key.clone()).or_insert(0) += 1;
        return;
    }
    for &y in tails[depth].iter() {
        key[depth] = fld.sub(y, z);
        fill_keys(fld, z, tails, depth + 1, key, entries);
    }
}

/// Additive energy `E(A, B) = #{(a1, b1, a2, b2) : a1 + b1 = a2 + b2}`.
///
/// Evaluated three ways (sum of squares of `A * B`, of `A o B`, and the
/// cross-correlation form) which are asserted equal before returning.
pub fn energy(a: &ResidueSet, b: &ResidueSet) -> Result<u128> {
    a.check_same_field(b)?;
    let via_star = star(a, b)?.energy();
    let via_circ = circ(a, b)?.energy();
    let aa = circ(a, a)?;
    let bb = circ(b, b)?;
    let (small, large) = if aa.support_size() <= bb.support_size() {
        (&aa, &bb)
    } else {
        (&bb, &aa)
    };
    let via_cross: u128 = small
        .entries()
        .map(|(x, v)| v as u128 * large.get(x) as u128)
        .sum();
    assert_eq!(via_star, via_circ, "energy route mismatch (star vs circ)");
    assert_eq!(via_star, via_cross, "energy route mismatch (cross form)");
    Ok(via_star)
}

/// Higher energy `E_k(A)`, fast path: `sum_x (A o A)(x)^k`.
///
/// When `|A|` is within the brute-force budget the exhaustive table route is
/// also evaluated and asserted equal.
pub fn energy_k(a: &ResidueSet, k: usize, budgets: &Budgets) -> Result<u128> {
    if k < 2 {
        return Err(Error::InvalidArgument("energy order must be >= 2".into()));
    }
    let aa = circ(a, a)?;
    let fast: u128 = aa
        .entries()
        .map(|(_, v)| (v as u128).pow(k as u32))
        .sum();
    if a.len() <= budgets.brute_set && k <= budgets.conv_k_max {
        if let Ok(brute) = energy_k_bruteforce(a, k, budgets) {
            assert_eq!(fast, brute, "higher-energy fast path disagrees with table");
        }
    }
    Ok(fast)
}

/// `E_k(A)` by explicitly building the `k`-fold table and summing squares.
pub fn energy_k_bruteforce(a: &ResidueSet, k: usize, budgets: &Budgets) -> Result<u128> {
    if k < 2 {
        return Err(Error::InvalidArgument("energy order must be >= 2".into()));
    }
    if a.len() > budgets.brute_set {
        return Err(Error::BudgetExceeded {
            what: "brute-force energy set size",
            need: a.len() as u128,
            cap: budgets.brute_set as u128,
        });
    }
    let sets: Vec<&ResidueSet> = std::iter::repeat_n(a, k).collect();
    Ok(convolution_k(&sets, budgets)?.energy())
}

/// Lexicographically sorted set of distinct `l`-vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorSet {
    field: PrimeField,
    l: usize,
    flat: Vec<u64>, // concatenated vectors, sorted lexicographically
}

impl TensorSet {
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn len(&self) -> usize {
        self.flat.len() / self.l
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn vector(&self, i: usize) -> &[u64] {
        &self.flat[i * self.l..(i + 1) * self.l]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u64]> {
        self.flat.chunks_exact(self.l)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        debug_assert_eq!(v.len(), self.l);
        let n = self.len();
        let (mut lo, mut hi) = (0usize, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.vector(mid).cmp(v) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    fn from_vectors(field: PrimeField, l: usize, mut raw: Vec<u64>) -> Self {
        debug_assert_eq!(raw.len() % l, 0);
        let n = raw.len() / l;
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_unstable_by(|&a, &b| raw[a * l..(a + 1) * l].cmp(&raw[b * l..(b + 1) * l]));
        let mut flat = Vec::with_capacity(raw.len());
        for (pos, &i) in idx.iter().enumerate() {
            let v = &raw[i * l..(i + 1) * l];
            if pos > 0 {
                let prev = idx[pos - 1];
                if raw[prev * l..(prev + 1) * l] == *v {
                    continue;
                }
            }
            flat.extend_from_slice(v);
        }
        raw.clear();
        TensorSet { field, l, flat }
    }
}

/// `A (x)_l B`: the distinct vectors `(a_1 - b, ..., a_l - b)` over `b in B`
/// and `a_i in A`.
pub fn tensor_set(a: &ResidueSet, b: &ResidueSet, l: usize, budgets: &Budgets) -> Result<TensorSet> {
    a.check_same_field(b)?;
    if l == 0 {
        return Err(Error::InvalidArgument("tensor dimension must be >= 1".into()));
    }
    let work = (b.len() as u128) * (a.len() as u128).pow(l as u32);
    if work > budgets.tensor_work {
        return Err(Error::BudgetExceeded {
            what: "tensor set enumeration",
            need: work,
            cap: budgets.tensor_work,
        });
    }
    let fld = a.field().clone();
    let mut raw: Vec<u64> = Vec::new();
    let mut stack = vec![0u64; l];
    for &base in b.iter() {
        push_tensor_vectors(&fld, a, base, 0, &mut stack, &mut raw);
    }
    let ts = TensorSet::from_vectors(fld, l, raw);
    // size sandwich |A|^l >= ... holds whenever B is nonempty
    if !a.is_empty() && !b.is_empty() {
        let lower = (a.len() as u128).pow(l as u32);
        let upper = lower * b.len() as u128;
        let got = ts.len() as u128;
        debug_assert!(lower <= got && got <= upper, "tensor size sandwich violated");
    }
    Ok(ts)
}

fn push_tensor_vectors(
    fld: &PrimeField,
    a: &ResidueSet,
    base: u64,
    depth: usize,
    stack: &mut Vec<u64>,
    raw: &mut Vec<u64>,
) {
    if depth == stack.len() {
        raw.extend_from_slice(stack);
        return;
    }
    for &x in a.iter() {
        stack[depth] = fld.sub(x, base);
        push_tensor_vectors(fld, a, base, depth + 1, stack, raw);
    }
}

/// Shifted fiber `B ∩ (A - x_1) ∩ ... ∩ (A - x_m)`.
///
/// Its size equals the convolution count `C_{m+1}(B, A, ..., A)(x)`, which is
/// re-counted independently and asserted.
pub fn fiber_set(a: &ResidueSet, b: &ResidueSet, shifts: &[u64]) -> Result<ResidueSet> {
    a.check_same_field(b)?;
    let fld = a.field();
    let mut cur = b.clone();
    for &x in shifts {
        if cur.is_empty() {
            break;
        }
        cur = cur.intersect(&a.translate(fld.neg(x % fld.p())))?;
    }
    let direct = b
        .iter()
        .filter(|&&z| shifts.iter().all(|&x| a.contains(fld.add(z, x % fld.p()))))
        .count();
    assert_eq!(cur.len(), direct, "fiber size disagrees with direct count");
    Ok(cur)
}
