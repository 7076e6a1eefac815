//! Exact verification of the convolution identities and inequalities used by
//! the intersection bounds: the Cauchy-Schwarz energy bound, the tensor-set
//! decomposition, pointwise support bounds, the difference-set estimate, the
//! Katz-Koester inclusion and the shifted-fiber summation identities.
//!
//! Everything here is checked in exact integer arithmetic; an item only
//! passes if the stated relation holds on the nose.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::Budgets;
use crate::conv::{circ, convolution_k, energy, energy_k, energy_k_bruteforce, fiber_set, tensor_set};
use crate::error::{Error, Result};
use crate::field::{PrimeField, ResidueSet};
use crate::seed::{fnv1a, split_seed};

/// One named exact check.
#[derive(Debug, Clone)]
pub struct CheckItem {
    pub name: String,
    pub pass: bool,
    pub lhs: Option<u128>,
    pub rhs: Option<u128>,
    pub detail: String,
}

impl CheckItem {
    fn cmp_le(name: &str, lhs: u128, rhs: u128, detail: impl Into<String>) -> Self {
        CheckItem {
            name: name.to_string(),
            pass: lhs <= rhs,
            lhs: Some(lhs),
            rhs: Some(rhs),
            detail: detail.into(),
        }
    }

    fn flag(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        CheckItem {
            name: name.to_string(),
            pass,
            lhs: None,
            rhs: None,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> Vec<&CheckItem> {
        self.items.iter().filter(|i| !i.pass).collect()
    }

    pub fn item(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }
}

fn difference_set(a: &ResidueSet, b: &ResidueSet) -> ResidueSet {
    let f = a.field();
    let mut out: Vec<u64> = a
        .iter()
        .flat_map(|&x| b.iter().map(move |&y| f.sub(x, y)))
        .collect();
    out.sort_unstable();
    out.dedup();
    ResidueSet::new(f.clone(), out).expect("canonical difference set")
}

fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    rec(0, n, m, &mut cur, &mut out);
    out
}

/// Runs the full exact check list on the pair `(A, B)` at orders `k`
/// (convolution arity, >= 2) and `l` (tensor dimension, >= 1).
///
/// Sampling inside the Katz-Koester item is seeded from the instance content,
/// so repeated calls are deterministic.
pub fn check_pair(
    a: &ResidueSet,
    b: &ResidueSet,
    k: usize,
    l: usize,
    budgets: &Budgets,
) -> Result<CheckReport> {
    a.check_same_field(b)?;
    if k < 2 || l < 1 {
        return Err(Error::InvalidArgument(
            "pair checks need k >= 2 and l >= 1".into(),
        ));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument(
            "pair checks need nonempty sets".into(),
        ));
    }
    let f = a.field().clone();
    let mut items = Vec::new();

    // (i) Cauchy-Schwarz: |A|^(2k-2) |B|^2 <= E_k(A,..,A,B) * |A (x)_{k-1} B|
    {
        let mut sets: Vec<&ResidueSet> = vec![b];
        sets.extend(std::iter::repeat_n(a, k - 1));
        let table = convolution_k(&sets, budgets)?;
        let e_k = table.energy();
        // cross-route through autocorrelations
        let aa = circ(a, a)?;
        let bb = circ(b, b)?;
        let e_cross: u128 = aa
            .entries()
            .map(|(d, v)| (v as u128).pow((k - 1) as u32) * bb.get(d) as u128)
            .sum();
        assert_eq!(e_k, e_cross, "higher-energy routes disagree");
        let ts = tensor_set(a, b, k - 1, budgets)?;
        assert_eq!(
            table.support_size(),
            ts.len(),
            "table support differs from tensor set"
        );
        let lhs = (a.len() as u128).pow(2 * (k as u32) - 2) * (b.len() as u128).pow(2);
        let rhs = e_k * ts.len() as u128;
        items.push(CheckItem::cmp_le(
            "lemma2.3",
            lhs,
            rhs,
            format!("E_k = {e_k}, support = {}", ts.len()),
        ));
    }

    // (ii) tensor decomposition: A (x)_l B rebuilt from prefix fibers
    if l >= 2 {
        let full = tensor_set(a, b, l, budgets)?;
        let mut pass = true;
        let mut detail = String::new();
        for m in 1..l {
            let prefix = tensor_set(a, b, m, budgets)?;
            let mut rebuilt: BTreeSet<Vec<u64>> = BTreeSet::new();
            for x in prefix.iter() {
                let fib = fiber_set(a, b, x)?;
                if fib.is_empty() {
                    continue;
                }
                let tail = tensor_set(a, &fib, l - m, budgets)?;
                for w in tail.iter() {
                    let mut v = x.to_vec();
                    v.extend_from_slice(w);
                    rebuilt.insert(v);
                }
            }
            let same = rebuilt.len() == full.len()
                && full.iter().all(|v| rebuilt.contains(v));
            if !same {
                pass = false;
            }
            detail = format!("m = {m}: rebuilt {} of {}", rebuilt.len(), full.len());
        }
        items.push(CheckItem::flag("cor2.5-eq8", pass, detail));
    } else {
        items.push(CheckItem::flag("cor2.5-eq8", true, "vacuous at l = 1"));
    }

    let s_set = difference_set(a, a);
    let t_l = tensor_set(a, a, l, budgets)?;

    // (iii) pointwise support bounds
    {
        let mut pass10 = true;
        for m in 1..=l {
            let t_m = tensor_set(a, a, m, budgets)?;
            let subsets = combinations(l, m);
            for v in t_l.iter() {
                for e in &subsets {
                    let sub: Vec<u64> = e.iter().map(|&i| v[i]).collect();
                    if !t_m.contains(&sub) {
                        pass10 = false;
                    }
                }
            }
        }
        items.push(CheckItem::flag(
            "lemma2.6-eq10",
            pass10,
            format!("all coordinate projections of {} vectors", t_l.len()),
        ));

        let pass11 = if l >= 2 {
            let t2 = tensor_set(a, a, 2, budgets)?;
            let ok = t2.iter().all(|v| {
                s_set.contains(v[0]) && s_set.contains(v[1]) && s_set.contains(f.sub(v[0], v[1]))
            });
            ok
        } else {
            true
        };
        items.push(CheckItem::flag(
            "lemma2.6-eq11",
            pass11,
            if l >= 2 { "checked on full support" } else { "vacuous at l = 1" },
        ));

        // pairwise differences, coordinate 0 pinned to the origin
        let mut pass12 = true;
        for v in t_l.iter() {
            let mut coords = vec![0u64];
            coords.extend_from_slice(v);
            for i in 0..coords.len() {
                for j in 0..coords.len() {
                    if i != j && !s_set.contains(f.sub(coords[i], coords[j])) {
                        pass12 = false;
                    }
                }
            }
        }
        items.push(CheckItem::flag(
            "lemma2.6-eq12",
            pass12,
            format!("indices 0..={l} with x_0 = 0"),
        ));
    }

    // (iv) |A (x)_l A| <= sum_x |A - A_x|^(l-1) <= sum_x (S o S)^(l-1)(x)
    {
        let ss = circ(&s_set, &s_set)?;
        let mut mid = 0u128;
        let mut rhs = 0u128;
        for &x in s_set.iter() {
            let fib = fiber_set(a, a, &[x])?;
            let diff = difference_set(a, &fib);
            mid += (diff.len() as u128).pow((l - 1) as u32);
            rhs += (ss.get(&[x]) as u128).pow((l - 1) as u32);
        }
        let lhs = t_l.len() as u128;
        let pass = lhs <= mid && mid <= rhs;
        items.push(CheckItem {
            name: "cor2.7-eq13".into(),
            pass,
            lhs: Some(lhs),
            rhs: Some(rhs),
            detail: format!("middle term {mid}"),
        });
    }

    // (v) Katz-Koester inclusion on sampled shift vectors.
    //
    // Fibers A_s and A_t are taken with opposite shift signs so that the
    // pairwise sums s_i + t_j land in the difference set: with
    // alpha + s_i in A and beta - t_j in A, (alpha + s_i) - (beta - t_j)
    // equals e + (s_i + t_j).
    {
        let mut seed_bytes: Vec<u8> = Vec::new();
        seed_bytes.extend_from_slice(&f.p().to_le_bytes());
        for &x in a.iter() {
            seed_bytes.extend_from_slice(&x.to_le_bytes());
        }
        for &x in b.iter() {
            seed_bytes.extend_from_slice(&x.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(fnv1a(&seed_bytes));
        let mut pass = true;
        let mut tried = 0usize;
        for _ in 0..8 {
            let m = rng.gen_range(1..=k.min(2));
            let n = rng.gen_range(1..=l.min(2));
            let tm = tensor_set(a, a, m, budgets)?;
            let tn = tensor_set(a, a, n, budgets)?;
            if tm.is_empty() || tn.is_empty() {
                continue;
            }
            let s_vec = tm.vector(rng.gen_range(0..tm.len())).to_vec();
            let t_raw = tn.vector(rng.gen_range(0..tn.len())).to_vec();
            // plus-convention fiber: A ∩ (A + t_j), realized as shifts -t_j
            let t_vec: Vec<u64> = t_raw.iter().map(|&x| f.neg(x)).collect();
            let fib_s = fiber_set(a, a, &s_vec)?;
            let fib_t = fiber_set(a, a, &t_raw)?;
            let mut s_full = vec![0u64];
            s_full.extend_from_slice(&s_vec);
            let mut t_full = vec![0u64];
            t_full.extend_from_slice(&t_vec);
            let mut sums: Vec<u64> = Vec::new();
            for (i, &si) in s_full.iter().enumerate() {
                for (j, &tj) in t_full.iter().enumerate() {
                    if (i, j) == (0, 0) {
                        continue;
                    }
                    let u = f.add(si, tj);
                    if u != 0 {
                        sums.push(u);
                    }
                }
            }
            tried += 1;
            for &alpha in fib_s.iter() {
                for &beta in fib_t.iter() {
                    let e = f.sub(alpha, beta);
                    if !s_set.contains(e) {
                        pass = false;
                    }
                    for &u in &sums {
                        if !s_set.contains(f.add(e, u)) {
                            pass = false;
                        }
                    }
                }
            }
        }
        items.push(CheckItem::flag(
            "katz-koester-eq14",
            pass,
            format!("{tried} sampled vector pairs"),
        ));
    }

    // (vi) shifted-fiber summation identities with per-argument shift
    // lengths 0 or 1
    {
        if a.len() > budgets.lemma28_set {
            return Err(Error::BudgetExceeded {
                what: "shifted-fiber identity set size",
                need: a.len() as u128,
                cap: budgets.lemma28_set as u128,
            });
        }
        // a residue outside A - A has an empty fiber; spot-check the converse
        // reasoning behind restricting enumeration to the difference set
        {
            let mut probes = 0;
            for x in 0..f.p() {
                if probes >= 5 {
                    break;
                }
                if !s_set.contains(x) {
                    let fib = fiber_set(a, a, &[x])?;
                    assert!(fib.is_empty(), "fiber outside the difference set");
                    probes += 1;
                }
            }
        }
        let configs: Vec<(usize, Vec<usize>)> = vec![
            (2, vec![1, 0]),
            (2, vec![1, 1]),
            (3, vec![1, 0, 0]),
        ];
        let mut pass16 = true;
        let mut pass17 = true;
        let mut notes16 = Vec::new();
        let mut notes17 = Vec::new();
        for (ck, marks) in configs {
            let w: usize = marks.iter().sum();
            let work = (s_set.len() as u128).pow(w as u32) * (a.len() as u128).pow(ck as u32);
            if work > budgets.conv_work {
                return Err(Error::BudgetExceeded {
                    what: "shifted-fiber identity enumeration",
                    need: work,
                    cap: budgets.conv_work,
                });
            }
            let mut sum_mass = 0u128;
            let mut sum_energy = 0u128;
            let mut tuple = vec![0u64; w];
            enumerate_shift_tuples(
                a,
                &s_set,
                &marks,
                0,
                &mut tuple,
                budgets,
                &mut sum_mass,
                &mut sum_energy,
            )?;
            let rhs16 = (a.len() as u128).pow((w + ck) as u32);
            let order = w + ck;
            let rhs17 = if a.len() <= budgets.brute_set
                && (a.len() as u128).pow(order as u32) <= budgets.conv_work
                && order <= budgets.conv_k_max
            {
                energy_k_bruteforce(a, order, budgets)?
            } else {
                energy_k(a, order, budgets)?
            };
            if sum_mass != rhs16 {
                pass16 = false;
            }
            if sum_energy != rhs17 {
                pass17 = false;
            }
            notes16.push(format!("k={ck},w={w}: {sum_mass} vs {rhs16}"));
            notes17.push(format!("k={ck},w={w}: {sum_energy} vs {rhs17}"));
        }
        items.push(CheckItem::flag("lemma2.8-eq16", pass16, notes16.join("; ")));
        items.push(CheckItem::flag("lemma2.8-eq17", pass17, notes17.join("; ")));
    }

    Ok(CheckReport { items })
}

#[allow(clippy::too_many_arguments)]
fn enumerate_shift_tuples(
    a: &ResidueSet,
    s_set: &ResidueSet,
    marks: &[usize],
    depth: usize,
    tuple: &mut Vec<u64>,
    budgets: &Budgets,
    sum_mass: &mut u128,
    sum_energy: &mut u128,
) -> Result<()> {
    if depth == tuple.len() {
        let mut fibers: Vec<ResidueSet> = Vec::with_capacity(marks.len());
        let mut ti = 0usize;
        for &m in marks {
            if m == 1 {
                fibers.push(fiber_set(a, a, &[tuple[ti]])?);
                ti += 1;
            } else {
                fibers.push(a.clone());
            }
        }
        if fibers.iter().any(|s| s.is_empty()) {
            return Ok(());
        }
        let refs: Vec<&ResidueSet> = fibers.iter().collect();
        let table = convolution_k(&refs, budgets)?;
        *sum_mass += table.mass();
        *sum_energy += table.energy();
        return Ok(());
    }
    for &s in s_set.iter() {
        tuple[depth] = s;
        enumerate_shift_tuples(a, s_set, marks, depth + 1, tuple, budgets, sum_mass, sum_energy)?;
    }
    Ok(())
}

/// Outcome of the randomized identity suite.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub trials: usize,
    pub checks_run: usize,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

fn random_subset(rng: &mut ChaCha8Rng, field: &PrimeField, size: usize) -> ResidueSet {
    let mut chosen: BTreeSet<u64> = BTreeSet::new();
    while chosen.len() < size {
        chosen.insert(rng.gen_range(0..field.p()));
    }
    ResidueSet::new(field.clone(), chosen.into_iter().collect()).expect("canonical random set")
}

/// Seeded random-instance sweep: energy route agreement, table vs fast
/// higher energies, and the full exact check list.
pub fn run_identity_suite(
    field: &PrimeField,
    max_size: usize,
    trials: usize,
    seed: u64,
    budgets: &Budgets,
) -> Result<SuiteOutcome> {
    let max_size = max_size.clamp(1, budgets.brute_set);
    let mut failures = Vec::new();
    let mut checks_run = 0usize;
    for trial in 0..trials {
        let mut rng =
            ChaCha8Rng::seed_from_u64(split_seed(seed, &format!("identities/{trial}")));
        let sa = rng.gen_range(1..=max_size);
        let sb = rng.gen_range(1..=max_size);
        let a = random_subset(&mut rng, field, sa);
        let b = random_subset(&mut rng, field, sb);

        // the three energy expressions, plus a quadruple-loop oracle
        let e = energy(&a, &b)?;
        let mut quad = 0u128;
        for &a1 in a.iter() {
            for &b1 in b.iter() {
                for &a2 in a.iter() {
                    for &b2 in b.iter() {
                        if field.add(a1, b1) == field.add(a2, b2) {
                            quad += 1;
                        }
                    }
                }
            }
        }
        checks_run += 1;
        if e != quad {
            failures.push(format!("trial {trial}: energy {e} != quadruple count {quad}"));
        }

        // E_k(A): table route vs autocorrelation power sum
        for k in 2..=4usize {
            let brute = energy_k_bruteforce(&a, k, budgets)?;
            let aa = circ(&a, &a)?;
            let fast: u128 = aa.entries().map(|(_, v)| (v as u128).pow(k as u32)).sum();
            checks_run += 1;
            if brute != fast {
                failures.push(format!(
                    "trial {trial}: E_{k} table {brute} != power sum {fast}"
                ));
            }
        }

        let k = 2 + (trial % 2);
        let l = 2 + ((trial / 2) % 2);
        let report = check_pair(&a, &b, k, l, budgets)?;
        for item in &report.items {
            checks_run += 1;
            if !item.pass {
                failures.push(format!(
                    "trial {trial}: {} failed ({})",
                    item.name, item.detail
                ));
            }
        }
    }
    Ok(SuiteOutcome {
        trials,
        checks_run,
        failures,
    })
}
