//! Sweep driver: expands a scan configuration into independent instances,
//! evaluates them (optionally in parallel) and renders the sorted CSV.
//!
//! Instance randomness is derived by hashing the instance key with the
//! master seed, so the emitted CSV is identical for a given config no matter
//! how the work is scheduled.

use anyhow::{Context, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use shiftlab_core::bounds;
use shiftlab_core::field::is_prime;
use shiftlab_core::report::{write_csv, InequalityReport, Verdict};
use shiftlab_core::seed::split_seed;
use shiftlab_core::{Error, PrimeField, ResidueSet, Subgroup};

use crate::config::ScanConfig;

pub struct ScanOutcome {
    pub csv: String,
    pub rows: usize,
    pub failures: usize,
    pub skipped: usize,
}

pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// Expands and evaluates every instance of the configured sweep.
pub fn run_scan(cfg: &ScanConfig) -> Result<ScanOutcome> {
    let primes = primes_in(cfg.prime_lo, cfg.prime_hi);
    let work: Vec<(u64, String)> = primes
        .iter()
        .flat_map(|&p| cfg.theorems.iter().map(move |t| (p, t.clone())))
        .collect();

    let eval = |(p, theorem): &(u64, String)| -> Result<(Vec<InequalityReport>, usize)> {
        run_theorem(*p, theorem, cfg).with_context(|| format!("p = {p}, theorem {theorem}"))
    };

    let results: Vec<Result<(Vec<InequalityReport>, usize)>> = if cfg.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .context("building worker pool")?;
        pool.install(|| work.par_iter().map(eval).collect())
    } else {
        work.iter().map(eval).collect()
    };

    let mut reports = Vec::new();
    let mut skipped = 0usize;
    for r in results {
        let (mut rows, skip) = r?;
        reports.append(&mut rows);
        skipped += skip;
    }
    let failures = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Fail)
        .count();
    let rows = reports.len();
    Ok(ScanOutcome {
        csv: write_csv(&reports),
        rows,
        failures,
        skipped,
    })
}

/// Instances that outgrow their budget are skipped (counted, reported on
/// stderr by the caller), never silently truncated.
fn budget_skip<T>(res: shiftlab_core::Result<T>) -> shiftlab_core::Result<Option<T>> {
    match res {
        Ok(v) => Ok(Some(v)),
        Err(Error::BudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn run_theorem(
    p: u64,
    theorem: &str,
    cfg: &ScanConfig,
) -> Result<(Vec<InequalityReport>, usize)> {
    let field = PrimeField::new(p)?;
    let budgets = &cfg.budgets;
    let mut rows: Vec<InequalityReport> = Vec::new();
    let mut skipped = 0usize;
    let orders = cfg.orders.select(&field.order_divisors());

    match theorem {
        "garcia-voloch" => {
            rows.extend(bounds::garcia_voloch_check(&field)?);
        }
        "thm1.1" => {
            for &t in &orders {
                if t < 2 || t == p - 1 {
                    continue;
                }
                let r = Subgroup::of_order(&field, t)?;
                for &k in &cfg.k {
                    let key = format!("thm1.1/{p}/{t}/{k}");
                    let mut rng = ChaCha8Rng::seed_from_u64(split_seed(cfg.seed, &key));
                    let Some((q, mu)) = random_instance(&mut rng, &r, k, 3) else {
                        continue;
                    };
                    rows.push(bounds::theorem11_check(&r, &q, &mu)?);
                }
            }
        }
        "thm5.5-chain" => {
            for &t in &orders {
                if (t as u128) * (t as u128) > p as u128 {
                    continue;
                }
                let r = Subgroup::of_order(&field, t)?;
                match budget_skip(bounds::theorem55_report(&r, budgets))? {
                    Some(mut out) => rows.append(&mut out),
                    None => skipped += 1,
                }
            }
        }
        "lemma5.4" => {
            for &t in &orders {
                if t < 2 {
                    continue;
                }
                let r = Subgroup::of_order(&field, t)?;
                match budget_skip(bounds::lemma54_report(&r, budgets))? {
                    Some(row) => rows.push(row),
                    None => skipped += 1,
                }
            }
        }
        "stmt5.3" => {
            for &t in &orders {
                if t < 2 {
                    continue;
                }
                let r = Subgroup::of_order(&field, t)?;
                let key = format!("stmt5.3/{p}/{t}");
                let mut rng = ChaCha8Rng::seed_from_u64(split_seed(cfg.seed, &key));
                let Some(q) = random_invariant_set(&mut rng, &r, 3) else {
                    continue;
                };
                match budget_skip(bounds::statement53_report(&r, &q, budgets))? {
                    Some(mut out) => rows.append(&mut out),
                    None => skipped += 1,
                }
            }
        }
        "cor5.1" => {
            for &t in &orders {
                if t < 2 {
                    continue;
                }
                let r = Subgroup::of_order(&field, t)?;
                let key = format!("cor5.1/{p}/{t}");
                let mut rng = ChaCha8Rng::seed_from_u64(split_seed(cfg.seed, &key));
                let (Some(q), Some(q1), Some(q2)) = (
                    random_invariant_set(&mut rng, &r, 2),
                    random_invariant_set(&mut rng, &r, 2),
                    random_invariant_set(&mut rng, &r, 2),
                ) else {
                    continue;
                };
                match budget_skip(bounds::cor51_report(&r, &q, &q1, &q2, budgets))? {
                    Some(mut out) => rows.append(&mut out),
                    None => skipped += 1,
                }
            }
        }
        "cor5.6-coverage" => {
            for &t in &orders {
                let r = Subgroup::of_order(&field, t)?;
                rows.push(bounds::cor56_coverage(&r)?);
            }
        }
        other => anyhow::bail!("unknown theorem {other:?}"),
    }
    Ok((rows, skipped))
}

/// Draws an invariant set of at most `max_cosets` cosets.
fn random_invariant_set(
    rng: &mut ChaCha8Rng,
    r: &Subgroup,
    max_cosets: usize,
) -> Option<ResidueSet> {
    let mut reps = r.coset_representatives();
    if reps.is_empty() {
        return None;
    }
    let s = rng.gen_range(1..=max_cosets.min(reps.len()));
    reps.shuffle(rng);
    reps.truncate(s);
    reps.sort_unstable();
    r.invariant_set(&reps).ok()
}

/// Invariant set plus `k` distinct nonzero shifts.
fn random_instance(
    rng: &mut ChaCha8Rng,
    r: &Subgroup,
    k: usize,
    max_cosets: usize,
) -> Option<(ResidueSet, Vec<u64>)> {
    let p = r.field().p();
    if (p - 1) < k as u64 {
        return None;
    }
    let q = random_invariant_set(rng, r, max_cosets)?;
    let mut mu: Vec<u64> = Vec::with_capacity(k);
    while mu.len() < k {
        let m = rng.gen_range(1..p);
        if !mu.contains(&m) {
            mu.push(m);
        }
    }
    mu.sort_unstable();
    Some((q, mu))
}
