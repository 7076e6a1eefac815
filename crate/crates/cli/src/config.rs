//! Flat key=value scan configuration.
//!
//! Example:
//!
//! ```text
//! theorems = garcia-voloch, thm1.1
//! prime_lo = 101
//! prime_hi = 499
//! orders = all            # or max_below:64 or list:6,10,12
//! k = 1
//! seed = 7
//! output = out
//! jobs = 2
//! budget.dft_prime = 20000
//! ```

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use shiftlab_core::Budgets;

pub const KNOWN_THEOREMS: &[&str] = &[
    "garcia-voloch",
    "thm1.1",
    "thm5.5-chain",
    "lemma5.4",
    "stmt5.3",
    "cor5.1",
    "cor5.6-coverage",
];

#[derive(Debug, Clone, PartialEq)]
pub enum OrderFilter {
    All,
    MaxBelow(u64),
    List(Vec<u64>),
}

impl OrderFilter {
    /// Applies the filter to the ascending divisor list of `p - 1`.
    pub fn select(&self, divisors: &[u64]) -> Vec<u64> {
        match self {
            OrderFilter::All => divisors.to_vec(),
            OrderFilter::MaxBelow(cap) => divisors
                .iter()
                .copied()
                .filter(|&d| d <= *cap)
                .max()
                .into_iter()
                .collect(),
            OrderFilter::List(list) => divisors
                .iter()
                .copied()
                .filter(|d| list.contains(d))
                .collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub theorems: Vec<String>,
    pub prime_lo: u64,
    pub prime_hi: u64,
    pub orders: OrderFilter,
    pub k: Vec<usize>,
    pub seed: u64,
    pub output: PathBuf,
    pub jobs: usize,
    pub budgets: Budgets,
}

pub fn parse_config(text: &str, budget_scale: f64) -> Result<ScanConfig> {
    let mut theorems: Vec<String> = KNOWN_THEOREMS.iter().map(|s| s.to_string()).collect();
    let mut prime_lo = 101u64;
    let mut prime_hi = 499u64;
    let mut orders = OrderFilter::All;
    let mut k: Vec<usize> = vec![1];
    let mut seed = 1u64;
    let mut output = PathBuf::from("out");
    let mut jobs = 1usize;
    let mut budgets = Budgets::default().scaled(budget_scale);

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {}: expected key=value, found {raw:?}", lineno + 1);
        };
        let key = key.trim();
        let value = value.trim();
        let ctx = |what: &str| format!("line {}: invalid {what}: {value:?}", lineno + 1);
        match key {
            "theorems" => {
                theorems = value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                for th in &theorems {
                    if !KNOWN_THEOREMS.contains(&th.as_str()) {
                        bail!(
                            "line {}: unknown theorem {th:?} (known: {})",
                            lineno + 1,
                            KNOWN_THEOREMS.join(", ")
                        );
                    }
                }
            }
            "prime_lo" => prime_lo = value.parse().with_context(|| ctx("prime_lo"))?,
            "prime_hi" => prime_hi = value.parse().with_context(|| ctx("prime_hi"))?,
            "orders" => {
                orders = if value == "all" {
                    OrderFilter::All
                } else if let Some(rest) = value.strip_prefix("max_below:") {
                    OrderFilter::MaxBelow(rest.trim().parse().with_context(|| ctx("orders"))?)
                } else if let Some(rest) = value.strip_prefix("list:") {
                    let list: Vec<u64> = rest
                        .split(',')
                        .map(|s| s.trim().parse::<u64>())
                        .collect::<std::result::Result<_, _>>()
                        .with_context(|| ctx("orders"))?;
                    OrderFilter::List(list)
                } else {
                    bail!(
                        "line {}: orders must be all, max_below:<n> or list:<a,b,...>",
                        lineno + 1
                    );
                };
            }
            "k" => {
                k = value
                    .split(',')
                    .map(|s| s.trim().parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .with_context(|| ctx("k"))?;
            }
            "seed" => seed = value.parse().with_context(|| ctx("seed"))?,
            "output" => output = PathBuf::from(value),
            "jobs" => jobs = value.parse().with_context(|| ctx("jobs"))?,
            _ => {
                if let Some(name) = key.strip_prefix("budget.") {
                    let v: u128 = value.parse().with_context(|| ctx("budget value"))?;
                    if v == 0 {
                        bail!("line {}: budget {name} must be positive", lineno + 1);
                    }
                    if !budgets.set_named(name, v) {
                        bail!("line {}: unknown budget {name:?}", lineno + 1);
                    }
                } else {
                    bail!("line {}: unknown key {key:?}", lineno + 1);
                }
            }
        }
    }
    if prime_lo < 3 {
        bail!("prime_lo must be at least 3");
    }
    if prime_hi < prime_lo {
        bail!("prime_hi must be at least prime_lo");
    }
    if prime_hi > 10_000_000 {
        bail!("prime_hi above 10^7 is outside the sweep range this tool is sized for");
    }
    if theorems.is_empty() {
        bail!("at least one theorem is required");
    }
    if k.is_empty() || k.contains(&0) {
        bail!("k values must be positive");
    }
    if jobs == 0 {
        bail!("jobs must be positive");
    }
    Ok(ScanConfig {
        theorems,
        prime_lo,
        prime_hi,
        orders,
        k,
        seed,
        output,
        jobs,
        budgets,
    })
}
