//! Command-line front end: build instances, run identity suites, generate
//! and verify intersection-bound certificates, sweep theorem checks and emit
//! CSV/JSON reports.
//!
//! Exit codes: 0 success, 1 any verification failure, 2 usage or input
//! errors. `SHIFTLAB_BUDGET_SCALE` multiplies every work budget.

mod config;
mod scan;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use shiftlab_core::report::fmt_real;
use shiftlab_core::stepanov::{
    build_certificate, family_sets, system_shape, verify_certificate, StepanovCertificate,
};
use shiftlab_core::{bounds, identities, Budgets, Error, PrimeField, Subgroup};

#[derive(Parser)]
#[command(
    name = "shiftlab",
    version,
    about = "Additive-shift laboratory for multiplicative subgroups mod p"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the subgroup orders of Z_p^* (divisors of p-1) and generators
    Subgroups {
        #[arg(long)]
        prime: u64,
    },
    /// Print an exact shifted intersection and its size
    Intersect {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        order: u64,
        /// Comma-separated nonzero shifts mu_1,mu_2,...
        #[arg(long, value_delimiter = ',', required = true)]
        mu: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        lambda: u64,
    },
    /// Run the seeded identity and inequality suites; exit 1 on any failure
    Identities {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 8)]
        max_size: usize,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Build an intersection-bound certificate and write it as JSON
    Certify {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        order: u64,
        /// Comma-separated nonzero shifts mu_1,mu_2,...
        #[arg(long, value_delimiter = ',', required = true)]
        mu: Vec<u64>,
        /// Comma-separated coset scalars lambda_1,lambda_2,...
        #[arg(long, value_delimiter = ',', required = true)]
        lambdas: Vec<u64>,
        /// Override the auxiliary base B (hypotheses are re-checked)
        #[arg(long = "B")]
        b_override: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-verify a certificate file independently of the builder
    VerifyCert { file: PathBuf },
    /// Sweep theorem checks over a prime range and write the CSV report
    Scan {
        #[arg(long)]
        config: PathBuf,
        /// Parallel workers (overrides the config file)
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print the maximum nontrivial character sum and the Parseval residual
    Fourier {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        order: u64,
        /// Coset representatives of an invariant set (default: the subgroup)
        #[arg(long, value_delimiter = ',')]
        coset_reps: Option<Vec<u64>>,
    },
}

fn budget_scale() -> Result<f64, String> {
    match std::env::var("SHIFTLAB_BUDGET_SCALE") {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|s| s.is_finite() && *s > 0.0)
            .ok_or_else(|| format!("SHIFTLAB_BUDGET_SCALE must be a positive real, got {v:?}")),
        Err(_) => Ok(1.0),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let scale = match budget_scale() {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let budgets = Budgets::default().scaled(scale);
    match dispatch(cli.cmd, &budgets) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Cmd, budgets: &Budgets) -> anyhow::Result<u8> {
    match cmd {
        Cmd::Subgroups { prime } => subgroups(prime),
        Cmd::Intersect {
            prime,
            order,
            mu,
            lambda,
        } => intersect(prime, order, &mu, lambda),
        Cmd::Identities {
            prime,
            max_size,
            trials,
            seed,
        } => identities(prime, max_size, trials, seed, budgets),
        Cmd::Certify {
            prime,
            order,
            mu,
            lambdas,
            b_override,
            out,
        } => certify(prime, order, &mu, &lambdas, b_override, &out, budgets),
        Cmd::VerifyCert { file } => verify_cert(&file, budgets),
        Cmd::Scan { config, jobs } => run_scan(&config, jobs),
        Cmd::Fourier {
            prime,
            order,
            coset_reps,
        } => fourier(prime, order, coset_reps.as_deref(), budgets),
    }
}

fn subgroups(prime: u64) -> anyhow::Result<u8> {
    let field = PrimeField::new(prime)?;
    println!(
        "p = {}, primitive root = {}, p - 1 = {}",
        field.p(),
        field.primitive_root(),
        field
            .factorization()
            .iter()
            .map(|(q, e)| if *e == 1 {
                q.to_string()
            } else {
                format!("{q}^{e}")
            })
            .collect::<Vec<_>>()
            .join(" * ")
    );
    for t in field.order_divisors() {
        let r = Subgroup::of_order(&field, t)?;
        println!("t = {t}, generator = {}", r.generator());
    }
    Ok(0)
}

fn intersect(prime: u64, order: u64, mu: &[u64], lambda: u64) -> anyhow::Result<u8> {
    let field = PrimeField::new(prime)?;
    let r = Subgroup::of_order(&field, order)?;
    let set = bounds::shifted_intersection(&r, mu, lambda)?;
    let elems: Vec<String> = set.iter().map(|x| x.to_string()).collect();
    println!("{{{}}}", elems.join(", "));
    println!("size {}", set.len());
    Ok(0)
}

fn identities(
    prime: u64,
    max_size: usize,
    trials: usize,
    seed: u64,
    budgets: &Budgets,
) -> anyhow::Result<u8> {
    let field = PrimeField::new(prime)?;
    let outcome = identities::run_identity_suite(&field, max_size, trials, seed, budgets)?;
    for failure in &outcome.failures {
        println!("FAIL {failure}");
    }
    println!(
        "identities: {} checks over {} trials, {} failures",
        outcome.checks_run,
        outcome.trials,
        outcome.failures.len()
    );
    Ok(if outcome.all_pass() { 0 } else { 1 })
}

fn certify(
    prime: u64,
    order: u64,
    mu: &[u64],
    lambdas: &[u64],
    b_override: Option<u64>,
    out: &PathBuf,
    budgets: &Budgets,
) -> anyhow::Result<u8> {
    let field = PrimeField::new(prime)?;
    let r = Subgroup::of_order(&field, order)?;
    let cert = match build_certificate(&r, mu, lambdas, b_override, budgets) {
        Ok(c) => c,
        Err(e @ (Error::ZeroPsi | Error::CertificateCheck(_))) => {
            // construction-level soundness failure, not a usage problem
            println!("FAIL {e}");
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    let (artifact_eqs, nominal_eqs, unknowns) = system_shape(cert.k, cert.s, cert.b, cert.d);
    let exact: usize = family_sets(&r, mu, lambdas)?.iter().map(|s| s.len()).sum();
    std::fs::write(out, cert.to_json())?;
    println!("B = {}, D = {}, deg = {}", cert.b, cert.d, cert.psi_degree);
    println!(
        "equations = {artifact_eqs} (degree bound a + nk; nominal 2sD^2 = {nominal_eqs}), unknowns = {unknowns}"
    );
    println!(
        "claimed_bound = {}, exact family size = {exact}",
        cert.claimed_bound
    );
    println!("wrote {}", out.display());
    Ok(0)
}

fn verify_cert(file: &PathBuf, budgets: &Budgets) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(file)?;
    let cert = match StepanovCertificate::from_json(&text) {
        Ok(c) => c,
        Err(e) => {
            println!("REJECT {e}");
            return Ok(1);
        }
    };
    match verify_certificate(&cert, budgets) {
        Ok(outcome) => {
            println!(
                "OK family size {} <= claimed bound {}, min vanishing order {}",
                outcome.family_size,
                outcome.claimed_bound,
                outcome
                    .min_vanishing_order
                    .map(|m| m.to_string())
                    .unwrap_or_else(|| "n/a (empty family)".into())
            );
            Ok(0)
        }
        Err(e) => {
            println!("REJECT {e}");
            Ok(1)
        }
    }
}

fn run_scan(config: &PathBuf, jobs: Option<usize>) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(config)?;
    let scale = budget_scale().map_err(|m| anyhow::anyhow!(m))?;
    let mut cfg = config::parse_config(&text, scale)?;
    if let Some(j) = jobs {
        anyhow::ensure!(j > 0, "jobs must be positive");
        cfg.jobs = j;
    }
    let outcome = scan::run_scan(&cfg)?;
    std::fs::create_dir_all(&cfg.output)?;
    let path = cfg.output.join("scan.csv");
    std::fs::write(&path, &outcome.csv)?;
    if outcome.skipped > 0 {
        eprintln!(
            "warning: {} instances exceeded their work budget and were skipped",
            outcome.skipped
        );
    }
    println!(
        "wrote {} ({} rows, {} failures)",
        path.display(),
        outcome.rows,
        outcome.failures
    );
    Ok(if outcome.failures == 0 { 0 } else { 1 })
}

fn fourier(
    prime: u64,
    order: u64,
    coset_reps: Option<&[u64]>,
    budgets: &Budgets,
) -> anyhow::Result<u8> {
    let field = PrimeField::new(prime)?;
    let r = Subgroup::of_order(&field, order)?;
    let q = match coset_reps {
        Some(reps) => r.invariant_set(reps)?,
        None => r.set().clone(),
    };
    let stats = bounds::fourier_stats(&q, budgets)?;
    println!("|Q| = {}", q.len());
    println!(
        "max |Q^(xi)| over xi != 0 = {}",
        fmt_real(stats.max_nonzero)
    );
    println!("parseval residual = {}", fmt_real(stats.parseval_residual));
    Ok(0)
}
