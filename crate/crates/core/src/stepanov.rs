//! Auxiliary-polynomial certificates for shifted-intersection bounds.
//!
//! Given a multiplicative subgroup `R` of order `t`, nonzero shifts
//! `mu_1, ..., mu_k` and coset scalars `lambda_1, ..., lambda_s`, the builder
//! constructs a nonzero polynomial
//!
//! `Psi(X) = Phi(X, X^t, (X - mu_1)^t, ..., (X - mu_k)^t)`
//!
//! vanishing to order at least `D` at every point of the normalized family
//! union `E = U_l lambda_l^{-1} (R ∩ (R + lambda_l mu_1) ∩ ...)`, which pins
//! `|E| <= deg Psi / D`. The certificate records the parameters and the
//! coefficient vector so the bound can be re-verified without the solver.
//!
//! Sizing note: the weight polynomials `P_{n,a,b,c}` produced by the
//! recurrence below have degree at most `a + n k`, and the equation count is
//! derived from that bound before elimination. `system_shape` also reports
//! the looser `< 2D` nominal sizing for comparison.

use serde::{Deserialize, Serialize};

use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::field::{PrimeField, ResidueSet, Subgroup};
use crate::linalg::MatFp;
use crate::poly::{vanishing_order, DensePoly};
use crate::seed::splitmix64;

/// Serializable witness for one bound instance. The JSON layout follows the
/// field order below and the coefficient rows `[a, b, c_1, ..., c_k, value]`
/// are sorted lexicographically, so output is byte-stable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepanovCertificate {
    pub p: u64,
    pub t: u64,
    pub k: usize,
    pub mu: Vec<u64>,
    pub lambdas: Vec<u64>,
    #[serde(rename = "B")]
    pub b: u64,
    #[serde(rename = "D")]
    pub d: u64,
    pub s: usize,
    pub coeff_vector: Vec<Vec<u64>>,
    pub psi_degree: usize,
    pub claimed_bound: u64,
    pub verified_points: usize,
}

impl StepanovCertificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::CertificateCheck(format!("malformed certificate JSON: {e}")))
    }
}

/// Result of re-verifying a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub family_size: usize,
    pub min_vanishing_order: Option<usize>,
    pub psi_degree: usize,
    pub claimed_bound: u64,
}

/// Least `B` with `B^(2k+1) > t * s`.
pub fn choose_b(t: u64, s: usize, k: usize) -> u64 {
    let target = t as u128 * s as u128;
    let mut b = 2u64;
    while (b as u128).pow((2 * k + 1) as u32) <= target {
        b += 1;
    }
    b
}

/// Equation/unknown counts of the vanishing system. Returns
/// `(artifact_equations, nominal_equations, unknowns)` where the artifact
/// count uses `deg P_{n,a,b,c} <= a + n k` and the nominal count the looser
/// `< 2D` sizing.
pub fn system_shape(k: usize, s: usize, b: u64, d: u64) -> (u128, u128, u128) {
    let rows_per_family: u128 = (0..d as u128).map(|n| d as u128 + n * k as u128).sum();
    let artifact = s as u128 * rows_per_family;
    let nominal = 2 * s as u128 * (d as u128) * (d as u128);
    let unknowns = d as u128 * (b as u128).pow((k + 1) as u32);
    (artifact, nominal, unknowns)
}

fn check_hypotheses(p: u64, t: u64, s: usize, k: usize, b: u64) -> Result<()> {
    let b128 = b as u128;
    if !(k as u128 * b128.pow(2 * k as u32) < t as u128) {
        return Err(Error::HypothesisViolated(format!(
            "k B^(2k) < t fails: {} * {}^{} >= {}",
            k,
            b,
            2 * k,
            t
        )));
    }
    if !((t as u128 * s as u128) < b128.pow((2 * k + 1) as u32)) {
        return Err(Error::HypothesisViolated(format!(
            "t s < B^(2k+1) fails: {} * {} >= {}^{}",
            t,
            s,
            b,
            2 * k + 1
        )));
    }
    if (p as u128) < (2 * k as u128 * b128 + 2) * t as u128 {
        return Err(Error::HypothesisViolated(format!(
            "p >= (2kB + 2) t fails: {} < {}",
            p,
            (2 * k as u128 * b128 + 2) * t as u128
        )));
    }
    Ok(())
}

/// Shared precomputation for the weight recurrence at fixed shifts.
struct WeightContext {
    field: PrimeField,
    t: u64,
    mu: Vec<u64>,
    /// `W = X * prod_j (X - mu_j)`
    w: DensePoly,
    w_deriv: DensePoly,
    /// `prod_j (X - mu_j)`
    prod_all: DensePoly,
    /// `X * prod_{i != j} (X - mu_i)` per `j`
    x_prod_except: Vec<DensePoly>,
}

impl WeightContext {
    fn new(field: &PrimeField, t: u64, mu: &[u64]) -> Result<Self> {
        let p = field.p();
        for &m in mu {
            if m % p == 0 {
                return Err(Error::ZeroShift);
            }
        }
        for i in 0..mu.len() {
            for j in (i + 1)..mu.len() {
                if mu[i] % p == mu[j] % p {
                    return Err(Error::InvalidArgument(format!(
                        "shifts must be distinct: {} repeats",
                        mu[i]
                    )));
                }
            }
        }
        let mut prod_all = DensePoly::one(field.clone());
        for &m in mu {
            prod_all = prod_all.mul(&DensePoly::linear(field.clone(), m));
        }
        let w = prod_all.mul_xn(1);
        let w_deriv = w.derivative()?;
        let mut x_prod_except = Vec::with_capacity(mu.len());
        for j in 0..mu.len() {
            let mut q = DensePoly::one(field.clone());
            for (i, &m) in mu.iter().enumerate() {
                if i != j {
                    q = q.mul(&DensePoly::linear(field.clone(), m));
                }
            }
            x_prod_except.push(q.mul_xn(1));
        }
        Ok(WeightContext {
            field: field.clone(),
            t,
            mu: mu.to_vec(),
            w,
            w_deriv,
            prod_all,
            x_prod_except,
        })
    }

    /// `t * (b prod_j (X - mu_j) + sum_j c_j X prod_{i != j} (X - mu_i))`.
    fn t_times_s(&self, b: u64, c: &[u64]) -> DensePoly {
        let mut s = self.prod_all.scale(b);
        for (j, &cj) in c.iter().enumerate() {
            s = s.add(&self.x_prod_except[j].scale(cj));
        }
        s.scale(self.t % self.field.p())
    }
}

/// Driver for `P_0 = X^a`, `P_{n+1} = W P_n' + P_n (tS - n W')`.
struct WeightRecurrence<'c> {
    ctx: &'c WeightContext,
    t_s: DensePoly,
    cur: DensePoly,
    n: u64,
}

impl<'c> WeightRecurrence<'c> {
    fn start(ctx: &'c WeightContext, a: u64, b: u64, c: &[u64]) -> Self {
        WeightRecurrence {
            ctx,
            t_s: ctx.t_times_s(b, c),
            cur: DensePoly::monomial(ctx.field.clone(), 1, a as usize),
            n: 0,
        }
    }

    fn current(&self) -> &DensePoly {
        &self.cur
    }

    fn advance(&mut self) -> Result<()> {
        let f = &self.ctx.field;
        let deriv = self.cur.derivative()?;
        let n_scalar = self.n % f.p();
        let tail = self.t_s.sub(&self.ctx.w_deriv.scale(n_scalar));
        self.cur = self.ctx.w.mul(&deriv).add(&self.cur.mul(&tail));
        self.n += 1;
        Ok(())
    }
}

/// The weight polynomial `P_{n,a,b,c}` defined by
/// `[X prod (X - mu_j)]^n (d/dX)^n (X^(a + t b) prod (X - mu_j)^(t c_j))
///  = P_{n,a,b,c}(X) X^(t b) prod (X - mu_j)^(t c_j)`.
///
/// The result is validated at deterministic sample points against a direct
/// evaluation of the `n`-th formal derivative.
pub fn weight_poly(
    field: &PrimeField,
    t: u64,
    mu: &[u64],
    n: u64,
    a: u64,
    b: u64,
    c: &[u64],
) -> Result<DensePoly> {
    if c.len() != mu.len() {
        return Err(Error::InvalidArgument(
            "one bracket exponent per shift required".into(),
        ));
    }
    let ctx = WeightContext::new(field, t, mu)?;
    let k = mu.len() as u128;
    let total_deg =
        a as u128 + t as u128 * (b as u128 + c.iter().map(|&x| x as u128).sum::<u128>());
    if total_deg + (n as u128) * (k + 1) >= field.p() as u128 {
        return Err(Error::DegreeGuardViolated {
            bound: total_deg + n as u128 * (k + 1),
            p: field.p(),
        });
    }
    let mut rec = WeightRecurrence::start(&ctx, a, b, c);
    for _ in 0..n {
        rec.advance()?;
    }
    let result = rec.current().clone();
    if let Some(deg) = result.degree() {
        assert!(
            deg as u128 <= a as u128 + n as u128 * k,
            "weight polynomial degree exceeds a + n k"
        );
    }
    validate_weight_poly(&ctx, &result, n, a, b, c)?;
    Ok(result)
}

/// Spot check against the defining derivative identity at two deterministic
/// sample points away from `0` and the shifts.
fn validate_weight_poly(
    ctx: &WeightContext,
    poly: &DensePoly,
    n: u64,
    a: u64,
    b: u64,
    c: &[u64],
) -> Result<()> {
    let f = &ctx.field;
    let p = f.p();
    let g_deg = a as u128 + ctx.t as u128 * (b as u128 + c.iter().map(|&x| x as u128).sum::<u128>());
    if g_deg >= p as u128 {
        return Err(Error::DegreeGuardViolated { bound: g_deg, p });
    }
    let mut g = DensePoly::monomial(f.clone(), 1, (a + ctx.t * b) as usize);
    for (j, &cj) in c.iter().enumerate() {
        if cj > 0 {
            g = g.mul(&DensePoly::linear(f.clone(), ctx.mu[j]).pow(ctx.t * cj));
        }
    }
    let mut deriv = g;
    for _ in 0..n {
        deriv = deriv.derivative()?;
    }
    let mut state = p ^ (ctx.t << 1) ^ n ^ (a << 3) ^ (b << 7);
    let mut checked = 0;
    while checked < 2 {
        let x = splitmix64(&mut state) % p;
        if x == 0 || ctx.mu.contains(&x) {
            continue;
        }
        let lhs = f.mul(f.pow(ctx.w.eval(x), n), deriv.eval(x));
        let exp_b = ((ctx.t as u128 * b as u128) % (p as u128 - 1)) as u64;
        let mut scale = f.pow(x, exp_b);
        for (j, &cj) in c.iter().enumerate() {
            let exp_c = ((ctx.t as u128 * cj as u128) % (p as u128 - 1)) as u64;
            scale = f.mul(scale, f.pow(f.sub(x, ctx.mu[j]), exp_c));
        }
        let rhs = f.mul(poly.eval(x), scale);
        if lhs != rhs {
            return Err(Error::CertificateCheck(format!(
                "weight polynomial mismatch at sample point {x}"
            )));
        }
        checked += 1;
    }
    Ok(())
}

/// The family sets `A_l = R ∩ (R + lambda_l mu_1) ∩ ... ∩ (R + lambda_l mu_k)`
/// in unnormalized coordinates.
pub fn family_sets(r: &Subgroup, mu: &[u64], lambdas: &[u64]) -> Result<Vec<ResidueSet>> {
    let f = r.field();
    let mut out = Vec::with_capacity(lambdas.len());
    for &lam in lambdas {
        if lam % f.p() == 0 {
            return Err(Error::ZeroShift);
        }
        let mut cur = r.set().clone();
        for &m in mu {
            cur = cur.intersect(&r.set().translate(f.mul(lam, m)))?;
        }
        out.push(cur);
    }
    Ok(out)
}

/// Union of `lambda_l^{-1} A_l`; errors if the normalized sets overlap.
fn normalized_union(r: &Subgroup, sets: &[ResidueSet], lambdas: &[u64]) -> Result<ResidueSet> {
    let f = r.field();
    let mut all: Vec<u64> = Vec::new();
    for (set, &lam) in sets.iter().zip(lambdas) {
        let inv = f.inv(lam);
        for &x in set.iter() {
            all.push(f.mul(x, inv));
        }
    }
    all.sort_unstable();
    for w in all.windows(2) {
        if w[0] == w[1] {
            return Err(Error::FamilyOverlap(w[0]));
        }
    }
    Ok(ResidueSet::from_sorted(f.clone(), all))
}

/// Builds a certificate for the family determined by `(R, mu, lambdas)`.
///
/// `B` defaults to the least value with `B^(2k+1) > t s` and may be
/// overridden (the hypotheses are re-checked either way);
/// `D = floor(t / (2 B^k))`. A returned certificate has passed every
/// internal soundness check: nonzero assembled polynomial, vanishing order
/// at least `D` at every family point, and the bound re-checked against
/// plain enumeration.
pub fn build_certificate(
    r: &Subgroup,
    mu: &[u64],
    lambdas: &[u64],
    b_override: Option<u64>,
    budgets: &Budgets,
) -> Result<StepanovCertificate> {
    let field = r.field().clone();
    let p = field.p();
    let t = r.order();
    let k = mu.len();
    let s = lambdas.len();
    if k == 0 || s == 0 {
        return Err(Error::InvalidArgument(
            "need at least one shift and one coset scalar".into(),
        ));
    }
    let ctx = WeightContext::new(&field, t, mu)?;
    for &lam in lambdas {
        if lam % p == 0 {
            return Err(Error::ZeroShift);
        }
    }
    let b = b_override.unwrap_or_else(|| choose_b(t, s, k));
    check_hypotheses(p, t, s, k, b)?;
    let bk = (b as u128).pow(k as u32);
    let d = (t as u128 / (2 * bk)) as u64;
    assert!(d >= 1, "root-order target collapsed to zero");

    let (equations, _nominal, unknowns) = system_shape(k, s, b, d);
    if equations >= unknowns {
        return Err(Error::SystemInfeasible {
            equations: equations as usize,
            unknowns: unknowns as usize,
        });
    }
    if equations.saturating_mul(unknowns) > budgets.matrix_entries {
        return Err(Error::BudgetExceeded {
            what: "certificate linear system",
            need: equations * unknowns,
            cap: budgets.matrix_entries,
        });
    }

    // family sets and the collapse property x^t = 1, (x - lambda mu_j)^t = 1
    let sets = family_sets(r, mu, lambdas)?;
    for (set, &lam) in sets.iter().zip(lambdas) {
        for &x in set.iter() {
            assert_eq!(field.pow(x, t), 1, "family point escapes the subgroup");
            for &m in mu {
                let shifted = field.sub(x, field.mul(lam, m));
                assert_eq!(
                    field.pow(shifted, t),
                    1,
                    "shifted family point escapes the subgroup"
                );
            }
        }
    }
    let points = normalized_union(r, &sets, lambdas)?;

    // per-family weights: (lambda^{-t})^(b + sum c)
    let y: Vec<u64> = lambdas
        .iter()
        .map(|&lam| field.pow(field.inv(lam), t))
        .collect();

    let rows = equations as usize;
    let cols = unknowns as usize;
    let mut mat = MatFp::zeros(field.clone(), rows, cols);
    let rows_per_family: usize = (0..d).map(|n| (d + n * k as u64) as usize).sum();
    let row_base = |l: usize, n: u64| -> usize {
        let within: usize = (0..n).map(|m| (d + m * k as u64) as usize).sum();
        l * rows_per_family + within
    };

    // columns in lexicographic (a, b, c_1, ..., c_k) order
    let mut col = 0usize;
    let mut validated = 0usize;
    for a in 0..d {
        for bb in 0..b {
            let mut c_vec = vec![0u64; k];
            loop {
                let weight_exp = bb + c_vec.iter().sum::<u64>();
                let y_pows: Vec<u64> = y.iter().map(|&yl| field.pow(yl, weight_exp)).collect();
                let mut rec = WeightRecurrence::start(&ctx, a, bb, &c_vec);
                for n in 0..d {
                    let poly = rec.current();
                    if let Some(deg) = poly.degree() {
                        assert!(
                            deg as u64 <= a + n * k as u64,
                            "weight polynomial degree exceeds a + n k"
                        );
                    }
                    for (l, &yp) in y_pows.iter().enumerate() {
                        let base = row_base(l, n);
                        for (j, &cf) in poly.coeffs().iter().enumerate() {
                            if cf != 0 {
                                mat.set(base + j, col, field.mul(yp, cf));
                            }
                        }
                    }
                    if n + 1 < d {
                        rec.advance()?;
                    }
                }
                if validated < 3 && a == d - 1 {
                    validate_weight_poly(&ctx, rec.current(), d - 1, a, bb, &c_vec)?;
                    validated += 1;
                }
                col += 1;
                if !odometer(&mut c_vec, b) {
                    break;
                }
            }
        }
    }
    assert_eq!(col, cols, "column enumeration mismatch");

    let kernel = mat
        .nullspace_vector()
        .expect("underdetermined system always has a kernel vector");

    // sparse rows [a, b, c..., value] in lexicographic (column) order
    let mut coeff_vector: Vec<Vec<u64>> = Vec::new();
    let mut idx = vec![0u64; k + 2];
    for &value in kernel.iter() {
        if value != 0 {
            let mut row = idx.clone();
            row.push(value);
            coeff_vector.push(row);
        }
        increment_mixed_radix(&mut idx, d, b);
    }
    assert!(!coeff_vector.is_empty(), "kernel vector cannot be zero");

    let psi = assemble_psi(&field, t, mu, b, d, &coeff_vector, budgets)?;
    if psi.is_zero() {
        return Err(Error::ZeroPsi);
    }
    let psi_degree = psi.degree().unwrap();
    let degree_cap = (d - 1) as usize + (k + 1) * (t as usize) * (b as usize - 1);
    assert!(psi_degree <= degree_cap, "assembled degree exceeds its cap");

    let claimed_bound = (degree_cap as u64) / d;
    assert!(
        (claimed_bound as u128) * (d as u128) < (k as u128 + 1) * (t as u128) * (b as u128),
        "claimed bound escapes the closed-form cap"
    );

    let mut verified_points = 0usize;
    for &x in points.iter() {
        debug_assert!(x != 0 && !mu.contains(&x));
        let ord = vanishing_order(&psi, x, d as usize)?;
        if ord < d as usize {
            return Err(Error::CertificateCheck(format!(
                "vanishing order {ord} < {d} at point {x}"
            )));
        }
        verified_points += 1;
    }
    assert!(
        points.len() as u64 <= claimed_bound,
        "enumerated family exceeds the certified bound"
    );

    Ok(StepanovCertificate {
        p,
        t,
        k,
        mu: mu.to_vec(),
        lambdas: lambdas.to_vec(),
        b,
        d,
        s,
        coeff_vector,
        psi_degree,
        claimed_bound,
        verified_points,
    })
}

/// Advances a base-`radix` odometer; returns false on wrap-around to zero.
fn odometer(digits: &mut [u64], radix: u64) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radix {
            return true;
        }
        digits[i] = 0;
    }
    !digits.is_empty() && false
}

/// Mixed-radix increment over `(a, b, c...)` with `a` below `d` and the rest
/// below `b`.
fn increment_mixed_radix(idx: &mut [u64], d: u64, b: u64) {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        let radix = if i == 0 { d } else { b };
        if idx[i] < radix {
            return;
        }
        idx[i] = 0;
    }
}

/// Assembles `Psi` from sparse coefficient rows. Shared by the builder and
/// the verifier; contains no solver state.
pub fn assemble_psi(
    field: &PrimeField,
    t: u64,
    mu: &[u64],
    b: u64,
    d: u64,
    coeff_rows: &[Vec<u64>],
    budgets: &Budgets,
) -> Result<DensePoly> {
    let k = mu.len();
    let degree_cap = (d as u128 - 1) + (k as u128 + 1) * t as u128 * (b as u128 - 1);
    if degree_cap + 1 > budgets.psi_coeffs as u128 {
        return Err(Error::BudgetExceeded {
            what: "assembled polynomial coefficients",
            need: degree_cap + 1,
            cap: budgets.psi_coeffs as u128,
        });
    }
    // (X - mu_j)^(t c) for c = 0..B
    let mut bracket_pows: Vec<Vec<DensePoly>> = Vec::with_capacity(k);
    for &m in mu {
        let base = DensePoly::linear(field.clone(), m).pow(t);
        let mut pows = vec![DensePoly::one(field.clone())];
        for c in 1..b {
            let next = pows[(c - 1) as usize].mul(&base);
            pows.push(next);
        }
        bracket_pows.push(pows);
    }
    // group rows by (b, c): inner polynomials in a
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<Vec<u64>, Vec<(u64, u64)>> = BTreeMap::new();
    for row in coeff_rows {
        if row.len() != k + 3 {
            return Err(Error::CertificateCheck(format!(
                "coefficient row needs {} entries, found {}",
                k + 3,
                row.len()
            )));
        }
        let a = row[0];
        let value = row[k + 2];
        if a >= d || row[1] >= b || row[2..k + 2].iter().any(|&c| c >= b) {
            return Err(Error::CertificateCheck(
                "coefficient index outside the declared grid".into(),
            ));
        }
        if value == 0 || value >= field.p() {
            return Err(Error::CertificateCheck(
                "coefficient value outside (0, p)".into(),
            ));
        }
        groups
            .entry(row[1..k + 2].to_vec())
            .or_default()
            .push((a, value));
    }
    let mut psi = DensePoly::zero(field.clone());
    for (bc, terms) in groups {
        let mut inner = vec![0u64; d as usize];
        for (a, value) in terms {
            inner[a as usize] = field.add(inner[a as usize], value);
        }
        let mut term = DensePoly::from_coeffs(field.clone(), inner);
        for (j, &cj) in bc[1..].iter().enumerate() {
            if cj > 0 {
                term = term.mul(&bracket_pows[j][cj as usize]);
            }
        }
        let shift = (t * bc[0]) as usize;
        psi = psi.add(&term.mul_xn(shift));
    }
    Ok(psi)
}

/// Re-verifies a certificate from scratch: hypotheses, coefficient-grid
/// shape, nonzero assembled polynomial, degree cap, family enumeration,
/// disjointness, per-point vanishing orders and the claimed bound. Shares
/// only the assembly and order-counting code with the builder, never the
/// solver.
pub fn verify_certificate(cert: &StepanovCertificate, budgets: &Budgets) -> Result<VerifyOutcome> {
    let field = PrimeField::new(cert.p)?;
    let r = Subgroup::of_order(&field, cert.t)?;
    if cert.k != cert.mu.len() {
        return Err(Error::CertificateCheck("k differs from shift count".into()));
    }
    if cert.s != cert.lambdas.len() {
        return Err(Error::CertificateCheck(
            "s differs from coset scalar count".into(),
        ));
    }
    // shift validity (distinct, nonzero) is re-checked by the context
    let _ctx = WeightContext::new(&field, cert.t, &cert.mu)?;
    check_hypotheses(cert.p, cert.t, cert.s, cert.k, cert.b)?;
    let bk = (cert.b as u128).pow(cert.k as u32);
    let expect_d = (cert.t as u128 / (2 * bk)) as u64;
    if cert.d != expect_d || cert.d == 0 {
        return Err(Error::CertificateCheck(format!(
            "root-order target {} differs from floor(t / 2B^k) = {expect_d}",
            cert.d
        )));
    }
    if cert.coeff_vector.is_empty() {
        return Err(Error::CertificateCheck("empty coefficient vector".into()));
    }
    for row in &cert.coeff_vector {
        if row.len() != cert.k + 3 {
            return Err(Error::CertificateCheck(format!(
                "coefficient row needs {} entries, found {}",
                cert.k + 3,
                row.len()
            )));
        }
    }
    let mut sorted = cert.coeff_vector.clone();
    sorted.sort();
    sorted.dedup_by(|a, b| a[..cert.k + 2] == b[..cert.k + 2]);
    if sorted != cert.coeff_vector {
        return Err(Error::CertificateCheck(
            "coefficient rows not in canonical sorted order".into(),
        ));
    }

    let psi = assemble_psi(
        &field,
        cert.t,
        &cert.mu,
        cert.b,
        cert.d,
        &cert.coeff_vector,
        budgets,
    )?;
    if psi.is_zero() {
        return Err(Error::ZeroPsi);
    }
    let psi_degree = psi.degree().unwrap();
    let degree_cap =
        (cert.d - 1) as usize + (cert.k + 1) * (cert.t as usize) * (cert.b as usize - 1);
    if psi_degree > degree_cap {
        return Err(Error::CertificateCheck(format!(
            "assembled degree {psi_degree} exceeds cap {degree_cap}"
        )));
    }
    if psi_degree != cert.psi_degree {
        return Err(Error::CertificateCheck(format!(
            "assembled degree {psi_degree} differs from recorded {}",
            cert.psi_degree
        )));
    }
    let expect_bound = (degree_cap as u64) / cert.d;
    if cert.claimed_bound != expect_bound {
        return Err(Error::CertificateCheck(format!(
            "claimed bound {} differs from floor(degree cap / D) = {expect_bound}",
            cert.claimed_bound
        )));
    }

    let sets = family_sets(&r, &cert.mu, &cert.lambdas)?;
    let points = normalized_union(&r, &sets, &cert.lambdas)?;
    if points.len() != cert.verified_points {
        return Err(Error::CertificateCheck(format!(
            "family has {} points but certificate records {}",
            points.len(),
            cert.verified_points
        )));
    }
    if points.len() as u64 > cert.claimed_bound {
        return Err(Error::CertificateCheck(format!(
            "family size {} exceeds claimed bound {}",
            points.len(),
            cert.claimed_bound
        )));
    }
    let mut min_order: Option<usize> = None;
    for &x in points.iter() {
        let ord = vanishing_order(&psi, x, cert.d as usize)?;
        min_order = Some(min_order.map_or(ord, |m| m.min(ord)));
        if ord < cert.d as usize {
            return Err(Error::CertificateCheck(format!(
                "vanishing order {ord} < {} at point {x}",
                cert.d
            )));
        }
    }
    Ok(VerifyOutcome {
        family_size: points.len(),
        min_vanishing_order: min_order,
        psi_degree,
        claimed_bound: cert.claimed_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subgroup(p: u64, t: u64) -> Subgroup {
        Subgroup::of_order(&PrimeField::new(p).unwrap(), t).unwrap()
    }

    #[test]
    fn choose_b_is_least() {
        // k = 1: least B with B^3 > t s
        assert_eq!(choose_b(80, 1, 1), 5); // 4^3 = 64 <= 80 < 125
        assert_eq!(choose_b(80, 2, 1), 6); // 5^3 = 125 <= 160 < 216
        assert_eq!(choose_b(124, 1, 1), 5);
        assert_eq!(choose_b(125, 1, 1), 6);
    }

    #[test]
    fn weight_poly_order_zero_is_monomial() {
        let f = PrimeField::new(1361).unwrap();
        let w = weight_poly(&f, 80, &[5], 0, 3, 0, &[0]).unwrap();
        assert_eq!(w, DensePoly::monomial(f, 1, 3));
    }

    #[test]
    fn weight_poly_first_step_matches_closed_form() {
        // n = 1, a = 0, b = 1, c = 0, k = 1: P_1 = t (X - mu)
        let f = PrimeField::new(1361).unwrap();
        let t = 80u64;
        let mu = 5u64;
        let w = weight_poly(&f, t, &[mu], 1, 0, 1, &[0]).unwrap();
        let expect = DensePoly::linear(f, mu).scale(t);
        assert_eq!(w, expect);
    }

    #[test]
    fn repeated_derivative_identity_small_orders() {
        // (X - mu)^m (d/dX)^m (X - mu)^q = q! / (q - m)! (X - mu)^q, m <= 3
        let f = PrimeField::new(101).unwrap();
        let mu = 7u64;
        let lin = DensePoly::linear(f.clone(), mu);
        for q in 3u64..=6 {
            for m in 0u64..=3 {
                let mut d = lin.pow(q);
                for _ in 0..m {
                    d = d.derivative().unwrap();
                }
                let lhs = lin.pow(m).mul(&d);
                let mut falling = 1u64;
                for i in 0..m {
                    falling = f.mul(falling, (q - i) % f.p());
                }
                let rhs = lin.pow(q).scale(falling);
                assert_eq!(lhs, rhs, "q = {q}, m = {m}");
            }
        }
    }

    #[test]
    fn weight_poly_degree_guard() {
        let f = PrimeField::new(101).unwrap();
        // a + t(b + c) reaches p
        assert!(matches!(
            weight_poly(&f, 40, &[5], 1, 0, 2, &[1]),
            Err(Error::DegreeGuardViolated { .. })
        ));
    }

    #[test]
    fn weight_poly_matches_derivative_identity_densely() {
        // beyond the two built-in sample points, compare on every residue
        let f = PrimeField::new(401).unwrap();
        let t = 8u64;
        let mu = [3u64, 10];
        for (n, a, b, c) in [(2u64, 1u64, 1u64, [1u64, 0u64]), (3, 0, 2, [0, 1])] {
            let w = weight_poly(&f, t, &mu, n, a, b, &c).unwrap();
            let mut g = DensePoly::monomial(f.clone(), 1, (a + t * b) as usize);
            for (j, &cj) in c.iter().enumerate() {
                g = g.mul(&DensePoly::linear(f.clone(), mu[j]).pow(t * cj));
            }
            let mut deriv = g;
            for _ in 0..n {
                deriv = deriv.derivative().unwrap();
            }
            let mut wpoly = DensePoly::monomial(f.clone(), 1, 1);
            for &m in &mu {
                wpoly = wpoly.mul(&DensePoly::linear(f.clone(), m));
            }
            for x in 1..401u64 {
                if mu.contains(&x) {
                    continue;
                }
                let lhs = f.mul(f.pow(wpoly.eval(x), n), deriv.eval(x));
                let mut scale = f.pow(x, t * b);
                for (j, &cj) in c.iter().enumerate() {
                    scale = f.mul(scale, f.pow(f.sub(x, mu[j]), t * cj));
                }
                let rhs = f.mul(w.eval(x), scale);
                assert_eq!(lhs, rhs, "x = {x}");
            }
        }
    }

    #[test]
    fn hypothesis_violations_are_named() {
        let r = subgroup(1361, 80);
        // B too large: k B^2 >= t
        let err = build_certificate(&r, &[5], &[1], Some(10), &Budgets::default());
        assert!(matches!(err, Err(Error::HypothesisViolated(_))));
        // B too small: t s >= B^3
        let err = build_certificate(&r, &[5], &[1], Some(3), &Budgets::default());
        assert!(matches!(err, Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn small_certificate_roundtrip() {
        let budgets = Budgets::default();
        let r = subgroup(1361, 80);
        let cert = build_certificate(&r, &[5], &[1], None, &budgets).unwrap();
        assert_eq!(cert.b, 5);
        assert_eq!(cert.d, 8);
        assert!(cert.claimed_bound >= cert.verified_points as u64);
        let outcome = verify_certificate(&cert, &budgets).unwrap();
        assert_eq!(outcome.family_size, cert.verified_points);
        assert!(outcome.min_vanishing_order.unwrap_or(cert.d as usize) >= cert.d as usize);
        // serialization is byte-stable
        assert_eq!(cert.to_json(), cert.to_json());
        let back = StepanovCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn assembled_polynomial_matches_scalar_evaluation() {
        // Psi(x) must equal the sparse sum evaluated pointwise with powmod
        let budgets = Budgets::default();
        let r = subgroup(1361, 80);
        let f = r.field().clone();
        let cert = build_certificate(&r, &[5], &[1], None, &budgets).unwrap();
        let psi = assemble_psi(&f, cert.t, &cert.mu, cert.b, cert.d, &cert.coeff_vector, &budgets)
            .unwrap();
        let mut state = 12345u64;
        for _ in 0..5 {
            let x = crate::seed::splitmix64(&mut state) % f.p();
            let mut direct = 0u64;
            for row in &cert.coeff_vector {
                let (a, b, c, v) = (row[0], row[1], row[2], row[3]);
                let mut term = f.mul(v, f.pow(x, a + cert.t * b));
                let base = f.sub(x, cert.mu[0]);
                term = f.mul(term, f.pow(base, cert.t * c));
                direct = f.add(direct, term);
            }
            assert_eq!(psi.eval(x), direct, "x = {x}");
        }
    }

    #[test]
    fn two_coset_family() {
        let budgets = Budgets::default();
        let r = subgroup(1361, 80);
        let lam2 = (2..1361u64).find(|&x| !r.contains(x)).unwrap();
        let cert = build_certificate(&r, &[5], &[1, lam2], None, &budgets).unwrap();
        let exact: usize = family_sets(&r, &[5], &[1, lam2])
            .unwrap()
            .iter()
            .map(|s| s.len())
            .sum();
        assert_eq!(cert.verified_points, exact);
        assert!(cert.claimed_bound as usize >= exact);
        verify_certificate(&cert, &budgets).unwrap();
    }

    #[test]
    fn two_shift_certificate() {
        // k = 2: the a + nk equation count stays strictly below the unknown
        // count (s(2D - 1) < B^3 follows from the hypotheses), so the build
        // must succeed end to end
        let budgets = Budgets::default();
        let r = subgroup(3001, 200);
        let cert = build_certificate(&r, &[3, 7], &[1], None, &budgets).unwrap();
        assert_eq!(cert.k, 2);
        assert_eq!(cert.b, 3); // least B with B^5 > 200
        assert_eq!(cert.d, 11); // floor(200 / (2 * 9))
        let exact: usize = family_sets(&r, &[3, 7], &[1])
            .unwrap()
            .iter()
            .map(|s| s.len())
            .sum();
        assert_eq!(cert.verified_points, exact);
        verify_certificate(&cert, &budgets).unwrap();
    }

    #[test]
    fn same_coset_scalars_overlap() {
        let budgets = Budgets::default();
        let r = subgroup(1361, 80);
        let in_r = r.elems().iter().copied().find(|&x| x > 1).unwrap();
        let err = build_certificate(&r, &[5], &[1, in_r], None, &budgets);
        assert!(
            matches!(err, Err(Error::FamilyOverlap(_))),
            "expected overlap, got {err:?}"
        );
    }

    #[test]
    fn empty_family_is_still_certified() {
        // choose the shift outside R - R so the intersection is empty
        let f = PrimeField::new(6481).unwrap();
        let r = Subgroup::of_order(&f, 80).unwrap();
        let mut diff = vec![false; 6481];
        for &x in r.elems() {
            for &y in r.elems() {
                diff[f.sub(x, y) as usize] = true;
            }
        }
        let mu = (1..6481u64)
            .find(|&m| !diff[m as usize])
            .expect("difference set has a gap");
        let budgets = Budgets::default();
        let cert = build_certificate(&r, &[mu], &[1], None, &budgets).unwrap();
        assert_eq!(cert.verified_points, 0);
        verify_certificate(&cert, &budgets).unwrap();
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let budgets = Budgets::default();
        let r = subgroup(1361, 80);
        let cert = build_certificate(&r, &[5], &[1], None, &budgets).unwrap();

        let mut coeff_tamper = cert.clone();
        let val = coeff_tamper.coeff_vector[0].last_mut().unwrap();
        *val = if *val + 1 >= cert.p { 1 } else { *val + 1 };
        assert!(verify_certificate(&coeff_tamper, &budgets).is_err());

        let mut bound_tamper = cert.clone();
        bound_tamper.claimed_bound -= 1;
        assert!(verify_certificate(&bound_tamper, &budgets).is_err());

        let mut point_tamper = cert;
        point_tamper.verified_points += 1;
        assert!(verify_certificate(&point_tamper, &budgets).is_err());
    }

    #[test]
    fn system_shape_counts() {
        let (artifact, nominal, unknowns) = system_shape(1, 1, 5, 8);
        // artifact: sum_{n<8} (8 + n) = 64 + 28 = 92
        assert_eq!(artifact, 92);
        assert_eq!(nominal, 128);
        assert_eq!(unknowns, 8 * 25);
    }
}
