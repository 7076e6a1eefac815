//! Wronskians and linear-independence tests for polynomial families.
//!
//! The Wronskian criterion (nonzero determinant of the derivative matrix
//! certifies independence) is only trusted while the determinant's degree
//! bound stays below the characteristic; outside that range the caller gets
//! an explicit guard error rather than an unreliable answer.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::MatFp;
use crate::poly::DensePoly;

/// Determinant of the `l x l` matrix whose rows are the derivative orders
/// `0..l` of the given polynomials, computed by fraction-free (Bareiss)
/// elimination over the polynomial ring.
pub fn wronskian(polys: &[DensePoly]) -> Result<DensePoly> {
    if polys.is_empty() {
        return Err(Error::InvalidArgument("empty polynomial family".into()));
    }
    let field = polys[0].field().clone();
    for q in polys {
        if q.field().p() != field.p() {
            return Err(Error::FieldMismatch);
        }
    }
    let l = polys.len();
    let mut m: Vec<Vec<DensePoly>> = Vec::with_capacity(l);
    m.push(polys.to_vec());
    for row in 1..l {
        let prev = &m[row - 1];
        let mut next = Vec::with_capacity(l);
        for q in prev {
            next.push(q.derivative()?);
        }
        m.push(next);
    }
    // Bareiss: stays in the ring, every division is exact.
    let mut sign_flip = false;
    let mut prev_pivot = DensePoly::one(field.clone());
    for step in 0..l.saturating_sub(1) {
        if m[step][step].is_zero() {
            let Some(swap) = (step + 1..l).find(|&i| !m[i][step].is_zero()) else {
                return Ok(DensePoly::zero(field));
            };
            m.swap(step, swap);
            sign_flip = !sign_flip;
        }
        let pivot = m[step][step].clone();
        for i in step + 1..l {
            for j in step + 1..l {
                let num = pivot.mul(&m[i][j]).sub(&m[i][step].mul(&m[step][j]));
                m[i][j] = num.div_exact(&prev_pivot);
            }
            m[i][step] = DensePoly::zero(field.clone());
        }
        prev_pivot = pivot;
    }
    let det = m[l - 1][l - 1].clone();
    let det = if sign_flip { det.neg() } else { det };
    if let Some(d) = det.degree() {
        debug_assert!(
            d as u128 <= wronskian_degree_bound(polys),
            "determinant degree exceeds its bound"
        );
    }
    Ok(det)
}

/// Degree bound of the Wronskian: `sum deg - l(l-1)/2`, saturated at zero.
pub fn wronskian_degree_bound(polys: &[DensePoly]) -> u128 {
    let sum: u128 = polys
        .iter()
        .map(|q| q.degree().unwrap_or(0) as u128)
        .sum();
    let l = polys.len() as u128;
    sum.saturating_sub(l * (l - 1) / 2)
}

/// Ground truth: rank of the coefficient matrix equals the family size.
pub fn independent_by_rank(polys: &[DensePoly]) -> bool {
    if polys.is_empty() {
        return true;
    }
    if polys.iter().any(|q| q.is_zero()) {
        return false;
    }
    let field = polys[0].field().clone();
    let cols = polys
        .iter()
        .map(|q| q.degree().unwrap_or(0) + 1)
        .max()
        .unwrap();
    let mut m = MatFp::zeros(field, polys.len(), cols);
    for (i, q) in polys.iter().enumerate() {
        for (j, &c) in q.coeffs().iter().enumerate() {
            m.set(i, j, c);
        }
    }
    m.rank() == polys.len()
}

/// Wronskian independence test.
///
/// Errors with [`Error::DegreeGuardViolated`] when the determinant degree
/// bound reaches the characteristic, where a vanishing Wronskian stops
/// implying linear dependence.
pub fn independent_by_wronskian(polys: &[DensePoly]) -> Result<bool> {
    if polys.is_empty() {
        return Ok(true);
    }
    if polys.iter().any(|q| q.is_zero()) {
        return Ok(false);
    }
    let p = polys[0].field().p();
    let bound = wronskian_degree_bound(polys);
    if bound >= p as u128 {
        return Err(Error::DegreeGuardViolated { bound, p });
    }
    Ok(!wronskian(polys)?.is_zero())
}

/// The monomial-bracket family `x^a * x^(t b_0) * prod_i (x - alpha_i)^(t b_i)`
/// expanded to dense form.
///
/// With `indices = None` the full grid `a < a_bound`, `b_j < b_bound` is
/// produced in lexicographic `(a, b_0, ..., b_n)` order; otherwise exactly
/// the requested index list.
pub fn bracket_family(
    field: &PrimeField,
    t: u64,
    a_bound: u64,
    b_bound: u64,
    alpha: &[u64],
    indices: Option<&[(u64, Vec<u64>)]>,
) -> Result<Vec<DensePoly>> {
    let p = field.p();
    for &x in alpha {
        if x % p == 0 {
            return Err(Error::ZeroAlpha);
        }
    }
    for i in 0..alpha.len() {
        for j in (i + 1)..alpha.len() {
            if alpha[i] % p == alpha[j] % p {
                return Err(Error::DuplicateAlpha(alpha[i]));
            }
        }
    }
    let n = alpha.len();
    // (x - alpha_i)^(t b) for every b below the bound
    let mut bracket_pows: Vec<Vec<DensePoly>> = Vec::with_capacity(n);
    for &root in alpha {
        let base = DensePoly::linear(field.clone(), root).pow(t);
        let mut pows = vec![DensePoly::one(field.clone())];
        for b in 1..b_bound.max(1) {
            let next = pows[(b - 1) as usize].mul(&base);
            pows.push(next);
        }
        bracket_pows.push(pows);
    }
    let grid: Vec<(u64, Vec<u64>)> = match indices {
        Some(list) => list.to_vec(),
        None => {
            let mut out = Vec::new();
            let mut b_vec = vec![0u64; n + 1];
            for a in 0..a_bound.max(1) {
                loop {
                    out.push((a, b_vec.clone()));
                    // odometer over (b_0, ..., b_n), last coordinate fastest
                    let mut pos = n as i64;
                    loop {
                        if pos < 0 {
                            break;
                        }
                        let i = pos as usize;
                        b_vec[i] += 1;
                        if b_vec[i] < b_bound.max(1) {
                            break;
                        }
                        b_vec[i] = 0;
                        pos -= 1;
                    }
                    if b_vec.iter().all(|&b| b == 0) {
                        break;
                    }
                }
            }
            out
        }
    };
    let mut polys = Vec::with_capacity(grid.len());
    for (a, b_vec) in grid {
        if b_vec.len() != n + 1 {
            return Err(Error::InvalidArgument(format!(
                "index vector needs {} bracket exponents",
                n + 1
            )));
        }
        let mut q = DensePoly::monomial(field.clone(), 1, (a + t * b_vec[0]) as usize);
        for (i, &b) in b_vec.iter().skip(1).enumerate() {
            if b > 0 {
                q = q.mul(&bracket_pows[i][b as usize]);
            }
        }
        polys.push(q);
    }
    Ok(polys)
}

/// Whether the hypothesis `t >= (n-1) B^(2n) / 2 + D B^n` and
/// `p >= (2nB + 2) t` of the independence statement holds.
pub fn bracket_family_hypothesis(p: u64, t: u64, n: usize, a_bound: u64, b_bound: u64) -> bool {
    let n_u = n as u128;
    let b = b_bound as u128;
    let lhs = 2 * t as u128;
    let rhs = (n_u.saturating_sub(1)) * b.pow(2 * n as u32) + 2 * a_bound as u128 * b.pow(n as u32);
    lhs >= rhs && p as u128 >= (2 * n_u * b + 2) * t as u128
}
