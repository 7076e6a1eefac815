//! Dense univariate polynomials over a prime field.
//!
//! Coefficients are stored ascending by degree with trailing zeros stripped;
//! the zero polynomial is the empty vector. Formal derivatives are only
//! defined for degrees at most `p - 1`.

use crate::error::{Error, Result};
use crate::field::PrimeField;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePoly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl DensePoly {
    pub fn zero(field: PrimeField) -> Self {
        DensePoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: PrimeField, c: u64) -> Self {
        let c = c % field.p();
        let coeffs = if c == 0 { Vec::new() } else { vec![c] };
        DensePoly { field, coeffs }
    }

    pub fn one(field: PrimeField) -> Self {
        DensePoly::constant(field, 1)
    }

    /// `c * x^deg`.
    pub fn monomial(field: PrimeField, c: u64, deg: usize) -> Self {
        let c = c % field.p();
        if c == 0 {
            return DensePoly::zero(field);
        }
        let mut coeffs = vec![0u64; deg + 1];
        coeffs[deg] = c;
        DensePoly { field, coeffs }
    }

    /// `x - a`.
    pub fn linear(field: PrimeField, a: u64) -> Self {
        let c0 = field.neg(a % field.p());
        DensePoly {
            field,
            coeffs: vec![c0, 1],
        }
    }

    pub fn from_coeffs(field: PrimeField, mut coeffs: Vec<u64>) -> Self {
        let p = field.p();
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        DensePoly { field, coeffs }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<u64> {
        self.coeffs.last().copied()
    }

    fn assert_same_field(&self, rhs: &DensePoly) {
        assert_eq!(
            self.field.p(),
            rhs.field.p(),
            "polynomial field mismatch"
        );
    }

    pub fn add(&self, rhs: &DensePoly) -> DensePoly {
        self.assert_same_field(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.field.add(self.coeff(i), rhs.coeff(i)));
        }
        DensePoly::from_coeffs(self.field.clone(), out)
    }

    pub fn sub(&self, rhs: &DensePoly) -> DensePoly {
        self.assert_same_field(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.field.sub(self.coeff(i), rhs.coeff(i)));
        }
        DensePoly::from_coeffs(self.field.clone(), out)
    }

    pub fn neg(&self) -> DensePoly {
        let out: Vec<u64> = self.coeffs.iter().map(|&c| self.field.neg(c)).collect();
        DensePoly {
            field: self.field.clone(),
            coeffs: out,
        }
    }

    pub fn scale(&self, c: u64) -> DensePoly {
        let c = c % self.field.p();
        if c == 0 {
            return DensePoly::zero(self.field.clone());
        }
        let out: Vec<u64> = self.coeffs.iter().map(|&x| self.field.mul(x, c)).collect();
        DensePoly {
            field: self.field.clone(),
            coeffs: out,
        }
    }

    /// Multiplication by `x^n`.
    pub fn mul_xn(&self, n: usize) -> DensePoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![0u64; n + self.coeffs.len()];
        out[n..].copy_from_slice(&self.coeffs);
        DensePoly {
            field: self.field.clone(),
            coeffs: out,
        }
    }

    /// Schoolbook product.
    pub fn mul(&self, rhs: &DensePoly) -> DensePoly {
        self.assert_same_field(rhs);
        if self.is_zero() || rhs.is_zero() {
            return DensePoly::zero(self.field.clone());
        }
        let f = &self.field;
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        DensePoly::from_coeffs(self.field.clone(), out)
    }

    pub fn pow(&self, mut e: u64) -> DensePoly {
        let mut acc = DensePoly::one(self.field.clone());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Horner evaluation.
    pub fn eval(&self, x: u64) -> u64 {
        let f = &self.field;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    /// Formal derivative; rejects degrees above `p - 1` where the formal
    /// rules stop being reliable for the independence arguments used here.
    pub fn derivative(&self) -> Result<DensePoly> {
        let p = self.field.p();
        if let Some(d) = self.degree() {
            if d as u64 > p - 1 {
                return Err(Error::DegreeTooLarge { deg: d, p });
            }
        }
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        for (i, &c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(self.field.mul(i as u64 % p, c));
        }
        Ok(DensePoly::from_coeffs(self.field.clone(), out))
    }

    /// Synthetic division by `x - a`: returns `(quotient, remainder)`.
    pub fn divide_linear(&self, a: u64) -> (DensePoly, u64) {
        if self.is_zero() {
            return (DensePoly::zero(self.field.clone()), 0);
        }
        let f = &self.field;
        let n = self.coeffs.len();
        let mut q = vec![0u64; n - 1];
        let mut carry = 0u64;
        for i in (0..n).rev() {
            let v = f.add(self.coeffs[i], f.mul(carry, a));
            if i == 0 {
                return (DensePoly::from_coeffs(self.field.clone(), q), v);
            }
            q[i - 1] = v;
            carry = v;
        }
        unreachable!()
    }

    /// Exact long division; panics if the remainder is nonzero. Used by the
    /// fraction-free determinant where exactness is an invariant.
    pub fn div_exact(&self, den: &DensePoly) -> DensePoly {
        self.assert_same_field(den);
        assert!(!den.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return DensePoly::zero(self.field.clone());
        }
        let f = self.field.clone();
        let dd = den.degree().unwrap();
        let nd = self.degree().unwrap();
        assert!(nd >= dd, "inexact polynomial division");
        let lead_inv = f.inv(den.leading_coeff().unwrap());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; nd - dd + 1];
        for i in (dd..=nd).rev() {
            let c = f.mul(rem[i], lead_inv);
            quot[i - dd] = c;
            if c != 0 {
                for (j, &dc) in den.coeffs.iter().enumerate() {
                    let idx = i - dd + j;
                    rem[idx] = f.sub(rem[idx], f.mul(c, dc));
                }
            }
        }
        assert!(
            rem.iter().all(|&c| c == 0),
            "inexact polynomial division (nonzero remainder)"
        );
        DensePoly::from_coeffs(f, quot)
    }
}

/// Largest `m <= cap` with `(x - a)^m` dividing `pol`, by repeated synthetic
/// division.
pub fn vanishing_order(pol: &DensePoly, a: u64, cap: usize) -> Result<usize> {
    if pol.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut cur = pol.clone();
    let mut order = 0usize;
    while order < cap {
        let (q, r) = cur.divide_linear(a);
        if r != 0 {
            break;
        }
        order += 1;
        cur = q;
        if cur.is_zero() {
            break;
        }
    }
    Ok(order)
}
