//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} outside the supported range 2 < p < 2^62")]
    Overflow(u64),
    #[error("{t} does not divide p - 1 = {pm1}")]
    NotADivisor { t: u64, pm1: u64 },
    #[error("coset representatives must be nonzero")]
    ZeroRep,
    #[error("representatives {a} and {b} lie in the same coset")]
    DuplicateCoset { a: u64, b: u64 },
    #[error("operands belong to different prime fields")]
    FieldMismatch,
    #[error("work budget exceeded for {what}: need {need}, cap {cap}")]
    BudgetExceeded {
        what: &'static str,
        need: u128,
        cap: u128,
    },
    #[error("degree {deg} too large for a formal derivative mod {p}")]
    DegreeTooLarge { deg: usize, p: u64 },
    #[error("Wronskian degree guard violated: degree bound {bound} >= p = {p}")]
    DegreeGuardViolated { bound: u128, p: u64 },
    #[error("duplicate root value {0}")]
    DuplicateAlpha(u64),
    #[error("root values must be nonzero")]
    ZeroAlpha,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("linear system infeasible: {equations} equations >= {unknowns} unknowns")]
    SystemInfeasible { equations: usize, unknowns: usize },
    #[error("kernel vector produced an identically zero auxiliary polynomial")]
    ZeroPsi,
    #[error("family sets overlap after normalization (shared point {0})")]
    FamilyOverlap(u64),
    #[error("zero polynomial has no vanishing order")]
    ZeroPolynomial,
    #[error("shift values must be nonzero")]
    ZeroShift,
    #[error("certificate check failed: {0}")]
    CertificateCheck(String),
    #[error("{0}")]
    InvalidArgument(String),
}
