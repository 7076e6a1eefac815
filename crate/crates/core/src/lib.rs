//! Exact machine verification of additive-shift phenomena of multiplicative
//! subgroups mod p: higher convolutions and energies, tensor-set identities,
//! Wronskian independence tests, auxiliary-polynomial certificates for
//! shifted-intersection bounds, and enumeration-backed inequality reports.
//!
//! Design rules: all set data is canonical (sorted residue vectors), every
//! explosive enumeration is gated by an explicit [`Budgets`] cap, exact
//! statements are checked in integer arithmetic, and anything with an
//! unspecified implied constant is only ever reported as a ratio.

pub mod bounds;
pub mod budget;
pub mod conv;
pub mod error;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod identities;
pub mod seed;
pub mod stepanov;
pub mod wronskian;

pub use budget::Budgets;
pub use error::{Error, Result};
pub use field::{PrimeField, ResidueSet, Subgroup};
pub use poly::DensePoly;
pub use report::{InequalityReport, Value, Verdict};
pub use stepanov::StepanovCertificate;
