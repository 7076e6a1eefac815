//! Explicit work budgets.
//!
//! Every potentially explosive enumeration is gated by one of these caps and
//! fails with [`Error::BudgetExceeded`](crate::Error::BudgetExceeded) instead
//! of silently truncating.

/// Named caps on enumeration work. All counts are in "inner loop iterations"
/// unless stated otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Budgets {
    /// Maximum arity accepted by `convolution_k`.
    pub conv_k_max: usize,
    /// Cap on the product of set sizes enumerated by `convolution_k`.
    pub conv_work: u128,
    /// Cap on `|B| * |A|^l` enumerated by `tensor_set`.
    pub tensor_work: u128,
    /// Largest set size allowed on exhaustive (table-driven) energy paths.
    pub brute_set: usize,
    /// Largest set size allowed for the shifted-fiber identity checks.
    pub lemma28_set: usize,
    /// Cap on pairwise loops such as `|Q|^2` in additive-energy evaluation.
    pub energy_work: u128,
    /// Largest subgroup size for third-energy evaluation (cost `|R|^2`).
    pub e3_set: usize,
    /// Cap on `|S|^2` loops over difference sets.
    pub autocorr_work: u128,
    /// Cap on `p * |Q|` work in the naive discrete Fourier transform.
    pub dft_work: u128,
    /// Largest prime accepted by the naive DFT.
    pub dft_prime: u64,
    /// Cap on `|T|^k * |Q|` work in minimum-tuple enumeration.
    pub tuple_work: u128,
    /// Memory guard: maximum number of coefficients of an assembled
    /// auxiliary polynomial.
    pub psi_coeffs: usize,
    /// Cap on rows * columns of the certificate linear system.
    pub matrix_entries: u128,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            conv_k_max: 5,
            conv_work: 20_000_000,
            tensor_work: 2_000_000,
            brute_set: 12,
            lemma28_set: 12,
            energy_work: 250_000_000,
            autocorr_work: 500_000_000,
            e3_set: 4096,
            dft_work: 1_000_000_000,
            dft_prime: 100_000,
            tuple_work: 20_000_000,
            psi_coeffs: 10_000_000,
            matrix_entries: 50_000_000,
        }
    }
}

impl Budgets {
    /// Returns a copy with every cap multiplied by `factor` (floored, min 1).
    pub fn scaled(&self, factor: f64) -> Budgets {
        let s = |v: u128| -> u128 { ((v as f64 * factor).floor() as u128).max(1) };
        let su = |v: usize| -> usize { ((v as f64 * factor).floor() as usize).max(1) };
        Budgets {
            conv_k_max: su(self.conv_k_max),
            conv_work: s(self.conv_work),
            tensor_work: s(self.tensor_work),
            brute_set: su(self.brute_set),
            lemma28_set: su(self.lemma28_set),
            energy_work: s(self.energy_work),
            autocorr_work: s(self.autocorr_work),
            e3_set: su(self.e3_set),
            dft_work: s(self.dft_work),
            dft_prime: (s(self.dft_prime as u128) as u64).max(3),
            tuple_work: s(self.tuple_work),
            psi_coeffs: su(self.psi_coeffs),
            matrix_entries: s(self.matrix_entries),
        }
    }

    /// Sets the budget with the given name, used by config-file overrides.
    pub fn set_named(&mut self, name: &str, value: u128) -> bool {
        match name {
            "conv_k_max" => self.conv_k_max = value as usize,
            "conv_work" => self.conv_work = value,
            "tensor_work" => self.tensor_work = value,
            "brute_set" => self.brute_set = value as usize,
            "lemma28_set" => self.lemma28_set = value as usize,
            "energy_work" => self.energy_work = value,
            "autocorr_work" => self.autocorr_work = value,
            "e3_set" => self.e3_set = value as usize,
            "dft_work" => self.dft_work = value,
            "dft_prime" => self.dft_prime = value as u64,
            "tuple_work" => self.tuple_work = value,
            "psi_coeffs" => self.psi_coeffs = value as usize,
            "matrix_entries" => self.matrix_entries = value,
            _ => return false,
        }
        true
    }
}
