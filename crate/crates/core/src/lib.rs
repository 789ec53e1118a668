//! Prefix-sum characteristics of Sylvester and Hadamard matrices under
//! symmetric sequence norms.
//!
//! For a square ±1 matrix `H` with rows `a_k`, the characteristic at prefix
//! length `m` is `ρ(m) = ‖a_1 + … + a_m‖` and `ρ = max_m ρ(m)`. The crate
//! computes these profiles exactly where the norm allows it, evaluates the
//! known lower and upper estimates, and runs the combinatorial searches that
//! maximize over Hadamard matrices or minimize over row subsets.
//!
//! All numeric code is generic over [`Scalar`]; [`Rational`] gives exact
//! results for `ℓ₁`, sup and rational Marcinkiewicz norms, `f64` covers the rest.

pub mod bounds;
pub mod characteristics;
mod error;
pub mod matrix;
pub mod norms;
pub mod report;
mod scalar;
pub mod search;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use characteristics::RhoProfile;
pub use matrix::{HadamardWitness, SignMatrix};
pub use norms::{LambdaSeq, NormSpec};

/// Exact scalar.
pub type Rational = num_rational::Ratio<i128>;

pub type ExactNorm = NormSpec<Rational>;
pub type FloatNorm = NormSpec<f64>;
pub type ExactProfile = RhoProfile<Rational>;
pub type FloatProfile = RhoProfile<f64>;
pub type ExactSearchResult = search::SearchResult<Rational>;
pub type FloatSearchResult = search::SearchResult<f64>;

/// Resource limits for materialized matrices and search sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of matrix entries materialized at once.
    pub max_entries: u128,
    /// Maximum number of objective evaluations in a search.
    pub max_evaluations: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_entries: 1 << 20,
            max_evaluations: 3u128.pow(20),
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_entries: u128::MAX,
            max_evaluations: u128::MAX,
        }
    }

    pub fn with_entries(mut self, max_entries: u128) -> Self {
        self.max_entries = max_entries;
        self
    }

    pub fn with_evaluations(mut self, max_evaluations: u128) -> Self {
        self.max_evaluations = max_evaluations;
        self
    }

    pub(crate) fn check_entries(&self, what: &'static str, required: u128) -> Result<()> {
        if required > self.max_entries {
            return Err(Error::Budget {
                what,
                required,
                limit: self.max_entries,
                hint: "",
            });
        }
        Ok(())
    }

    pub(crate) fn check_evaluations(
        &self,
        what: &'static str,
        required: u128,
        hint: &'static str,
    ) -> Result<()> {
        if required > self.max_evaluations {
            return Err(Error::Budget {
                what,
                required,
                limit: self.max_evaluations,
                hint,
            });
        }
        Ok(())
    }
}
