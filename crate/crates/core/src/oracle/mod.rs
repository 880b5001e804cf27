//! Numerical cross-validation of the combinatorial certificates.
//!
//! The rest of the crate reasons about every matrix of a qualitative class
//! at once. This module grounds those claims in floating point: it samples
//! concrete matrices from a class, computes spectra and left eigenvectors,
//! runs PBH rank tests at each eigenvalue, and measures geometric
//! multiplicities. A certificate can thereby be stress-tested against
//! thousands of random class members, and a failed combinatorial condition
//! can be turned into an explicit uncontrollable sample.
//!
//! Sampling is counter-based: sample `index` under a fixed seed always
//! yields the same matrix, regardless of thread count or evaluation order,
//! so every report is reproducible from `(graph, config)` alone.

mod sample;
mod spectra;
mod verify;

pub use sample::{sample_pattern_matrix, sample_signed_matrix};
pub use spectra::{
    eigenspace_annihilates_controls, left_eigen_analysis, left_eigenspace_basis,
    null_space_basis, null_space_basis_complex, null_space_basis_complex_floored,
    null_space_basis_floored, pbh_controllable, pbh_margin, EigenClass, EigenRecord,
};
pub use verify::{
    eigenvector_vanishing_check, find_uncontrollable_sample, monte_carlo_verify,
    multiplicity_probe, ClassStats, Falsification, MultiplicityReport, PbhReport,
    SpectralRecord, VanishingReport, MARK_SIGN_FLOOR,
};

use thiserror::Error;

use crate::forcing::ForcingError;

/// Numeric thresholds, all relative to the scale of the matrix at hand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// An eigenvalue is treated as real when `|Im λ| ≤ realness·max(1, |λ|)`,
    /// and as zero when `|λ| ≤ realness·max(1, ‖A‖)`.
    pub realness: f64,
    /// Singular values below `rank·σ_max` count as zero in rank decisions.
    pub rank: f64,
    /// An eigenvalue is controllable when the PBH block keeps its smallest
    /// singular value above `pbh·max(1, ‖A‖)`.
    pub pbh: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { realness: 1e-8, rank: 1e-10, pbh: 1e-8 }
    }
}

/// How matrices are drawn from a qualitative class.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    /// Entry magnitudes are log-uniform over this `(lo, hi)` range.
    pub magnitude_range: (f64, f64),
    /// Probability that a `?`-labeled diagonal entry samples exact zero
    /// (otherwise it gets a random sign and magnitude).
    pub zero_prob: f64,
    /// Number of matrices to draw.
    pub samples: usize,
    /// Base seed; each sample index runs on its own stream of this seed.
    pub seed: u64,
    /// Mirror the upper triangle so every sample is symmetric. Requires a
    /// symmetric graph and makes the whole spectrum real.
    pub symmetric: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            magnitude_range: (0.1, 10.0),
            zero_prob: 1.0 / 3.0,
            samples: 200,
            seed: 0,
            symmetric: false,
        }
    }
}

impl SamplerConfig {
    pub(crate) fn validate(&self) -> Result<(), OracleError> {
        let (lo, hi) = self.magnitude_range;
        if !(lo > 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) {
            return Err(OracleError::BadConfig(format!(
                "magnitude range must satisfy 0 < lo <= hi, got [{lo}, {hi}]"
            )));
        }
        if !(0.0..=1.0).contains(&self.zero_prob) {
            return Err(OracleError::BadConfig(format!(
                "zero probability must lie in [0, 1], got {}",
                self.zero_prob
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("invalid sampler configuration: {0}")]
    BadConfig(String),
    #[error("symmetric sampling requires a symmetric graph")]
    NotSymmetric,
    #[error("eigensolver failed to converge")]
    EigensolverFailed,
    #[error(transparent)]
    Forcing(#[from] ForcingError),
}
