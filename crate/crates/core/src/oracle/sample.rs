//! Drawing concrete matrices from a qualitative class.
//!
//! Entry `(j, i)` of a sample is nonzero exactly when the edge `i -> j`
//! exists, and carries that edge's sign; the diagonal follows the loop
//! labels (`+`/`-` force the sign, `?` may sample exact zero, no loop means
//! zero). Magnitudes are log-uniform over the configured range, so the
//! samples spread over the class instead of clumping near one scale.
//!
//! Each sample index gets its own stream of a counter-based generator
//! seeded from the config, which makes the draw for `(seed, index)`
//! bit-for-bit reproducible no matter how many samples run concurrently or
//! in what order.
//!
//! Besides the continuous samplers there are lattice twins drawing entries
//! from `{±1, ±2}`. Continuous draws almost surely miss any algebraic
//! coincidence (equal magnitudes, cancelling products), yet the matrices
//! witnessing the failure of a refuted certificate often live exactly on
//! such coincidence sets — which frequently contain small-integer points.
//! The falsifier therefore mixes both styles.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::graph::{PatternDigraph, SignedDigraph};
use crate::oracle::{OracleError, SamplerConfig};
use crate::sign::EntryLabel;

/// Seed twist separating lattice draw streams from continuous ones, so the
/// two samplers at the same `(seed, index)` stay independent.
const LATTICE_SEED_TWIST: u64 = 0x9e37_79b9_7f4a_7c15;

fn stream_rng(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn magnitude(rng: &mut ChaCha12Rng, (lo, hi): (f64, f64)) -> f64 {
    lo * (hi / lo).powf(rng.random::<f64>())
}

fn random_sign(rng: &mut ChaCha12Rng) -> f64 {
    if rng.random_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

/// Diagonal draw for a `?` label: exact zero with the configured
/// probability, otherwise a random-signed magnitude.
fn unspecified_entry(rng: &mut ChaCha12Rng, config: &SamplerConfig) -> f64 {
    if rng.random::<f64>() < config.zero_prob {
        0.0
    } else {
        random_sign(rng) * magnitude(rng, config.magnitude_range)
    }
}

/// How nonzero magnitudes and free diagonals are drawn.
#[derive(Clone, Copy)]
enum DrawStyle {
    /// Log-uniform magnitudes over the configured range, exact diagonal
    /// zeros at the configured probability.
    Continuous,
    /// Magnitudes from `{1, 2}` (mostly 1), free diagonals zero half the
    /// time and `±1`/`±2` otherwise.
    Lattice,
}

impl DrawStyle {
    fn rng(self, config: &SamplerConfig, index: usize) -> ChaCha12Rng {
        let seed = match self {
            DrawStyle::Continuous => config.seed,
            DrawStyle::Lattice => config.seed ^ LATTICE_SEED_TWIST,
        };
        stream_rng(seed, index as u64)
    }

    fn magnitude(self, rng: &mut ChaCha12Rng, config: &SamplerConfig) -> f64 {
        match self {
            DrawStyle::Continuous => magnitude(rng, config.magnitude_range),
            DrawStyle::Lattice => {
                if rng.random_bool(0.25) {
                    2.0
                } else {
                    1.0
                }
            }
        }
    }

    fn unspecified(self, rng: &mut ChaCha12Rng, config: &SamplerConfig) -> f64 {
        match self {
            DrawStyle::Continuous => unspecified_entry(rng, config),
            DrawStyle::Lattice => {
                if rng.random_bool(0.5) {
                    0.0
                } else {
                    random_sign(rng) * self.magnitude(rng, config)
                }
            }
        }
    }
}

fn signed_matrix(
    g: &SignedDigraph,
    config: &SamplerConfig,
    index: usize,
    style: DrawStyle,
) -> Result<DMatrix<f64>, OracleError> {
    config.validate()?;
    if config.symmetric && !g.is_symmetric() {
        return Err(OracleError::NotSymmetric);
    }
    let n = g.node_count();
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut rng = style.rng(config, index);
    for (i, j, s) in g.edges() {
        if config.symmetric && i > j {
            continue; // mirrored below from the (j, i) draw
        }
        let value = f64::from(s) * style.magnitude(&mut rng, config);
        a[(j - 1, i - 1)] = value;
        if config.symmetric {
            a[(i - 1, j - 1)] = value;
        }
    }
    for (v, label) in g.loops() {
        a[(v - 1, v - 1)] = match label {
            EntryLabel::Plus => style.magnitude(&mut rng, config),
            EntryLabel::Minus => -style.magnitude(&mut rng, config),
            EntryLabel::Unspecified => style.unspecified(&mut rng, config),
            // The graph type admits only the three labels above on loops.
            EntryLabel::Zero | EntryLabel::Cross => unreachable!(),
        };
    }
    Ok(a)
}

fn pattern_matrix(
    g: &PatternDigraph,
    config: &SamplerConfig,
    index: usize,
    style: DrawStyle,
) -> Result<DMatrix<f64>, OracleError> {
    config.validate()?;
    if config.symmetric && !g.is_symmetric() {
        return Err(OracleError::NotSymmetric);
    }
    let n = g.node_count();
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut rng = style.rng(config, index);
    for (i, j) in g.edges() {
        if config.symmetric && i > j {
            continue;
        }
        let value = random_sign(&mut rng) * style.magnitude(&mut rng, config);
        a[(j - 1, i - 1)] = value;
        if config.symmetric {
            a[(i - 1, j - 1)] = value;
        }
    }
    for (v, label) in g.loops() {
        a[(v - 1, v - 1)] = match label {
            EntryLabel::Cross => random_sign(&mut rng) * style.magnitude(&mut rng, config),
            EntryLabel::Unspecified => style.unspecified(&mut rng, config),
            EntryLabel::Zero | EntryLabel::Plus | EntryLabel::Minus => unreachable!(),
        };
    }
    Ok(a)
}

/// Draw sample `index` from the qualitative class of a signed graph.
pub fn sample_signed_matrix(
    g: &SignedDigraph,
    config: &SamplerConfig,
    index: usize,
) -> Result<DMatrix<f64>, OracleError> {
    signed_matrix(g, config, index, DrawStyle::Continuous)
}

/// Draw sample `index` from the qualitative class of a zero-nonzero
/// pattern: every `x` entry gets an independent random sign.
pub fn sample_pattern_matrix(
    g: &PatternDigraph,
    config: &SamplerConfig,
    index: usize,
) -> Result<DMatrix<f64>, OracleError> {
    pattern_matrix(g, config, index, DrawStyle::Continuous)
}

/// Lattice twin of [`sample_signed_matrix`]; see the module docs.
pub(crate) fn lattice_signed_matrix(
    g: &SignedDigraph,
    config: &SamplerConfig,
    index: usize,
) -> Result<DMatrix<f64>, OracleError> {
    signed_matrix(g, config, index, DrawStyle::Lattice)
}

/// Lattice twin of [`sample_pattern_matrix`]; see the module docs.
pub(crate) fn lattice_pattern_matrix(
    g: &PatternDigraph,
    config: &SamplerConfig,
    index: usize,
) -> Result<DMatrix<f64>, OracleError> {
    pattern_matrix(g, config, index, DrawStyle::Lattice)
}
