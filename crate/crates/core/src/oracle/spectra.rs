//! Spectra, left eigenvectors, and PBH rank tests.
//!
//! Eigenvalues are computed via a Schur decomposition, clustered within a
//! scale-relative tolerance (so a numerically split repeated eigenvalue is
//! reported once, with its algebraic multiplicity), and classified as zero,
//! positive, negative, or complex. Whether a near-zero cluster is the zero
//! eigenvalue is decided by a rank test on the matrix itself, which stays
//! reliable when a defective zero scatters the computed copies. Geometric
//! multiplicities and null-space bases come from singular value
//! decompositions with relative rank thresholds.
//!
//! An eigenvalue `λ` of `A` is controllable for the controls `V_C` exactly
//! when the block `[A - λI | B]` has full row rank, `B` collecting the unit
//! columns of `V_C`; the smallest singular value of that block is the
//! reported margin.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::certify::SpectralClass;
use crate::oracle::{OracleError, Tolerances};

/// Hard cap on QR iterations before the eigensolver reports failure; far
/// above what matrices of the supported sizes ever need.
const MAX_SCHUR_ITERATIONS: usize = 10_000;

/// Hard ceiling on the modulus of a computed eigenvalue that may still be
/// attributed to a true zero eigenvalue, relative to `max(1, ‖A‖)`.
///
/// A defective zero (a nilpotent Jordan chain of length `k`) comes out of
/// the QR iteration scattered at radius `≈ (ε·‖A‖·∏|chain entries|)^(1/k)`
/// — for chains up to length six that reaches a few percent of the matrix
/// scale, far outside any tolerance fit for simple eigenvalues.
const ZERO_ATTRIBUTION_CEILING: f64 = 0.05;

/// A cluster joins the zero pool only while its modulus stays within this
/// factor of the copies already absorbed. The scattered copies of one
/// defective zero all sit at comparable radius, while a genuine nonzero
/// eigenvalue sits orders of magnitude further out, so a modest gap factor
/// separates the two reliably.
const ZERO_POOL_GAP: f64 = 10.0;

/// Spectral class of a computed eigenvalue. Unlike [`SpectralClass`] this
/// includes a bucket for genuinely complex eigenvalues, which no
/// combinatorial certificate speaks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EigenClass {
    Zero,
    Positive,
    Negative,
    Complex,
}

impl EigenClass {
    pub const ALL: [EigenClass; 4] =
        [EigenClass::Zero, EigenClass::Positive, EigenClass::Negative, EigenClass::Complex];

    /// The three buckets the signed certificates speak about.
    pub const REAL: [EigenClass; 3] =
        [EigenClass::Zero, EigenClass::Positive, EigenClass::Negative];

    pub fn name(&self) -> &'static str {
        match self {
            EigenClass::Zero => "zero",
            EigenClass::Positive => "positive",
            EigenClass::Negative => "negative",
            EigenClass::Complex => "complex",
        }
    }

    /// The certificate class this bucket corresponds to, if any.
    pub fn spectral(&self) -> Option<SpectralClass> {
        match self {
            EigenClass::Zero => Some(SpectralClass::Zero),
            EigenClass::Positive => Some(SpectralClass::Positive),
            EigenClass::Negative => Some(SpectralClass::Negative),
            EigenClass::Complex => None,
        }
    }
}

impl From<SpectralClass> for EigenClass {
    fn from(c: SpectralClass) -> EigenClass {
        match c {
            SpectralClass::Zero => EigenClass::Zero,
            SpectralClass::Positive => EigenClass::Positive,
            SpectralClass::Negative => EigenClass::Negative,
        }
    }
}

impl std::fmt::Display for EigenClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One distinct eigenvalue of a concrete matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenRecord {
    pub eigenvalue: Complex64,
    pub class: EigenClass,
    pub algebraic_multiplicity: usize,
    pub geometric_multiplicity: usize,
}

/// All distinct eigenvalues of `a`, sorted by real then imaginary part,
/// with multiplicities. Eigenvalues closer than `realness·max(1, ‖A‖)` are
/// merged into one record; an eigenvalue is real when its imaginary part is
/// below `realness·max(1, |λ|)`.
///
/// Zero gets special care. When `A` is exactly singular, its zero
/// eigenvalue can be defective, and the computed copies then scatter far
/// beyond the cluster tolerance (and even off the real axis) — naive
/// classification would report spurious tiny positive, negative, or complex
/// eigenvalues. So whenever `A` is rank-deficient by the SVD test (which
/// stays reliable for defective matrices), the smallest-modulus cluster is
/// attributed to zero, and further clusters join it while they stay within
/// [`ZERO_POOL_GAP`] of the absorbed radius — the scattered copies of one
/// defective zero sit at comparable radius, a genuine nonzero eigenvalue
/// much further out. The pool becomes a single class-zero record at exactly
/// `0`, with the pooled algebraic multiplicity and the nullity of `A` as
/// geometric multiplicity. Small eigenvalues of a full-rank matrix keep
/// their sign class.
pub fn left_eigen_analysis(
    a: &DMatrix<f64>,
    tol: &Tolerances,
) -> Result<Vec<EigenRecord>, OracleError> {
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(a.clone(), f64::EPSILON, MAX_SCHUR_ITERATIONS)
        .ok_or(OracleError::EigensolverFailed)?;
    let mut evs: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    evs.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).expect("finite eigenvalues"));
    let scale = a.norm().max(1.0);
    let cluster_tol = tol.realness * scale;
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for ev in evs {
        match clusters.last_mut() {
            Some((sum, count)) if (ev - *sum / *count as f64).norm() <= cluster_tol => {
                *sum += ev;
                *count += 1;
            }
            _ => clusters.push((ev, 1)),
        }
    }
    let nullity = n - rank_real(a, tol.rank);
    let pooled = zero_pool_flags(&clusters, nullity, scale, cluster_tol);
    let mut zero_pool = 0usize;
    let mut records = Vec::with_capacity(clusters.len());
    for (ci, &(sum, count)) in clusters.iter().enumerate() {
        let mean = sum / count as f64;
        if pooled[ci] {
            zero_pool += count;
            continue;
        }
        let real = mean.im.abs() <= tol.realness * mean.norm().max(1.0);
        let (eigenvalue, class) = if !real {
            (mean, EigenClass::Complex)
        } else if mean.re == 0.0 {
            // A full-rank matrix has no zero eigenvalue, so this corner is
            // out of reach in practice; classify it zero for totality.
            (Complex64::new(0.0, 0.0), EigenClass::Zero)
        } else if mean.re > 0.0 {
            (Complex64::new(mean.re, 0.0), EigenClass::Positive)
        } else {
            (Complex64::new(mean.re, 0.0), EigenClass::Negative)
        };
        records.push(EigenRecord {
            eigenvalue,
            class,
            algebraic_multiplicity: count,
            geometric_multiplicity: geometric_multiplicity(a, eigenvalue, tol),
        });
    }
    if zero_pool > 0 {
        records.push(EigenRecord {
            eigenvalue: Complex64::new(0.0, 0.0),
            class: EigenClass::Zero,
            algebraic_multiplicity: zero_pool,
            geometric_multiplicity: nullity.clamp(1, zero_pool),
        });
        records.sort_by(|x, y| {
            (x.eigenvalue.re, x.eigenvalue.im)
                .partial_cmp(&(y.eigenvalue.re, y.eigenvalue.im))
                .expect("finite eigenvalues")
        });
    }
    Ok(records)
}

/// Flags the clusters to fold into the zero eigenvalue, by the gap-chain
/// rule described on [`left_eigen_analysis`]. `nullity == 0` pools nothing.
fn zero_pool_flags(
    clusters: &[(Complex64, usize)],
    nullity: usize,
    scale: f64,
    cluster_tol: f64,
) -> Vec<bool> {
    let mut pooled = vec![false; clusters.len()];
    if nullity == 0 {
        return pooled;
    }
    let modulus = |ci: usize| {
        let (sum, count) = clusters[ci];
        (sum / count as f64).norm()
    };
    let mut order: Vec<usize> = (0..clusters.len()).collect();
    order.sort_by(|&x, &y| modulus(x).partial_cmp(&modulus(y)).expect("finite eigenvalues"));
    let ceiling = ZERO_ATTRIBUTION_CEILING * scale;
    let mut absorbed_radius = 0.0_f64;
    for (position, &ci) in order.iter().enumerate() {
        let m = modulus(ci);
        let limit = if position == 0 {
            // The matrix is singular, so the copy nearest the origin
            // belongs to zero — unless even it is implausibly far out.
            ceiling
        } else {
            (ZERO_POOL_GAP * absorbed_radius).max(cluster_tol).min(ceiling)
        };
        if m > limit {
            break;
        }
        pooled[ci] = true;
        absorbed_radius = absorbed_radius.max(m);
    }
    pooled
}

fn geometric_multiplicity(a: &DMatrix<f64>, lambda: Complex64, tol: &Tolerances) -> usize {
    let n = a.nrows();
    let rank = if lambda.im == 0.0 {
        let mut m = a.clone();
        for i in 0..n {
            m[(i, i)] -= lambda.re;
        }
        rank_real(&m, tol.rank)
    } else {
        let mut m = to_complex(a);
        for i in 0..n {
            m[(i, i)] -= lambda;
        }
        rank_complex(&m, tol.rank)
    };
    // The input is an eigenvalue within tolerance, so the exact nullity is
    // at least one even when the rank threshold narrowly misses it (which
    // can happen for very ill-conditioned eigenvalues).
    (n - rank).max(1)
}

fn to_complex(a: &DMatrix<f64>) -> DMatrix<Complex64> {
    a.map(|x| Complex64::new(x, 0.0))
}

fn rank_real(m: &DMatrix<f64>, rtol: f64) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0_f64, f64::max);
    sv.iter().filter(|&&s| s > rtol * smax).count()
}

fn rank_complex(m: &DMatrix<Complex64>, rtol: f64) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0_f64, f64::max);
    sv.iter().filter(|&&s| s > rtol * smax).count()
}

/// Orthonormal basis of the null space of `m`, as matrix columns. Singular
/// values below `rank_rtol·σ_max` count as zero.
pub fn null_space_basis(m: &DMatrix<f64>, rank_rtol: f64) -> DMatrix<f64> {
    null_space_basis_floored(m, rank_rtol, 0.0)
}

/// Like [`null_space_basis`], with the rank threshold floored at
/// `rank_rtol·scale_floor`. A purely relative threshold misreads a matrix
/// whose entries are all numerical noise — its largest singular value is
/// noise too, so every direction looks significant. When the rows were
/// extracted from unit vectors, passing `scale_floor = 1` anchors the
/// threshold to the scale those entries were computed at.
pub fn null_space_basis_floored(
    m: &DMatrix<f64>,
    rank_rtol: f64,
    scale_floor: f64,
) -> DMatrix<f64> {
    let (rows, cols) = m.shape();
    // A thin SVD of a wide matrix only produces min(rows, cols) right
    // singular vectors; padding with zero rows exposes the full basis
    // without disturbing singular values or the null space.
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0_f64, f64::max);
    let rank = sv.iter().filter(|&&s| s > rank_rtol * smax.max(scale_floor)).count();
    let mut basis = DMatrix::zeros(cols, cols - rank);
    for k in 0..cols - rank {
        // Singular values come back sorted descending, so the rows of V^T
        // past the rank span the null space.
        basis.column_mut(k).copy_from(&v_t.row(rank + k).transpose());
    }
    basis
}

/// Complex analog of [`null_space_basis`].
pub fn null_space_basis_complex(m: &DMatrix<Complex64>, rank_rtol: f64) -> DMatrix<Complex64> {
    null_space_basis_complex_floored(m, rank_rtol, 0.0)
}

/// Complex analog of [`null_space_basis_floored`].
pub fn null_space_basis_complex_floored(
    m: &DMatrix<Complex64>,
    rank_rtol: f64,
    scale_floor: f64,
) -> DMatrix<Complex64> {
    let (rows, cols) = m.shape();
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0_f64, f64::max);
    let rank = sv.iter().filter(|&&s| s > rank_rtol * smax.max(scale_floor)).count();
    let mut basis = DMatrix::zeros(cols, cols - rank);
    for k in 0..cols - rank {
        // v_t holds V^H, so a null basis column is the conjugate of the
        // corresponding trailing row — exactly what adjoint() produces.
        basis.column_mut(k).copy_from(&v_t.row(rank + k).adjoint());
    }
    basis
}

/// Orthonormal basis of the left eigenspace of `a` for a real eigenvalue:
/// the null space of `Aᵀ - λI`.
pub fn left_eigenspace_basis(a: &DMatrix<f64>, lambda: f64, rank_rtol: f64) -> DMatrix<f64> {
    let n = a.nrows();
    let mut m = a.transpose();
    for i in 0..n {
        m[(i, i)] -= lambda;
    }
    null_space_basis(&m, rank_rtol)
}

/// Smallest singular value of the controllability test block
/// `[A - λI | B]`, where `B` holds the unit columns of the (1-indexed)
/// control nodes.
pub fn pbh_margin(a: &DMatrix<f64>, controls: &BTreeSet<usize>, lambda: Complex64) -> f64 {
    let n = a.nrows();
    let m = controls.len();
    if lambda.im == 0.0 {
        let mut block = DMatrix::<f64>::zeros(n, n + m);
        block.view_mut((0, 0), (n, n)).copy_from(a);
        for i in 0..n {
            block[(i, i)] -= lambda.re;
        }
        for (k, &v) in controls.iter().enumerate() {
            block[(v - 1, n + k)] = 1.0;
        }
        let sv = block.svd(false, false).singular_values;
        sv.iter().cloned().fold(f64::INFINITY, f64::min)
    } else {
        let mut block = DMatrix::<Complex64>::zeros(n, n + m);
        block.view_mut((0, 0), (n, n)).copy_from(&to_complex(a));
        for i in 0..n {
            block[(i, i)] -= lambda;
        }
        for (k, &v) in controls.iter().enumerate() {
            block[(v - 1, n + k)] = Complex64::new(1.0, 0.0);
        }
        let sv = block.svd(false, false).singular_values;
        sv.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// PBH test at one eigenvalue: controllable when the margin clears
/// `pbh·max(1, ‖A‖)`.
pub fn pbh_controllable(
    a: &DMatrix<f64>,
    controls: &BTreeSet<usize>,
    lambda: Complex64,
    tol: &Tolerances,
) -> (bool, f64) {
    let margin = pbh_margin(a, controls, lambda);
    (margin > tol.pbh * a.norm().max(1.0), margin)
}

/// Independent uncontrollability oracle: does some nonzero left eigenvector
/// of `λ` vanish on all control nodes? Because the input matrix `B` is made
/// of unit columns, `νᵀB = 0` says exactly that — so this reduces to an
/// eigenspace/coordinate-subspace intersection, computed from two SVDs and
/// sharing no code path with the PBH block test it cross-checks.
pub fn eigenspace_annihilates_controls(
    a: &DMatrix<f64>,
    lambda: Complex64,
    controls: &BTreeSet<usize>,
    rank_rtol: f64,
) -> bool {
    let n = a.nrows();
    let mut m = to_complex(&a.transpose());
    for i in 0..n {
        m[(i, i)] -= lambda;
    }
    let eigenspace = null_space_basis_complex(&m, rank_rtol);
    let k = eigenspace.ncols();
    if k == 0 {
        return false; // not an eigenvalue: nothing to annihilate with
    }
    if controls.is_empty() {
        return true;
    }
    let mut control_rows = DMatrix::zeros(controls.len(), k);
    for (r, &v) in controls.iter().enumerate() {
        control_rows.row_mut(r).copy_from(&eigenspace.row(v - 1));
    }
    // The basis columns are unit vectors, so rows that are uniformly tiny
    // are numerical zeros; floor the rank threshold at that unit scale.
    null_space_basis_complex_floored(&control_rows, rank_rtol, 1.0).ncols() > 0
}
