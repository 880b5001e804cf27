//! Monte Carlo harnesses tying the games to concrete spectra.
//!
//! Three kinds of empirical evidence are produced here:
//!
//! * [`monte_carlo_verify`] stress-tests a certificate: it samples matrices
//!   from a signed class and runs the PBH test at every eigenvalue. A
//!   certified class must come back with zero violations; it never works
//!   the other way (an uncertified class with zero violations proves
//!   nothing).
//! * [`find_uncontrollable_sample`] is the falsifier for the exact pattern
//!   criterion: when the combinatorial conditions fail, some matrix of the
//!   class is uncontrollable, and a mixed continuous/small-integer search
//!   usually exhibits one.
//! * [`eigenvector_vanishing_check`] validates the reasoning behind the
//!   signed game itself: any left eigenvector of a positive eigenvalue that
//!   vanishes on the start set must vanish on everything the game colored,
//!   with entry signs matching the recorded marks up to one global flip.
//!
//! Reports aggregate per-class statistics and serialize to text and CSV;
//! all sampling is per-index seeded, so concurrent evaluation cannot change
//! any reported number.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::certify::MultiplicityBound;
use crate::forcing::{signed_derived_sets, GameLimits, GameMode};
use crate::graph::{GraphView, SignedDigraph};
use crate::oracle::sample::{lattice_pattern_matrix, lattice_signed_matrix};
use crate::oracle::{
    left_eigen_analysis, left_eigenspace_basis, null_space_basis_floored, pbh_controllable,
    sample_pattern_matrix, sample_signed_matrix, EigenClass, OracleError, SamplerConfig,
    Tolerances,
};
use crate::sign::Sign;

/// Entries of a unit eigenvector smaller than this have no numerically
/// trustworthy sign and are skipped by the mark-consistency check.
pub const MARK_SIGN_FLOOR: f64 = 1e-4;

/// PBH outcome for one eigenvalue of one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralRecord {
    pub sample: usize,
    pub eigenvalue: Complex64,
    pub class: EigenClass,
    pub algebraic_multiplicity: usize,
    pub geometric_multiplicity: usize,
    pub pbh_margin: f64,
    pub controllable: bool,
}

/// Aggregate over all records of one spectral class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub class: EigenClass,
    pub eigenvalues: usize,
    pub uncontrollable: usize,
    /// Smallest PBH margin seen in this class, if any eigenvalue fell here.
    pub worst_margin: Option<f64>,
}

/// Full result of a Monte Carlo PBH run.
#[derive(Debug, Clone, PartialEq)]
pub struct PbhReport {
    pub controls: BTreeSet<usize>,
    /// Classes whose uncontrollable eigenvalues count as violations.
    pub checked: Vec<EigenClass>,
    pub config: SamplerConfig,
    pub records: Vec<SpectralRecord>,
    /// Stats for every class bucket, in [`EigenClass::ALL`] order.
    pub stats: Vec<ClassStats>,
}

impl PbhReport {
    /// Uncontrollable eigenvalues within the checked classes.
    pub fn violations(&self) -> usize {
        self.checked.iter().map(|&c| self.violations_in(c)).sum()
    }

    pub fn violations_in(&self, class: EigenClass) -> usize {
        self.stats
            .iter()
            .find(|s| s.class == class)
            .map_or(0, |s| s.uncontrollable)
    }

    /// One row per (sample, eigenvalue), in sample order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "sample,lambda_re,lambda_im,class,algebraic_multiplicity,\
             geometric_multiplicity,pbh_margin,controllable\n",
        );
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{:e},{:e},{},{},{},{:e},{}",
                r.sample,
                r.eigenvalue.re,
                r.eigenvalue.im,
                r.class,
                r.algebraic_multiplicity,
                r.geometric_multiplicity,
                r.pbh_margin,
                r.controllable
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let controls: Vec<String> = self.controls.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "samples: {}", self.config.samples);
        let _ = writeln!(out, "controls: {}", controls.join(","));
        let checked: Vec<&str> = self.checked.iter().map(|c| c.name()).collect();
        let _ = writeln!(out, "checked classes: {}", checked.join(","));
        for s in &self.stats {
            match s.worst_margin {
                Some(margin) => {
                    let _ = writeln!(
                        out,
                        "class {}: {} eigenvalues, {} uncontrollable, worst margin {:.3e}",
                        s.class, s.eigenvalues, s.uncontrollable, margin
                    );
                }
                None => {
                    let _ = writeln!(out, "class {}: no eigenvalues", s.class);
                }
            }
        }
        let _ = writeln!(out, "violations in checked classes: {}", self.violations());
        out
    }

    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "samples={}", self.config.samples);
        let _ = writeln!(out, "seed={}", self.config.seed);
        for s in &self.stats {
            let _ = writeln!(out, "{}_eigenvalues={}", s.class, s.eigenvalues);
            let _ = writeln!(out, "{}_uncontrollable={}", s.class, s.uncontrollable);
        }
        let _ = writeln!(out, "violations={}", self.violations());
        out
    }
}

fn check_nodes(nodes: &BTreeSet<usize>, n: usize) -> Result<(), OracleError> {
    for &v in nodes {
        if v == 0 || v > n {
            return Err(crate::forcing::ForcingError::NodeOutOfRange(v, n).into());
        }
    }
    Ok(())
}

fn analyze_sample(
    a: &DMatrix<f64>,
    sample: usize,
    controls: &BTreeSet<usize>,
    tol: &Tolerances,
) -> Result<Vec<SpectralRecord>, OracleError> {
    let records = left_eigen_analysis(a, tol)?;
    Ok(records
        .into_iter()
        .map(|r| {
            let (controllable, pbh_margin) = pbh_controllable(a, controls, r.eigenvalue, tol);
            SpectralRecord {
                sample,
                eigenvalue: r.eigenvalue,
                class: r.class,
                algebraic_multiplicity: r.algebraic_multiplicity,
                geometric_multiplicity: r.geometric_multiplicity,
                pbh_margin,
                controllable,
            }
        })
        .collect())
}

/// Sample the qualitative class of `g` and run the PBH test at every
/// eigenvalue of every sample. Samples are evaluated in parallel; record
/// order and content depend only on `(graph, controls, config)`.
pub fn monte_carlo_verify(
    g: GraphView<'_>,
    controls: &BTreeSet<usize>,
    checked: &[EigenClass],
    config: &SamplerConfig,
    tol: &Tolerances,
) -> Result<PbhReport, OracleError> {
    config.validate()?;
    check_nodes(controls, g.node_count())?;
    let per_sample: Vec<Vec<SpectralRecord>> = (0..config.samples)
        .into_par_iter()
        .map(|index| {
            let a = match g {
                GraphView::Pattern(p) => sample_pattern_matrix(p, config, index)?,
                GraphView::Signed(s) => sample_signed_matrix(s, config, index)?,
            };
            analyze_sample(&a, index, controls, tol)
        })
        .collect::<Result<_, OracleError>>()?;
    let records: Vec<SpectralRecord> = per_sample.into_iter().flatten().collect();
    let stats = EigenClass::ALL
        .iter()
        .map(|&class| {
            let of_class = records.iter().filter(|r| r.class == class);
            ClassStats {
                class,
                eigenvalues: of_class.clone().count(),
                uncontrollable: of_class.clone().filter(|r| !r.controllable).count(),
                worst_margin: of_class
                    .map(|r| r.pbh_margin)
                    .fold(None, |acc, m| Some(acc.map_or(m, |a: f64| a.min(m)))),
            }
        })
        .collect();
    Ok(PbhReport {
        controls: controls.clone(),
        checked: checked.to_vec(),
        config: config.clone(),
        records,
        stats,
    })
}

/// A concrete uncontrollable matrix exhibited from a qualitative class.
#[derive(Debug, Clone, PartialEq)]
pub struct Falsification {
    pub sample: usize,
    pub eigenvalue: Complex64,
    pub pbh_margin: f64,
}

/// Search up to `max_samples` class members for one that the PBH test
/// rejects at some eigenvalue. Returns the first hit in candidate order.
///
/// Candidates alternate between the continuous sampler and its
/// small-integer lattice twin. The uncontrollable members of a refuted
/// class often fill only an algebraic coincidence set — equal magnitudes
/// here, a cancelling product there — which continuous draws miss almost
/// surely but which usually contains points with entries in `{0, ±1, ±2}`.
pub fn find_uncontrollable_sample(
    g: GraphView<'_>,
    controls: &BTreeSet<usize>,
    config: &SamplerConfig,
    tol: &Tolerances,
    max_samples: usize,
) -> Result<Option<Falsification>, OracleError> {
    config.validate()?;
    check_nodes(controls, g.node_count())?;
    for index in 0..max_samples {
        let a = match (g, index % 2 == 0) {
            (GraphView::Pattern(p), true) => sample_pattern_matrix(p, config, index)?,
            (GraphView::Pattern(p), false) => lattice_pattern_matrix(p, config, index)?,
            (GraphView::Signed(s), true) => sample_signed_matrix(s, config, index)?,
            (GraphView::Signed(s), false) => lattice_signed_matrix(s, config, index)?,
        };
        for record in analyze_sample(&a, index, controls, tol)? {
            if !record.controllable {
                return Ok(Some(Falsification {
                    sample: index,
                    eigenvalue: record.eigenvalue,
                    pbh_margin: record.pbh_margin,
                }));
            }
        }
    }
    Ok(None)
}

/// Result of [`eigenvector_vanishing_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct VanishingReport {
    pub samples: usize,
    /// Positive eigenvalues encountered across all samples.
    pub positive_eigenvalues: usize,
    /// Eigenvalues whose eigenspace intersects `{ν : ν_Z = 0}` nontrivially.
    pub nontrivial_intersections: usize,
    /// Unit vectors from those intersections that were tested.
    pub vectors_checked: usize,
    /// Largest `|ν_i|` observed over game-colored nodes, across all tested
    /// vectors.
    pub max_colored_residual: f64,
    /// Threshold the residual must stay under.
    pub residual_bound: f64,
    pub vanish_failures: usize,
    pub mark_failures: usize,
    pub passed: bool,
}

impl VanishingReport {
    pub fn to_text(&self) -> String {
        format!(
            "samples: {}\npositive eigenvalues: {}\nnontrivial intersections: {}\n\
             vectors checked: {}\nmax residual on colored nodes: {:.3e} (bound {:.1e})\n\
             vanish failures: {}\nmark sign failures: {}\nresult: {}\n",
            self.samples,
            self.positive_eigenvalues,
            self.nontrivial_intersections,
            self.vectors_checked,
            self.max_colored_residual,
            self.residual_bound,
            self.vanish_failures,
            self.mark_failures,
            if self.passed { "pass" } else { "FAIL" }
        )
    }
}

/// Empirically validate what the signed game derives from a start set `Z`:
/// run the game for the positive eigenvalue class, then check on sampled
/// matrices that every unit left eigenvector of a positive eigenvalue with
/// `ν_Z = 0` (a) stays below `residual_bound` on every node the game
/// colored, and (b) carries entry signs matching the game's marks up to one
/// global flip, ignoring entries under [`MARK_SIGN_FLOOR`].
pub fn eigenvector_vanishing_check(
    g: &SignedDigraph,
    z: &BTreeSet<usize>,
    config: &SamplerConfig,
    tol: &Tolerances,
    residual_bound: f64,
) -> Result<VanishingReport, OracleError> {
    config.validate()?;
    let derived = signed_derived_sets(
        &g.looped_negative(),
        z,
        GameMode::Deterministic,
        &GameLimits::default(),
    )?;
    let mut report = VanishingReport {
        samples: config.samples,
        positive_eigenvalues: 0,
        nontrivial_intersections: 0,
        vectors_checked: 0,
        max_colored_residual: 0.0,
        residual_bound,
        vanish_failures: 0,
        mark_failures: 0,
        passed: true,
    };
    for index in 0..config.samples {
        let a = sample_signed_matrix(g, config, index)?;
        for record in left_eigen_analysis(&a, tol)? {
            if record.class != EigenClass::Positive {
                continue;
            }
            report.positive_eigenvalues += 1;
            let eigenspace = left_eigenspace_basis(&a, record.eigenvalue.re, tol.rank);
            let k = eigenspace.ncols();
            if k == 0 {
                continue;
            }
            // Intersect with {ν : ν_Z = 0}: coefficients c with N_Z c = 0.
            // The floor anchors the rank threshold to the unit scale of the
            // orthonormal basis, so uniformly tiny extracted rows count as
            // zero instead of passing a purely relative test.
            let coeffs = if z.is_empty() {
                DMatrix::identity(k, k)
            } else {
                let mut z_rows = DMatrix::zeros(z.len(), k);
                for (r, &v) in z.iter().enumerate() {
                    z_rows.row_mut(r).copy_from(&eigenspace.row(v - 1));
                }
                null_space_basis_floored(&z_rows, tol.rank, 1.0)
            };
            if coeffs.ncols() == 0 {
                continue;
            }
            report.nontrivial_intersections += 1;
            for c in 0..coeffs.ncols() {
                // Orthonormal basis times a unit coefficient vector keeps
                // norm one, so absolute thresholds below are meaningful.
                let nu = &eigenspace * coeffs.column(c);
                report.vectors_checked += 1;
                for &v in &derived.colored {
                    let entry = nu[v - 1].abs();
                    report.max_colored_residual = report.max_colored_residual.max(entry);
                    if entry > residual_bound {
                        report.vanish_failures += 1;
                    }
                }
                let mut flip: Option<Sign> = None;
                for (&w, &mark) in &derived.marked {
                    let entry = nu[w - 1];
                    if entry.abs() <= MARK_SIGN_FLOOR {
                        continue;
                    }
                    let observed = if entry > 0.0 { Sign::Plus } else { Sign::Minus };
                    let this_flip = observed.mul(mark);
                    match flip {
                        None => flip = Some(this_flip),
                        Some(f) if f == this_flip => {}
                        Some(_) => report.mark_failures += 1,
                    }
                }
            }
        }
    }
    report.passed = report.vanish_failures == 0 && report.mark_failures == 0;
    Ok(report)
}

/// Result of [`multiplicity_probe`].
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityReport {
    pub samples: usize,
    pub max_positive_multiplicity: usize,
    pub positive_bound: usize,
    pub max_negative_multiplicity: usize,
    pub negative_bound: usize,
    pub passed: bool,
}

impl MultiplicityReport {
    pub fn to_text(&self) -> String {
        format!(
            "samples: {}\nmax positive-eigenvalue multiplicity: {} (bound {})\n\
             max negative-eigenvalue multiplicity: {} (bound {})\nresult: {}\n",
            self.samples,
            self.max_positive_multiplicity,
            self.positive_bound,
            self.max_negative_multiplicity,
            self.negative_bound,
            if self.passed { "pass" } else { "FAIL" }
        )
    }
}

/// Check the forcing-number multiplicity bounds against sampled spectra:
/// no sample may exhibit a positive (negative) eigenvalue whose geometric
/// multiplicity exceeds the corresponding bound.
pub fn multiplicity_probe(
    g: &SignedDigraph,
    bound: &MultiplicityBound,
    config: &SamplerConfig,
    tol: &Tolerances,
) -> Result<MultiplicityReport, OracleError> {
    config.validate()?;
    let mut max_pos = 0;
    let mut max_neg = 0;
    for index in 0..config.samples {
        let a = sample_signed_matrix(g, config, index)?;
        for record in left_eigen_analysis(&a, tol)? {
            match record.class {
                EigenClass::Positive => max_pos = max_pos.max(record.geometric_multiplicity),
                EigenClass::Negative => max_neg = max_neg.max(record.geometric_multiplicity),
                EigenClass::Zero | EigenClass::Complex => {}
            }
        }
    }
    Ok(MultiplicityReport {
        samples: config.samples,
        max_positive_multiplicity: max_pos,
        positive_bound: bound.positive_bound,
        max_negative_multiplicity: max_neg,
        negative_bound: bound.negative_bound,
        passed: max_pos <= bound.positive_bound && max_neg <= bound.negative_bound,
    })
}
