//! Combinatorial controllability certificates.
//!
//! For a zero-nonzero pattern, a control set renders every matrix in the
//! qualitative class controllable exactly when it is both a classical and a
//! strong zero forcing set — an if-and-only-if, so the pattern verdict is
//! definitive in both directions.
//!
//! For a signed graph, the spectrum splits into zero, positive and negative
//! eigenvalue classes; each class is certified controllable by the matching
//! signed forcing predicate (plain game for zero, game on the negative
//! looped graph for positive, on the positive looped graph for negative).
//! These conditions are sufficient only: "not certified" never means
//! uncontrollable. The full-network certificate additionally requires all
//! eigenvalues to be real, which this toolkit takes as a caller assertion
//! (symmetric patterns qualify; deciding realness in general is out of
//! scope) and can stress-test numerically via the oracle module.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::forcing::{
    is_classical_zfs, is_negative_signed_zfs, is_positive_signed_zfs, is_signed_zfs,
    is_strong_zfs, ForcingError, GameLimits, ZfsCheck,
};
use crate::graph::{GraphView, PatternDigraph, SignedDigraph};
use crate::search::{min_forcing_set, ForcingKind, SearchError, SearchLimits};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("the control set must not be empty")]
    EmptyControls,
    #[error(transparent)]
    Forcing(#[from] ForcingError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Eigenvalue class of the real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectralClass {
    Zero,
    Positive,
    Negative,
}

impl SpectralClass {
    pub const ALL: [SpectralClass; 3] =
        [SpectralClass::Zero, SpectralClass::Positive, SpectralClass::Negative];

    pub fn name(&self) -> &'static str {
        match self {
            SpectralClass::Zero => "zero",
            SpectralClass::Positive => "positive",
            SpectralClass::Negative => "negative",
        }
    }
}

impl std::fmt::Display for SpectralClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-class outcome of the sufficient condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassVerdict {
    Certified,
    /// The forcing condition failed; says nothing about uncontrollability.
    NotCertified,
}

impl std::fmt::Display for ClassVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClassVerdict::Certified => "certified",
            ClassVerdict::NotCertified => "not-certified",
        })
    }
}

/// Aggregate verdict over all three classes plus the realness hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverallVerdict {
    CertifiedControllable,
    Inconclusive,
}

impl std::fmt::Display for OverallVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OverallVerdict::CertifiedControllable => "certified-controllable",
            OverallVerdict::Inconclusive => "inconclusive",
        })
    }
}

/// Verdict for one spectral class with the game outcome backing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub class: SpectralClass,
    pub verdict: ClassVerdict,
    pub check: ZfsCheck,
    /// Which game instance decided the class.
    pub method: &'static str,
}

/// Exact controllability verdict for a zero-nonzero pattern: an iff, valid
/// for every matrix in the qualitative class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternVerdict {
    pub controls: BTreeSet<usize>,
    pub classical_zfs: bool,
    pub strong_zfs: bool,
    pub controllable: bool,
}

/// Controllability certificate for a signed network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub controls: BTreeSet<usize>,
    /// Reports in class order zero, positive, negative.
    pub reports: Vec<ClassReport>,
    pub realness_asserted: bool,
    pub overall: OverallVerdict,
    /// Why the certificate is inconclusive; empty when certified.
    pub reasons: Vec<String>,
}

/// Upper bounds on the maximum geometric multiplicity of positive and
/// negative eigenvalues over the qualitative class, with the minimum-size
/// witnesses realizing them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityBound {
    pub positive_bound: usize,
    pub positive_witness: BTreeSet<usize>,
    pub negative_bound: usize,
    pub negative_witness: BTreeSet<usize>,
}

fn check_controls(vc: &BTreeSet<usize>, n: usize) -> Result<(), CertifyError> {
    if vc.is_empty() {
        return Err(CertifyError::EmptyControls);
    }
    for &v in vc {
        if v == 0 || v > n {
            return Err(ForcingError::NodeOutOfRange(v, n).into());
        }
    }
    Ok(())
}

/// Decide controllability of a patterned network: controllable for every
/// matrix of the pattern's class iff the controls form both a classical and
/// a strong zero forcing set.
pub fn certify_pattern(
    g: &PatternDigraph,
    controls: &BTreeSet<usize>,
) -> Result<PatternVerdict, CertifyError> {
    check_controls(controls, g.node_count())?;
    let classical_zfs = is_classical_zfs(g, controls)?;
    let strong_zfs = is_strong_zfs(g, controls)?;
    Ok(PatternVerdict {
        controls: controls.clone(),
        classical_zfs,
        strong_zfs,
        controllable: classical_zfs && strong_zfs,
    })
}

/// Apply the sufficient condition for one spectral class of a signed
/// network.
pub fn certify_signed_class(
    g: &SignedDigraph,
    controls: &BTreeSet<usize>,
    class: SpectralClass,
    limits: &GameLimits,
) -> Result<ClassReport, CertifyError> {
    check_controls(controls, g.node_count())?;
    let (check, method) = match class {
        SpectralClass::Zero => (
            is_signed_zfs(g, controls, limits)?,
            "signing-and-coloring game on the given graph",
        ),
        SpectralClass::Positive => (
            is_positive_signed_zfs(g, controls, limits)?,
            "signing-and-coloring game on the negative looped graph",
        ),
        SpectralClass::Negative => (
            is_negative_signed_zfs(g, controls, limits)?,
            "signing-and-coloring game on the positive looped graph",
        ),
    };
    Ok(ClassReport {
        class,
        verdict: if check.passes {
            ClassVerdict::Certified
        } else {
            ClassVerdict::NotCertified
        },
        check,
        method,
    })
}

/// Full certificate for a signed network: certified controllable only when
/// all three class conditions hold and the caller asserts that the sign
/// pattern admits only real eigenvalues.
pub fn certify_signed(
    g: &SignedDigraph,
    controls: &BTreeSet<usize>,
    realness_asserted: bool,
    limits: &GameLimits,
) -> Result<Certificate, CertifyError> {
    let mut reports = Vec::new();
    let mut reasons = Vec::new();
    for class in SpectralClass::ALL {
        let report = certify_signed_class(g, controls, class, limits)?;
        if report.verdict == ClassVerdict::NotCertified {
            let caveat = if report.check.exhaustive {
                ""
            } else {
                " (deterministic derivation only; exhaustive search skipped at this size)"
            };
            reasons.push(format!(
                "{} class not certified: the {} stalls at {} of {} nodes{}",
                class,
                report.method,
                report.check.derived.colored.len(),
                g.node_count(),
                caveat
            ));
        }
        reports.push(report);
    }
    if !realness_asserted {
        reasons.push(
            "realness of the spectrum not asserted; the full-network certificate \
             requires all eigenvalues real"
                .to_string(),
        );
    }
    let overall = if reasons.is_empty() {
        OverallVerdict::CertifiedControllable
    } else {
        OverallVerdict::Inconclusive
    };
    Ok(Certificate {
        controls: controls.clone(),
        reports,
        realness_asserted,
        overall,
        reasons,
    })
}

/// The positive and negative signed zero forcing numbers, which bound the
/// maximum geometric multiplicity of positive and negative eigenvalues over
/// the qualitative class.
pub fn multiplicity_bounds(
    g: &SignedDigraph,
    limits: &SearchLimits,
) -> Result<MultiplicityBound, CertifyError> {
    let pos = min_forcing_set(GraphView::Signed(g), ForcingKind::PositiveSigned, limits)?;
    let neg = min_forcing_set(GraphView::Signed(g), ForcingKind::NegativeSigned, limits)?;
    Ok(MultiplicityBound {
        positive_bound: pos.minimum_size,
        positive_witness: pos.witness,
        negative_bound: neg.minimum_size,
        negative_witness: neg.witness,
    })
}

fn fmt_set(s: &BTreeSet<usize>) -> String {
    let items: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    if items.is_empty() {
        "-".to_string()
    } else {
        items.join(",")
    }
}

impl PatternVerdict {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "controls: {}", fmt_set(&self.controls));
        let _ = writeln!(out, "classical zero forcing set: {}", self.classical_zfs);
        let _ = writeln!(out, "strong zero forcing set: {}", self.strong_zfs);
        let _ = writeln!(
            out,
            "verdict: {}",
            if self.controllable {
                "controllable for every matrix of the pattern class"
            } else {
                "not controllable (some matrix of the pattern class has an uncontrollable mode)"
            }
        );
        out
    }

    pub fn to_kv(&self) -> String {
        format!(
            "controls={}\nclassical_zfs={}\nstrong_zfs={}\ncontrollable={}\n",
            fmt_set(&self.controls),
            self.classical_zfs,
            self.strong_zfs,
            self.controllable
        )
    }
}

impl Certificate {
    pub fn to_text(&self, include_traces: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "controls: {}", fmt_set(&self.controls));
        let _ = writeln!(out, "realness asserted: {}", self.realness_asserted);
        for r in &self.reports {
            let _ = writeln!(
                out,
                "{} eigenvalue class: {} ({})",
                r.class, r.verdict, r.method
            );
            if include_traces {
                for mv in &r.check.derived.trace {
                    let _ = writeln!(out, "  {mv}");
                }
            }
        }
        let _ = writeln!(out, "overall: {}", self.overall);
        for reason in &self.reasons {
            let _ = writeln!(out, "reason: {reason}");
        }
        out
    }

    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "controls={}", fmt_set(&self.controls));
        let _ = writeln!(out, "realness_asserted={}", self.realness_asserted);
        for r in &self.reports {
            let _ = writeln!(out, "class_{}={}", r.class, r.verdict);
        }
        let _ = writeln!(out, "overall={}", self.overall);
        out
    }
}

impl MultiplicityBound {
    pub fn to_text(&self) -> String {
        format!(
            "positive eigenvalue multiplicity bound: {} (witness {})\n\
             negative eigenvalue multiplicity bound: {} (witness {})\n",
            self.positive_bound,
            fmt_set(&self.positive_witness),
            self.negative_bound,
            fmt_set(&self.negative_witness)
        )
    }

    pub fn to_kv(&self) -> String {
        format!(
            "positive_bound={}\npositive_witness={}\nnegative_bound={}\nnegative_witness={}\n",
            self.positive_bound,
            fmt_set(&self.positive_witness),
            self.negative_bound,
            fmt_set(&self.negative_witness)
        )
    }
}
