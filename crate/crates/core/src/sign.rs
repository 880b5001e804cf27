//! The closed algebra of pattern symbols.
//!
//! Two alphabets share one symbol type: zero-nonzero patterns draw their
//! entries from `{0, x, ?}` and sign patterns from `{0, +, -, ?}`. Addition
//! of labels follows the five sign equations (`? + s = ?`, `0 + s = s`,
//! `r + inv(r) = ?`, `r + r = r`, `x + x = ?`); adding a `x` to a signed
//! symbol is rejected because the two alphabets never mix.

use std::fmt;

use thiserror::Error;

/// A definite sign, `+` or `-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Sign inversion: `inv(+) = -`, `inv(-) = +`.
    pub fn inv(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Sign product; `+` is the identity and `- * - = +`.
    pub fn mul(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn as_label(self) -> EntryLabel {
        match self {
            Sign::Plus => EntryLabel::Plus,
            Sign::Minus => EntryLabel::Minus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

impl From<Sign> for f64 {
    fn from(s: Sign) -> f64 {
        match s {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// A pattern entry symbol: `0`, `x` (nonzero), `+`, `-`, or `?` (unspecified).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntryLabel {
    Zero,
    Cross,
    Plus,
    Minus,
    Unspecified,
}

impl EntryLabel {
    /// True for symbols of the zero-nonzero alphabet `{0, x, ?}`.
    pub fn is_zero_nonzero(self) -> bool {
        matches!(
            self,
            EntryLabel::Zero | EntryLabel::Cross | EntryLabel::Unspecified
        )
    }

    /// True for symbols of the sign alphabet `{0, +, -, ?}`.
    pub fn is_sign(self) -> bool {
        !matches!(self, EntryLabel::Cross)
    }

    /// The definite sign carried by this label, if any.
    pub fn as_sign(self) -> Option<Sign> {
        match self {
            EntryLabel::Plus => Some(Sign::Plus),
            EntryLabel::Minus => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl From<Sign> for EntryLabel {
    fn from(s: Sign) -> Self {
        s.as_label()
    }
}

impl fmt::Display for EntryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            EntryLabel::Zero => "0",
            EntryLabel::Cross => "x",
            EntryLabel::Plus => "+",
            EntryLabel::Minus => "-",
            EntryLabel::Unspecified => "?",
        };
        write!(f, "{c}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignError {
    /// Label addition never mixes the `x` symbol with a signed symbol.
    #[error("cannot add mixed-alphabet labels {0} and {1}")]
    MixedAlphabet(EntryLabel, EntryLabel),
}

/// Label addition per the five sign equations. Commutative; rejects pairs
/// that mix `x` with `+` or `-`.
pub fn label_add(a: EntryLabel, b: EntryLabel) -> Result<EntryLabel, SignError> {
    use EntryLabel::*;
    let mixed = |x: EntryLabel, y: EntryLabel| {
        x == Cross && matches!(y, Plus | Minus) || y == Cross && matches!(x, Plus | Minus)
    };
    if mixed(a, b) {
        return Err(SignError::MixedAlphabet(a, b));
    }
    Ok(match (a, b) {
        (Unspecified, _) | (_, Unspecified) => Unspecified,
        (Zero, s) | (s, Zero) => s,
        (Cross, Cross) => Unspecified,
        (Plus, Plus) => Plus,
        (Minus, Minus) => Minus,
        (Plus, Minus) | (Minus, Plus) => Unspecified,
        // Mixed (Cross, Plus/Minus) pairs were rejected above.
        (Cross, _) | (_, Cross) => unreachable!(),
    })
}

/// Sign product of two labels carrying definite signs.
pub fn sign_mul(a: Sign, b: Sign) -> Sign {
    a.mul(b)
}

/// Classify a real into `{0, +, -}` with an absolute tolerance: zero iff
/// `|x| <= tol`.
pub fn sign_of(x: f64, tol: f64) -> EntryLabel {
    debug_assert!(tol >= 0.0);
    if x.abs() <= tol {
        EntryLabel::Zero
    } else if x > 0.0 {
        EntryLabel::Plus
    } else {
        EntryLabel::Minus
    }
}
