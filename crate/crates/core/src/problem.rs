use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemKind {
    /// Weight Restriction.
    #[serde(rename = "wr")]
    Restriction,
    /// Weight Qualification.
    #[serde(rename = "wq")]
    Qualification,
    /// Weight Separation.
    #[serde(rename = "ws")]
    Separation,
}

impl ProblemKind {
    pub fn short_name(self) -> &'static str {
        match self {
            ProblemKind::Restriction => "wr",
            ProblemKind::Qualification => "wq",
            ProblemKind::Separation => "ws",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// A weight reduction problem with validated thresholds.
///
/// `low < high` always holds:
///
/// | kind | low | high |
/// |------|-----|------|
/// | WR   | αw  | αn   |
/// | WQ   | βn  | βw   |
/// | WS   | α   | β    |
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ProblemSpec {
    kind: ProblemKind,
    low: Rational,
    high: Rational,
}

impl ProblemSpec {
    /// Weight Restriction: every coalition lighter than `alpha_w·W` must hold
    /// fewer than `alpha_n·T` tickets.
    pub fn restriction(alpha_w: Rational, alpha_n: Rational) -> Result<Self> {
        Self::checked(ProblemKind::Restriction, alpha_w, alpha_n, "alpha_w", "alpha_n")
    }

    /// Weight Qualification: every coalition heavier than `beta_w·W` must hold
    /// more than `beta_n·T` tickets.
    pub fn qualification(beta_w: Rational, beta_n: Rational) -> Result<Self> {
        Self::checked(ProblemKind::Qualification, beta_n, beta_w, "beta_n", "beta_w")
    }

    /// Weight Separation: every coalition heavier than `beta·W` must out-ticket
    /// every coalition lighter than `alpha·W`.
    pub fn separation(alpha: Rational, beta: Rational) -> Result<Self> {
        Self::checked(ProblemKind::Separation, alpha, beta, "alpha", "beta")
    }

    fn checked(
        kind: ProblemKind,
        low: Rational,
        high: Rational,
        low_name: &str,
        high_name: &str,
    ) -> Result<Self> {
        let unit = |v: &Rational| v.is_positive() && v < &Rational::one();
        if !unit(&low) || !unit(&high) {
            return Err(Error::InvalidProblem(format!(
                "{kind}: {low_name}={low} and {high_name}={high} must lie in (0, 1)"
            )));
        }
        if low >= high {
            return Err(Error::InvalidProblem(format!(
                "{kind}: {low_name}={low} must be smaller than {high_name}={high}"
            )));
        }
        Ok(ProblemSpec { kind, low, high })
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn low(&self) -> &Rational {
        &self.low
    }

    pub fn high(&self) -> &Rational {
        &self.high
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ProblemKind::Restriction => write!(f, "WR(alpha_w={}, alpha_n={})", self.low, self.high),
            ProblemKind::Qualification => write!(f, "WQ(beta_w={}, beta_n={})", self.high, self.low),
            ProblemKind::Separation => write!(f, "WS(alpha={}, beta={})", self.low, self.high),
        }
    }
}

/// Outcome of a quick validity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Valid,
    Invalid,
    Uncertain,
}
