//! Constraint classes: a degree, labeled boundary points, and labeled
//! interior constraints with graded codimensions.

use crate::monoid::{Degree, DegreeMonoid};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StrataError {
    #[error("ambient half-dimension n must be odd and at least 3, got {0}")]
    BadAmbient(i64),
    #[error("the empty class (0, {{}}, {{}}) is not a constraint class")]
    EmptyClass,
    #[error("interior constraint `{0}` has odd codimension {1}; only the even-codimension regime is supported")]
    OddCodim(String, i64),
    #[error("interior constraint `{0}` has codimension {1} < 2")]
    SmallCodim(String, i64),
    #[error("boundary point index {0} out of range 1..={1}")]
    IndexRange(usize, usize),
    #[error("entry outside the admissible two-level domain: {0}")]
    OutsideDomain(String),
    #[error("unknown cancellation identity `{0}`")]
    UnknownIdentity(String),
}

/// A labeled interior constraint with its codimension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InteriorConstraint {
    pub label: String,
    pub codim: i64,
}

impl InteriorConstraint {
    pub fn new(label: impl Into<String>, codim: i64) -> InteriorConstraint {
        InteriorConstraint {
            label: label.into(),
            codim,
        }
    }
}

/// A constraint class `(β, K, L)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstraintClass {
    pub beta: Degree,
    pub points: BTreeSet<String>,
    pub interior: BTreeSet<InteriorConstraint>,
}

impl ConstraintClass {
    pub fn is_point_class(&self) -> bool {
        self.beta.is_zero() && self.points.len() == 1 && self.interior.is_empty()
    }

    pub fn is_empty_content(&self) -> bool {
        self.beta.is_zero() && self.points.is_empty() && self.interior.is_empty()
    }

    /// Sum of two classes (degrees add, labels union; labels must be
    /// disjoint, which holds for all engine-internal calls).
    pub fn merge(&self, other: &ConstraintClass) -> ConstraintClass {
        ConstraintClass {
            beta: self.beta.add(&other.beta),
            points: self.points.union(&other.points).cloned().collect(),
            interior: self.interior.union(&other.interior).cloned().collect(),
        }
    }

    /// Difference `self - other` when `other ⪯ self`.
    pub fn checked_sub(&self, other: &ConstraintClass) -> Option<ConstraintClass> {
        let beta = self.beta.checked_sub(&other.beta)?;
        if !other.points.is_subset(&self.points) || !other.interior.is_subset(&self.interior) {
            return None;
        }
        Some(ConstraintClass {
            beta,
            points: self.points.difference(&other.points).cloned().collect(),
            interior: self
                .interior
                .difference(&other.interior)
                .cloned()
                .collect(),
        })
    }
}

impl fmt::Display for ConstraintClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(beta={:?}, K={:?}, L=[", self.beta.0, self.points)?;
        for (i, c) in self.interior.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}:{}", c.label, c.codim)?;
        }
        write!(f, "])")
    }
}

/// Shared context: the degree monoid and the odd ambient half-dimension `n`.
#[derive(Clone, Debug)]
pub struct Setting {
    pub monoid: DegreeMonoid,
    pub n: i64,
}

impl Setting {
    pub fn new(monoid: DegreeMonoid, n: i64) -> Result<Setting, StrataError> {
        if n < 3 || n.rem_euclid(2) != 1 {
            return Err(StrataError::BadAmbient(n));
        }
        Ok(Setting { monoid, n })
    }

    /// Validated constraint class: nonempty content, even codimensions ≥ 2.
    pub fn class(
        &self,
        beta: Degree,
        points: BTreeSet<String>,
        interior: BTreeSet<InteriorConstraint>,
    ) -> Result<ConstraintClass, StrataError> {
        for c in &interior {
            if c.codim.rem_euclid(2) != 0 {
                return Err(StrataError::OddCodim(c.label.clone(), c.codim));
            }
            if c.codim < 2 {
                return Err(StrataError::SmallCodim(c.label.clone(), c.codim));
            }
        }
        let cc = ConstraintClass {
            beta,
            points,
            interior,
        };
        if cc.is_empty_content() {
            return Err(StrataError::EmptyClass);
        }
        Ok(cc)
    }

    /// Internal constructor without the codimension screen; used for the
    /// distinguished odd-codimension output constraint of the degree-pairing
    /// boundary identity.
    pub(crate) fn class_unchecked(
        &self,
        beta: Degree,
        points: BTreeSet<String>,
        interior: BTreeSet<InteriorConstraint>,
    ) -> ConstraintClass {
        ConstraintClass {
            beta,
            points,
            interior,
        }
    }

    /// `dim(α) = μ(β) + n - 3 - (n-1)|K| - Σ_Γ (codim Γ - 2)`.
    pub fn dim_of(&self, alpha: &ConstraintClass) -> i64 {
        let mu = self.monoid.maslov(&alpha.beta);
        let k = alpha.points.len() as i64;
        let codim_excess: i64 = alpha.interior.iter().map(|c| c.codim - 2).sum();
        mu + self.n - 3 - (self.n - 1) * k - codim_excess
    }

    /// Whether the auxiliary bounded chain attached to `α'` can be nonempty:
    /// either the distinguished point class, or the dimension window
    /// `-2 < dim(α') < n - 1`.
    pub fn chain_exists(&self, alpha: &ConstraintClass) -> bool {
        if alpha.is_point_class() {
            return true;
        }
        let d = self.dim_of(alpha);
        d > -2 && d < self.n - 1
    }
}
