//! Shared domain types: exponent pairs, oriented intervals, extended values,
//! verdicts, and the tolerance configuration used by every numeric routine.

use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum LpqError {
    /// The exponent pair lies outside `1 < p, q < ∞`.
    #[error("exponents out of scope: {0}")]
    OutOfScope(String),
    /// An evaluation point fell outside a function's domain.
    #[error("domain error: {0}")]
    DomainError(String),
    /// A numeric-kind function was asked for a derivative it does not carry.
    #[error("numeric function has no derivative callback")]
    MissingDerivative,
    /// Real powers of multi-term sums are not representable symbolically.
    #[error("cannot raise a multi-term function to the non-integer power {0}")]
    MultiTermPower(f64),
    /// Adaptive refinement stalled before reaching the requested tolerance.
    #[error("tolerance failure: {0}")]
    TolFailure(String),
    /// The supremum-form profile is only defined for p >= q.
    #[error("regime error: {0}")]
    RegimeError(String),
    /// No candidate in the witness search grid verified both integrals.
    #[error("no divergence witness found in the search grid")]
    WitnessNotFound,
    /// The extremal test function has no mass (or infinite mass) up to tau.
    #[error("degenerate test function: {0}")]
    DegenerateTestFunction(String),
    /// Root bracketing failed while inverting the arc length function.
    #[error("bracket failure: {0}")]
    BracketFailure(String),
    /// A report contradicted a structural consequence of the decision rules.
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    /// Invalid problem data (bad interval, non-positive weight, ...).
    #[error("validation error: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, LpqError>;

/// Exponent pair `(p, q)` with the derived conjugates `p' = p/(p-1)`,
/// `q' = q/(q-1)`.
///
/// Only `1 < p, q < ∞` is accepted; the endpoint variants (`p = 1`,
/// essential suprema) are rejected with [`LpqError::OutOfScope`] rather than
/// silently mishandled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents {
    pub p: f64,
    pub q: f64,
    pub p_conj: f64,
    pub q_conj: f64,
}

/// Builds an [`Exponents`] pair, computing both conjugates.
pub fn make_exponents(p: f64, q: f64) -> Result<Exponents> {
    for (name, v) in [("p", p), ("q", q)] {
        if !v.is_finite() || v <= 1.0 {
            return Err(LpqError::OutOfScope(format!(
                "{name} = {v} (need 1 < {name} < inf)"
            )));
        }
    }
    Ok(Exponents {
        p,
        q,
        p_conj: p / (p - 1.0),
        q_conj: q / (q - 1.0),
    })
}

impl Exponents {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        make_exponents(p, q)
    }

    /// True when the supremum form of the Hardy constant applies (p >= q).
    pub fn sup_form(&self) -> bool {
        self.p >= self.q
    }
}

/// Which endpoint of an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

/// Orientation of a Hardy problem on `[lo, hi)`.
///
/// `Forward` integrates heads from `lo` and tails toward `hi`; `Reversed`
/// encodes the constant with swapped endpoint roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Forward,
    Reversed,
}

/// Half-open interval `[lo, hi)` with a finite left endpoint; `hi` may be
/// `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub orientation: Orientation,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, orientation: Orientation) -> Result<Self> {
        if !lo.is_finite() {
            return Err(LpqError::Validation(format!(
                "left endpoint must be finite, got {lo}"
            )));
        }
        if !(lo < hi) {
            return Err(LpqError::Validation(format!(
                "need lo < hi, got [{lo}, {hi})"
            )));
        }
        Ok(Interval { lo, hi, orientation })
    }

    pub fn forward(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, Orientation::Forward)
    }

    pub fn reversed(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, Orientation::Reversed)
    }

    pub fn is_unbounded(&self) -> bool {
        self.hi == f64::INFINITY
    }

    /// Same endpoints, opposite orientation.
    pub fn flipped(&self) -> Self {
        Interval {
            lo: self.lo,
            hi: self.hi,
            orientation: match self.orientation {
                Orientation::Forward => Orientation::Reversed,
                Orientation::Reversed => Orientation::Forward,
            },
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo && t < self.hi
    }
}

/// A nonnegative quantity that is either finite (with a tracked error bound)
/// or has been established to diverge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedValue {
    Finite { value: f64, error_bound: f64 },
    Divergent,
}

impl ExtendedValue {
    pub fn finite(value: f64, error_bound: f64) -> Self {
        ExtendedValue::Finite { value, error_bound }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedValue::Finite { .. })
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, ExtendedValue::Divergent)
    }

    /// Finite value, if any.
    pub fn value(&self) -> Option<f64> {
        match self {
            ExtendedValue::Finite { value, .. } => Some(*value),
            ExtendedValue::Divergent => None,
        }
    }

    pub fn error_bound(&self) -> Option<f64> {
        match self {
            ExtendedValue::Finite { error_bound, .. } => Some(*error_bound),
            ExtendedValue::Divergent => None,
        }
    }
}

/// Three-valued conclusion of a decision rule.
///
/// `Unknown` is returned whenever no cited rule's hypothesis is established,
/// so a verdict never asserts beyond the rule it names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    Trivial,
    Nontrivial,
    Unknown,
}

impl VerdictStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictStatus::Trivial => "trivial",
            VerdictStatus::Nontrivial => "nontrivial",
            VerdictStatus::Unknown => "unknown",
        }
    }
}

/// A classification outcome together with the rule that produced it and the
/// decisive quantities it consumed.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: VerdictStatus,
    /// Identifier of the decision rule applied.
    pub rule: String,
    /// Decisive quantities (Hardy constants, integral finiteness flags).
    pub inputs_echo: Vec<(String, String)>,
}

impl Verdict {
    pub fn new(status: VerdictStatus, rule: &str, inputs_echo: Vec<(String, String)>) -> Self {
        Verdict {
            status,
            rule: rule.to_string(),
            inputs_echo,
        }
    }

    pub fn unknown(rule: &str, inputs_echo: Vec<(String, String)>) -> Self {
        Self::new(VerdictStatus::Unknown, rule, inputs_echo)
    }
}

/// Tolerance configuration shared by all numeric operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative tolerance for convergent integrals and suprema.
    pub rel_tol: f64,
    /// Absolute floor below which values are not resolved further.
    pub abs_tol: f64,
    /// Maximum number of cutoff doublings toward an infinite endpoint.
    pub max_doublings: u32,
    /// Growth factor over the first partial value that certifies divergence.
    pub divergence_growth: f64,
    /// Number of log-spaced sample points for supremum-form profiles.
    pub sup_grid_points: u32,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_doublings: 40,
            divergence_growth: 1e6,
            sup_grid_points: 256,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.divergence_growth > 0.0) {
            return Err(LpqError::Validation(
                "tolerances must be strictly positive".into(),
            ));
        }
        if self.max_doublings < 8 {
            return Err(LpqError::Validation(
                "max_doublings must be at least 8".into(),
            ));
        }
        if self.sup_grid_points == 0 {
            return Err(LpqError::Validation(
                "sup_grid_points must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Target absolute error for a quantity of magnitude `scale`.
    pub fn target(&self, scale: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * scale.abs())
    }
}
