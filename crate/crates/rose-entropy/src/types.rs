//! Shared domain types: validated rose lengths, solver outputs, displacement
//! samples, census curves, and collar reports.
//!
//! Everything here is plain immutable value data. Construction validates, so
//! downstream code never re-checks positivity or finiteness.

use num_bigint::BigUint;
use thiserror::Error;

/// Input validation failures. Messages name the offending index so batch
/// callers can point at the exact field.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("empty length list")]
    EmptyLengths,
    #[error("nonpositive length at index {0}")]
    NonpositiveLength(usize),
    #[error("non-finite length at index {0}")]
    NonFiniteLength(usize),
    #[error("empty displacement list")]
    EmptyDisplacements,
    #[error("nonpositive displacement at index {0}")]
    NonpositiveDisplacement(usize),
    #[error("non-finite displacement at index {0}")]
    NonFiniteDisplacement(usize),
    #[error("negative critical exponent")]
    NegativeDelta,
    #[error("non-finite critical exponent")]
    NonFiniteDelta,
    #[error("nonpositive tolerance")]
    NonpositiveTolerance,
}

pub(crate) fn check_tolerance(tol: f64) -> Result<(), ValidationError> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(ValidationError::NonpositiveTolerance)
    }
}

/// Ordered loop lengths `a_1 .. a_k` of a rose with `k` petals.
///
/// Every length is strictly positive and finite; duplicates are allowed and
/// keep their multiplicity. The rank `k` is the list size.
#[derive(Debug, Clone, PartialEq)]
pub struct RoseLengths {
    lengths: Vec<f64>,
}

impl RoseLengths {
    /// Validates and wraps a raw length list, preserving order.
    pub fn new(raw: Vec<f64>) -> Result<Self, ValidationError> {
        if raw.is_empty() {
            return Err(ValidationError::EmptyLengths);
        }
        for (i, &a) in raw.iter().enumerate() {
            if !a.is_finite() {
                return Err(ValidationError::NonFiniteLength(i));
            }
            if a <= 0.0 {
                return Err(ValidationError::NonpositiveLength(i));
            }
        }
        Ok(Self { lengths: raw })
    }

    /// Rank of the free group (number of petals).
    pub fn k(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn min(&self) -> f64 {
        self.lengths.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.lengths.iter().copied().fold(0.0, f64::max)
    }

    /// Same lengths scaled by `c > 0` (entropy scales by `1/c`).
    pub fn scaled(&self, c: f64) -> Result<Self, ValidationError> {
        Self::new(self.lengths.iter().map(|a| a * c).collect())
    }
}

/// Validates a raw list of loop lengths. Idempotent: re-validating the
/// stored lengths returns the same values.
pub fn validate_lengths(raw: &[f64]) -> Result<RoseLengths, ValidationError> {
    RoseLengths::new(raw.to_vec())
}

/// Which route produced an [`EntropySolution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMethod {
    /// Bracketed root of the defining equation `sum 1/(1+e^{h a_i}) = 1/2`.
    ClosedFormRoot,
    /// Root of `rho(transfer matrix) = 1` via power iteration.
    Spectral,
    /// Rank 1: the orbit grows linearly, so `h = 0` without solving.
    Degenerate,
}

impl SolverMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverMethod::ClosedFormRoot => "closed-form-root",
            SolverMethod::Spectral => "spectral",
            SolverMethod::Degenerate => "degenerate",
        }
    }
}

impl std::fmt::Display for SolverMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A computed volume entropy with solver diagnostics.
///
/// `residual` is always the value of `sum 1/(1+e^{h a_i}) - 1/2` at the
/// returned `h`, regardless of which solver produced it, so the two routes
/// are directly comparable. The bracket is the interval actually handed to
/// the root finder and always contains `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropySolution {
    pub h: f64,
    pub residual: f64,
    pub bracket_low: f64,
    pub bracket_high: f64,
    pub iterations: usize,
    pub method: SolverMethod,
}

/// Displacement data for a group acting freely: the distances
/// `d(x, g_i x)` for each free generator, plus a critical exponent `delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSample {
    displacements: Vec<f64>,
    delta: f64,
}

impl GroupSample {
    pub fn new(displacements: Vec<f64>, delta: f64) -> Result<Self, ValidationError> {
        if displacements.is_empty() {
            return Err(ValidationError::EmptyDisplacements);
        }
        for (i, &d) in displacements.iter().enumerate() {
            if !d.is_finite() {
                return Err(ValidationError::NonFiniteDisplacement(i));
            }
            if d <= 0.0 {
                return Err(ValidationError::NonpositiveDisplacement(i));
            }
        }
        if !delta.is_finite() {
            return Err(ValidationError::NonFiniteDelta);
        }
        if delta < 0.0 {
            return Err(ValidationError::NegativeDelta);
        }
        Ok(Self {
            displacements,
            delta,
        })
    }

    pub fn displacements(&self) -> &[f64] {
        &self.displacements
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn k(&self) -> usize {
        self.displacements.len()
    }
}

/// Exact orbit-ball counts `N(R)` sampled at increasing rational radii.
///
/// Radii are stored as integers over the declared `scale` denominator so the
/// curve stays exact; counts are arbitrary precision.
#[derive(Debug, Clone, PartialEq)]
pub struct CensusCurve {
    scale: u64,
    radii_scaled: Vec<u64>,
    counts: Vec<BigUint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("curve needs at least one sample")]
    Empty,
    #[error("radii must be strictly increasing")]
    RadiiNotIncreasing,
    #[error("counts must be nondecreasing")]
    CountsDecreasing,
    #[error("first count must be at least 1 (the identity element)")]
    MissingIdentity,
    #[error("zero scale denominator")]
    ZeroScale,
}

impl CensusCurve {
    pub fn new(
        scale: u64,
        radii_scaled: Vec<u64>,
        counts: Vec<BigUint>,
    ) -> Result<Self, CurveError> {
        if scale == 0 {
            return Err(CurveError::ZeroScale);
        }
        if radii_scaled.is_empty() || radii_scaled.len() != counts.len() {
            return Err(CurveError::Empty);
        }
        if radii_scaled.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CurveError::RadiiNotIncreasing);
        }
        if counts.windows(2).any(|w| w[0] > w[1]) {
            return Err(CurveError::CountsDecreasing);
        }
        if counts[0] < BigUint::from(1u32) {
            return Err(CurveError::MissingIdentity);
        }
        Ok(Self {
            scale,
            radii_scaled,
            counts,
        })
    }

    pub fn len(&self) -> usize {
        self.radii_scaled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii_scaled.is_empty()
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    /// Sampled radii as scaled integers (numerators over `scale`).
    pub fn radii_scaled(&self) -> &[u64] {
        &self.radii_scaled
    }

    /// Radius of sample `i` in length units.
    pub fn radius(&self, i: usize) -> f64 {
        self.radii_scaled[i] as f64 / self.scale as f64
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }
}

/// Collar-type bounds on the last loop length at fixed entropy `h`, given
/// the `k-1` shorter lengths.
///
/// `exact_bound` is `None` when the prior lengths alone already exhaust the
/// growth budget (no admissible last length exists); `asymptotic_bound` is
/// `None` when the small-length formula's log argument is nonpositive. Both
/// are informative outcomes, not errors.
#[derive(Debug, Clone, PartialEq)]
pub struct CollarReport {
    pub h: f64,
    pub prior_lengths: Vec<f64>,
    /// Minimal admissible last length; `None` means infeasible.
    pub exact_bound: Option<f64>,
    /// Small-length asymptotic bound; `None` means undefined (families only).
    pub asymptotic_bound: Option<f64>,
    /// True when the pair asymptotic is nonpositive (`h * l1 >= 4`).
    pub asymptotic_vacuous: bool,
    /// Alternative `(1/h) log(1/(h l1))` bound, defined for a single prior.
    pub comparison_bound: Option<f64>,
    /// `exact_bound - asymptotic_bound` when both are defined.
    pub margin: Option<f64>,
    /// Defect of the defining sum from 1/2 after substituting `exact_bound`.
    pub plugback_residual: Option<f64>,
}
