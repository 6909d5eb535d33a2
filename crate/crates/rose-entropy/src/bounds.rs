//! Growth certificates and collar-type length bounds.
//!
//! The certificate evaluates the inequality `sum_i 1/(1+e^{delta d_i}) <=
//! 1/2` on displacement data: any free system of isometries must satisfy it
//! with `delta` its critical exponent, so a violation certifies that no such
//! free action exists at that exponent. Inverting the same inequality for
//! the last length at fixed entropy yields collar bounds: the shorter the
//! shortest loop, the longer the last one must be.
//!
//! Infeasible and vacuous outcomes are values, not errors: prior lengths
//! can legitimately exhaust the growth budget, and the small-length
//! asymptotic can legitimately leave its domain.

use crate::entropy::{logistic_sum, rose_entropy, EntropyError, DEFAULT_RESIDUAL_TOL};
use crate::types::{check_tolerance, CollarReport, GroupSample, RoseLengths, ValidationError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error("nonpositive entropy h = {0}")]
    NonpositiveEntropy(f64),
    #[error("non-finite entropy")]
    NonFiniteEntropy,
    #[error("need at least one prior length")]
    NoPriors,
    #[error("family asymptotic needs at least two prior lengths, got {0}")]
    TooFewPriors(usize),
    #[error("nonpositive prior length at index {0}")]
    NonpositivePrior(usize),
    #[error("non-finite prior length at index {0}")]
    NonFinitePrior(usize),
    #[error("prior lengths must be sorted ascending (violated at index {0})")]
    UnsortedPriors(usize),
}

fn check_entropy(h: f64) -> Result<(), BoundsError> {
    if !h.is_finite() {
        return Err(BoundsError::NonFiniteEntropy);
    }
    if h <= 0.0 {
        return Err(BoundsError::NonpositiveEntropy(h));
    }
    Ok(())
}

fn check_priors(priors: &[f64]) -> Result<(), BoundsError> {
    if priors.is_empty() {
        return Err(BoundsError::NoPriors);
    }
    for (i, &l) in priors.iter().enumerate() {
        if !l.is_finite() {
            return Err(BoundsError::NonFinitePrior(i));
        }
        if l <= 0.0 {
            return Err(BoundsError::NonpositivePrior(i));
        }
    }
    Ok(())
}

fn check_sorted(priors: &[f64]) -> Result<(), BoundsError> {
    match priors.windows(2).position(|w| w[0] > w[1]) {
        Some(i) => Err(BoundsError::UnsortedPriors(i + 1)),
        None => Ok(()),
    }
}

/// Outcome of evaluating the growth certificate on displacement data.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateResult {
    /// `sum_i 1/(1 + e^{delta d_i})`.
    pub sum_value: f64,
    /// Whether the sum stays within `1/2 + tol`.
    pub satisfied: bool,
    /// Smallest critical exponent consistent with these displacements: the
    /// entropy of the rose built on them.
    pub delta_lower_bound: f64,
    /// `log(2k-1)/delta`: some displacement must reach this. `None` when
    /// `delta = 0`.
    pub max_displacement_bound: Option<f64>,
}

/// Evaluates the certificate `sum_i 1/(1+e^{delta d_i}) <= 1/2` on a sample.
pub fn certify(sample: &GroupSample, tol: f64) -> Result<CertificateResult, EntropyError> {
    check_tolerance(tol)?;
    let lengths = RoseLengths::new(sample.displacements().to_vec())?;
    let sum_value = logistic_sum(&lengths, sample.delta());
    let delta_lower_bound = rose_entropy(&lengths, DEFAULT_RESIDUAL_TOL)?.h;
    let max_displacement_bound = if sample.delta() > 0.0 {
        Some(((2 * sample.k() - 1) as f64).ln() / sample.delta())
    } else {
        None
    };
    Ok(CertificateResult {
        sum_value,
        satisfied: sum_value <= 0.5 + tol,
        delta_lower_bound,
        max_displacement_bound,
    })
}

/// Minimal admissible last length at entropy `h`, given the other lengths.
///
/// Writes the budget `r = 1/2 - sum_i 1/(1+e^{h l_i})`; if `r <= 0` the
/// priors alone already violate the inequality and the result is `None`
/// (infeasible). Otherwise the unique equality point is
/// `(1/h) log(1/r - 1)`, always positive since `r < 1/2` strictly.
///
/// Each term is folded in as `1/2 - 1/(1+e^t) = tanh(t/2)/2`, which keeps
/// full relative accuracy for priors as small as `1e-8` where the direct
/// subtraction would cancel.
pub fn exact_min_last_length(h: f64, priors: &[f64]) -> Result<Option<f64>, BoundsError> {
    check_entropy(h)?;
    check_priors(priors)?;
    let half_defects: f64 = priors.iter().map(|&l| 0.5 * (0.5 * h * l).tanh()).sum();
    let r = half_defects - 0.5 * (priors.len() as f64 - 1.0);
    if r <= 0.0 {
        return Ok(None);
    }
    Ok(Some((1.0 / r - 1.0).ln() / h))
}

/// Small-length asymptotic collar bound for a pair of loops:
/// `(1/h) log(4/(h l1))`.
///
/// `vacuous` marks `h l1 >= 4`, where the value is nonpositive and carries
/// no information; it is still computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairAsymptotic {
    pub value: f64,
    pub vacuous: bool,
}

pub fn collar_pair_asymptotic(h: f64, l1: f64) -> Result<PairAsymptotic, BoundsError> {
    check_entropy(h)?;
    check_priors(&[l1])?;
    let value = (4.0 / (h * l1)).ln() / h;
    Ok(PairAsymptotic {
        value,
        vacuous: h * l1 >= 4.0,
    })
}

/// Family version of the asymptotic bound for `k - 1 >= 2` sorted priors:
/// `(-1/h) log(h l1/4 - sum_{i>=2} e^{-h l_i})`.
///
/// Returns `None` (undefined) exactly when the log argument is nonpositive.
pub fn collar_family_asymptotic(h: f64, priors: &[f64]) -> Result<Option<f64>, BoundsError> {
    check_entropy(h)?;
    check_priors(priors)?;
    if priors.len() < 2 {
        return Err(BoundsError::TooFewPriors(priors.len()));
    }
    check_sorted(priors)?;
    let tail: f64 = priors[1..].iter().map(|&l| (-h * l).exp()).sum();
    let t = h * priors[0] / 4.0 - tail;
    if t <= 0.0 {
        return Ok(None);
    }
    Ok(Some(-t.ln() / h))
}

/// Alternative collar bound `(1/h) log(1/(h l1))` for a single prior;
/// weaker than the pair asymptotic by exactly `log(4)/h`.
pub fn collar_comparison_bound(h: f64, l1: f64) -> Result<f64, BoundsError> {
    check_entropy(h)?;
    check_priors(&[l1])?;
    Ok((1.0 / (h * l1)).ln() / h)
}

/// The classical sharp collar inequality on a hyperbolic surface, evaluated
/// directly: `sinh(l1/2) sinh(l2/2) > 1`, plus its small-length expansion
/// bound `2 log(4/l1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicCollar {
    pub holds: bool,
    pub product: f64,
    pub expansion_bound: f64,
}

pub fn hyperbolic_collar_check(l1: f64, l2: f64) -> Result<HyperbolicCollar, BoundsError> {
    check_priors(&[l1, l2])?;
    let product = (l1 / 2.0).sinh() * (l2 / 2.0).sinh();
    Ok(HyperbolicCollar {
        holds: product > 1.0,
        product,
        expansion_bound: 2.0 * (4.0 / l1).ln(),
    })
}

/// Assembles the full collar picture for sorted priors at entropy `h`:
/// exact inversion, the applicable asymptotic, the comparison bound (single
/// prior only), margins, and the plug-back residual of the exact bound.
pub fn collar_report(h: f64, priors: &[f64]) -> Result<CollarReport, BoundsError> {
    check_entropy(h)?;
    check_priors(priors)?;
    check_sorted(priors)?;
    let exact_bound = exact_min_last_length(h, priors)?;

    let (asymptotic_bound, asymptotic_vacuous, comparison_bound) = if priors.len() == 1 {
        let pair = collar_pair_asymptotic(h, priors[0])?;
        (
            Some(pair.value),
            pair.vacuous,
            Some(collar_comparison_bound(h, priors[0])?),
        )
    } else {
        (collar_family_asymptotic(h, priors)?, false, None)
    };

    let margin = match (exact_bound, asymptotic_bound) {
        (Some(e), Some(a)) => Some(e - a),
        _ => None,
    };
    let plugback_residual = exact_bound.map(|lk| {
        let mut all = priors.to_vec();
        all.push(lk);
        let lengths = RoseLengths::new(all).expect("positive lengths");
        logistic_sum(&lengths, h) - 0.5
    });

    Ok(CollarReport {
        h,
        prior_lengths: priors.to_vec(),
        exact_bound,
        asymptotic_bound,
        asymptotic_vacuous,
        comparison_bound,
        margin,
        plugback_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::validate_lengths;
    use proptest::prelude::*;

    // Frozen extended-precision oracle values.
    const SUM_UNIT_PAIR_AT_1: f64 = 0.537882842739990241497681516356327451269710719670;
    const MIN_LAST_1_12: f64 = 2.071925018830691619105975515017673000948665680057;
    const SINH_PRODUCT_001_12: f64 = 1.008569989214094304708769100976086028290987230107;

    const LOG3: f64 = 1.098612288668109691395245236922525704647490557823;

    #[test]
    fn certify_equality_configuration() {
        let sample = GroupSample::new(vec![LOG3, LOG3], 1.0).unwrap();
        let cert = certify(&sample, 1e-12).unwrap();
        assert!((cert.sum_value - 0.5).abs() < 1e-15);
        assert!(cert.satisfied);
        assert!((cert.delta_lower_bound - 1.0).abs() < 1e-10);
        assert!((cert.max_displacement_bound.unwrap() - LOG3).abs() < 1e-12);
    }

    #[test]
    fn certify_zero_delta_gives_half_k() {
        let sample = GroupSample::new(vec![0.3, 4.0], 0.0).unwrap();
        let cert = certify(&sample, 1e-12).unwrap();
        assert_eq!(cert.sum_value, 1.0);
        assert!(!cert.satisfied);
        assert_eq!(cert.max_displacement_bound, None);
    }

    #[test]
    fn certify_unit_pair_matches_extended_precision() {
        let sample = GroupSample::new(vec![1.0, 1.0], 1.0).unwrap();
        let cert = certify(&sample, 1e-12).unwrap();
        assert!((cert.sum_value - SUM_UNIT_PAIR_AT_1).abs() < 1e-15);
        assert!(!cert.satisfied);
        assert!((cert.delta_lower_bound - LOG3).abs() < 1e-10);
    }

    #[test]
    fn min_last_length_symmetric_point() {
        let v = exact_min_last_length(1.0, &[LOG3]).unwrap().unwrap();
        assert!((v - LOG3).abs() < 1e-12);
    }

    #[test]
    fn min_last_length_infeasible_when_priors_exhaust_budget() {
        assert_eq!(exact_min_last_length(1.0, &[0.01, 0.01]).unwrap(), None);
    }

    #[test]
    fn min_last_length_plugs_back_to_half() {
        let v = exact_min_last_length(1.0, &[1.0, 2.0]).unwrap().unwrap();
        assert!((v - MIN_LAST_1_12).abs() < 1e-12);
        let lengths = validate_lengths(&[1.0, 2.0, v]).unwrap();
        assert!((logistic_sum(&lengths, 1.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn min_last_length_validates_inputs() {
        assert!(matches!(
            exact_min_last_length(0.0, &[1.0]),
            Err(BoundsError::NonpositiveEntropy(_))
        ));
        assert!(matches!(
            exact_min_last_length(1.0, &[]),
            Err(BoundsError::NoPriors)
        ));
        assert!(matches!(
            exact_min_last_length(1.0, &[1.0, -2.0]),
            Err(BoundsError::NonpositivePrior(1))
        ));
    }

    #[test]
    fn pair_asymptotic_log100() {
        let b = collar_pair_asymptotic(1.0, 0.04).unwrap();
        assert!((b.value - 100.0_f64.ln()).abs() < 1e-12);
        assert!(!b.vacuous);
    }

    #[test]
    fn pair_asymptotic_direct_evaluation() {
        // h = 2, l1 = 2 e^{-4}: h l1 = 4 e^{-4}, so the bound is
        // (1/2) log(e^4) = 2.
        let b = collar_pair_asymptotic(2.0, 2.0 * (-4.0_f64).exp()).unwrap();
        assert!((b.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn pair_asymptotic_flags_vacuous_region() {
        let b = collar_pair_asymptotic(1.0, 5.0).unwrap();
        assert!(b.vacuous);
        assert!(b.value < 0.0);
        let edge = collar_pair_asymptotic(2.0, 2.0).unwrap();
        assert!(edge.vacuous);
        assert!(edge.value <= 0.0);
    }

    #[test]
    fn pair_asymptotic_gap_shrinks_monotonically() {
        // The exact inversion sits below the asymptotic curve by ~l1/4;
        // the gap closes monotonically as l1 drops.
        for h in [0.5, 1.0, 2.0] {
            let mut prev = f64::INFINITY;
            for j in 1..=8 {
                let l1 = 10.0_f64.powi(-j);
                let exact = exact_min_last_length(h, &[l1]).unwrap().unwrap();
                let asym = collar_pair_asymptotic(h, l1).unwrap().value;
                let gap = asym - exact;
                assert!(gap > 0.0, "h={h} l1={l1} gap={gap}");
                assert!(gap < prev, "h={h} l1={l1}");
                prev = gap;
            }
            assert!(prev < 1e-7);
        }
    }

    #[test]
    fn family_asymptotic_negligible_tail() {
        let v = collar_family_asymptotic(1.0, &[0.4, 1e9]).unwrap().unwrap();
        assert!((v - 10.0_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn family_asymptotic_undefined_when_argument_nonpositive() {
        let v = collar_family_asymptotic(1.0, &[0.4, 2.0_f64.ln()]).unwrap();
        assert_eq!(v, None);
    }

    #[test]
    fn family_asymptotic_rejects_unsorted_or_short() {
        assert!(matches!(
            collar_family_asymptotic(1.0, &[2.0, 1.0]),
            Err(BoundsError::UnsortedPriors(1))
        ));
        assert!(matches!(
            collar_family_asymptotic(1.0, &[1.0]),
            Err(BoundsError::TooFewPriors(1))
        ));
    }

    #[test]
    fn family_asymptotic_tracks_exact_inversion_in_scaling_regime() {
        // Tail priors chosen so e^{-h l_i} scales with l1; then the family
        // formula and the exact inversion converge as l1 drops.
        let h = 1.0;
        let mut prev = f64::INFINITY;
        for j in 2..=7 {
            let l1 = 10.0_f64.powi(-j);
            let l2 = -(l1 * h / 16.0).ln() / h;
            let l3 = -(l1 * h / 32.0).ln() / h;
            let priors = [l1, l2, l3];
            let exact = exact_min_last_length(h, &priors).unwrap().unwrap();
            let asym = collar_family_asymptotic(h, &priors).unwrap().unwrap();
            let gap = (exact - asym).abs();
            assert!(gap < prev, "l1={l1} gap={gap} prev={prev}");
            prev = gap;
        }
        assert!(prev < 1e-5);
    }

    #[test]
    fn family_asymptotic_wall_matches_sign_of_argument() {
        // With fixed tail priors [5, 7], the formula leaves its domain as
        // l1 crosses 4 (e^{-5} + e^{-7}) / h from above.
        let h = 1.0;
        let wall = 4.0 * ((-5.0_f64).exp() + (-7.0_f64).exp()) / h;
        let defined = collar_family_asymptotic(h, &[wall * 1.1, 5.0, 7.0]).unwrap();
        assert!(defined.is_some());
        let undefined = collar_family_asymptotic(h, &[wall * 0.9, 5.0, 7.0]).unwrap();
        assert_eq!(undefined, None);
    }

    #[test]
    fn comparison_bound_values() {
        assert!((collar_comparison_bound(1.0, 0.01).unwrap() - 100.0_f64.ln()).abs() < 1e-12);
        assert!((collar_comparison_bound(0.5, 0.2).unwrap() - 2.0 * 10.0_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn pair_asymptotic_beats_comparison_by_log4_over_h() {
        for (h, l1) in [(1.0, 0.3), (0.5, 1.9), (2.0, 0.07), (1.3, 1e-6)] {
            let a = collar_pair_asymptotic(h, l1).unwrap().value;
            let b = collar_comparison_bound(h, l1).unwrap();
            let expected = 4.0_f64.ln() / h;
            assert!((a - b - expected).abs() <= 1e-12 * (1.0 + expected));
        }
    }

    #[test]
    fn hyperbolic_collar_boundary_is_not_strict() {
        let l = 2.0 * 1.0_f64.asinh();
        let c = hyperbolic_collar_check(l, l).unwrap();
        assert!((c.product - 1.0).abs() < 1e-15);
        assert!(!c.holds);
    }

    #[test]
    fn hyperbolic_collar_matches_extended_precision() {
        let c = hyperbolic_collar_check(0.01, 12.0).unwrap();
        assert!(c.holds);
        assert!((c.product - SINH_PRODUCT_001_12).abs() < 1e-14);
        assert!((c.expansion_bound - 2.0 * 400.0_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_collar_expansion_consistency() {
        // Along l2 = 2 log(4/l1) the product tends to 1 from below.
        let mut prev_defect = f64::INFINITY;
        for j in 1..=6 {
            let l1 = 10.0_f64.powi(-j);
            let l2 = 2.0 * (4.0 / l1).ln();
            let c = hyperbolic_collar_check(l1, l2).unwrap();
            let defect = (1.0 - c.product).abs();
            assert!(defect < prev_defect);
            prev_defect = defect;
        }
        assert!(prev_defect < 1e-10);
    }

    #[test]
    fn collar_report_single_prior() {
        let r = collar_report(1.0, &[1.0]).unwrap();
        assert!(r.exact_bound.is_some());
        assert!(r.asymptotic_bound.is_some());
        assert!(r.comparison_bound.is_some());
        assert!(r.margin.is_some());
        assert!(r.plugback_residual.unwrap().abs() < 1e-12);
    }

    #[test]
    fn collar_report_infeasible_priors() {
        let r = collar_report(1.0, &[0.01, 0.01]).unwrap();
        assert_eq!(r.exact_bound, None);
        assert_eq!(r.margin, None);
        assert_eq!(r.plugback_residual, None);
    }

    proptest! {
        // Certificate duality: at delta = entropy the sum sits at 1/2;
        // larger delta drops below, smaller delta rises above.
        #[test]
        fn certificate_duality(raw in prop::collection::vec(0.2f64..5.0, 2..=6), shift in 0.05f64..0.5) {
            let lengths = validate_lengths(&raw).unwrap();
            let h = rose_entropy(&lengths, 1e-12).unwrap().h;
            let at = certify(&GroupSample::new(raw.clone(), h).unwrap(), 1e-12).unwrap();
            prop_assert!((at.sum_value - 0.5).abs() <= 1e-12);
            prop_assert!(at.satisfied);
            let above = certify(&GroupSample::new(raw.clone(), h * (1.0 + shift)).unwrap(), 1e-12).unwrap();
            prop_assert!(above.sum_value < 0.5);
            let below = certify(&GroupSample::new(raw.clone(), h * (1.0 - shift)).unwrap(), 1e-12).unwrap();
            prop_assert!(below.sum_value > 0.5);
        }

        // Feasible exact bounds always plug back to the equality point.
        #[test]
        fn plugback_identity(h in 0.2f64..3.0, priors in prop::collection::vec(0.5f64..5.0, 1..=6)) {
            if let Some(lk) = exact_min_last_length(h, &priors).unwrap() {
                prop_assert!(lk > 0.0);
                let mut all = priors.clone();
                all.push(lk);
                let lengths = validate_lengths(&all).unwrap();
                prop_assert!((logistic_sum(&lengths, h) - 0.5).abs() < 1e-12);
            }
        }

        // The pair case has a closed form; it must match the generic
        // inversion to full precision.
        #[test]
        fn pair_closed_form_matches_generic(h in 0.2f64..3.0, l1 in 0.05f64..8.0) {
            let generic = exact_min_last_length(h, &[l1]).unwrap().unwrap();
            let e = (h * l1).exp();
            let closed = ((e + 3.0) / (e - 1.0)).ln() / h;
            prop_assert!((generic - closed).abs() <= 1e-12 * (1.0 + closed.abs()));
        }

        // Vacuity detection: the family formula is undefined exactly when
        // its log argument is nonpositive.
        #[test]
        fn family_vacuity_matches_argument_sign(h in 0.2f64..3.0, l1 in 0.01f64..2.0, tail in prop::collection::vec(0.5f64..10.0, 1..=4)) {
            let mut priors = vec![l1];
            let mut sorted_tail = tail.clone();
            sorted_tail.sort_by(|a, b| a.partial_cmp(b).unwrap());
            priors.extend(sorted_tail.iter().map(|t| l1 + t));
            let t = h * priors[0] / 4.0 - priors[1..].iter().map(|&l| (-h * l).exp()).sum::<f64>();
            let v = collar_family_asymptotic(h, &priors).unwrap();
            prop_assert_eq!(v.is_none(), t <= 0.0);
        }
    }
}
