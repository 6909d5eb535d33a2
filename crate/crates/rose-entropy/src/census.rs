//! Exact orbit-ball census in the universal covering tree.
//!
//! Vertices of the cover are reduced words in the `k` generators; a word's
//! distance from the basepoint is its weighted length (each letter costs its
//! loop's length). Counting is done by dynamic programming over integer
//! radii with one state per possible last letter, in arbitrary precision, so
//! the curve is an exact, solver-independent oracle for the growth rate.
//!
//! Lengths must be rational: callers declare a scale denominator and the
//! counts live on the integer grid `t / scale`. Counts only change at grid
//! points, so flooring a query radius onto the grid is exact, not an
//! approximation.

use crate::types::{CensusCurve, CurveError};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Default cap on the number of integer radius layers a sweep may use.
pub const DEFAULT_TABLE_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CensusError {
    #[error("empty length list")]
    EmptyLengths,
    #[error("zero integer length at index {0}")]
    ZeroLength(usize),
    #[error("zero scale denominator")]
    ZeroScale,
    #[error("length {value} at index {index} rounds to zero at scale {scale}; use a finer scale")]
    RoundsToZero {
        index: usize,
        value: f64,
        scale: u64,
    },
    #[error("negative radius {0}")]
    NegativeRadius(f64),
    #[error("non-finite radius")]
    NonFiniteRadius,
    #[error("radius sweep needs {needed} layers, exceeding the table cap {cap}")]
    TableTooLarge { needed: u64, cap: u64 },
    #[error("step {step} is not representable as a positive multiple of 1/{scale}")]
    BadStep { step: f64, scale: u64 },
    #[error("step exceeds the maximum radius")]
    StepBeyondRadius,
    #[error("window endpoint {0} is not a sampled radius")]
    WindowNotSampled(f64),
    #[error("window is empty: need r2 > r1")]
    EmptyWindow,
    #[error("window has a zero count")]
    ZeroCount,
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Loop lengths in exact rational form: positive integers over a common
/// `scale` denominator, stored gcd-reduced so equal metrics compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledLengths {
    integer_lengths: Vec<u64>,
    scale: u64,
}

impl ScaledLengths {
    pub fn new(integer_lengths: Vec<u64>, scale: u64) -> Result<Self, CensusError> {
        if integer_lengths.is_empty() {
            return Err(CensusError::EmptyLengths);
        }
        if scale == 0 {
            return Err(CensusError::ZeroScale);
        }
        if let Some(i) = integer_lengths.iter().position(|&a| a == 0) {
            return Err(CensusError::ZeroLength(i));
        }
        let g = integer_lengths
            .iter()
            .fold(scale, |acc, &a| acc.gcd(&a));
        Ok(Self {
            integer_lengths: integer_lengths.iter().map(|a| a / g).collect(),
            scale: scale / g,
        })
    }

    /// Rationalizes decimal lengths at the declared scale by rounding each
    /// to the nearest multiple of `1/scale`. Lengths below `1/(2 scale)`
    /// are rejected rather than silently dropped to zero.
    pub fn from_decimal(lengths: &[f64], scale: u64) -> Result<Self, CensusError> {
        if scale == 0 {
            return Err(CensusError::ZeroScale);
        }
        let mut integer_lengths = Vec::with_capacity(lengths.len());
        for (i, &a) in lengths.iter().enumerate() {
            let rounded = (a * scale as f64).round();
            if !rounded.is_finite() || rounded < 1.0 {
                return Err(CensusError::RoundsToZero {
                    index: i,
                    value: a,
                    scale,
                });
            }
            integer_lengths.push(rounded as u64);
        }
        Self::new(integer_lengths, scale)
    }

    pub fn k(&self) -> usize {
        self.integer_lengths.len()
    }

    pub fn integer_lengths(&self) -> &[u64] {
        &self.integer_lengths
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    /// The exact lengths represented, as decimals (`integer / scale`).
    pub fn realized_lengths(&self) -> Vec<f64> {
        self.integer_lengths
            .iter()
            .map(|&a| a as f64 / self.scale as f64)
            .collect()
    }

    fn max_integer_length(&self) -> u64 {
        *self.integer_lengths.iter().max().expect("nonempty")
    }

    fn to_scaled_radius(&self, radius: f64) -> Result<u64, CensusError> {
        if !radius.is_finite() {
            return Err(CensusError::NonFiniteRadius);
        }
        if radius < 0.0 {
            return Err(CensusError::NegativeRadius(radius));
        }
        // Counts jump only at grid points, so flooring is exact; the nudge
        // absorbs float noise in radii intended to hit a grid point.
        Ok((radius * self.scale as f64 + 1e-9).floor() as u64)
    }
}

/// One DP sweep over integer radii `1..=t_max`.
///
/// `layer[t][letter]` counts reduced words of weighted length exactly `t`
/// ending in `letter`; a word ending in a letter is never extended by that
/// letter's inverse. Only the last `max(a_i)` layers are retained. `visit`
/// sees each radius with the running cumulative ball count.
fn sweep<F: FnMut(u64, &BigUint)>(
    lengths: &ScaledLengths,
    t_max: u64,
    cap: u64,
    mut visit: F,
) -> Result<(), CensusError> {
    if t_max > cap {
        return Err(CensusError::TableTooLarge {
            needed: t_max,
            cap,
        });
    }
    let k = lengths.k();
    let letters = 2 * k;
    let window = lengths.max_integer_length() as usize;
    // Ring buffer of the last `window` layers; layer_sums[s] alongside.
    let mut layers: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(); letters]; window];
    let mut layer_sums: Vec<BigUint> = vec![BigUint::zero(); window];
    let mut cumulative = BigUint::one(); // the empty word at t = 0
    visit(0, &cumulative);

    for t in 1..=t_max {
        let slot = (t % window as u64) as usize;
        let mut fresh = vec![BigUint::zero(); letters];
        let mut fresh_sum = BigUint::zero();
        for (letter, count) in fresh.iter_mut().enumerate() {
            let weight = lengths.integer_lengths()[letter / 2];
            if t < weight {
                continue;
            }
            let mut c = if t == weight {
                BigUint::one() // the empty word extended by this letter
            } else {
                BigUint::zero()
            };
            if t > weight {
                let prev_slot = ((t - weight) % window as u64) as usize;
                // All predecessors except those ending in our inverse.
                c += &layer_sums[prev_slot] - &layers[prev_slot][letter ^ 1];
            }
            fresh_sum += &c;
            *count = c;
        }
        cumulative += &fresh_sum;
        layers[slot] = fresh;
        layer_sums[slot] = fresh_sum;
        visit(t, &cumulative);
    }
    Ok(())
}

/// Exact ball count at a scaled integer radius: the number of reduced words
/// (including the empty one) of weighted length at most `t / scale`.
pub fn exact_ball_count_scaled(
    lengths: &ScaledLengths,
    t: u64,
    cap: u64,
) -> Result<BigUint, CensusError> {
    let mut result = BigUint::one();
    sweep(lengths, t, cap, |radius, total| {
        if radius == t {
            result = total.clone();
        }
    })?;
    Ok(result)
}

/// Exact ball count at a radius in length units (floored onto the grid).
pub fn exact_ball_count(lengths: &ScaledLengths, radius: f64) -> Result<BigUint, CensusError> {
    let t = lengths.to_scaled_radius(radius)?;
    exact_ball_count_scaled(lengths, t, DEFAULT_TABLE_CAP)
}

/// As [`census_curve`], with radii given as scaled integers and an explicit
/// table cap.
pub fn census_curve_scaled(
    lengths: &ScaledLengths,
    t_max: u64,
    step: u64,
    cap: u64,
) -> Result<CensusCurve, CensusError> {
    if step == 0 {
        return Err(CensusError::BadStep {
            step: 0.0,
            scale: lengths.scale(),
        });
    }
    if step > t_max {
        return Err(CensusError::StepBeyondRadius);
    }
    let mut radii = Vec::new();
    let mut counts = Vec::new();
    sweep(lengths, t_max, cap, |t, total| {
        if t > 0 && t % step == 0 {
            radii.push(t);
            counts.push(total.clone());
        }
    })?;
    Ok(CensusCurve::new(lengths.scale(), radii, counts)?)
}

/// Samples `N(R)` at `R = step, 2 step, ...` up to `r_max`, reusing one DP
/// pass. `step` must be a positive multiple of `1/scale`.
pub fn census_curve(
    lengths: &ScaledLengths,
    r_max: f64,
    step: f64,
) -> Result<CensusCurve, CensusError> {
    let t_max = lengths.to_scaled_radius(r_max)?;
    let step_scaled = step * lengths.scale() as f64;
    let rounded = step_scaled.round();
    if !rounded.is_finite() || rounded < 1.0 || (step_scaled - rounded).abs() > 1e-6 {
        return Err(CensusError::BadStep {
            step,
            scale: lengths.scale(),
        });
    }
    census_curve_scaled(lengths, t_max, rounded as u64, DEFAULT_TABLE_CAP)
}

/// Natural log of an arbitrary-precision count, via its top 53 bits.
fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 53 {
        return n.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 53;
    let top = (n >> shift).to_f64().expect("53 bits fit");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Growth-rate estimate over a window of two sampled radii:
/// `(log N(r2) - log N(r1)) / (r2 - r1)`.
///
/// Converges to the volume entropy as the window slides outward.
pub fn growth_rate_estimate(curve: &CensusCurve, window: (f64, f64)) -> Result<f64, CensusError> {
    let (r1, r2) = window;
    if !r1.is_finite() || !r2.is_finite() || r2 <= r1 {
        return Err(CensusError::EmptyWindow);
    }
    let locate = |r: f64| -> Result<usize, CensusError> {
        let target = r * curve.scale() as f64;
        curve
            .radii_scaled()
            .iter()
            .position(|&t| (t as f64 - target).abs() < 1e-6)
            .ok_or(CensusError::WindowNotSampled(r))
    };
    let i1 = locate(r1)?;
    let i2 = locate(r2)?;
    let n1 = &curve.counts()[i1];
    let n2 = &curve.counts()[i2];
    if n1.is_zero() || n2.is_zero() {
        return Err(CensusError::ZeroCount);
    }
    Ok((ln_big(n2) - ln_big(n1)) / (curve.radius(i2) - curve.radius(i1)))
}

/// Closed form for unit lengths and rank `k`:
/// `N(R) = 1 + sum_{t=1..floor(R)} 2k (2k-1)^{t-1}`.
pub fn unit_ball_closed_form(k: usize, radius: u64) -> BigUint {
    let mut n = BigUint::one();
    let mut shell = BigUint::from(2 * k); // 2k (2k-1)^{t-1} at t = 1
    for _ in 1..=radius {
        n += &shell;
        shell *= 2 * k - 1;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scaled(lengths: &[u64], scale: u64) -> ScaledLengths {
        ScaledLengths::new(lengths.to_vec(), scale).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    /// Independent oracle: depth-first enumeration of reduced words of
    /// weighted length <= t_max. Exponential, for tiny radii only.
    fn enumerate_ball(integer_lengths: &[u64], t_max: u64) -> BigUint {
        fn dfs(lengths: &[u64], last: Option<usize>, budget: u64, total: &mut BigUint) {
            let letters = 2 * lengths.len();
            for letter in 0..letters {
                if last == Some(letter ^ 1) {
                    continue;
                }
                let w = lengths[letter / 2];
                if w > budget {
                    continue;
                }
                *total += 1u32;
                dfs(lengths, Some(letter), budget - w, total);
            }
        }
        let mut total = BigUint::one();
        dfs(integer_lengths, None, t_max, &mut total);
        total
    }

    #[test]
    fn gcd_reduction_is_canonical() {
        assert_eq!(scaled(&[2, 4], 2), scaled(&[1, 2], 1));
        assert_eq!(scaled(&[3, 3], 3), scaled(&[1, 1], 1));
        assert_eq!(scaled(&[2, 3], 6).integer_lengths(), &[2, 3]);
    }

    #[test]
    fn construction_rejects_degenerate_inputs() {
        assert_eq!(
            ScaledLengths::new(vec![], 1),
            Err(CensusError::EmptyLengths)
        );
        assert_eq!(
            ScaledLengths::new(vec![1, 0], 1),
            Err(CensusError::ZeroLength(1))
        );
        assert_eq!(
            ScaledLengths::new(vec![1], 0),
            Err(CensusError::ZeroScale)
        );
    }

    #[test]
    fn from_decimal_rounds_and_reports() {
        let s = ScaledLengths::from_decimal(&[1.0, 2.0], 1000).unwrap();
        assert_eq!(s.integer_lengths(), &[1, 2]);
        assert_eq!(s.scale(), 1);
        assert_eq!(s.realized_lengths(), vec![1.0, 2.0]);
        let t = ScaledLengths::from_decimal(&[0.3333, 1.0], 3).unwrap();
        assert_eq!(t.integer_lengths(), &[1, 3]);
        assert!(matches!(
            ScaledLengths::from_decimal(&[1e-9], 1000),
            Err(CensusError::RoundsToZero { index: 0, .. })
        ));
    }

    #[test]
    fn unit_pair_counts_match_stated_values() {
        let l = scaled(&[1, 1], 1);
        assert_eq!(exact_ball_count(&l, 0.0).unwrap(), big(1));
        assert_eq!(exact_ball_count(&l, 1.0).unwrap(), big(5));
        assert_eq!(exact_ball_count(&l, 3.0).unwrap(), big(53));
    }

    #[test]
    fn fractional_radius_floors_onto_grid() {
        let l = scaled(&[1, 1], 1);
        assert_eq!(exact_ball_count(&l, 2.5).unwrap(), big(17));
        assert_eq!(exact_ball_count(&l, 0.999).unwrap(), big(1));
    }

    #[test]
    fn unit_closed_form_is_exact_for_small_ranks() {
        for k in 1..=4usize {
            let l = scaled(&vec![1; k], 1);
            for radius in 0..=10u64 {
                let dp = exact_ball_count_scaled(&l, radius, DEFAULT_TABLE_CAP).unwrap();
                assert_eq!(
                    dp,
                    unit_ball_closed_form(k, radius),
                    "k={k} R={radius}"
                );
            }
        }
    }

    #[test]
    fn mixed_lengths_match_enumeration_oracle() {
        // Frozen from an independent enumeration: lengths (1,2), R = 0..8.
        let expected = [1u64, 3, 7, 17, 37, 79, 171, 365, 777];
        let l = scaled(&[1, 2], 1);
        for (radius, want) in expected.iter().enumerate() {
            let dp = exact_ball_count_scaled(&l, radius as u64, DEFAULT_TABLE_CAP).unwrap();
            assert_eq!(dp, big(*want), "R={radius}");
            assert_eq!(enumerate_ball(&[1, 2], radius as u64), big(*want));
        }
    }

    #[test]
    fn triple_lengths_match_enumeration_oracle() {
        // Frozen from the same enumeration: lengths (1,2,3), R = 0..8.
        let expected = [1u64, 3, 7, 19, 47, 113, 279, 681, 1653];
        let l = scaled(&[1, 2, 3], 1);
        for (radius, want) in expected.iter().enumerate() {
            let dp = exact_ball_count_scaled(&l, radius as u64, DEFAULT_TABLE_CAP).unwrap();
            assert_eq!(dp, big(*want), "R={radius}");
        }
    }

    #[test]
    fn rejects_negative_radius_and_oversized_table() {
        let l = scaled(&[1, 1], 1);
        assert!(matches!(
            exact_ball_count(&l, -1.0),
            Err(CensusError::NegativeRadius(_))
        ));
        assert!(matches!(
            exact_ball_count_scaled(&l, 100, 10),
            Err(CensusError::TableTooLarge { needed: 100, cap: 10 })
        ));
    }

    #[test]
    fn curve_matches_pointwise_counts() {
        let l = scaled(&[1, 1], 1);
        let curve = census_curve(&l, 3.0, 1.0).unwrap();
        assert_eq!(curve.radii_scaled(), &[1, 2, 3]);
        assert_eq!(curve.counts(), &[big(5), big(17), big(53)]);
    }

    #[test]
    fn curve_below_min_length_sees_only_identity() {
        let l = scaled(&[2, 3], 1);
        let curve = census_curve(&l, 1.0, 1.0).unwrap();
        assert_eq!(curve.counts(), &[big(1)]);
    }

    #[test]
    fn curve_rejects_unrepresentable_step() {
        let l = scaled(&[1, 1], 1);
        assert!(matches!(
            census_curve(&l, 3.0, 0.5),
            Err(CensusError::BadStep { .. })
        ));
        assert!(matches!(
            census_curve(&l, 3.0, 5.0),
            Err(CensusError::StepBeyondRadius)
        ));
    }

    #[test]
    fn growth_rate_unit_pair_near_log3() {
        let l = scaled(&[1, 1], 1);
        let curve = census_curve(&l, 20.0, 1.0).unwrap();
        let slope = growth_rate_estimate(&curve, (10.0, 20.0)).unwrap();
        let target = 3.0_f64.ln();
        assert!((slope - target).abs() / target < 0.01, "slope {slope}");
    }

    #[test]
    fn growth_rate_rank_one_is_near_zero() {
        let l = scaled(&[1], 1);
        let curve = census_curve(&l, 20.0, 1.0).unwrap();
        let slope = growth_rate_estimate(&curve, (10.0, 20.0)).unwrap();
        assert!(slope.abs() < 0.2);
    }

    #[test]
    fn growth_rate_window_validation() {
        let l = scaled(&[1, 1], 1);
        let curve = census_curve(&l, 10.0, 1.0).unwrap();
        assert!(matches!(
            growth_rate_estimate(&curve, (5.0, 5.0)),
            Err(CensusError::EmptyWindow)
        ));
        assert!(matches!(
            growth_rate_estimate(&curve, (5.5, 10.0)),
            Err(CensusError::WindowNotSampled(_))
        ));
    }

    #[test]
    fn ln_big_matches_f64_in_range_and_beyond() {
        assert!((ln_big(&big(1000)) - 1000.0_f64.ln()).abs() < 1e-12);
        // 3^200 is far outside f64 integer range.
        let n = BigUint::from(3u32).pow(200);
        assert!((ln_big(&n) - 200.0 * 3.0_f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn layer_recurrence_agrees_with_enumeration_on_small_grid() {
        // Every length vector with k <= 2, entries <= 3, radii <= 6; the
        // acceptance suite runs the full k <= 3, R <= 8 sweep.
        for a in 1..=3u64 {
            for b in 1..=3u64 {
                let l = scaled(&[a, b], 1);
                for t in 0..=6u64 {
                    let dp = exact_ball_count_scaled(&l, t, DEFAULT_TABLE_CAP).unwrap();
                    assert_eq!(dp, enumerate_ball(&[a, b], t), "({a},{b}) R={t}");
                }
            }
        }
    }

    #[test]
    fn counts_are_nondecreasing_with_identity_at_zero() {
        let l = scaled(&[2, 3, 5], 2);
        let curve = census_curve_scaled(&l, 40, 1, DEFAULT_TABLE_CAP).unwrap();
        assert!(curve.counts().windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(
            exact_ball_count_scaled(&l, 0, DEFAULT_TABLE_CAP).unwrap(),
            big(1)
        );
    }
}
