//! Volume entropy of a metric rose by two independent routes.
//!
//! A rose with loop lengths `a_1 .. a_k` lifts to a `2k`-valent tree whose
//! ball volumes grow like `e^{hR}`. For `k >= 2` the growth rate `h` is the
//! unique positive root of
//!
//! ```text
//! sum_i 1/(1 + e^{h a_i}) = 1/2
//! ```
//!
//! (`closed-form-root` route: bracketed root finding on that sum), and
//! equivalently the unique `h` at which the positive transfer matrix
//! `m[i][j] = (1 if i = j else 2) e^{-h a_j}` has Perron root 1 (`spectral`
//! route: power iteration inside an outer root find). The two routes share
//! no numerics beyond `exp`, so their agreement is a real cross-check.
//!
//! All logistic terms are evaluated through `e^{-s a}` so nothing overflows
//! even when `s a` reaches the hundreds, as it does in collar sweeps.

use crate::solve::{find_root_decreasing, SolveError};
use crate::types::{
    check_tolerance, EntropySolution, RoseLengths, SolverMethod, ValidationError,
};
use thiserror::Error;

/// Default residual tolerance for the closed-form route.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-12;
/// Default tolerance on `rho - 1` for the spectral route.
pub const DEFAULT_SPECTRAL_TOL: f64 = 1e-10;

const MAX_ROOT_ITER: usize = 500;
const MAX_POWER_ITER: usize = 500_000;
/// Relative widening applied to the analytic bracket so that the symmetric
/// case (all lengths equal, root exactly at both endpoints) still straddles.
const BRACKET_WIDEN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("root solver did not converge within {iterations} iterations (best h = {best}, residual = {residual:e}); the tolerance is likely below attainable f64 precision")]
    NoConvergence {
        best: f64,
        residual: f64,
        iterations: usize,
    },
    #[error("power iteration did not converge within {iterations} iterations")]
    PowerIterationStalled { iterations: usize },
    #[error("spectral entropy requires rank k >= 2, got k = {0}")]
    RankTooSmall(usize),
    #[error("h = {h} is not the entropy of these lengths: spectral radius {rho} differs from 1 by more than {tol:e}")]
    NotAtEntropy { h: f64, rho: f64, tol: f64 },
    #[error("matrix entry ({row},{col}) = {value} must be strictly positive and finite")]
    NotPositive { row: usize, col: usize, value: f64 },
    #[error("matrix must be square and nonempty")]
    BadShape,
}

/// `1/(1 + e^x)` without overflow: for `x >= 0` only `e^{-x} <= 1` is formed.
fn logistic_complement(x: f64) -> f64 {
    if x >= 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// The defining sum `sum_i 1/(1 + e^{s a_i})`.
///
/// Strictly decreasing in `s`, equal to `k/2` at `s = 0`, and safe for
/// arbitrarily large `s * a_i`.
pub fn logistic_sum(lengths: &RoseLengths, s: f64) -> f64 {
    lengths
        .lengths()
        .iter()
        .map(|&a| logistic_complement(s * a))
        .sum()
}

/// Analytic bracket for the entropy of `lengths` (valid for `k >= 2`):
/// `log(2k-1)/max(a) <= h <= log(2k-1)/min(a)`.
pub fn entropy_bracket(lengths: &RoseLengths) -> (f64, f64) {
    let log_odd = ((2 * lengths.k() - 1) as f64).ln();
    (log_odd / lengths.max(), log_odd / lengths.min())
}

fn map_solve_error(err: SolveError) -> EntropyError {
    match err {
        SolveError::NoConvergence {
            best,
            residual,
            iterations,
        } => EntropyError::NoConvergence {
            best,
            residual,
            iterations,
        },
        // The widened analytic bracket straddles zero mathematically, so a
        // bad bracket can only mean float noise at an endpoint exceeded a
        // sub-1e-16 tolerance demand.
        SolveError::BadBracket { f_lo, f_hi } => EntropyError::NoConvergence {
            best: f64::NAN,
            residual: f_lo.abs().min(f_hi.abs()),
            iterations: 0,
        },
    }
}

/// Volume entropy of the rose via the defining equation.
///
/// For `k >= 2` returns the unique `h > 0` with `logistic_sum(lengths, h) =
/// 1/2` to within `tol` on the residual. Rank 1 is degenerate: a circle's
/// universal cover is a line, ball growth is linear, so `h = 0` is returned
/// directly and flagged.
pub fn rose_entropy(lengths: &RoseLengths, tol: f64) -> Result<EntropySolution, EntropyError> {
    check_tolerance(tol)?;
    if lengths.k() == 1 {
        return Ok(EntropySolution {
            h: 0.0,
            residual: logistic_sum(lengths, 0.0) - 0.5,
            bracket_low: 0.0,
            bracket_high: 0.0,
            iterations: 0,
            method: SolverMethod::Degenerate,
        });
    }
    let (lo, hi) = entropy_bracket(lengths);
    let (lo_w, hi_w) = (lo * (1.0 - BRACKET_WIDEN), hi * (1.0 + BRACKET_WIDEN));
    let root = find_root_decreasing(
        |s| logistic_sum(lengths, s) - 0.5,
        lo_w,
        hi_w,
        tol,
        MAX_ROOT_ITER,
    )
    .map_err(map_solve_error)?;
    Ok(EntropySolution {
        h: root.root,
        residual: root.residual,
        bracket_low: lo_w,
        bracket_high: hi_w,
        iterations: root.iterations,
        method: SolverMethod::ClosedFormRoot,
    })
}

/// Dense square matrix with strictly positive entries, the domain on which
/// the Perron root is simple and power iteration converges.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveMatrix {
    n: usize,
    data: Vec<f64>, // row-major
}

impl PositiveMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, EntropyError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(EntropyError::BadShape);
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v <= 0.0 {
                    return Err(EntropyError::NotPositive {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
                data.push(v);
            }
        }
        Ok(Self { n, data })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (out_i, row) in out.iter_mut().zip(self.data.chunks_exact(self.n)) {
            *out_i = row.iter().zip(x).map(|(m, v)| m * v).sum();
        }
    }
}

/// The `k x k` positive matrix whose Perron root crosses 1 exactly at the
/// entropy: `m[i][j] = e^{-h a_j}` on the diagonal and `2 e^{-h a_j}` off it.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    h: f64,
    weights: Vec<f64>, // column weights e^{-h a_j}
}

impl TransferMatrix {
    pub fn order(&self) -> usize {
        self.weights.len()
    }

    /// The `h` this matrix was built at.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Column weight `e^{-h a_j}`.
    pub fn weight(&self, j: usize) -> f64 {
        self.weights[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.weights[j]
        } else {
            2.0 * self.weights[j]
        }
    }

    pub fn to_dense(&self) -> PositiveMatrix {
        let n = self.order();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self.entry(i, j));
            }
        }
        PositiveMatrix { n, data }
    }
}

/// Builds the transfer matrix of `lengths` at parameter `h > 0`.
///
/// Weights that underflow `f64` are clamped to the smallest positive value
/// so the matrix stays strictly positive; the clamp is far below every
/// tolerance in use.
pub fn transfer_matrix(lengths: &RoseLengths, h: f64) -> TransferMatrix {
    let weights = lengths
        .lengths()
        .iter()
        .map(|&a| (-h * a).exp().max(f64::MIN_POSITIVE))
        .collect();
    TransferMatrix { h, weights }
}

/// Perron root estimate together with the number of iterations spent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralRadius {
    pub value: f64,
    pub iterations: usize,
}

/// Power-iteration state: L1-normalized positive vector plus the quotient
/// bounds `min_i (Mx)_i / x_i <= rho <= max_i (Mx)_i / x_i`, which enclose
/// the Perron root at every step and shrink geometrically.
fn power_iterate(
    m: &PositiveMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<(f64, Vec<f64>, usize), EntropyError> {
    let n = m.order();
    let mut x = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    for it in 1..=max_iter {
        m.apply(&x, &mut y);
        let mut q_lo = f64::INFINITY;
        let mut q_hi = 0.0_f64;
        let mut l1 = 0.0;
        for (yi, xi) in y.iter().zip(&x) {
            let q = yi / xi;
            q_lo = q_lo.min(q);
            q_hi = q_hi.max(q);
            l1 += yi;
        }
        let mut sup_change = 0.0_f64;
        for (xi, yi) in x.iter_mut().zip(&y) {
            let next = yi / l1;
            sup_change = sup_change.max((next - *xi).abs());
            *xi = next;
        }
        if q_hi - q_lo <= tol && sup_change <= tol {
            return Ok((0.5 * (q_lo + q_hi), x, it));
        }
    }
    Err(EntropyError::PowerIterationStalled {
        iterations: max_iter,
    })
}

/// Perron root of a positive matrix by power iteration from the uniform
/// positive start vector, to within `tol`.
pub fn spectral_radius(m: &PositiveMatrix, tol: f64) -> Result<SpectralRadius, EntropyError> {
    check_tolerance(tol)?;
    let (rho, _, iterations) = power_iterate(m, tol, MAX_POWER_ITER)?;
    Ok(SpectralRadius {
        value: rho,
        iterations,
    })
}

/// Volume entropy via the spectral characterization: the `h` at which the
/// transfer matrix's Perron root equals 1, found by root-finding on
/// `h -> rho(h) - 1` (strictly decreasing).
///
/// `tol` bounds `|rho - 1|` at the returned `h`; the reported residual is
/// still the defect of the defining sum from 1/2 so both routes can be
/// compared directly.
///
/// Near the root the defining sum caps every weight but the largest well
/// below 1, which keeps the transfer matrix's spectral gap bounded away
/// from zero; the power iteration converges for any valid lengths.
pub fn spectral_entropy(lengths: &RoseLengths, tol: f64) -> Result<EntropySolution, EntropyError> {
    check_tolerance(tol)?;
    if lengths.k() < 2 {
        return Err(EntropyError::RankTooSmall(lengths.k()));
    }
    let inner_tol = (tol * 1e-2).max(1e-14);
    let (lo, hi) = entropy_bracket(lengths);
    let (lo_w, hi_w) = (lo * (1.0 - BRACKET_WIDEN), hi * (1.0 + BRACKET_WIDEN));
    let mut inner_err: Option<EntropyError> = None;
    let root = find_root_decreasing(
        |h| match power_iterate(&transfer_matrix(lengths, h).to_dense(), inner_tol, MAX_POWER_ITER)
        {
            Ok((rho, _, _)) => rho - 1.0,
            Err(e) => {
                inner_err = Some(e);
                f64::NAN
            }
        },
        lo_w,
        hi_w,
        tol,
        MAX_ROOT_ITER,
    );
    if let Some(e) = inner_err {
        return Err(e);
    }
    let root = root.map_err(map_solve_error)?;
    Ok(EntropySolution {
        h: root.root,
        residual: logistic_sum(lengths, root.root) - 0.5,
        bracket_low: lo_w,
        bracket_high: hi_w,
        iterations: root.iterations,
        method: SolverMethod::Spectral,
    })
}

/// Positive solution of the transfer system at the entropy: the Perron
/// vector `x` (normalized to `sum x_i = 1`) of the transfer matrix at `h`.
///
/// Fails with [`EntropyError::NotAtEntropy`] when the Perron root at `h`
/// differs from 1 by more than `tol`, i.e. when `h` is not (close to) the
/// entropy of these lengths.
pub fn positive_solution(
    lengths: &RoseLengths,
    h: f64,
    tol: f64,
) -> Result<Vec<f64>, EntropyError> {
    check_tolerance(tol)?;
    let vec_tol = tol.min(1e-12);
    let (rho, x, _) = power_iterate(
        &transfer_matrix(lengths, h).to_dense(),
        vec_tol,
        MAX_POWER_ITER,
    )?;
    if (rho - 1.0).abs() > tol {
        return Err(EntropyError::NotAtEntropy { h, rho, tol });
    }
    Ok(x)
}
