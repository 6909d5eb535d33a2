//! Bracketed root finding for strictly decreasing scalar functions.
//!
//! Bisection guarantees convergence; a secant step is tried first each round
//! and accepted only when it lands safely inside the bracket. Good enough
//! here: every function we solve is smooth, monotone, and cheap.

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RootResult {
    pub root: f64,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum SolveError {
    /// The function does not straddle zero on the supplied interval.
    BadBracket { f_lo: f64, f_hi: f64 },
    /// Residual tolerance not reached within the iteration cap.
    NoConvergence { best: f64, residual: f64, iterations: usize },
}

/// Finds the root of a strictly decreasing `f` on `[lo, hi]`, stopping when
/// `|f(x)| <= tol`. Expects `f(lo) >= 0 >= f(hi)` up to `tol` slack.
pub(crate) fn find_root_decreasing<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    max_iter: usize,
) -> Result<RootResult, SolveError> {
    let f_lo = f(lo);
    if f_lo.abs() <= tol {
        return Ok(RootResult { root: lo, residual: f_lo, iterations: 0 });
    }
    let f_hi = f(hi);
    if f_hi.abs() <= tol {
        return Ok(RootResult { root: hi, residual: f_hi, iterations: 0 });
    }
    if f_lo < 0.0 || f_hi > 0.0 {
        return Err(SolveError::BadBracket { f_lo, f_hi });
    }

    let (mut a, mut fa) = (lo, f_lo); // f(a) > 0
    let (mut b, mut fb) = (hi, f_hi); // f(b) < 0
    let mut best = 0.5 * (a + b);
    let mut best_res = f64::INFINITY;

    for it in 1..=max_iter {
        let width = b - a;
        // Secant estimate from the bracket endpoints; bisect when it is
        // non-finite or hugs an endpoint too closely to make progress.
        let secant = a - fa * width / (fb - fa);
        let x = if secant.is_finite()
            && secant > a + 0.01 * width
            && secant < b - 0.01 * width
        {
            secant
        } else {
            a + 0.5 * width
        };
        let fx = f(x);
        // A non-finite evaluation cannot be bracketed; stop immediately so
        // callers can surface the underlying failure.
        if !fx.is_finite() {
            return Err(SolveError::NoConvergence {
                best,
                residual: best_res,
                iterations: it,
            });
        }
        if fx.abs() < best_res {
            best = x;
            best_res = fx.abs();
        }
        if fx.abs() <= tol {
            return Ok(RootResult { root: x, residual: fx, iterations: it });
        }
        if fx > 0.0 {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        // Bracket collapsed to float resolution without meeting the residual
        // tolerance: the tolerance is below what f64 evaluation can deliver.
        if b - a <= f64::EPSILON * a.abs().max(b.abs()).max(1.0) {
            break;
        }
    }
    Err(SolveError::NoConvergence {
        best,
        residual: best_res,
        iterations: max_iter,
    })
}
