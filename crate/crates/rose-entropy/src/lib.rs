//! Volume entropy of metric rose graphs, and what it buys you.
//!
//! A *rose* is a wedge of `k` circles with lengths `a_1 .. a_k`; its
//! universal cover is the `2k`-valent tree with those edge lengths, and the
//! exponential growth rate of ball volumes in that tree — the volume
//! entropy `h` — is the unique positive root of
//!
//! ```text
//! sum_i 1/(1 + e^{h a_i}) = 1/2        (k >= 2)
//! ```
//!
//! This crate computes `h` by three independent routes and uses it to
//! evaluate quantitative bounds on free isometric actions:
//!
//! - [`entropy::rose_entropy`] — bracketed root finding on the defining
//!   equation (`closed-form-root`);
//! - [`entropy::spectral_entropy`] — the `h` at which the positive transfer
//!   matrix has Perron root 1, via power iteration (`spectral`);
//! - [`census`] — exact arbitrary-precision counts of reduced words by
//!   weighted length in the covering tree, whose log-slope converges to `h`
//!   (the brute-force oracle);
//! - [`bounds`] — the growth certificate `sum 1/(1+e^{delta d_i}) <= 1/2`
//!   on displacement data, and collar-type bounds: how long the last loop
//!   must be once the others are short, exactly and asymptotically.
//!
//! # Example
//!
//! ```
//! use rose_entropy::{validate_lengths, entropy};
//!
//! let lengths = validate_lengths(&[1.0, 1.0]).unwrap();
//! let sol = entropy::rose_entropy(&lengths, 1e-12).unwrap();
//! assert!((sol.h - 3.0_f64.ln()).abs() < 1e-12);
//! ```
//!
//! Runnable walkthroughs live in `examples/`; the `rose-entropy` binary
//! exposes the same operations for batch use.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod census;
pub mod cli;
pub mod entropy;
mod solve;
pub mod types;

pub use types::{
    validate_lengths, CensusCurve, CollarReport, EntropySolution, GroupSample, RoseLengths,
    SolverMethod, ValidationError,
};
