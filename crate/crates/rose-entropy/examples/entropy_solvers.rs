//! Compute the volume entropy of a rose by both solver routes and verify
//! the algebraic identities its positive eigenvector satisfies.
//!
//! ```bash
//! cargo run -p rose-entropy --example entropy_solvers
//! ```

use rose_entropy::entropy::{positive_solution, rose_entropy, spectral_entropy, transfer_matrix};
use rose_entropy::validate_lengths;

fn main() {
    println!("volume entropy h: the unique root of  sum 1/(1+e^(h a_i)) = 1/2\n");

    for raw in [
        vec![1.0, 1.0],
        vec![1.0, 2.0],
        vec![1.0, 2.0, 3.0],
        vec![0.5, 0.5, 0.5],
    ] {
        let lengths = validate_lengths(&raw).unwrap();
        let closed = rose_entropy(&lengths, 1e-12).unwrap();
        let spectral = spectral_entropy(&lengths, 1e-10).unwrap();
        println!("lengths {raw:?}");
        println!(
            "  closed-form  h = {:.15}   residual {:+.1e}   {} iterations",
            closed.h, closed.residual, closed.iterations
        );
        println!(
            "  spectral     h = {:.15}   residual {:+.1e}   {} iterations",
            spectral.h, spectral.residual, spectral.iterations
        );
        println!("  routes agree to {:.1e}", (closed.h - spectral.h).abs());
        println!(
            "  analytic bracket [{:.6}, {:.6}] contains h",
            closed.bracket_low, closed.bracket_high
        );
        println!();
    }

    // The symmetric case has an exact answer: e^h = 2k - 1.
    let symmetric = validate_lengths(&[1.0, 1.0]).unwrap();
    let h = rose_entropy(&symmetric, 1e-12).unwrap().h;
    println!(
        "symmetric pair: h = {:.15}, log 3 = {:.15}\n",
        h,
        3.0_f64.ln()
    );

    // A circle alone grows linearly: zero entropy, flagged degenerate.
    let circle = validate_lengths(&[2.0]).unwrap();
    let sol = rose_entropy(&circle, 1e-12).unwrap();
    println!("single loop: h = {} ({})\n", sol.h, sol.method);

    // At the entropy, the transfer matrix has Perron root 1 and a positive
    // eigenvector x with sum x_i = 1. Two identities pin it down:
    //   (1 + e^(-h a_i)) x_i is the same for every i, and
    //   sum (1 - (2k-1) e^(-h a_i)) x_i = 0.
    let lengths = validate_lengths(&[1.0, 2.0, 3.0]).unwrap();
    let h = rose_entropy(&lengths, 1e-12).unwrap().h;
    let x = positive_solution(&lengths, h, 1e-8).unwrap();
    let m = transfer_matrix(&lengths, h);
    println!("positive solution at the entropy of [1, 2, 3]:");
    println!("  x = {x:?}");
    for (i, (&a, &xi)) in lengths.lengths().iter().zip(&x).enumerate() {
        println!(
            "  (1 + e^(-h a_{i})) x_{i} = {:.15}",
            (1.0 + (-h * a).exp()) * xi
        );
    }
    let k = lengths.k();
    let summation: f64 = lengths
        .lengths()
        .iter()
        .zip(&x)
        .map(|(&a, &xi)| (1.0 - (2 * k - 1) as f64 * (-h * a).exp()) * xi)
        .sum();
    println!("  summation identity defect: {summation:+.1e}");
    println!(
        "  transfer matrix column weights: {:?}",
        (0..k).map(|j| m.weight(j)).collect::<Vec<_>>()
    );
}
