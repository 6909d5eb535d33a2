//! Evaluate the growth certificate on displacement data: a free system of
//! isometries with critical exponent delta must satisfy
//! sum 1/(1+e^(delta d_i)) <= 1/2, so some displacement always reaches
//! log(2k-1)/delta.
//!
//! ```bash
//! cargo run -p rose-entropy --example growth_certificate
//! ```

use rose_entropy::bounds::certify;
use rose_entropy::entropy::rose_entropy;
use rose_entropy::{validate_lengths, GroupSample};

fn show(displacements: &[f64], delta: f64) {
    let sample = GroupSample::new(displacements.to_vec(), delta).unwrap();
    let cert = certify(&sample, 1e-12).unwrap();
    println!("displacements {displacements:?}, delta = {delta}");
    println!(
        "  sum = {:.15}  ->  {}",
        cert.sum_value,
        if cert.satisfied {
            "consistent with a free action"
        } else {
            "violated: no free action at this exponent"
        }
    );
    println!(
        "  smallest consistent exponent: {:.12}",
        cert.delta_lower_bound
    );
    if let Some(bound) = cert.max_displacement_bound {
        println!("  some displacement must reach log(2k-1)/delta = {bound:.12}");
    }
    println!();
}

fn main() {
    let log3 = 3.0_f64.ln();

    // The equality configuration: both displacements log 3 at delta = 1.
    show(&[log3, log3], 1.0);

    // Shrink the displacements and the certificate flips to violated:
    // two generators cannot both move a point by 1 when delta = 1.
    show(&[1.0, 1.0], 1.0);

    // Raising delta relaxes the constraint again.
    show(&[1.0, 1.0], 2.0);

    // delta = 0 never certifies anything for k >= 2: the sum is k/2.
    show(&[5.0, 9.0], 0.0);

    // The lower bound is exactly the rose entropy of the displacements:
    // the certificate is tight on the rose built from the data.
    let raw = vec![0.8, 1.7, 2.2, 3.1];
    let lengths = validate_lengths(&raw).unwrap();
    let h = rose_entropy(&lengths, 1e-12).unwrap().h;
    let at_entropy = certify(&GroupSample::new(raw.clone(), h).unwrap(), 1e-12).unwrap();
    println!("at delta = entropy({raw:?}) = {h:.12}:");
    println!(
        "  sum = {:.15} (equality within 1e-12: the bound is sharp)",
        at_entropy.sum_value
    );
}
