//! Collar-type bounds at fixed volume entropy: the shorter the shortest
//! loop, the longer the last one is forced to be. Exact inversion of the
//! defining inequality, its small-length asymptotic, a comparison bound,
//! and the classical hyperbolic collar inequality side by side.
//!
//! ```bash
//! cargo run -p rose-entropy --example collar_bounds
//! ```

use rose_entropy::bounds::{
    collar_comparison_bound, collar_family_asymptotic, collar_pair_asymptotic, collar_report,
    exact_min_last_length, hyperbolic_collar_check,
};

fn main() {
    let h = 1.0;

    println!("two loops at entropy h = {h}: minimal admissible second length\n");
    println!(
        "{:>10}  {:>14}  {:>14}  {:>14}  {:>10}",
        "l1", "exact", "asymptotic", "comparison", "asym-exact"
    );
    for j in 1..=8 {
        let l1 = 10.0_f64.powi(-j);
        let exact = exact_min_last_length(h, &[l1]).unwrap().unwrap();
        let asym = collar_pair_asymptotic(h, l1).unwrap().value;
        let cmp = collar_comparison_bound(h, l1).unwrap();
        println!(
            "{l1:>10.0e}  {exact:>14.9}  {asym:>14.9}  {cmp:>14.9}  {:>10.2e}",
            asym - exact
        );
    }
    println!(
        "\nthe asymptotic tracks the exact bound to o(1) and beats the\n\
         comparison bound by exactly log(4)/h = {:.9}\n",
        4.0_f64.ln() / h
    );

    // Families: the tail lengths eat into the budget term by term.
    println!("k-1 = 3 priors at h = 1: family asymptotic vs exact inversion");
    for l1 in [0.1, 0.05, 0.04] {
        let priors = [l1, 5.0, 7.0];
        let exact = exact_min_last_length(h, &priors).unwrap().unwrap();
        match collar_family_asymptotic(h, &priors).unwrap() {
            Some(asym) => println!("  priors {priors:?}: exact {exact:.6}, asymptotic {asym:.6}"),
            None => println!("  priors {priors:?}: exact {exact:.6}, asymptotic undefined"),
        }
    }
    println!("  (the family formula leaves its domain once h*l1/4 drops below the tail sum)\n");

    // Infeasible priors are an outcome, not an error: two very short loops
    // already exhaust the growth budget at this entropy.
    let report = collar_report(h, &[0.01, 0.01]).unwrap();
    println!(
        "priors [0.01, 0.01] at h = 1: feasible = {}",
        report.exact_bound.is_some()
    );
    println!("  no third length can restore the inequality\n");

    // Full report for a feasible family.
    let report = collar_report(h, &[1.0, 2.0]).unwrap();
    println!("collar report for priors [1, 2] at h = 1:");
    println!("  exact bound        {:?}", report.exact_bound);
    println!("  asymptotic bound   {:?}", report.asymptotic_bound);
    println!("  margin             {:?}", report.margin);
    println!("  plug-back residual {:?}\n", report.plugback_residual);

    // The classical sharp inequality on hyperbolic surfaces, for scale:
    // sinh(l1/2) sinh(l2/2) > 1 whenever the loops cross.
    println!("hyperbolic collar check:");
    for (l1, l2) in [(0.01, 12.0), (0.01, 11.0), (2.0 * 1.0_f64.asinh(), 2.0 * 1.0_f64.asinh())] {
        let c = hyperbolic_collar_check(l1, l2).unwrap();
        println!(
            "  l1 = {l1:.6}, l2 = {l2:.6}: product = {:.9} -> {}",
            c.product,
            if c.holds { "holds" } else { "boundary/violated" }
        );
    }
    let c = hyperbolic_collar_check(0.01, 12.0).unwrap();
    println!(
        "  expansion bound for l1 = 0.01: l2 >= 2 log(4/l1) = {:.9}",
        c.expansion_bound
    );
}
