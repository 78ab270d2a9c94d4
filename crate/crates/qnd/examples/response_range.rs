//! A detector with a finite response range: measured levels below the cutoff
//! are counted non-demolition style, levels above saturate the detector and
//! demolish the state. The weak condition holds exactly on the in-range
//! subspace and nowhere else, and the search maps that boundary.
//!
//! Run with: cargo run -p qnd --example response_range

use qnd::conditions::weak_violation_value;
use qnd::linalg::StateVector;
use qnd::models;
use qnd::search::max_weak_violation;

fn main() -> qnd::Result<()> {
    let model = models::restricted_range_model(4, 4, 2)?;
    let u = model.interaction();
    let b = model.probe_state();

    println!("4-level system, counting detector with response range {{0, 1}}\n");
    for (label, amplitudes) in [
        ("in-range basis |q_0>", vec![1.0, 0.0, 0.0, 0.0]),
        ("in-range superposition", vec![0.6, 0.8, 0.0, 0.0]),
        ("boundary half-and-half", vec![0.5, 0.5, 0.5, 0.5]),
        ("out-of-range |q_3>", vec![0.0, 0.0, 0.0, 1.0]),
        ("out-of-range superposition", vec![0.0, 0.0, 0.8, 0.6]),
    ] {
        let a = StateVector::from_real(&amplitudes)?;
        let v = weak_violation_value(u, &a, b);
        println!("{label:<28} weak violation = {v:.6}");
    }
    println!("\n(the violation equals the probability mass outside the response range)");

    let result = max_weak_violation(u, b, 16, 7)?;
    println!(
        "\nworst-case measured state found by search (violation {:.4}):",
        result.best_value
    );
    for (i, z) in result.best_state.amplitudes().iter().enumerate() {
        println!("  |q_{i}>: {:+.4}{:+.4}i  (population {:.4})", z.re, z.im, z.norm_sqr());
    }
    Ok(())
}
