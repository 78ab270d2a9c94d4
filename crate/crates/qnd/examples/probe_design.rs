//! The probe is part of the apparatus and can be prepared at will: searching
//! over probe states turns a demolishing interaction into a non-demolition
//! one when any working preparation exists.
//!
//! Run with: cargo run -p qnd --example probe_design

use qnd::conditions::moderate_violation_value;
use qnd::linalg::StateVector;
use qnd::models;
use qnd::search::{probe_design_search, ProbeTarget};

fn main() -> qnd::Result<()> {
    // Probe-controlled flip: the system is shifted unless the probe sits in
    // its ground level, so only r_0 preparations read out harmlessly.
    let model = models::probe_controlled_flip(3)?;
    let u = model.interaction();

    println!("probe-controlled flip, d = 3: moderate violation by probe preparation");
    for (label, b) in [
        ("ground  e_0", StateVector::basis(3, 0)),
        ("excited e_1", StateVector::basis(3, 1)),
        ("uniform    ", StateVector::uniform(3)),
    ] {
        println!("  {label}: {:.6}", moderate_violation_value(u, &b));
    }

    let result = probe_design_search(u, 16, 11, ProbeTarget::Moderate, None)?;
    println!(
        "\nbest probe found by search (moderate violation {:.2e}):",
        result.best_value
    );
    for (j, z) in result.best_state.amplitudes().iter().enumerate() {
        println!("  |r_{j}>: population {:.6}", z.norm_sqr());
    }

    // For the full exchange interaction the probe must match the measured
    // state itself: preparing b = a makes a*a a fixed point.
    let swap = models::swap_model(2)?;
    let a = StateVector::basis(2, 0);
    let result = probe_design_search(
        swap.interaction(),
        16,
        13,
        ProbeTarget::WeakWithFixedSystem,
        Some(&a),
    )?;
    println!(
        "\nexchange interaction with a = e_0: best probe has weak violation {:.2e}",
        result.best_value
    );
    println!(
        "  |<e_0|b>|^2 = {:.6}  (the probe must be prepared in the measured state)",
        result.best_state.amplitudes()[0].norm_sqr()
    );
    Ok(())
}
