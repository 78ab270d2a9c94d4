//! The measurement process end to end on the ideal counting read-out:
//! product pre-state, joint evolution, Born-rule outcome distribution,
//! collapse on each observed value, and the mixed post-measurement ensemble.
//!
//! Run with: cargo run -p qnd --example measurement_walkthrough

use qnd::linalg::StateVector;
use qnd::measure::{
    collapse, joint_amplitudes, outcome_distribution, post_ensemble, q_marginal_post,
    q_marginal_pre,
};
use qnd::models;

fn main() -> qnd::Result<()> {
    // Qubit measured by a counting probe: |q_k>|r_l> -> |q_k>|r_{l+k mod 2}>.
    let model = models::cnot_readout(2)?.with_states(
        StateVector::from_real(&[0.6, 0.8])?,
        StateVector::basis(2, 0),
    )?;

    println!("system state a = {:?}", model.system_state().amplitudes());
    println!("probe state  b = {:?}", model.probe_state().amplitudes());

    let c = joint_amplitudes(&model);
    println!("\njoint amplitudes c_ij (rows: system, cols: probe):");
    for i in 0..c.d_system() {
        let row: Vec<String> = (0..c.d_probe())
            .map(|j| format!("{:+.3}{:+.3}i", c.get(i, j).re, c.get(i, j).im))
            .collect();
        println!("  [{}]", row.join(", "));
    }

    let dist = outcome_distribution(&c);
    println!("\nBorn rule P(r_j) = {:?}", dist.probs());

    for j in 0..dist.len() {
        match collapse(&c, j) {
            Ok((state, p)) => {
                println!("\noutcome r_{j} observed with probability {p:.4}");
                println!("collapsed joint state: {:?}", state.amplitudes());
            }
            Err(e) => println!("\noutcome r_{j}: {e}"),
        }
    }

    let ensemble = post_ensemble(&c);
    println!(
        "\npost-measurement ensemble: {} branches, trace(rho'') = {:.12}",
        ensemble.branches().len(),
        ensemble.density().trace().re
    );

    println!("\nQ distribution before: {:?}", q_marginal_pre(model.system_state()));
    println!("Q distribution after : {:?}", q_marginal_post(&c));
    println!("(identical: this scheme never disturbs the Q statistics)");
    Ok(())
}
