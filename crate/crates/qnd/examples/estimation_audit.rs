//! Estimating Q from the observed read-out value with a noisy probe: the
//! conditional-mean estimator, its bias and squared error against an error
//! budget, and the information obtained by the measurement.
//!
//! Run with: cargo run -p qnd --example estimation_audit

use qnd::estimation::{
    conditional_mean_estimator, evaluate_estimation_report, nats_to_bits, Estimator,
};
use qnd::linalg::StateVector;
use qnd::measure::joint_amplitudes;
use qnd::models;

fn main() -> qnd::Result<()> {
    // Counting read-out with an imperfect probe: 10% of the population
    // starts in the wrong probe level, so outcomes are noisy.
    let model = models::cnot_readout(2)?.with_states(
        StateVector::from_real(&[0.6, 0.8])?,
        StateVector::from_real(&[0.9f64.sqrt(), 0.1f64.sqrt()])?,
    )?;
    let c = joint_amplitudes(&model);
    let q = model.system().values();

    let f = conditional_mean_estimator(&c, q);
    println!("conditional-mean estimator f(r_j) = {:?}", f.table());

    let report = evaluate_estimation_report(&c, q, &f, 0.2, 0.1);
    println!("bias            = {:.3e}", report.bias);
    println!(
        "squared error   = {:.6}  vs budget eps^2 = {:.3}  -> {}",
        report.squared_error,
        report.epsilon * report.epsilon,
        if report.error_within_budget { "pass" } else { "FAIL" }
    );
    println!(
        "information     = {:.6} nats ({:.4} bits)  vs I_min = {}  -> {}",
        report.info_nats,
        nats_to_bits(report.info_nats),
        report.i_min,
        if report.info_sufficient { "pass" } else { "FAIL" }
    );

    // A hand-rolled read-out table is audited the same way and can only do
    // worse on squared error.
    let naive = Estimator::new(vec![0.0, 1.0])?;
    let naive_report = evaluate_estimation_report(&c, q, &naive, 0.2, 0.1);
    println!(
        "\nnaive table {:?}: bias = {:.4}, squared error = {:.6}",
        naive.table(),
        naive_report.bias,
        naive_report.squared_error
    );
    println!(
        "conditional mean is optimal: {:.6} <= {:.6}",
        report.squared_error, naive_report.squared_error
    );
    Ok(())
}
