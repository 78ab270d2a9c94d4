//! Monte Carlo consistency of the Born rule: seeded sampling reproduces the
//! exact outcome distribution within binomial error, and identical seeds give
//! identical histograms.
//!
//! Run with: cargo run -p qnd --example seeded_sampling

use qnd::linalg::StateVector;
use qnd::measure::{joint_amplitudes, outcome_distribution, sample_outcomes};
use qnd::models;

fn main() -> qnd::Result<()> {
    let model = models::cnot_readout(2)?.with_states(
        StateVector::from_real(&[0.6, 0.8])?,
        StateVector::basis(2, 0),
    )?;
    let c = joint_amplitudes(&model);
    let exact = outcome_distribution(&c);

    let n = 100_000;
    let histogram = sample_outcomes(&c, n, 42);

    println!("{n} draws, seed 42\n");
    println!("outcome   count      frequency    exact P(r_j)   |diff| / sigma");
    for (j, &count) in histogram.iter().enumerate() {
        let freq = count as f64 / n as f64;
        let p = exact.probs()[j];
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        println!(
            "r_{j}       {count:<10} {freq:<12.5} {p:<14.5} {:.2}",
            (freq - p).abs() / sigma
        );
    }

    let again = sample_outcomes(&c, n, 42);
    println!("\nsame seed reproduces the histogram exactly: {}", histogram == again);
    let other = sample_outcomes(&c, n, 43);
    println!("a different seed does not: {}", histogram != other);
    Ok(())
}
