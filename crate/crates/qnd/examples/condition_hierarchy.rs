//! The strong / moderate / weak condition hierarchy across the builtin model
//! gallery: each model occupies a different cell, and every condition that
//! passes forces the weaker ones to pass.
//!
//! Run with: cargo run -p qnd --example condition_hierarchy

use qnd::conditions::implication_report;
use qnd::linalg::DEFAULT_TOL;
use qnd::models;

fn main() -> qnd::Result<()> {
    println!(
        "{:<28} {:>12} {:>12} {:>12}   chain",
        "model", "strong", "moderate", "weak"
    );
    for descriptor in models::gallery() {
        let model = descriptor.build()?;
        let report = implication_report(&model, DEFAULT_TOL)?;
        let fmt = |r: &qnd::conditions::ConditionReport| {
            format!("{} {:.1e}", if r.verdict { "pass" } else { "FAIL" }, r.violation)
        };
        println!(
            "{:<28} {:>12} {:>12} {:>12}   {}",
            descriptor.name,
            fmt(&report.strong),
            fmt(&report.moderate),
            fmt(&report.weak),
            if report.chain_consistent { "consistent" } else { "BROKEN" }
        );
    }
    println!("\n(strong => moderate => weak; the converse directions all fail somewhere above)");
    Ok(())
}
