//! The model file format and machine reports: write a model to disk, load it
//! back, run the checks, and round-trip the machine-readable report.
//!
//! Run with: cargo run -p qnd --example model_files

use qnd::cli::{cmd_check, CheckSelection};
use qnd::modelfile::ModelFile;
use qnd::report::{input_digest, ReportDocument};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = serde_json::json!({
        "interaction": {
            "kind": "builtin",
            "builtin": {"name": "partial_swap", "params": {"d": 2, "theta": 0.6}}
        },
        "system_state": [[0.6, 0.0], [0.8, 0.0]],
        "budgets": {"epsilon": 0.25, "i_min": 0.05},
        "tolerance": 1e-9
    })
    .to_string();

    let dir = std::env::temp_dir().join("qnd_model_files_example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("partial_swap.json");
    std::fs::write(&path, &text)?;
    println!("wrote {}", path.display());

    // Parse-emit-parse is the identity on the file.
    let parsed = ModelFile::from_path(&path)?;
    let reparsed = ModelFile::from_json_str(&parsed.to_json_string())?;
    assert_eq!(parsed, reparsed);
    println!("model file round-trips through its JSON form");

    let loaded = parsed.build()?;
    let digest = input_digest(text.as_bytes());
    println!("input digest: {digest}");

    let (exit_code, report) = cmd_check(&loaded, digest, CheckSelection::All, None)?;
    println!("\ncheck --condition all would exit with {exit_code}");
    for condition in &report.conditions {
        println!(
            "  {:<10} {}  violation {:.5e}",
            condition.condition.to_string(),
            if condition.verdict { "pass" } else { "FAIL" },
            condition.violation
        );
    }

    // The machine report also round-trips, bit for bit.
    let emitted = report.emit();
    let restored = ReportDocument::parse(&emitted)?;
    assert_eq!(restored, report);
    println!("\nmachine report round-trips; first lines:");
    for line in emitted.lines().take(4) {
        println!("  {line}");
    }
    Ok(())
}
