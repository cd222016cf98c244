//! Reading and writing state files and machine-readable reports — the same
//! formats the `entkit` binary consumes and emits.
//!
//! Run with `cargo run --example state_files`.

use serde_json::json;

use entkit::error::Result;
use entkit::io::{load_state, pure_state_json, save_state, LoadedState, Report, REPORT_SCHEMA};
use entkit::measure::ent;
use entkit::modes::ModeStructure;
use entkit::tgx::state_from_levels;

fn main() -> Result<()> {
    let dir = std::env::temp_dir();

    // Save a pure state as JSON: modes, kind, and (re, im) amplitude pairs.
    let s = ModeStructure::new(&[2, 2, 3])?;
    let psi = state_from_levels(&s, &[1, 5, 8, 12], None)?;
    let path = dir.join("entkit-example-state.json");
    save_state(&path, &LoadedState::Pure(psi.clone()))?;
    println!("wrote {}", path.display());
    println!("{}\n", pure_state_json(&psi));

    // Load it back and compute.
    let loaded = load_state(&path)?;
    let round_tripped = match loaded {
        LoadedState::Pure(p) => p,
        LoadedState::Density(_) => unreachable!("saved a pure state"),
    };
    let report = ent(&round_tripped)?;
    println!("loaded state ent: {:.12}", report.ent());

    // Reports wrap any payload with the schema tag and the command name.
    let wrapped = Report::new(
        "example",
        json!({
            "modes": s.modes(),
            "ent": report.ent(),
        }),
    )
    .with_seed(7);
    println!("\nreport envelope (schema {REPORT_SCHEMA}):");
    println!("{}", wrapped.to_json_string()?);

    std::fs::remove_file(&path).ok();
    Ok(())
}
