//! Computing the ent of a few familiar pure states.
//!
//! Run with `cargo run --example ent_basics`.

use num_complex::Complex64;

use entkit::error::Result;
use entkit::measure::ent;
use entkit::modes::ModeStructure;
use entkit::state::StateVector;
use entkit::tgx::state_from_levels;

fn show(label: &str, psi: &StateVector) -> Result<()> {
    let report = ent(psi)?;
    let context = report.context();
    println!("{label}  ({})", psi.structure());
    println!("  ent            : {:.12}", report.ent());
    println!("  L* set         : {:?}", context.lstar_set());
    println!("  normalization M: {:.12}", context.m());
    println!("  mode purities  : {:?}", report.reduction_purities());
    println!();
    Ok(())
}

fn main() -> Result<()> {
    // A Bell pair: balanced superposition of levels 1 and 4 in 2×2.
    let s22 = ModeStructure::new(&[2, 2])?;
    let bell = state_from_levels(&s22, &[1, 4], None)?;
    show("Bell pair", &bell)?;

    // GHZ on three qubits: levels 1 and 8 of 2×2×2.
    let s222 = ModeStructure::new(&[2, 2, 2])?;
    let ghz = state_from_levels(&s222, &[1, 8], None)?;
    show("GHZ", &ghz)?;

    // The W state is entangled but not maximally so under this measure.
    let amp = Complex64::new(1.0 / 3.0f64.sqrt(), 0.0);
    let mut w_amplitudes = vec![Complex64::new(0.0, 0.0); 8];
    for level in [2, 3, 5] {
        w_amplitudes[level - 1] = amp;
    }
    let w = StateVector::new(s222.clone(), w_amplitudes)?;
    show("W state", &w)?;

    // A product state carries no entanglement at all.
    let product = state_from_levels(&s222, &[1], None)?;
    show("product |1,1,1⟩", &product)?;

    Ok(())
}
