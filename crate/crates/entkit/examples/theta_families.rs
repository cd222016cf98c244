//! One-angle state families: sweeping from product to maximal entanglement,
//! and the 2×2×3 closed form with its two-branch inverse.
//!
//! Run with `cargo run --example theta_families`.

use entkit::artifacts::canonical_level_set;
use entkit::error::Result;
use entkit::measure::ent;
use entkit::modes::ModeStructure;
use entkit::param::{
    ent_formula_223, theta_of_ent_223_branch, ThetaFamily, ENT_BRANCH_POINT_223,
};

fn main() -> Result<()> {
    // The canonical family puts cos θ on the first catalog level and spreads
    // sin θ evenly over the rest; θ_max = acos(1/√L) reaches balance.
    let s = ModeStructure::new(&[2, 2, 3])?;
    let levels = canonical_level_set(&s)?;
    let family = ThetaFamily::new(s.clone(), levels.clone())?;
    println!("family on {s}, levels {levels:?}, θ_max = {:.6}", family.theta_max());
    println!("{:>8}  {:>14}", "θ/θ_max", "ent");
    for k in 0..=10 {
        let theta = family.theta_max() * k as f64 / 10.0;
        let value = ent(&family.state(theta)?)?.ent();
        println!("{:>8.2}  {:>14.10}", k as f64 / 10.0, value);
    }

    // Past θ_max the family keeps going; the 2×2×3 curve then descends to
    // the branch value where the inverse switches branches.
    println!("\nclosed form vs direct evaluation on the extended range:");
    println!("{:>8}  {:>14}  {:>14}", "θ", "closed form", "direct");
    for k in 0..=8 {
        let theta = std::f64::consts::FRAC_PI_2 * k as f64 / 8.0;
        let closed = ent_formula_223(theta)?;
        let direct = ent(&family.state_extended(theta)?)?.ent();
        println!("{theta:>8.4}  {closed:>14.10}  {direct:>14.10}");
    }
    println!("branch value: {ENT_BRANCH_POINT_223:.10}");

    // Above the branch value both inverse branches round-trip.
    println!("\ninverse round trips:");
    for target in [0.9, 0.95, 1.0] {
        for upper in [false, true] {
            let theta = theta_of_ent_223_branch(target, upper)?;
            let back = ent_formula_223(theta)?;
            println!(
                "  target {target:.3} ({} branch): θ = {theta:.6}, back = {back:.10}",
                if upper { "upper" } else { "lower" }
            );
        }
    }

    // Every structure sweeps the full range with its canonical family.
    println!("\nsweep extremes per structure (dimension ≤ 12):");
    for s in entkit::modes::standard_structures(12) {
        let family = ThetaFamily::new(s.clone(), canonical_level_set(&s)?)?;
        let values: Vec<f64> = (0..60)
            .map(|k| {
                let theta = family.theta_max() * k as f64 / 59.0;
                ent(&family.state(theta).unwrap()).unwrap().ent()
            })
            .collect();
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        println!("  {s:<8} min {lo:.2e}  max {hi:.10}");
    }

    Ok(())
}
