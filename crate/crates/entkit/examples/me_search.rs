//! The thirteen-step search for maximally entangled TGX level sets.
//!
//! Walks 2×2×3 from starting level 1 with every intermediate printed, then
//! lists the full catalogs for a few structures.
//!
//! Run with `cargo run --example me_search`.

use entkit::artifacts::{canonical_level_set, level_count_rows};
use entkit::error::Result;
use entkit::measure::ent;
use entkit::modes::ModeStructure;
use entkit::tgx::{a13_all, a13_trace, goals_matrix, occurrence_matrix, state_from_levels, tgx_mask};

fn main() -> Result<()> {
    let s = ModeStructure::new(&[2, 2, 3])?;

    println!("== goals matrix for L* = 4 in {s} ==");
    let goals = goals_matrix(&s, 4)?;
    for row in goals.rows() {
        println!("  {row:?}");
    }

    println!("\n== occurrence matrix (one row per level) ==");
    let omega = occurrence_matrix(&s);
    for (v, row) in omega.rows().iter().enumerate() {
        println!("  level {:2}: {row:?}", v + 1);
    }

    println!("\n== compatibility mask ==");
    let mask = tgx_mask(&s);
    for a in 0..s.dim() {
        let row: String = (0..s.dim())
            .map(|b| if mask.matrix()[[a, b]] { '1' } else { '0' })
            .collect();
        println!("  {row}");
    }

    println!("\n== search from starting level 1 ==");
    let trace = a13_trace(&s, 1, 4)?;
    println!("  candidates : {:?}", trace.candidate_levels);
    println!("  compatible : {:?}", trace.compatible_sets);
    println!("  matched    : {:?}", trace.matched_sets);

    println!("\n== every matched set really is maximally entangled ==");
    for levels in &trace.matched_sets {
        let psi = state_from_levels(&s, levels, None)?;
        println!("  {levels:?} → ent {:.12}", ent(&psi)?.ent());
    }

    println!("\n== full catalogs ==");
    for modes in [vec![2, 2, 2], vec![3, 3], vec![2, 2, 3]] {
        let s = ModeStructure::new(&modes)?;
        let table = a13_all(&s)?;
        println!("  {s}: {} unique sets", table.rows().len());
        for levels in table.rows() {
            println!("    {levels:?}");
        }
    }

    println!("\n== canonical representatives and level counts ==");
    for (s, set) in level_count_rows(18)? {
        let canonical = canonical_level_set(&s)?;
        println!("  {s:<10} L* set {set:?}  canonical {canonical:?}");
    }

    Ok(())
}
