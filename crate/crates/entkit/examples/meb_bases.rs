//! Maximally entangled bases: generating sets and their Fourier expansions.
//!
//! Run with `cargo run --example meb_bases`.

use entkit::error::Result;
use entkit::measure::ent;
use entkit::meb::{generating_sets, meb_expand};
use entkit::modes::ModeStructure;

fn main() -> Result<()> {
    let s = ModeStructure::new(&[3, 3])?;
    let sets = generating_sets(&s)?;
    println!("{s} has {} generating sets:", sets.len());
    for (i, set) in sets.iter().enumerate() {
        println!("  set {}: {:?}", i + 1, set.rows());
    }

    // Expanding a generating set yields one basis state per (row, phase).
    let basis = meb_expand(&sets[0])?;
    println!("\nexpansion of set 1 ({} states):", basis.len());
    for (psi, (g, j)) in basis.states().iter().zip(basis.labels()) {
        let report = ent(psi)?;
        let support: Vec<usize> = (1..=s.dim())
            .filter(|&v| psi.amplitude(v).norm() > 1e-12)
            .collect();
        println!(
            "  row {g}, phase {j}: support {support:?}  ent {:.12}",
            report.ent()
        );
    }

    // The expansion is a complete orthonormal basis.
    let gram = basis.gram();
    let mut worst = 0.0f64;
    for a in 0..basis.len() {
        for b in 0..basis.len() {
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((gram[[a, b]].norm() - target).abs());
        }
    }
    println!("\nGram deviation from identity : {worst:.3e}");
    println!("projector-sum deviation      : {:.3e}", basis.completeness_defect());

    // Larger structures work the same way; 2×2×2 has mixed-size groups.
    let s222 = ModeStructure::new(&[2, 2, 2])?;
    let sets222 = generating_sets(&s222)?;
    println!("\n{s222}: {} generating sets, e.g. {:?}", sets222.len(), sets222[0].rows());

    Ok(())
}
