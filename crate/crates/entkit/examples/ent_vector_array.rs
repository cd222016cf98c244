//! Modal and partitional ent: the vector over mode subsets, the array over
//! partitions of each subset, and the scalar summaries built from them.
//!
//! Run with `cargo run --example ent_vector_array`.

use entkit::error::Result;
use entkit::modes::ModeStructure;
use entkit::multi::{abs_ent, ent_array, ent_vector, gm_ent, net_ent, EntCell};
use entkit::tgx::state_from_levels;

fn cell_text(cell: &EntCell) -> String {
    match cell {
        EntCell::Direct(x) => format!("{x:.6}"),
        EntCell::Formation(x) => format!("{x:.6} (roof)"),
        EntCell::Unavailable { rank } => format!("unavailable (rank {rank})"),
    }
}

fn main() -> Result<()> {
    // GHZ on four qubits.
    let s = ModeStructure::new(&[2, 2, 2, 2])?;
    let psi = state_from_levels(&s, &[1, 16], None)?;

    // The ent vector: one cell per mode subset of size ≥ 2.  Cells for
    // proper subsets evaluate the reduced state — by direct measure when the
    // reduction is pure, by rank-2 convex roof when it is mildly mixed.
    let vector = ent_vector(&psi)?;
    println!("ent vector of GHZ in {s}:");
    for (k, row) in vector.rows().iter().enumerate() {
        for (labels, cell) in row {
            println!("  modes {labels:?}: {}", cell_text(cell));
        }
        let _ = k;
    }
    if vector.all_available() {
        println!("  |vector|_1 = {:.6}", vector.one_norm()?);
    }

    // The ent array adds, per subset, one cell for every partition of that
    // subset: how entangled the blocks are with each other.
    let array = ent_array(&psi)?;
    println!("\npartitional cells of the full group:");
    let full = array
        .rows()
        .iter()
        .flatten()
        .find(|xi| xi.group().is_full())
        .expect("full group present");
    for (partition, cell) in full.rows().iter().flatten() {
        println!("  {:<12} {}", partition.label(), cell_text(cell));
    }

    // The geometric-mean ent over bipartitions, with its minimizing cut.
    let gm = gm_ent(&psi)?;
    println!("\nGM ent of GHZ in {s}: {:.6}  (weakest cut {})", gm.value(), gm.partition().label());

    // Ensemble-normalized scalar summaries.  The normalizer evaluates the
    // vector one-norm over the catalog, the bases, and a seeded random
    // batch; members whose cells need roofs make this expensive, so the
    // quick demonstration uses a pair of qubits (every cell is direct).
    let s2 = ModeStructure::new(&[2, 2])?;
    let bell = state_from_levels(&s2, &[1, 4], None)?;
    let net = net_ent(&bell)?;
    println!("\nBell pair in {s2}:");
    println!("  net ent      : {:.6}  (normalizer {:.6}, ensemble {})",
        net.value(), net.normalizer().normalizer(), net.normalizer().ensemble());
    let abs = abs_ent(&bell)?;
    println!("  absolute ent : {:.6}  (normalizer {:.6})",
        abs.value(), abs.normalizer().normalizer());

    Ok(())
}
