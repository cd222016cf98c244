//! Rank-2 convex roofs: the mixed-state extension of the measure, found by
//! searching decompositions of a rank-2 density matrix.
//!
//! Run with `cargo run --example convex_roof`.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use entkit::error::Result;
use entkit::measure::ent;
use entkit::modes::ModeStructure;
use entkit::roof::{ent_roof, gm_roof};
use entkit::state::{random_pure_state_with_rng, DensityMatrix, StateVector};
use entkit::tgx::state_from_levels;

fn main() -> Result<()> {
    let s = ModeStructure::new(&[2, 2])?;

    // An even mixture of two Bell states: every decomposition member is
    // entangled, and the roof stays high.
    let phi_plus = state_from_levels(&s, &[1, 4], None)?;
    let psi_plus = state_from_levels(&s, &[2, 3], None)?;
    let bell_mix = DensityMatrix::mixture(&[(0.5, phi_plus.clone()), (0.5, psi_plus)])?;
    let roof = ent_roof(&bell_mix, (60, 60))?;
    let (theta, chi) = roof.argmin();
    println!("even Bell mixture:");
    println!("  roof minimum  : {:.10}", roof.minimum());
    println!("  argmin (θ, χ) : ({theta:.6}, {chi:.6})");

    // A mixture of two product states is separable: the optimizer finds a
    // decomposition of (numerically) unentangled members.
    let e1 = StateVector::new(s.clone(), basis(4, 0))?;
    let e2 = StateVector::new(s.clone(), basis(4, 3))?;
    let separable = DensityMatrix::mixture(&[(0.5, e1), (0.5, e2)])?;
    let roof = ent_roof(&separable, (60, 60))?;
    println!("\nmixture of |1,1⟩ and |2,2⟩:");
    println!("  roof minimum  : {:.3e}", roof.minimum());

    // A rank-1 projector has a single decomposition: the pure value.
    let pure = random_pure_state_with_rng(&s, &mut ChaCha12Rng::seed_from_u64(8));
    let pure_value = ent(&pure)?.ent();
    let projector = DensityMatrix::mixture(&[(1.0, pure)])?;
    let roof = ent_roof(&projector, (30, 30))?;
    println!("\nrank-1 projector:");
    println!("  pure value    : {pure_value:.12}");
    println!("  roof minimum  : {:.12}", roof.minimum());

    // The same machinery extends the geometric-mean ent to rank-2 mixtures
    // of multipartite states.
    let s222 = ModeStructure::new(&[2, 2, 2])?;
    let mut rng = ChaCha12Rng::seed_from_u64(3);
    let a = random_pure_state_with_rng(&s222, &mut rng);
    let b = random_pure_state_with_rng(&s222, &mut rng);
    let rho = DensityMatrix::mixture(&[(0.5, a), (0.5, b)])?;
    let roof = gm_roof(&rho, (30, 30))?;
    println!("\nGM-ent roof of a random rank-2 three-qubit state:");
    println!("  minimum       : {:.10}", roof.minimum());
    println!("  grid argmin   : {:?}", roof.grid_argmin());

    Ok(())
}

/// Computational basis vector `k` (0-based) in dimension `n`.
fn basis(n: usize, k: usize) -> Vec<num_complex::Complex64> {
    (0..n)
        .map(|i| num_complex::Complex64::new(f64::from(i == k), 0.0))
        .collect()
}
