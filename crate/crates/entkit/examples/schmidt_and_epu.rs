//! Schmidt decomposition, its reversal, and entanglement-preserving
//! transformations that carry catalog states onto general ones.
//!
//! Run with `cargo run --example schmidt_and_epu`.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use entkit::error::Result;
use entkit::linalg::haar_unitary;
use entkit::measure::ent;
use entkit::modes::ModeStructure;
use entkit::param::{apply_epu, reverse_schmidt, schmidt, EpuSpec, ThetaFamily};
use entkit::state::random_pure_state;
use entkit::tgx::state_from_levels;

fn main() -> Result<()> {
    let s = ModeStructure::new(&[3, 4])?;

    // Any bipartite pure state factors into Schmidt form.
    let psi = random_pure_state(&s, 17);
    let form = schmidt(&psi)?;
    println!("random state in {s}:");
    println!("  Schmidt coefficients: {:?}", form.singular_values());
    println!("  rank {} | separable {} | maximal {}",
        form.rank(1e-9), form.is_separable(), form.is_maximal());

    // Rebuilding from the factors recovers the state.
    let rebuilt = reverse_schmidt(&s, form.left(), form.singular_values(), form.right_dagger())?;
    println!("  reconstruction overlap: {:.15}", psi.overlap(&rebuilt));

    // A maximally entangled catalog state has flat coefficients.
    let me = state_from_levels(&s, &[1, 6, 11], None)?;
    let me_form = schmidt(&me)?;
    println!("\ncatalog state {:?}:", [1, 6, 11]);
    println!("  Schmidt coefficients: {:?}", me_form.singular_values());
    println!("  maximal: {}", me_form.is_maximal());

    // Entanglement-preserving transformations: local unitaries after a
    // diagonal phase gate.  On TGX-supported states the ent is untouched.
    let s22 = ModeStructure::new(&[2, 2])?;
    let family = ThetaFamily::new(s22.clone(), vec![1, 4])?;
    let mut rng = ChaCha12Rng::seed_from_u64(99);
    println!("\ntransforming the {{1,4}} family (ent before → after):");
    for k in 1..=4 {
        let theta = family.theta_max() * k as f64 / 4.0;
        let core = family.state(theta)?;
        let spec = EpuSpec::random(&s22, &mut rng);
        let moved = apply_epu(&spec, &core)?;
        println!(
            "  θ = {theta:.4}: {:.10} → {:.10}",
            ent(&core)?.ent(),
            ent(&moved)?.ent()
        );
    }

    // Local unitaries alone preserve ent on any state.
    let s223 = ModeStructure::new(&[2, 2, 3])?;
    let any = random_pure_state(&s223, 5);
    let mut rotated = any.clone();
    for (m, &n_m) in s223.modes().iter().enumerate() {
        rotated = rotated.apply_local(m + 1, &haar_unitary(n_m, &mut rng))?;
    }
    println!(
        "\nlocal rotation on a random {s223} state: {:.12} → {:.12}",
        ent(&any)?.ent(),
        ent(&rotated)?.ent()
    );

    Ok(())
}
