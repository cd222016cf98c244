//! Ent distributions over Haar-random pure states: values stay inside the
//! unit range, and their typical size grows with system dimension.
//!
//! Run with `cargo run --example haar_normalization`.

use entkit::error::Result;
use entkit::measure::ent;
use entkit::modes::{standard_structures, ModeStructure};
use entkit::state::random_pure_state;

fn sample(s: &ModeStructure, count: u64) -> Result<(f64, f64, f64, Vec<usize>)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut sum = 0.0;
    let mut bins = vec![0usize; 10];
    for k in 0..count {
        let v = ent(&random_pure_state(s, 600 + k))?.ent();
        lo = lo.min(v);
        hi = hi.max(v);
        sum += v;
        let bin = ((v * 10.0) as usize).min(9);
        bins[bin] += 1;
    }
    Ok((lo, hi, sum / count as f64, bins))
}

fn main() -> Result<()> {
    // A histogram for one structure: most Haar mass sits well above zero.
    let s = ModeStructure::new(&[2, 2, 3])?;
    let count = 500;
    let (lo, hi, mean, bins) = sample(&s, count)?;
    println!("{count} Haar draws in {s}:");
    println!("  min {lo:.6}  mean {mean:.6}  max {hi:.6}");
    for (i, n) in bins.iter().enumerate() {
        let bar: String = std::iter::repeat_n('#', n / 4).collect();
        println!("  [{:.1}, {:.1}) {n:>4} {bar}", i as f64 / 10.0, (i + 1) as f64 / 10.0);
    }

    // Range check across every structure up to dimension 12.
    println!("\nper-structure extremes over 200 draws:");
    for s in standard_structures(12) {
        let (lo, hi, mean, _) = sample(&s, 200)?;
        assert!((0.0..=1.0 + 1e-9).contains(&lo) && (0.0..=1.0 + 1e-9).contains(&hi));
        println!("  {s:<8} min {lo:.4}  mean {mean:.4}  max {hi:.4}");
    }
    println!("all values inside [0, 1 + 1e-9]");

    Ok(())
}
