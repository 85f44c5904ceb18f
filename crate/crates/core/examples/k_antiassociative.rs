//! A single finite groupoid separating every pair of ordered terms on
//! x1..xk, as a direct sum of one small separator per pair.
//!
//! `cargo run --release --example k_antiassociative -- 5`

use antiassoc::cayley::ExhaustiveOptions;
use antiassoc::cli::verify_build;
use antiassoc::synth::{build_k_antiassociative, DEFAULT_MAX_PAIRS};

fn main() -> antiassoc::Result<()> {
    let k: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    let build = build_k_antiassociative(k, DEFAULT_MAX_PAIRS)?;
    println!("k = {k}: {} pairs, {} registers", build.pairs.len(), build.groupoid.dim());
    for p in build.pairs.iter().take(5) {
        println!("  {}  vs  {}  by  {}", p.s, p.t, p.certificate.opsum);
    }
    let check = verify_build(&build, &ExhaustiveOptions::default())?;
    let brute = check.pairs.iter().filter(|p| p.exhaustive_factor == Some(true)).count();
    println!("all certificates pass: {} ({brute} also by brute force)", check.all_passed);
    Ok(())
}
