//! Random checks that a transfer operation copies (or flips) one component
//! of a subterm into the whole term.

use antiassoc::verify::lemma::lemma_harness;

fn main() -> antiassoc::Result<()> {
    let seed = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0);
    let report = lemma_harness(1000, seed);
    println!(
        "{} trials, {} exhaustive, {} sampled, {} assignments, {} failures",
        report.trials,
        report.exhaustive_trials,
        report.sampled_trials,
        report.assignments_checked,
        report.failures.len()
    );
    for f in &report.failures {
        println!("  {} on {} in {}", f.target, f.term, f.opsum);
    }
    Ok(())
}
