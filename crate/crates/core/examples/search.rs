//! The full decision pipeline: unification, then the cover and cycle
//! constructions, then a bounded search over sums of transfer operations.
//!
//! `cargo run --release --example search -- "(x*y)*(z*y)" "z*((y*y)*(x*x))"`

use antiassoc::synth::{decide_finite_separability, search_separator, SearchOptions, SearchOutcome};
use antiassoc::term::Term;
use antiassoc::vector::OpSpec;

fn main() -> antiassoc::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (s, t) = match args.as_slice() {
        [s, t, ..] => (s.as_str(), t.as_str()),
        _ => ("(x*y)*(z*y)", "z*((y*y)*(x*x))"),
    };
    let (s, t): (Term, Term) = (s.parse()?, t.parse()?);
    let verdict = decide_finite_separability(&s, &t, &SearchOptions::default())?;
    println!("{}", serde_json::to_string_pretty(&verdict)?);

    let seeded = SearchOptions {
        seeds: vec![vec![
            OpSpec::new(3, "l", 0, false),
            OpSpec::new(3, "rl", 1, false),
            OpSpec::new(4, "rr", 2, false),
            OpSpec::new(4, "l", 3, false),
            OpSpec::new(4, "l", 4, true),
        ]],
        ..SearchOptions::default()
    };
    if let SearchOutcome::Found { certificate, seeded, .. } = search_separator(&s, &t, &seeded)? {
        println!(
            "seeded: {seeded}, operation {}, parity registers {:?}",
            certificate.opsum, certificate.lambda
        );
    }
    Ok(())
}
