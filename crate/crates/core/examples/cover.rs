//! A variable occurring shallow in one term and deeper in the other yields
//! a two-summand separator.

use antiassoc::cayley::{is_k_antiassociative, ExhaustiveOptions};
use antiassoc::synth::{find_cover_pair, synth_cover};
use antiassoc::term::Term;
use antiassoc::vector::DEFAULT_CAYLEY_BOUND;

fn main() -> antiassoc::Result<()> {
    let s: Term = "(x1*x2)*x3".parse()?;
    let t: Term = "x1*(x2*x3)".parse()?;
    let w = find_cover_pair(&s, &t).expect("x1 covers");
    println!("{}: shallow at {}, deep at {}", w.var, w.shallow.path.human(), w.deep.path.human());
    let cert = synth_cover(&w)?;
    println!("operation {} with parity registers {:?}", cert.opsum, cert.lambda);
    println!("matrices {}", serde_json::to_string(&cert.groupoid)?);
    let table = cert.groupoid.to_cayley(DEFAULT_CAYLEY_BOUND)?;
    print!("{}", table.to_csv());
    let report = is_k_antiassociative(&table, 3, &ExhaustiveOptions::default())?;
    println!("3-antiassociative: {}", report.antiassociative);
    Ok(())
}
