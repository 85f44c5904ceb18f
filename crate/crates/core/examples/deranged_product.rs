//! Two deranged groupoids, on Z2 reading the left operand and on Z3 reading
//! the right one, and their product, which separates all 4-ary ordered terms.

use antiassoc::cayley::{is_k_antiassociative, CayleyGroupoid, DerangedSide, ExhaustiveOptions};
use antiassoc::demo::run_demo;

fn main() -> antiassoc::Result<()> {
    let z2 = CayleyGroupoid::deranged(2, &[1, 0], DerangedSide::Left)?;
    let z3 = CayleyGroupoid::deranged(3, &[1, 2, 0], DerangedSide::Right)?;
    let product = z2.product(&z3)?;
    let opts = ExhaustiveOptions::default();
    for (name, g) in [("Z2", &z2), ("Z3", &z3), ("Z2 x Z3", &product)] {
        let report = is_k_antiassociative(g, 4, &opts)?;
        match report.failure {
            None => println!("{name}: 4-antiassociative ({} pairs)", report.pairs_checked),
            Some(f) => println!("{name}: {} and {} agree at {:?}", f.s, f.t, f.counterexample),
        }
    }
    print!("{}", run_demo("deranged-product")?);
    Ok(())
}
