//! Ordered terms on x1..xk, their Catalan counts, and where two of them
//! first disagree.

use antiassoc::term::{catalan, enumerate_ordered_terms, leftmost_disagreement};

fn main() -> antiassoc::Result<()> {
    for k in 1..=8 {
        println!("k = {k}: {} ordered terms", catalan(k as u64 - 1)?);
    }
    let terms = enumerate_ordered_terms(4)?;
    for (i, t) in terms.iter().enumerate() {
        println!("t{} = {t}", i + 1);
    }
    let d = leftmost_disagreement(&terms[0], &terms[2])?;
    println!(
        "{} vs {}: {} is the first variable placed differently ({} vs {})",
        terms[0],
        terms[2],
        d.var,
        d.path_in_s.human(),
        d.path_in_t.human()
    );
    Ok(())
}
