//! An affine groupoid `x*y = a(x) + b(y) + c` on 2x3 binary matrices that
//! separates two 5-ary terms whose end variables sit at equal depths.

use antiassoc::demo::{affine_example_groupoid, affine_example_terms, run_demo};
use antiassoc::verify::affine::affine_separation_decision;

fn main() -> antiassoc::Result<()> {
    print!("{}", run_demo("affine-example")?);
    let g = affine_example_groupoid();
    let (s, t) = affine_example_terms();
    let decision = affine_separation_decision(&g, &s, &t);
    println!("{s} vs {t}: {}", serde_json::to_string(&decision)?);
    Ok(())
}
