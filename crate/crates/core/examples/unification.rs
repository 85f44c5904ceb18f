//! Unification with a full rule trace. A unifier means no groupoid can
//! separate the terms; failure means some finite one does.

use antiassoc::term::Term;
use antiassoc::unify::{decide_abstract_separability, unify};

fn main() -> antiassoc::Result<()> {
    let pairs = [
        ("(x*y)*(z*y)", "z*((x*y)*(x*x))"),
        ("(x*y)*(z*w)", "((w*u)*x)*((y*v)*z)"),
        ("(x*y)*(z*y)", "z*((y*y)*(x*x))"),
        ("x*y", "y*x"),
    ];
    for (s, t) in pairs {
        let (s, t): (Term, Term) = (s.parse()?, t.parse()?);
        println!("{s}  =?  {t}");
        let outcome = unify(&s, &t);
        for step in &outcome.trace {
            println!("  {:?}: {}", step.rule, step.consumed);
        }
        if let Some(sigma) = outcome.unifier() {
            println!("  both sides become {}", sigma.apply(&s));
        }
        println!("  {}", serde_json::to_string(&decide_abstract_separability(&s, &t))?);
    }
    Ok(())
}
