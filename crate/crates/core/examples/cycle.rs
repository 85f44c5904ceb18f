//! Terms with no cover, separated through a cycle of variables each placed
//! above the next one in the opposite term.

use antiassoc::demo::{figure2_terms, run_demo};
use antiassoc::synth::{find_cycle, synth_cycle, synth_cycle_untweaked};
use antiassoc::verify::affine::affine_separation_decision;
use antiassoc::vector::VecGroupoid;

fn main() -> antiassoc::Result<()> {
    let (s, t) = figure2_terms();
    let w = find_cycle(&s, &t).expect("the pair has a cycle");
    println!("i  var  p    q    f");
    for i in 0..w.k() {
        println!("{i}  {:<4} {:<4} {:<4} {}", w.entries[i].var, w.p[i].human(), w.q[i].human(), w.f[i]);
    }
    let cert = synth_cycle(&w)?;
    println!("separator: {}", cert.opsum);
    println!("verified: {}", cert.verify(&s, &t)?);
    let plain = VecGroupoid::compile(&synth_cycle_untweaked(&w)?);
    println!("without the tweak separated: {}", affine_separation_decision(&plain, &s, &t).separated);
    print!("{}", run_demo("figure2")?);
    Ok(())
}
