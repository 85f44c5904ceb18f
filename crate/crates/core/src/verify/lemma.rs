//! Randomized check of the two transfer facts: in any duplicate-free sum
//! containing `||m,p,n||`, every term `s` satisfies `s[n] = s_p[m]`, and
//! with the tweaked summand `s[n] = s_p[m] + 1`.
//!
//! Terms are evaluated bit-sliced, 64 assignments per machine word,
//! directly from the equations rather than the compiled matrices.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::term::{Dir, Path, Term, VarId};
use crate::vector::{BasicOp, OpSpec, OpSum, Operand, Register};

/// Instances with at most this many registers are checked on every
/// assignment, provided the assignment space stays within `EXHAUSTIVE_BITS`.
pub const EXHAUSTIVE_MAX_REGISTERS: usize = 8;
pub const EXHAUSTIVE_BITS: usize = 20;
const SAMPLED_WORDS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaFailure {
    pub opsum: OpSum,
    pub target: OpSpec,
    pub term: Term,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub trials: usize,
    pub plain_trials: usize,
    pub tweaked_trials: usize,
    pub exhaustive_trials: usize,
    pub sampled_trials: usize,
    pub assignments_checked: u64,
    pub failures: Vec<LemmaFailure>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn lemma_harness(trials: usize, seed: u64) -> LemmaReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = LemmaReport {
        trials,
        plain_trials: 0,
        tweaked_trials: 0,
        exhaustive_trials: 0,
        sampled_trials: 0,
        assignments_checked: 0,
        failures: Vec::new(),
    };
    for _ in 0..trials {
        let (sum, target, term) = random_instance(&mut rng);
        if target.tweaked {
            report.tweaked_trials += 1;
        } else {
            report.plain_trials += 1;
        }
        let eval = SlicedEval::new(&sum, &term);
        let bits = eval.registers.len() * eval.vars.len();
        let exhaustive = eval.registers.len() <= EXHAUSTIVE_MAX_REGISTERS && bits <= EXHAUSTIVE_BITS;
        let ok = if exhaustive {
            report.exhaustive_trials += 1;
            report.assignments_checked += 1u64 << bits;
            eval.check_all(&target)
        } else {
            report.sampled_trials += 1;
            report.assignments_checked += (64 * SAMPLED_WORDS) as u64;
            eval.check_sampled(&target, &mut rng)
        };
        if !ok {
            report.failures.push(LemmaFailure { opsum: sum, target: target.spec(), term });
        }
    }
    report
}

/// Checks `s[n] = s_p[m] (+1 if tweaked)` on every assignment; for a
/// single instance. `target` must be one of the summands of `sum`.
pub fn transfer_holds(sum: &OpSum, target: &BasicOp, term: &Term) -> bool {
    SlicedEval::new(sum, term).check_all(target)
}

fn random_instance(rng: &mut ChaCha8Rng) -> (OpSum, BasicOp, Term) {
    let names = ["x", "y", "z"];
    let var_count = rng.gen_range(1..=3);
    loop {
        let leaves = rng.gen_range(2..=6);
        let term = random_term(rng, leaves, &names[..var_count]);
        let paths: Vec<Path> = term.node_paths().into_iter().filter(|p| !p.is_empty()).collect();
        let p = paths.choose(rng).expect("a term with two leaves has proper subterms").clone();
        let target = OpSpec::with_path(rng.gen_range(0..4), p, rng.gen_range(0..4), rng.gen_bool(0.5));
        let mut specs = vec![target.clone()];
        for _ in 0..rng.gen_range(0..=2) {
            let len = rng.gen_range(1..=3);
            let path = Path::from_dirs((0..len).map(|_| if rng.gen_bool(0.5) { Dir::L } else { Dir::R }));
            specs.push(OpSpec::with_path(rng.gen_range(0..5), path, rng.gen_range(0..5), rng.gen_bool(0.3)));
        }
        specs.shuffle(rng);
        let Ok(sum) = OpSum::from_specs(&specs) else { continue };
        let op = sum.summands().iter().find(|op| op.spec() == target).expect("target is a summand").clone();
        return (sum, op, term);
    }
}

fn random_term(rng: &mut ChaCha8Rng, leaves: usize, names: &[&str]) -> Term {
    if leaves == 1 {
        return Term::var(names.choose(rng).expect("nonempty name list"));
    }
    let left = rng.gen_range(1..leaves);
    Term::op(random_term(rng, left, names), random_term(rng, leaves - left, names))
}

/// Evaluation of one term over 64 assignments at a time. A value is one
/// word per register position; bit `j` of the word belongs to assignment `j`.
struct SlicedEval<'a> {
    registers: Vec<Register>,
    vars: Vec<VarId>,
    /// (target, reads x, source, constant) by register position.
    equations: Vec<(usize, bool, usize, bool)>,
    term: &'a Term,
}

const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl<'a> SlicedEval<'a> {
    fn new(sum: &OpSum, term: &'a Term) -> Self {
        let registers = sum.registers();
        let pos = |r: Register| registers.binary_search(&r).expect("register of the sum");
        let equations = sum
            .equations()
            .into_iter()
            .map(|eq| (pos(eq.target), eq.operand == Operand::X, pos(eq.source), eq.constant))
            .collect();
        SlicedEval { registers, vars: term.vars(), equations, term }
    }

    fn apply(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let mut z = vec![0u64; self.registers.len()];
        for &(target, reads_x, source, constant) in &self.equations {
            let word = if reads_x { x[source] } else { y[source] };
            z[target] = if constant { !word } else { word };
        }
        z
    }

    fn eval(&self, t: &Term, env: &[Vec<u64>]) -> Vec<u64> {
        match t {
            Term::Var(v) => env[self.vars.iter().position(|w| w == v).expect("variable of the term")].clone(),
            Term::Op(l, r) => self.apply(&self.eval(l, env), &self.eval(r, env)),
        }
    }

    fn check_words(&self, target: &BasicOp, env: &[Vec<u64>], mask: u64) -> bool {
        let sub = self.term.subterm_at(&target.p).expect("target path lies in the term");
        let whole = self.eval(self.term, env);
        let inner = self.eval(sub, env);
        let pos = |r: Register| self.registers.binary_search(&r).expect("register of the sum");
        let expected = if target.tweaked { !inner[pos(target.m)] } else { inner[pos(target.m)] };
        (whole[pos(target.n)] ^ expected) & mask == 0
    }

    /// Assignment number `a` gives bit `i` of its code to variable
    /// `i / d`, register position `i % d`.
    fn check_all(&self, target: &BasicOp) -> bool {
        let d = self.registers.len();
        let bits = d * self.vars.len();
        let mask = if bits >= 6 { u64::MAX } else { (1u64 << (1 << bits)) - 1 };
        let words = if bits >= 6 { 1u64 << (bits - 6) } else { 1 };
        (0..words).all(|w| {
            let env: Vec<Vec<u64>> = (0..self.vars.len())
                .map(|v| {
                    (0..d)
                        .map(|r| {
                            let i = v * d + r;
                            if i < 6 {
                                LANE_PATTERNS[i]
                            } else if (w >> (i - 6)) & 1 == 1 {
                                u64::MAX
                            } else {
                                0
                            }
                        })
                        .collect()
                })
                .collect();
            self.check_words(target, &env, mask)
        })
    }

    fn check_sampled(&self, target: &BasicOp, rng: &mut ChaCha8Rng) -> bool {
        let d = self.registers.len();
        (0..SAMPLED_WORDS).all(|_| {
            let env: Vec<Vec<u64>> = (0..self.vars.len()).map(|_| (0..d).map(|_| rng.gen()).collect()).collect();
            self.check_words(target, &env, u64::MAX)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitVec;
    use crate::vector::VecGroupoid;
    use std::collections::BTreeMap;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn two_step_transfer_reads_the_middle_leaf() {
        for tweaked in [false, true] {
            let sum = OpSum::from_specs(&[OpSpec::new(2, "lr", 0, tweaked)]).unwrap();
            let op = sum.summands()[0].clone();
            let s = t("(u*v)*w");
            assert!(transfer_holds(&sum, &op, &s));

            let g = VecGroupoid::compile(&sum);
            let d = g.dim();
            let mut env = BTreeMap::new();
            for (i, name) in ["u", "v", "w"].iter().enumerate() {
                env.insert(VarId::new(name).unwrap(), BitVec::from_u64(0b101 ^ i as u64, d));
            }
            let out = g.eval_term(&s, &env).unwrap();
            let v = &env[&VarId::new("v").unwrap()];
            assert_eq!(out.get(0), v.get(g.position(Register(2)).unwrap()) ^ tweaked);
        }
    }

    #[test]
    fn single_step_is_a_copy() {
        let sum = OpSum::from_specs(&[OpSpec::new(1, "l", 3, false)]).unwrap();
        assert!(transfer_holds(&sum, &sum.summands()[0], &t("x*y")));
    }

    #[test]
    fn wrong_constant_is_caught() {
        let sum = OpSum::from_specs(&[OpSpec::new(0, "r", 1, true)]).unwrap();
        let mut flipped = sum.summands()[0].clone();
        flipped.tweaked = false;
        assert!(!transfer_holds(&sum, &flipped, &t("x*(y*x)")));
    }

    #[test]
    fn harness_is_clean_and_mostly_exhaustive() {
        let r = lemma_harness(300, 7);
        assert!(r.passed(), "{:?}", r.failures.first());
        assert!(r.plain_trials > 0 && r.tweaked_trials > 0);
        assert!(r.exhaustive_trials > r.sampled_trials);
        assert_eq!(lemma_harness(300, 7), r);
    }
}
