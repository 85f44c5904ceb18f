//! Exact separation test for affine groupoids.
//!
//! Over an affine groupoid both terms are affine maps of the joint variables,
//! so `s + t = Σ D_i·v_i + d0`. The terms agree somewhere exactly when
//! `[D_1 | … | D_r]·v = d0` is solvable; otherwise some `λ` with `λᵀD_i = 0`
//! for every `i` and `λ·d0 = 1` makes the parities of `s` and `t` always differ.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cayley::{separates_exhaustive, ExhaustiveOptions};
use crate::error::{Error, Result};
use crate::gf2::{solve, BitMatrix, BitVec, Solution};
use crate::term::{joint_vars, Term, VarId};
use crate::vector::{AffineTermForm, Register, VecGroupoid, DEFAULT_CAYLEY_BOUND};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AffineWitness {
    /// Registers whose sum always differs between the two terms.
    Parity(Vec<Register>),
    /// An assignment on which the terms agree, as bit strings in register order.
    Equalizer(Vec<(VarId, String)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineDecision {
    pub separated: bool,
    pub witness: AffineWitness,
}

/// `S + T` over the joint variables of `s` and `t`.
pub fn difference_form(g: &VecGroupoid, s: &Term, t: &Term) -> AffineTermForm {
    let vars = joint_vars(s, t);
    let fs = g.form_over(s, &vars).expect("joint variables cover s");
    let ft = g.form_over(t, &vars).expect("joint variables cover t");
    fs.add(&ft).expect("same variable list")
}

pub fn affine_separation_decision(g: &VecGroupoid, s: &Term, t: &Term) -> AffineDecision {
    let diff = difference_form(g, s, t);
    let d = g.dim();
    let blocks: Vec<&BitMatrix> = diff.coeff.iter().collect();
    let system = BitMatrix::hconcat(&blocks, d);
    match solve(&system, &diff.constant) {
        Solution::Obstructed(lambda) => {
            let registers = lambda.ones().map(|i| g.indices()[i]).collect();
            AffineDecision { separated: true, witness: AffineWitness::Parity(registers) }
        }
        Solution::Solved(v) => {
            let values: Vec<BitVec> = (0..diff.vars.len()).map(|i| v.slice(i * d, d)).collect();
            debug_assert!(diff.eval(&values).is_zero());
            let assignment = diff.vars.iter().cloned().zip(values.iter().map(bit_string)).collect();
            AffineDecision { separated: false, witness: AffineWitness::Equalizer(assignment) }
        }
    }
}

/// True when the registers in `lambda` sum to different constants on `s`
/// and `t` for every assignment.
pub fn parity_certifies(g: &VecGroupoid, lambda: &[Register], s: &Term, t: &Term) -> Result<bool> {
    let mut mask = BitVec::zeros(g.dim());
    for &r in lambda {
        let i = g.position(r).ok_or_else(|| Error::InvalidWitness(format!("register {r} is not in the groupoid")))?;
        mask.set(i, true);
    }
    let diff = difference_form(g, s, t);
    Ok(diff.coeff.iter().all(|m| m.left_mul(&mask).is_zero()) && mask.dot(&diff.constant))
}

/// Checks the affine verdict against brute force over the operation table.
/// Fails with a budget error when enumeration is out of reach.
pub fn cross_check(g: &VecGroupoid, s: &Term, t: &Term, opts: &ExhaustiveOptions) -> Result<bool> {
    let vars = joint_vars(s, t).len() as u32;
    let needed = 1u128.checked_shl(g.dim() as u32 * vars).unwrap_or(u128::MAX);
    if needed > opts.budget as u128 || g.dim() > DEFAULT_CAYLEY_BOUND {
        return Err(Error::BudgetExceeded { needed, budget: opts.budget });
    }
    let table = g.to_cayley(DEFAULT_CAYLEY_BOUND)?;
    let brute = separates_exhaustive(&table, s, t, opts)?;
    Ok(brute.separated == affine_separation_decision(g, s, t).separated)
}

/// Parses an equalizer back into vectors, for re-evaluation.
pub fn equalizer_values(assignment: &[(VarId, String)]) -> BTreeMap<VarId, BitVec> {
    assignment
        .iter()
        .map(|(v, bits)| (v.clone(), BitVec::from_bits(&bits.chars().map(|c| c == '1').collect::<Vec<_>>())))
        .collect()
}

fn bit_string(v: &BitVec) -> String {
    v.to_bits().into_iter().map(|b| if b { '1' } else { '0' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::{OpSpec, OpSum};

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn xor_groupoid_is_associative() {
        let g = VecGroupoid::affine(BitMatrix::identity(1), BitMatrix::identity(1), BitVec::zeros(1)).unwrap();
        let d = affine_separation_decision(&g, &t("(x*y)*z"), &t("x*(y*z)"));
        assert!(!d.separated);
        assert_eq!(
            d.witness,
            AffineWitness::Equalizer(vec![
                (VarId::new("x").unwrap(), "0".into()),
                (VarId::new("y").unwrap(), "0".into()),
                (VarId::new("z").unwrap(), "0".into()),
            ])
        );
    }

    #[test]
    fn cover_groupoid_separates_with_register_zero() {
        let g = VecGroupoid::compile(&OpSum::from_specs(&[OpSpec::new(1, "l", 0, false), OpSpec::new(1, "l", 1, true)]).unwrap());
        let (s, u) = (t("(x1*x2)*x3"), t("x1*(x2*x3)"));
        let d = affine_separation_decision(&g, &s, &u);
        assert_eq!(d, AffineDecision { separated: true, witness: AffineWitness::Parity(vec![Register(0)]) });
        assert!(parity_certifies(&g, &[Register(0)], &s, &u).unwrap());
        assert!(!parity_certifies(&g, &[Register(0), Register(1)], &s, &u).unwrap());
        assert!(cross_check(&g, &s, &u, &ExhaustiveOptions::default()).unwrap());
    }

    #[test]
    fn equal_terms_are_never_separated() {
        let g = VecGroupoid::compile(&OpSum::from_specs(&[OpSpec::new(1, "l", 0, true)]).unwrap());
        let s = t("x*(y*x)");
        assert!(!affine_separation_decision(&g, &s, &s).separated);
        assert!(cross_check(&g, &s, &s, &ExhaustiveOptions::default()).unwrap());
    }
}
