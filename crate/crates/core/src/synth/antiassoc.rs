//! Groupoids separating every pair of ordered terms of a given arity, as a
//! direct sum of one cover groupoid per pair.

use serde::{Deserialize, Serialize};

use super::{synth_cover, Certificate, CoverWitness};
use crate::error::{Error, Result};
use crate::term::{catalan, enumerate_ordered_terms, leftmost_disagreement, OccurrenceRef, Term, TermSide};
use crate::vector::VecGroupoid;

/// Default cap on the number of term pairs one build may handle.
pub const DEFAULT_MAX_PAIRS: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCertificate {
    pub s: Term,
    pub t: Term,
    pub cover: CoverWitness,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntiassocBuild {
    pub k: usize,
    pub groupoid: VecGroupoid,
    pub pairs: Vec<PairCertificate>,
}

impl AntiassocBuild {
    /// Indices of pairs whose own certificate fails.
    pub fn failing_pairs(&self) -> Result<Vec<usize>> {
        let mut bad = Vec::new();
        for (i, pc) in self.pairs.iter().enumerate() {
            pc.cover.validate(&pc.s, &pc.t)?;
            if !pc.certificate.verify(&pc.s, &pc.t)? {
                bad.push(i);
            }
        }
        Ok(bad)
    }
}

/// The cover that the leftmost disagreement of two distinct ordered terms
/// provides: the earlier of the two paths is a proper prefix of the other.
pub fn disagreement_cover(s: &Term, t: &Term) -> Result<CoverWitness> {
    let d = leftmost_disagreement(s, t)?;
    if !d.is_nested() {
        return Err(Error::InvalidWitness(format!(
            "{} sits at unrelated paths {} and {}",
            d.var,
            d.path_in_s.human(),
            d.path_in_t.human()
        )));
    }
    let in_s = OccurrenceRef { side: TermSide::S, path: d.path_in_s.clone(), var: d.var.clone() };
    let in_t = OccurrenceRef { side: TermSide::T, path: d.path_in_t.clone(), var: d.var.clone() };
    let (shallow, deep) = if d.path_in_s.len() < d.path_in_t.len() { (in_s, in_t) } else { (in_t, in_s) };
    Ok(CoverWitness { var: d.var, shallow, deep })
}

pub fn build_k_antiassociative(k: usize, max_pairs: u64) -> Result<AntiassocBuild> {
    if k < 3 {
        return Err(Error::Usage(format!("k must be at least 3, got {k}")));
    }
    let terms_count = catalan(k as u64 - 1)? as u128;
    let pairs = terms_count * (terms_count - 1) / 2;
    if pairs > max_pairs as u128 {
        return Err(Error::BudgetExceeded { needed: pairs, budget: max_pairs });
    }
    let terms = enumerate_ordered_terms(k)?;
    let mut out = Vec::with_capacity(pairs as usize);
    let mut groupoid: Option<VecGroupoid> = None;
    for (i, s) in terms.iter().enumerate() {
        for t in &terms[i + 1..] {
            let cover = disagreement_cover(s, t)?;
            let certificate = synth_cover(&cover)?;
            groupoid = Some(match groupoid {
                None => certificate.groupoid.clone(),
                Some(g) => g.direct_sum(&certificate.groupoid),
            });
            out.push(PairCertificate { s: s.clone(), t: t.clone(), cover, certificate });
        }
    }
    Ok(AntiassocBuild { k, groupoid: groupoid.expect("k >= 3 gives at least one pair"), pairs: out })
}
