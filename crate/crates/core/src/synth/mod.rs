//! Building explicit affine groupoids that separate two terms.

mod antiassoc;
mod cover;
mod cycle;
mod search;

use serde::{Deserialize, Serialize};

pub use antiassoc::{build_k_antiassociative, disagreement_cover, AntiassocBuild, PairCertificate, DEFAULT_MAX_PAIRS};
pub use cover::{find_cover_pair, synth_cover, CoverWitness};
pub use cycle::{find_cycle, synth_cycle, synth_cycle_untweaked, CycleEntry, CycleWitness};
pub use search::{search_separator, SearchOptions, SearchOutcome, DEFAULT_SEARCH_BUDGET};

use crate::error::Result;
use crate::term::Term;
use crate::unify::{unify, Substitution, UnifyResult};
use crate::vector::{OpSum, Register, VecGroupoid};
use crate::verify::affine::parity_certifies;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    Cover,
    Cycle,
    Search,
}

/// A separating groupoid with its parity functional: the registers in
/// `lambda` sum to different values on the two terms under every assignment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub construction: Construction,
    pub opsum: OpSum,
    pub groupoid: VecGroupoid,
    pub lambda: Vec<Register>,
}

impl Certificate {
    pub(crate) fn new(construction: Construction, opsum: OpSum, lambda: Vec<Register>) -> Self {
        let groupoid = VecGroupoid::compile(&opsum);
        Certificate { construction, opsum, groupoid, lambda }
    }

    /// Re-derives the parity claim from the compiled groupoid.
    pub fn verify(&self, s: &Term, t: &Term) -> Result<bool> {
        if self.groupoid != VecGroupoid::compile(&self.opsum) {
            return Ok(false);
        }
        parity_certifies(&self.groupoid, &self.lambda, s, t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum FiniteVerdict {
    /// The terms unify, so no groupoid separates them.
    NotSeparable { unifier: Substitution },
    Separated {
        #[serde(flatten)]
        certificate: Certificate,
    },
    /// The search budget ran out before a separator was found.
    Unknown { candidates_tried: u64 },
}

/// Unification first, then the cover construction, the cycle construction,
/// and finally the bounded search.
pub fn decide_finite_separability(s: &Term, t: &Term, search: &SearchOptions) -> Result<FiniteVerdict> {
    if let UnifyResult::Unifier { bindings } = unify(s, t).result {
        return Ok(FiniteVerdict::NotSeparable { unifier: bindings });
    }
    let certificate = if let Some(w) = find_cover_pair(s, t) {
        synth_cover(&w)?
    } else if let Some(w) = find_cycle(s, t) {
        synth_cycle(&w)?
    } else {
        match search_separator(s, t, search)? {
            SearchOutcome::Found { certificate, .. } => certificate,
            SearchOutcome::Unknown { candidates_tried } => return Ok(FiniteVerdict::Unknown { candidates_tried }),
        }
    };
    assert!(certificate.verify(s, t)?, "synthesized certificate must check");
    Ok(FiniteVerdict::Separated { certificate })
}
