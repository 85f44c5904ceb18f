//! Separating terms in which one variable occurrence lies strictly below
//! another occurrence of the same variable in the other term.

use serde::{Deserialize, Serialize};

use super::{Certificate, Construction};
use crate::error::{Error, Result};
use crate::term::{occurrences_of_pair, OccurrenceRef, Path, Term, VarId};
use crate::vector::{OpSpec, OpSum, Register};

/// `shallow.path` is a proper prefix of `deep.path`; the two occurrences
/// of `var` sit in different terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverWitness {
    pub var: VarId,
    pub shallow: OccurrenceRef,
    pub deep: OccurrenceRef,
}

impl CoverWitness {
    pub fn q(&self) -> &Path {
        &self.shallow.path
    }

    pub fn p(&self) -> &Path {
        &self.deep.path
    }

    /// The nonempty remainder `w` with `p = q·w`.
    pub fn w(&self) -> Path {
        self.deep.path.strip_prefix(&self.shallow.path).expect("q is a prefix of p")
    }

    pub fn validate(&self, s: &Term, t: &Term) -> Result<()> {
        self.shallow.validate(s, t)?;
        self.deep.validate(s, t)?;
        let ok = self.shallow.var == self.var
            && self.deep.var == self.var
            && self.shallow.side != self.deep.side
            && self.shallow.path.is_proper_prefix_of(&self.deep.path);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidWitness(format!("not a cover of {}", self.var)))
        }
    }
}

/// The least cover by (variable name, |q|, q, |p|, p, side of the shallow
/// occurrence).
pub fn find_cover_pair(s: &Term, t: &Term) -> Option<CoverWitness> {
    let occ = occurrences_of_pair(s, t);
    let mut best: Option<CoverWitness> = None;
    for shallow in &occ {
        for deep in &occ {
            if shallow.side == deep.side || shallow.var != deep.var || !shallow.path.is_proper_prefix_of(&deep.path) {
                continue;
            }
            let key = |w: &CoverWitness| {
                (w.var.clone(), w.q().len(), w.q().clone(), w.p().len(), w.p().clone(), w.shallow.side)
            };
            let cand = CoverWitness { var: shallow.var.clone(), shallow: shallow.clone(), deep: deep.clone() };
            if best.as_ref().is_none_or(|b| key(&cand) < key(b)) {
                best = Some(cand);
            }
        }
    }
    best
}

/// `||1,q,0|| + ||1,w,1||'`, certified by register 0. When `q` is the root
/// (one term is the bare variable) the first summand is dropped and register
/// 1 carries the certificate.
pub fn synth_cover(w: &CoverWitness) -> Result<Certificate> {
    if !w.shallow.path.is_proper_prefix_of(&w.deep.path) {
        return Err(Error::InvalidWitness("shallow path must properly prefix the deep path".into()));
    }
    let tail = OpSpec { m: Register(1), p: w.w(), n: Register(1), tweaked: true };
    if w.q().is_empty() {
        let opsum = OpSum::from_specs(&[tail])?;
        return Ok(Certificate::new(Construction::Cover, opsum, vec![Register(1)]));
    }
    let head = OpSpec { m: Register(1), p: w.q().clone(), n: Register(0), tweaked: false };
    let opsum = OpSum::from_specs(&[head, tail])?;
    Ok(Certificate::new(Construction::Cover, opsum, vec![Register(0)]))
}
