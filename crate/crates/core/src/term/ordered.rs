//! Ordered terms: each of `x1..xk` exactly once, in index order.

use super::{Path, Term, VarId};
use crate::error::{Error, Result};

/// Largest arity [`enumerate_ordered_terms`] will materialize
/// (`catalan(13) = 742_900` terms).
pub const MAX_ENUMERATION_ARITY: usize = 14;

/// The `m`-th Catalan number `(2m)! / (m! (m+1)!)`.
pub fn catalan(m: u64) -> Result<u64> {
    let mut c: u128 = 1;
    for i in 0..m {
        // C(i+1) = C(i) * 2(2i+1) / (i+2), exact at every step.
        c = c * (2 * (2 * i as u128 + 1)) / (i as u128 + 2);
        if c > u64::MAX as u128 {
            return Err(Error::Overflow(m));
        }
    }
    Ok(c as u64)
}

/// All ordered terms on `x1..xk`. Order: by arity of the right operand,
/// ascending, recursively; for `k = 4` this is
/// `((x1*x2)*x3)*x4, (x1*(x2*x3))*x4, (x1*x2)*(x3*x4), x1*((x2*x3)*x4), x1*(x2*(x3*x4))`.
pub fn enumerate_ordered_terms(k: usize) -> Result<Vec<Term>> {
    if k == 0 {
        return Err(Error::Usage("ordered terms need at least one variable".into()));
    }
    if k > MAX_ENUMERATION_ARITY {
        return Err(Error::ResourceBound(format!(
            "k = {k} exceeds the enumeration bound {MAX_ENUMERATION_ARITY}"
        )));
    }
    Ok(ordered_on(1, k))
}

fn ordered_on(first: usize, k: usize) -> Vec<Term> {
    if k == 1 {
        return vec![Term::Var(VarId::indexed(first))];
    }
    let mut out = Vec::new();
    for right_arity in 1..k {
        let left_arity = k - right_arity;
        let lefts = ordered_on(first, left_arity);
        let rights = ordered_on(first + left_arity, right_arity);
        for l in &lefts {
            for r in &rights {
                out.push(Term::op(l.clone(), r.clone()));
            }
        }
    }
    out
}

/// `Some(k)` when the leaves of `t` read `x1, x2, .., xk`.
pub fn ordered_arity(t: &Term) -> Option<usize> {
    let occ = t.occurrences();
    occ.iter()
        .enumerate()
        .all(|(i, (_, v))| *v == VarId::indexed(i + 1))
        .then_some(occ.len())
}

/// Where two distinct ordered terms first place a variable differently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    /// 1-based index `m` of the variable `x_m`.
    pub index: usize,
    pub var: VarId,
    pub path_in_s: Path,
    pub path_in_t: Path,
}

impl Disagreement {
    /// True when one of the two paths properly extends the other.
    pub fn is_nested(&self) -> bool {
        self.path_in_s.is_proper_prefix_of(&self.path_in_t)
            || self.path_in_t.is_proper_prefix_of(&self.path_in_s)
    }
}

/// The leftmost variable whose path differs between two distinct ordered
/// terms on the same variables.
pub fn leftmost_disagreement(s: &Term, t: &Term) -> Result<Disagreement> {
    let ks = ordered_arity(s).ok_or_else(|| Error::NotOrdered(s.to_string()))?;
    let kt = ordered_arity(t).ok_or_else(|| Error::NotOrdered(t.to_string()))?;
    if ks != kt {
        return Err(Error::NotOrdered(format!("`{s}` has {ks} variables, `{t}` has {kt}")));
    }
    if s == t {
        return Err(Error::NotOrdered(format!("`{s}` and `{t}` are the same term")));
    }
    let (os, ot) = (s.occurrences(), t.occurrences());
    let (i, ((ps, var), (pt, _))) = os
        .into_iter()
        .zip(ot)
        .enumerate()
        .find(|(_, ((ps, _), (pt, _)))| ps != pt)
        .expect("distinct ordered terms on the same variables differ at some leaf");
    Ok(Disagreement { index: i + 1, var, path_in_s: ps, path_in_t: pt })
}
