//! Separating terms whose variables form a cycle of the "above" relation.
//!
//! An occurrence in one term is above an occurrence in the other when its
//! path is a prefix of the other's path, and strictly above when the prefix
//! is proper. A cycle visits distinct variables `y0 .. y(k-1)`, where an
//! occurrence of each `y_i` is above an occurrence of `y(i+1)`, with at
//! least one strict step.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Certificate, Construction};
use crate::error::{Error, Result};
use crate::term::{occurrences_of_pair, OccurrenceRef, Path, Term, VarId};
use crate::vector::{OpSpec, OpSum, Register};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleEntry {
    pub var: VarId,
    /// The occurrence above the next variable; its path is `p_i`.
    pub up: OccurrenceRef,
    /// The occurrence below the previous variable; its path is `p_(i-1)·q_(i-1)`.
    pub down: OccurrenceRef,
}

/// A cycle rotated so that the step from entry 0 to entry 1 is strict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleWitness {
    pub entries: Vec<CycleEntry>,
    pub p: Vec<Path>,
    pub q: Vec<Path>,
    /// Least index of each run of indices joined through empty `q`.
    pub f: Vec<usize>,
}

impl CycleWitness {
    pub fn new(entries: Vec<CycleEntry>) -> Result<Self> {
        let k = entries.len();
        if k < 2 {
            return Err(Error::InvalidWitness("a cycle needs at least two variables".into()));
        }
        let p: Vec<Path> = entries.iter().map(|e| e.up.path.clone()).collect();
        let q = (0..k)
            .map(|i| {
                entries[(i + 1) % k].down.path.strip_prefix(&p[i]).ok_or_else(|| {
                    Error::InvalidWitness(format!("step {i} of the cycle does not go downwards"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let f = run_leaders(&q);
        let w = CycleWitness { entries, p, q, f };
        w.check_shape()?;
        Ok(w)
    }

    pub fn k(&self) -> usize {
        self.entries.len()
    }

    /// Indices whose step is strict.
    pub fn strict_steps(&self) -> Vec<usize> {
        (0..self.k()).filter(|&i| !self.q[i].is_empty()).collect()
    }

    fn check_shape(&self) -> Result<()> {
        let k = self.k();
        let bad = |msg: String| Err(Error::InvalidWitness(msg));
        if self.q[0].is_empty() {
            return bad("the first step must be strict".into());
        }
        let vars: BTreeSet<&VarId> = self.entries.iter().map(|e| &e.var).collect();
        if vars.len() != k {
            return bad("cycle variables must be distinct".into());
        }
        for (i, e) in self.entries.iter().enumerate() {
            if e.up.var != e.var || e.down.var != e.var {
                return bad(format!("entry {i} mixes variables"));
            }
            let next = &self.entries[(i + 1) % k];
            if e.up.side == next.down.side {
                return bad(format!("step {i} stays inside one term"));
            }
        }
        for i in 0..k {
            for j in 0..k {
                if i != j && self.p[i].is_prefix_of(&self.p[j]) {
                    return bad(format!("p{i} = {} is a prefix of p{j} = {}", self.p[i].human(), self.p[j].human()));
                }
            }
        }
        Ok(())
    }

    /// Also checks that every occurrence exists in `s` and `t`.
    pub fn validate(&self, s: &Term, t: &Term) -> Result<()> {
        for e in &self.entries {
            e.up.validate(s, t)?;
            e.down.validate(s, t)?;
        }
        self.check_shape()
    }
}

fn run_leaders(q: &[Path]) -> Vec<usize> {
    let k = q.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (i, qi) in q.iter().enumerate() {
        if qi.is_empty() {
            let (a, b) = (root(&mut parent, i), root(&mut parent, (i + 1) % k));
            // keep the smaller index as the root so it is the class minimum
            let (lo, hi) = (a.min(b), a.max(b));
            parent[hi] = lo;
        }
    }
    (0..k).map(|i| root(&mut parent, i)).collect()
}

type StepPairs = Vec<(OccurrenceRef, OccurrenceRef, bool)>;

/// A shortest cycle of length at least 2 containing a strict step. Strict
/// steps are tried in (from, to) name order; the way back is a breadth-first
/// search visiting neighbours in name order.
pub fn find_cycle(s: &Term, t: &Term) -> Option<CycleWitness> {
    let occ = occurrences_of_pair(s, t);
    let mut steps: BTreeMap<(VarId, VarId), StepPairs> = BTreeMap::new();
    for a in &occ {
        for b in &occ {
            if a.side != b.side && a.var != b.var && a.path.is_prefix_of(&b.path) {
                let strict = a.path != b.path;
                steps.entry((a.var.clone(), b.var.clone())).or_default().push((a.clone(), b.clone(), strict));
            }
        }
    }
    for pairs in steps.values_mut() {
        pairs.sort();
    }
    let mut adjacency: BTreeMap<&VarId, Vec<&VarId>> = BTreeMap::new();
    for (u, v) in steps.keys() {
        adjacency.entry(u).or_default().push(v);
    }

    let mut best: Option<Vec<VarId>> = None;
    for ((u, v), pairs) in &steps {
        if !pairs.iter().any(|p| p.2) {
            continue;
        }
        let Some(back) = shortest_path(&adjacency, v, u) else { continue };
        if best.as_ref().is_none_or(|b| back.len() < b.len()) {
            let mut cycle = vec![u.clone()];
            cycle.extend(back.into_iter().take_while(|w| w != u));
            best = Some(cycle);
        }
    }
    let cycle = best?;
    let k = cycle.len();
    let mut ups = Vec::with_capacity(k);
    let mut downs = vec![None; k];
    for i in 0..k {
        let pairs = &steps[&(cycle[i].clone(), cycle[(i + 1) % k].clone())];
        let (a, b, _) = if i == 0 { pairs.iter().find(|p| p.2) } else { pairs.first() }.expect("edge has a pair");
        ups.push(a.clone());
        downs[(i + 1) % k] = Some(b.clone());
    }
    let entries = cycle
        .into_iter()
        .zip(ups.into_iter().zip(downs))
        .map(|(var, (up, down))| CycleEntry { var, up, down: down.expect("every entry has a predecessor") })
        .collect();
    CycleWitness::new(entries).ok()
}

/// Vertices from `from` to `to` inclusive.
fn shortest_path(adjacency: &BTreeMap<&VarId, Vec<&VarId>>, from: &VarId, to: &VarId) -> Option<Vec<VarId>> {
    let mut prev: BTreeMap<&VarId, &VarId> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = BTreeSet::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            let mut path = vec![x.clone()];
            let mut cur = x;
            while let Some(&p) = prev.get(cur) {
                path.push(p.clone());
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &y in adjacency.get(x).map(Vec::as_slice).unwrap_or_default() {
            if seen.insert(y) {
                prev.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    None
}

fn cycle_specs(w: &CycleWitness, tweak: bool) -> Vec<OpSpec> {
    let k = w.k();
    let reg = |i: usize| Register((k + w.f[i % k]) as u32);
    let mut specs: Vec<OpSpec> = (0..k)
        .map(|i| OpSpec { m: reg(i), p: w.p[i].clone(), n: Register(i as u32), tweaked: false })
        .collect();
    specs.push(OpSpec { m: reg(1), p: w.q[0].clone(), n: reg(0), tweaked: tweak });
    for i in w.strict_steps().into_iter().filter(|&i| i != 0) {
        specs.push(OpSpec { m: reg(i + 1), p: w.q[i].clone(), n: reg(i), tweaked: false });
    }
    specs
}

/// Routes each `y_i` into register `i` of both terms, so that the sums of
/// registers `0..k` agree; tweaking the step out of `y0` flips one side.
pub fn synth_cycle(w: &CycleWitness) -> Result<Certificate> {
    w.check_shape()?;
    let opsum = OpSum::from_specs(&cycle_specs(w, true))?;
    let lambda = (0..w.k() as u32).map(Register).collect();
    Ok(Certificate::new(Construction::Cycle, opsum, lambda))
}

/// The same operation without the tweak, under which both register sums
/// coincide.
pub fn synth_cycle_untweaked(w: &CycleWitness) -> Result<OpSum> {
    w.check_shape()?;
    OpSum::from_specs(&cycle_specs(w, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    fn columns(w: &CycleWitness) -> Vec<(String, String, String)> {
        (0..w.k()).map(|i| (w.entries[i].var.to_string(), w.p[i].to_string(), w.q[i].to_string())).collect()
    }

    #[test]
    fn three_cycle() {
        let (s, u) = (t("(y0*y1)*(z0*(z1*y0))"), t("((z2*y1)*y2)*(z3*y2)"));
        let w = find_cycle(&s, &u).unwrap();
        w.validate(&s, &u).unwrap();
        assert_eq!(
            columns(&w),
            [("y0".into(), "ll".into(), "r".into()), ("y1".into(), "lr".into(), "".into()), ("y2".into(), "rr".into(), "r".into())]
        );
        assert_eq!(w.f, [0, 1, 1]);
        let cert = synth_cycle(&w).unwrap();
        assert_eq!(cert.opsum.to_string(), "||3,ll,0|| + ||4,lr,1|| + ||4,rr,2|| + ||4,r,3||' + ||3,r,4||");
        assert!(cert.verify(&s, &u).unwrap());
    }

    #[test]
    fn four_cycle() {
        let (s, u) = (t("(x*y)*(z*w)"), t("((w*u)*x)*((y*v)*z)"));
        let w = find_cycle(&s, &u).unwrap();
        let vars: Vec<String> = w.entries.iter().map(|e| e.var.to_string()).collect();
        assert_eq!(vars, ["x", "w", "z", "y"]);
        assert_eq!(w.entries[0].up.side, crate::term::TermSide::S);
        assert_eq!(w.entries[1].down.path.to_string(), "lll");
        assert!(synth_cycle(&w).unwrap().verify(&s, &u).unwrap());
    }

    #[test]
    fn no_cycle_for_associativity() {
        assert!(find_cycle(&t("(x1*x2)*x3"), &t("x1*(x2*x3)")).is_none());
        assert!(find_cycle(&t("(x*y)*(z*y)"), &t("z*((y*y)*(x*x))")).is_none());
    }

    #[test]
    fn long_way_around() {
        assert_eq!(run_leaders(&["r".parse().unwrap(), Path::root()]), [0, 0]);
        assert_eq!(run_leaders(&["r".parse().unwrap(), "l".parse().unwrap()]), [0, 1]);
    }
}
