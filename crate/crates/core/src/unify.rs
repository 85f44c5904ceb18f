//! Syntactic unification by the four rules Decompose, Coalesce, Check and
//! Eliminate, with a replayable trace.
//!
//! Strategy: Decompose whenever both sides are products; otherwise Coalesce
//! a variable pair (replacing the larger name by the smaller); otherwise
//! take the statement `x = a` with the smallest variable `x` and apply Check
//! or Eliminate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::term::{joint_vars, Term, VarId};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Statement {
    Equal { lhs: Term, rhs: Term },
    False,
}

impl Statement {
    pub fn equal(lhs: Term, rhs: Term) -> Statement {
        Statement::Equal { lhs, rhs }
    }

    fn substitute(&self, var: &VarId, with: &Term) -> Statement {
        match self {
            Statement::Equal { lhs, rhs } => Statement::equal(lhs.replace_var(var, with), rhs.replace_var(var, with)),
            Statement::False => Statement::False,
        }
    }

    fn mentions(&self, var: &VarId) -> bool {
        match self {
            Statement::Equal { lhs, rhs } => lhs.contains_var(var) || rhs.contains_var(var),
            Statement::False => false,
        }
    }

    /// `x = a` oriented with the variable on the left, if either side is one.
    fn as_binding(&self) -> Option<(&VarId, &Term)> {
        match self {
            Statement::Equal { lhs: Term::Var(x), rhs } => Some((x, rhs)),
            Statement::Equal { lhs, rhs: Term::Var(x) } => Some((x, lhs)),
            _ => None,
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Equal { lhs, rhs } => write!(f, "{lhs} = {rhs}"),
            Statement::False => f.write_str("False"),
        }
    }
}

impl fmt::Debug for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Statement({self})")
    }
}

impl FromStr for Statement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "False" {
            return Ok(Statement::False);
        }
        let (lhs, rhs) = s
            .split_once('=')
            .ok_or_else(|| Error::Syntax { position: 0, message: "expected `lhs = rhs`".into() })?;
        Ok(Statement::equal(lhs.parse()?, rhs.parse()?))
    }
}

impl Serialize for Statement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Statement {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    Decompose,
    Coalesce,
    Check,
    Eliminate,
}

/// One rule application. Coalesce and Eliminate rewrite the rest of the
/// statement set; `rewrites` lists each changed statement before and after.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: Rule,
    pub consumed: Statement,
    pub produced: Vec<Statement>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rewrites: Vec<(Statement, Statement)>,
}

impl TraceStep {
    /// Re-applies the rule to `consumed` (and to each rewritten statement)
    /// and compares with what the step recorded.
    pub fn replay(&self) -> bool {
        match (self.rule, &self.consumed) {
            (Rule::Decompose, Statement::Equal { lhs: Term::Op(a, b), rhs: Term::Op(c, d) }) => {
                self.rewrites.is_empty()
                    && self.produced
                        == [Statement::equal((**a).clone(), (**c).clone()), Statement::equal((**b).clone(), (**d).clone())]
            }
            (Rule::Coalesce, Statement::Equal { lhs: Term::Var(x), rhs: Term::Var(y) }) => {
                if x == y {
                    return self.produced.is_empty() && self.rewrites.is_empty();
                }
                let (from, to) = if x > y { (x, y) } else { (y, x) };
                self.rewrites_by(from, &Term::Var(to.clone()))
            }
            (Rule::Check, st) => match st.as_binding() {
                Some((x, a)) => !a.is_var() && a.contains_var(x) && self.produced == [Statement::False],
                None => false,
            },
            (Rule::Eliminate, st) => match st.as_binding() {
                Some((x, a)) => !a.contains_var(x) && self.rewrites_by(x, a),
                None => false,
            },
            _ => false,
        }
    }

    fn rewrites_by(&self, var: &VarId, with: &Term) -> bool {
        let afters: Vec<Statement> = self.rewrites.iter().map(|(_, after)| after.clone()).collect();
        self.produced == afters
            && self.rewrites.iter().all(|(before, after)| before.mentions(var) && before.substitute(var, with) == *after)
    }
}

/// Variable bindings, kept fully applied: no bound variable occurs in any
/// bound term.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Substitution {
    bindings: BTreeMap<VarId, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Accepts triangular bindings and normalizes them; fails on cyclic ones.
    pub fn from_bindings(bindings: impl IntoIterator<Item = (VarId, Term)>) -> Result<Self> {
        let raw: BTreeMap<VarId, Term> = bindings.into_iter().collect();
        let mut resolved = BTreeMap::new();
        for v in raw.keys() {
            let mut term = raw[v].clone();
            for _ in 0..=raw.len() {
                let next = term.substitute(&|w| raw.get(w).cloned());
                if next == term {
                    break;
                }
                term = next;
            }
            if raw.keys().any(|w| term.contains_var(w)) {
                return Err(Error::InvalidWitness(format!("binding for {v} is cyclic")));
            }
            resolved.insert(v.clone(), term);
        }
        Ok(Substitution { bindings: resolved })
    }

    pub fn bindings(&self) -> &BTreeMap<VarId, Term> {
        &self.bindings
    }

    pub fn get(&self, v: &VarId) -> Option<&Term> {
        self.bindings.get(v)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn apply(&self, t: &Term) -> Term {
        t.substitute(&|v| self.bindings.get(v).cloned())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum UnifyResult {
    Unifier { bindings: Substitution },
    NotUnifiable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnifyOutcome {
    #[serde(flatten)]
    pub result: UnifyResult,
    pub trace: Vec<TraceStep>,
}

impl UnifyOutcome {
    pub fn unifier(&self) -> Option<&Substitution> {
        match &self.result {
            UnifyResult::Unifier { bindings } => Some(bindings),
            UnifyResult::NotUnifiable => None,
        }
    }
}

pub fn unify(s: &Term, t: &Term) -> UnifyOutcome {
    let mut set = vec![Statement::equal(s.clone(), t.clone())];
    // Statements already in solved form `x = a`, with `x` occurring nowhere else.
    let mut solved: Vec<Statement> = Vec::new();
    let mut trace = Vec::new();

    loop {
        if let Some(i) = set.iter().position(|st| {
            matches!(st, Statement::Equal { lhs: Term::Op(..), rhs: Term::Op(..) })
        }) {
            let consumed = set.remove(i);
            let Statement::Equal { lhs: Term::Op(a, b), rhs: Term::Op(c, d) } = &consumed else { unreachable!() };
            let produced = vec![Statement::equal((**a).clone(), (**c).clone()), Statement::equal((**b).clone(), (**d).clone())];
            set.splice(i..i, produced.iter().cloned());
            trace.push(TraceStep { rule: Rule::Decompose, consumed, produced, rewrites: vec![] });
            continue;
        }

        if let Some(i) = set.iter().position(|st| matches!(st, Statement::Equal { lhs: Term::Var(_), rhs: Term::Var(_) })) {
            let consumed = set.remove(i);
            let Statement::Equal { lhs: Term::Var(x), rhs: Term::Var(y) } = &consumed else { unreachable!() };
            if x == y {
                trace.push(TraceStep { rule: Rule::Coalesce, consumed, produced: vec![], rewrites: vec![] });
                continue;
            }
            let (from, to) = if x > y { (x.clone(), y.clone()) } else { (y.clone(), x.clone()) };
            let rewrites = rewrite_all(&mut set, &mut solved, &from, &Term::Var(to.clone()));
            solved.push(Statement::equal(Term::Var(from), Term::Var(to)));
            trace.push(TraceStep {
                rule: Rule::Coalesce,
                consumed,
                produced: rewrites.iter().map(|(_, a)| a.clone()).collect(),
                rewrites,
            });
            continue;
        }

        let pick = set
            .iter()
            .enumerate()
            .filter_map(|(i, st)| st.as_binding().map(|(x, _)| (x.clone(), i)))
            .min();
        let Some((x, i)) = pick else { break };
        let consumed = set.remove(i);
        let a = consumed.as_binding().expect("picked a binding").1.clone();
        if a.contains_var(&x) {
            trace.push(TraceStep { rule: Rule::Check, consumed, produced: vec![Statement::False], rewrites: vec![] });
            return UnifyOutcome { result: UnifyResult::NotUnifiable, trace };
        }
        let rewrites = rewrite_all(&mut set, &mut solved, &x, &a);
        solved.push(Statement::equal(Term::Var(x), a));
        trace.push(TraceStep {
            rule: Rule::Eliminate,
            consumed,
            produced: rewrites.iter().map(|(_, a)| a.clone()).collect(),
            rewrites,
        });
    }

    debug_assert!(set.is_empty());
    let bindings = Substitution::from_bindings(solved.into_iter().map(|st| {
        let (x, a) = st.as_binding().expect("solved statements are bindings");
        (x.clone(), a.clone())
    }))
    .expect("solved form is acyclic");
    assert_eq!(bindings.apply(s), bindings.apply(t), "unifier must equate the terms");
    UnifyOutcome { result: UnifyResult::Unifier { bindings }, trace }
}

fn rewrite_all(set: &mut [Statement], solved: &mut [Statement], var: &VarId, with: &Term) -> Vec<(Statement, Statement)> {
    let mut rewrites = Vec::new();
    for st in set.iter_mut().chain(solved.iter_mut()) {
        if st.mentions(var) {
            let after = st.substitute(var, with);
            rewrites.push((std::mem::replace(st, after.clone()), after));
        }
    }
    rewrites
}

/// Separable in some groupoid exactly when the terms do not unify.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum AbstractVerdict {
    SeparableInSomeGroupoid,
    NotSeparableInAnyGroupoid {
        unifier: Substitution,
        /// Every variable sent to a term over the single variable `x`.
        one_variable_witness: Substitution,
    },
}

pub fn decide_abstract_separability(s: &Term, t: &Term) -> AbstractVerdict {
    match unify(s, t).result {
        UnifyResult::NotUnifiable => AbstractVerdict::SeparableInSomeGroupoid,
        UnifyResult::Unifier { bindings } => {
            let one_variable_witness = one_variable_instance(&bindings, s, t);
            AbstractVerdict::NotSeparableInAnyGroupoid { unifier: bindings, one_variable_witness }
        }
    }
}

/// Follows `sigma` by sending every remaining variable to `x`.
pub fn one_variable_instance(sigma: &Substitution, s: &Term, t: &Term) -> Substitution {
    let x = Term::var("x");
    let collapse = |term: &Term| term.substitute(&|_| Some(x.clone()));
    let bindings = joint_vars(s, t).into_iter().map(|v| {
        let image = sigma.get(&v).cloned().unwrap_or_else(|| Term::Var(v.clone()));
        (v, collapse(&image))
    });
    Substitution { bindings: bindings.collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    fn rules(o: &UnifyOutcome) -> Vec<Rule> {
        o.trace.iter().map(|s| s.rule).collect()
    }

    #[test]
    fn unifiable_example() {
        let (s, u) = (t("(x*y)*(z*y)"), t("z*((x*y)*(x*x))"));
        let out = unify(&s, &u);
        let sigma = out.unifier().expect("unifiable");
        assert_eq!(sigma.get(&VarId::new("y").unwrap()), Some(&t("x*x")));
        assert_eq!(sigma.get(&VarId::new("z").unwrap()), Some(&t("x*(x*x)")));
        assert_eq!(sigma.bindings().len(), 2);
        assert_eq!(sigma.apply(&s), t("(x*(x*x))*((x*(x*x))*(x*x))"));
        assert_eq!(sigma.apply(&u), sigma.apply(&s));
        assert!(out.trace.iter().all(TraceStep::replay));
    }

    #[test]
    fn cycle_example_fails_on_check() {
        let out = unify(&t("(x*y)*(z*w)"), &t("((w*u)*x)*((y*v)*z)"));
        assert!(out.unifier().is_none());
        let last = out.trace.last().unwrap();
        assert_eq!(last.rule, Rule::Check);
        assert_eq!(last.consumed, "x = (x*v)*u".parse().unwrap());
        assert!(out.trace.iter().all(TraceStep::replay));
    }

    #[test]
    fn acyclic_example_derives_x_equals_xx() {
        let out = unify(&t("(x*y)*(z*y)"), &t("z*((y*y)*(x*x))"));
        assert!(out.unifier().is_none());
        let last = out.trace.last().unwrap();
        assert_eq!(last.consumed, "x = x*x".parse().unwrap());
        assert_eq!(rules(&out).last(), Some(&Rule::Check));
        assert!(out.trace.iter().all(TraceStep::replay));
    }

    #[test]
    fn small_cases() {
        assert!(unify(&t("x*y"), &t("x*y")).unifier().unwrap().is_empty());
        assert!(unify(&t("x"), &t("x*x")).unifier().is_none());
        let out = unify(&t("x*y"), &t("y*x"));
        assert_eq!(out.unifier().unwrap().get(&VarId::new("y").unwrap()), Some(&t("x")));
    }

    #[test]
    fn substitution_application() {
        assert_eq!(Substitution::new().apply(&t("x*y")), t("x*y"));
        let sigma = Substitution::from_bindings([(VarId::new("y").unwrap(), t("x*x"))]).unwrap();
        assert_eq!(sigma.apply(&t("x*y")), t("x*(x*x)"));
        let tri = Substitution::from_bindings([
            (VarId::new("z").unwrap(), t("x*y")),
            (VarId::new("y").unwrap(), t("x*x")),
        ])
        .unwrap();
        assert_eq!(tri.get(&VarId::new("z").unwrap()), Some(&t("x*(x*x)")));
        assert!(Substitution::from_bindings([(VarId::new("x").unwrap(), t("x*x"))]).is_err());
    }

    #[test]
    fn abstract_separability() {
        match decide_abstract_separability(&t("(x*y)*z"), &t("(x*x)*(x*x)")) {
            AbstractVerdict::NotSeparableInAnyGroupoid { one_variable_witness, .. } => {
                assert_eq!(one_variable_witness.apply(&t("(x*y)*z")), t("(x*x)*(x*x)"));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            decide_abstract_separability(&t("(x1*x2)*x3"), &t("x1*(x2*x3)")),
            AbstractVerdict::SeparableInSomeGroupoid
        );
    }

    #[test]
    fn outcome_json() {
        let out = unify(&t("x*y"), &t("y*x"));
        let json = serde_json::to_value(&out).unwrap();
        assert_eq!(json["result"], "unifier");
        assert_eq!(json["bindings"]["y"], "x");
        assert_eq!(json["trace"][0]["rule"], "Decompose");
        let back: UnifyOutcome = serde_json::from_value(json).unwrap();
        assert_eq!(back, out);
    }
}
