//! Explicit finite groupoids given by their operation tables, and
//! exhaustive separation checks over all assignments.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::term::{enumerate_ordered_terms, joint_vars, Term, VarId};

/// Default cap on assignments visited by one exhaustive call.
pub const DEFAULT_EVAL_BUDGET: u64 = 1 << 26;

/// Largest order [`CayleyGroupoid::product`] will build.
pub const MAX_ORDER: usize = 1 << 16;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CayleyGroupoid {
    n: usize,
    table: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DerangedSide {
    /// `x ⋆ y = f(x)`
    Left,
    /// `x ⋆ y = f(y)`
    Right,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    n: usize,
    table: Vec<Vec<usize>>,
}

impl CayleyGroupoid {
    pub fn new(n: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroupoid("order must be at least 1".into()));
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGroupoid(format!("table must be {n}x{n}")));
        }
        let mut table = Vec::with_capacity(n * n);
        for &e in rows.iter().flatten() {
            if e >= n {
                return Err(Error::ElementOutOfRange { element: e, order: n });
            }
            table.push(e as u32);
        }
        Ok(CayleyGroupoid { n, table })
    }

    pub fn from_fn(n: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let rows = (0..n).map(|x| (0..n).map(|y| op(x, y)).collect()).collect();
        Self::new(n, rows)
    }

    /// Wraps a flat row-major table already known to be in range.
    pub(crate) fn from_flat(n: usize, table: Vec<u32>) -> Self {
        debug_assert!(table.len() == n * n && table.iter().all(|&e| (e as usize) < n));
        CayleyGroupoid { n, table }
    }

    /// `x ⋆ y = f(x)` or `f(y)` for a fixpoint-free `f`.
    pub fn deranged(n: usize, f: &[usize], side: DerangedSide) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGroupoid("a derangement needs at least 2 elements".into()));
        }
        if f.len() != n {
            return Err(Error::InvalidGroupoid(format!("map has {} entries, expected {n}", f.len())));
        }
        if let Some(x) = (0..n).find(|&x| f[x] == x) {
            return Err(Error::InvalidGroupoid(format!("map fixes {x}")));
        }
        Self::from_fn(n, |x, y| match side {
            DerangedSide::Left => f[x],
            DerangedSide::Right => f[y],
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y] as usize
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(|r| r.iter().map(|&e| e as usize).collect()).collect()
    }

    /// Componentwise product; the pair `(i, j)` is encoded as `i·|H| + j`.
    pub fn product(&self, other: &CayleyGroupoid) -> Result<Self> {
        let n = self.n * other.n;
        if n > MAX_ORDER {
            return Err(Error::ResourceBound(format!("product order {n} exceeds {MAX_ORDER}")));
        }
        let h = other.n;
        Self::from_fn(n, |a, b| self.op(a / h, b / h) * h + other.op(a % h, b % h))
    }

    /// The subgroupoid on `subset`, relabelled `0..` in the given order.
    /// Fails when the subset is not closed under the operation.
    pub fn subgroupoid(&self, subset: &[usize]) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, &e) in subset.iter().enumerate() {
            if e >= self.n {
                return Err(Error::ElementOutOfRange { element: e, order: self.n });
            }
            if index.insert(e, i).is_some() {
                return Err(Error::InvalidGroupoid(format!("element {e} listed twice")));
            }
        }
        let mut rows = Vec::with_capacity(subset.len());
        for &a in subset {
            let mut row = Vec::with_capacity(subset.len());
            for &b in subset {
                let p = self.op(a, b);
                let &i = index
                    .get(&p)
                    .ok_or_else(|| Error::InvalidGroupoid(format!("{a}*{b} = {p} leaves the subset")))?;
                row.push(i);
            }
            rows.push(row);
        }
        Self::new(subset.len(), rows)
    }

    pub fn eval(&self, t: &Term, env: &BTreeMap<VarId, usize>) -> Result<usize> {
        match t {
            Term::Var(v) => {
                let &e = env.get(v).ok_or_else(|| Error::MissingVariable(v.to_string()))?;
                if e >= self.n {
                    return Err(Error::ElementOutOfRange { element: e, order: self.n });
                }
                Ok(e)
            }
            Term::Op(l, r) => Ok(self.op(self.eval(l, env)?, self.eval(r, env)?)),
        }
    }

    /// CSV: first line `n`, then `n` rows of comma-separated entries.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.table.chunks(self.n) {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Format("empty table".into()))?
            .parse()
            .map_err(|e| Error::Format(format!("bad order line: {e}")))?;
        let rows = lines
            .map(|line| {
                line.split(',')
                    .map(|cell| cell.trim().parse::<usize>().map_err(|e| Error::Format(format!("bad entry `{cell}`: {e}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, rows)
    }
}

impl std::fmt::Debug for CayleyGroupoid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CayleyGroupoid(n={}, {:?})", self.n, self.rows())
    }
}

impl Serialize for CayleyGroupoid {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TableJson { n: self.n, table: self.rows() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CayleyGroupoid {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = TableJson::deserialize(deserializer)?;
        CayleyGroupoid::new(raw.n, raw.table).map_err(serde::de::Error::custom)
    }
}

/// Postfix evaluation program for a term over numbered variable slots.
#[derive(Clone, Debug)]
pub(crate) struct Program(Vec<Instr>);

#[derive(Clone, Copy, Debug)]
enum Instr {
    Load(usize),
    Apply,
}

impl Program {
    pub(crate) fn compile(t: &Term, vars: &[VarId]) -> Program {
        fn go(t: &Term, vars: &[VarId], out: &mut Vec<Instr>) {
            match t {
                Term::Var(v) => out.push(Instr::Load(vars.iter().position(|w| w == v).expect("variable listed"))),
                Term::Op(l, r) => {
                    go(l, vars, out);
                    go(r, vars, out);
                    out.push(Instr::Apply);
                }
            }
        }
        let mut out = Vec::new();
        go(t, vars, &mut out);
        Program(out)
    }

    #[inline]
    pub(crate) fn run(&self, g: &CayleyGroupoid, values: &[usize], stack: &mut Vec<usize>) -> usize {
        stack.clear();
        for &ins in &self.0 {
            match ins {
                Instr::Load(i) => stack.push(values[i]),
                Instr::Apply => {
                    let y = stack.pop().expect("well-formed program");
                    let x = stack.pop().expect("well-formed program");
                    stack.push(g.op(x, y));
                }
            }
        }
        stack[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationVerdict {
    pub separated: bool,
    /// Lexicographically first assignment making the terms equal.
    pub counterexample: Option<Vec<(VarId, usize)>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExhaustiveOptions {
    pub budget: u64,
    pub workers: usize,
}

impl Default for ExhaustiveOptions {
    fn default() -> Self {
        ExhaustiveOptions { budget: DEFAULT_EVAL_BUDGET, workers: 1 }
    }
}

/// Decides whether `g` separates `s` and `t` by trying every assignment of
/// the joint variables (first-occurrence order, first variable most
/// significant). Parallel runs return the same first counterexample.
pub fn separates_exhaustive(
    g: &CayleyGroupoid,
    s: &Term,
    t: &Term,
    opts: &ExhaustiveOptions,
) -> Result<SeparationVerdict> {
    let vars = joint_vars(s, t);
    let n = g.order();
    let needed = (n as u128).checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
    if needed > opts.budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget: opts.budget });
    }
    let total = needed as u64;
    let block = total / n as u64;
    let (ps, pt) = (Program::compile(s, &vars), Program::compile(t, &vars));
    let best = AtomicU64::new(u64::MAX);

    let scan_block = |first: usize| {
        let start = first as u64 * block;
        let mut values = vec![0usize; vars.len()];
        values[0] = first;
        let mut stack = Vec::with_capacity(16);
        for offset in 0..block {
            if start + offset >= best.load(Ordering::Relaxed) {
                return;
            }
            if ps.run(g, &values, &mut stack) == pt.run(g, &values, &mut stack) {
                best.fetch_min(start + offset, Ordering::Relaxed);
                return;
            }
            // odometer over all but the first slot, last slot fastest
            for slot in (1..values.len()).rev() {
                values[slot] += 1;
                if values[slot] < n {
                    break;
                }
                values[slot] = 0;
            }
        }
    };

    let workers = opts.workers.clamp(1, n);
    if workers == 1 {
        (0..n).for_each(&scan_block);
    } else {
        std::thread::scope(|scope| {
            for w in 0..workers {
                let scan_block = &scan_block;
                scope.spawn(move || (w..n).step_by(workers).for_each(scan_block));
            }
        });
    }

    let found = best.into_inner();
    if found == u64::MAX {
        return Ok(SeparationVerdict { separated: true, counterexample: None });
    }
    let mut rest = found;
    let mut values = vec![0usize; vars.len()];
    for slot in (0..vars.len()).rev() {
        values[slot] = (rest % n as u64) as usize;
        rest /= n as u64;
    }
    Ok(SeparationVerdict {
        separated: false,
        counterexample: Some(vars.into_iter().zip(values).collect()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairFailure {
    pub s: Term,
    pub t: Term,
    pub counterexample: Vec<(VarId, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AntiassociativityReport {
    pub k: usize,
    pub pairs_checked: usize,
    pub antiassociative: bool,
    /// First unseparated pair in enumeration order.
    pub failure: Option<PairFailure>,
}

/// Checks every pair of distinct ordered terms on `x1..xk`.
pub fn is_k_antiassociative(g: &CayleyGroupoid, k: usize, opts: &ExhaustiveOptions) -> Result<AntiassociativityReport> {
    if k < 2 {
        return Err(Error::Usage("k-antiassociativity needs k >= 2".into()));
    }
    let terms = enumerate_ordered_terms(k)?;
    let mut pairs_checked = 0;
    for (i, s) in terms.iter().enumerate() {
        for t in &terms[i + 1..] {
            pairs_checked += 1;
            let verdict = separates_exhaustive(g, s, t, opts)?;
            if let Some(counterexample) = verdict.counterexample {
                return Ok(AntiassociativityReport {
                    k,
                    pairs_checked,
                    antiassociative: false,
                    failure: Some(PairFailure { s: s.clone(), t: t.clone(), counterexample }),
                });
            }
        }
    }
    Ok(AntiassociativityReport { k, pairs_checked, antiassociative: true, failure: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    fn z2_left() -> CayleyGroupoid {
        CayleyGroupoid::deranged(2, &[1, 0], DerangedSide::Left).unwrap()
    }

    fn z3_right() -> CayleyGroupoid {
        CayleyGroupoid::deranged(3, &[1, 2, 0], DerangedSide::Right).unwrap()
    }

    fn env(pairs: &[(&str, usize)]) -> BTreeMap<VarId, usize> {
        pairs.iter().map(|(v, e)| (VarId::new(v).unwrap(), *e)).collect()
    }

    #[test]
    fn deranged_tables() {
        assert_eq!(z2_left(), CayleyGroupoid::from_fn(2, |x, _| (x + 1) % 2).unwrap());
        assert_eq!(z3_right(), CayleyGroupoid::from_fn(3, |_, y| (y + 1) % 3).unwrap());
        assert!(CayleyGroupoid::deranged(1, &[0], DerangedSide::Left).is_err());
        assert!(CayleyGroupoid::deranged(3, &[1, 1, 0], DerangedSide::Left).is_err());
    }

    #[test]
    fn depth_laws() {
        let term = t("((w*x)*y)*z");
        for w in 0..2 {
            let e = env(&[("w", w), ("x", 1), ("y", 0), ("z", 1)]);
            assert_eq!(z2_left().eval(&term, &e).unwrap(), (w + 3) % 2);
        }
        let term = t("x*(y*(z*u))");
        for u in 0..3 {
            let e = env(&[("x", 2), ("y", 0), ("z", 1), ("u", u)]);
            assert_eq!(z3_right().eval(&term, &e).unwrap(), (u + 3) % 3);
        }
        assert_eq!(z2_left().eval(&t("x"), &env(&[("x", 1)])).unwrap(), 1);
    }

    #[test]
    fn eval_errors() {
        assert!(matches!(z2_left().eval(&t("x*y"), &env(&[("x", 0)])), Err(Error::MissingVariable(_))));
        assert!(matches!(
            z2_left().eval(&t("x"), &env(&[("x", 2)])),
            Err(Error::ElementOutOfRange { element: 2, order: 2 })
        ));
    }

    #[test]
    fn identical_terms_fail_at_zero() {
        let v = separates_exhaustive(&z3_right(), &t("x*y"), &t("x*y"), &ExhaustiveOptions::default()).unwrap();
        assert!(!v.separated);
        let zeros: Vec<usize> = v.counterexample.unwrap().into_iter().map(|(_, e)| e).collect();
        assert_eq!(zeros, vec![0, 0]);
    }

    #[test]
    fn z2_merges_same_depth_parity() {
        let terms = enumerate_ordered_terms(4).unwrap();
        let v = separates_exhaustive(&z2_left(), &terms[1], &terms[2], &ExhaustiveOptions::default()).unwrap();
        assert!(!v.separated);
        let report = is_k_antiassociative(&z2_left(), 4, &ExhaustiveOptions::default()).unwrap();
        assert!(!report.antiassociative);
        let failure = report.failure.unwrap();
        // x1 sits at depth 3 in the first term and depth 1 in the fourth
        assert_eq!((failure.s, failure.t), (terms[0].clone(), terms[3].clone()));
    }

    #[test]
    fn product_of_deranged_is_4_antiassociative() {
        let g = z2_left().product(&z3_right()).unwrap();
        assert_eq!(g.order(), 6);
        let report = is_k_antiassociative(&g, 4, &ExhaustiveOptions::default()).unwrap();
        assert!(report.antiassociative);
        assert_eq!(report.pairs_checked, 10);
    }

    #[test]
    fn product_with_trivial() {
        let trivial = CayleyGroupoid::new(1, vec![vec![0]]).unwrap();
        assert_eq!(z3_right().product(&trivial).unwrap(), z3_right());
    }

    #[test]
    fn parallel_counterexample_matches_sequential() {
        let g = CayleyGroupoid::from_fn(5, |x, y| (2 * x + 3 * y + 1) % 5).unwrap();
        let (s, u) = (t("(a*b)*c"), t("a*(b*c)"));
        let seq = separates_exhaustive(&g, &s, &u, &ExhaustiveOptions::default()).unwrap();
        for workers in [2, 3, 8] {
            let par = separates_exhaustive(&g, &s, &u, &ExhaustiveOptions { workers, ..Default::default() }).unwrap();
            assert_eq!(par, seq);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let opts = ExhaustiveOptions { budget: 7, workers: 1 };
        assert!(matches!(
            separates_exhaustive(&z2_left(), &t("(x*y)*z"), &t("x*(y*z)"), &opts),
            Err(Error::BudgetExceeded { needed: 8, budget: 7 })
        ));
    }

    #[test]
    fn csv_and_json_forms() {
        let g = z3_right();
        assert_eq!(g.to_csv(), "3\n1,2,0\n1,2,0\n1,2,0\n");
        assert_eq!(CayleyGroupoid::from_csv(&g.to_csv()).unwrap(), g);
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"n":3,"table":[[1,2,0],[1,2,0],[1,2,0]]}"#);
        assert_eq!(serde_json::from_str::<CayleyGroupoid>(&json).unwrap(), g);
        assert!(CayleyGroupoid::from_csv("2\n0,1\n0,2\n").is_err());
    }

    #[test]
    fn subgroupoid_closure() {
        let g = CayleyGroupoid::from_fn(4, |x, y| (x + y) % 4).unwrap();
        let sub = g.subgroupoid(&[0, 2]).unwrap();
        assert_eq!(sub.rows(), vec![vec![0, 1], vec![1, 0]]);
        assert!(g.subgroupoid(&[1]).is_err());
    }
}
