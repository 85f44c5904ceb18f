//! Bounded search over small sums of transfer operations, for pairs that
//! neither the cover nor the cycle construction handles.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::{Certificate, Construction};
use crate::error::Result;
use crate::term::{joint_vars, Dir, Path, Term};
use crate::vector::{OpSpec, OpSum, VecGroupoid};
use crate::verify::affine::{affine_separation_decision, AffineWitness};

pub const DEFAULT_SEARCH_BUDGET: u64 = 2_000_000;

const BATCH: usize = 2048;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Candidates to test, seeds included.
    pub budget: u64,
    pub workers: usize,
    pub max_summands: usize,
    /// Tried first, in order, before the enumeration.
    pub seeds: Vec<Vec<OpSpec>>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_SEARCH_BUDGET, workers: 1, max_summands: 6, seeds: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Found { certificate: Certificate, candidates_tried: u64, seeded: bool },
    Unknown { candidates_tried: u64 },
}

/// Candidates assign registers `0..c` from `c` summands, the one on
/// register 0 tweaked, reading from those registers or from extra source
/// registers numbered in order of first use. Paths are nonempty segments of
/// the occurrence paths. Every sum of transfer operations with one tweak is
/// a register renaming of such a candidate.
///
/// Strata: summand count, then total path length, then the number of
/// registers. The first separating candidate in this order wins, whatever
/// the worker count.
pub fn search_separator(s: &Term, t: &Term, opts: &SearchOptions) -> Result<SearchOutcome> {
    let mut tried = 0u64;
    for seed in &opts.seeds {
        if tried >= opts.budget {
            return Ok(SearchOutcome::Unknown { candidates_tried: tried });
        }
        tried += 1;
        if let Some(certificate) = certify(s, t, seed) {
            return Ok(SearchOutcome::Found { certificate, candidates_tried: tried, seeded: true });
        }
    }

    let paths = segment_paths(s, t);
    let tracer = Tracer::new(s, t);
    let mut batch: Vec<Candidate> = Vec::with_capacity(BATCH);
    let mut found = None;
    let mut remaining = opts.budget - tried;
    let _ = enumerate(&paths, opts.max_summands, &mut |cand| {
        if remaining == 0 {
            return ControlFlow::Break(());
        }
        remaining -= 1;
        batch.push(cand.to_vec());
        if batch.len() < BATCH {
            return ControlFlow::Continue(());
        }
        found = run_batch(&tracer, &paths, &mut batch, opts.workers, &mut tried);
        if found.is_some() {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    if found.is_none() && !batch.is_empty() {
        found = run_batch(&tracer, &paths, &mut batch, opts.workers, &mut tried);
    }
    Ok(match found {
        Some(specs) => {
            let certificate = certify(s, t, &specs).expect("the exact decision agrees with the tracer");
            SearchOutcome::Found { certificate, candidates_tried: tried, seeded: false }
        }
        None => SearchOutcome::Unknown { candidates_tried: tried },
    })
}

/// `(path index, source register)` for targets `0, 1, ..`.
type Candidate = Vec<(usize, u32)>;

fn specs_of(paths: &[Path], cand: &[(usize, u32)]) -> Vec<OpSpec> {
    cand.iter()
        .enumerate()
        .map(|(n, &(p, m))| OpSpec::with_path(m, paths[p].clone(), n as u32, n == 0))
        .collect()
}

fn certify(s: &Term, t: &Term, specs: &[OpSpec]) -> Option<Certificate> {
    let opsum = OpSum::from_specs(specs).ok()?;
    let g = VecGroupoid::compile(&opsum);
    match affine_separation_decision(&g, s, t).witness {
        AffineWitness::Parity(lambda) => Some(Certificate { construction: Construction::Search, opsum, groupoid: g, lambda }),
        AffineWitness::Equalizer(_) => None,
    }
}

/// Tests a batch; `tried` advances up to and including the winner.
fn run_batch(
    tracer: &Tracer,
    paths: &[Path],
    batch: &mut Vec<Candidate>,
    workers: usize,
    tried: &mut u64,
) -> Option<Vec<OpSpec>> {
    let hit = first_separator(tracer, paths, batch, workers);
    *tried += hit.map_or(batch.len(), |i| i + 1) as u64;
    let specs = hit.map(|i| specs_of(paths, &batch[i]));
    batch.clear();
    specs
}

fn first_separator(tracer: &Tracer, paths: &[Path], batch: &[Candidate], workers: usize) -> Option<usize> {
    let scan = |part: &[Candidate], offset: usize| {
        let mut scratch = Scratch::default();
        part.iter().position(|c| tracer.separates(paths, c, &mut scratch)).map(|i| offset + i)
    };
    let workers = workers.clamp(1, batch.len().max(1));
    if workers == 1 {
        return scan(batch, 0);
    }
    let chunk = batch.len().div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = batch
            .chunks(chunk)
            .enumerate()
            .map(|(w, part)| scope.spawn(move || scan(part, w * chunk)))
            .collect();
        handles.into_iter().filter_map(|h| h.join().expect("search worker panicked")).min()
    })
}

#[derive(Clone, Copy)]
enum Node {
    Leaf(usize),
    Op(usize, usize),
}

/// Both terms flattened for register tracing. Every equation copies a
/// single bit, so each output register of a term equals one register of
/// one variable (or 0), plus the number of tweaks passed on the way.
struct Tracer {
    terms: [Vec<Node>; 2],
    vars: usize,
}

#[derive(Default)]
struct Scratch {
    /// Per register: operand (0 = x, 1 = y), source register, constant.
    eqs: Vec<Option<(usize, usize, bool)>>,
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl Tracer {
    fn new(s: &Term, t: &Term) -> Self {
        let vars = joint_vars(s, t);
        let flatten = |term: &Term| {
            fn go(term: &Term, vars: &[crate::term::VarId], out: &mut Vec<Node>) -> usize {
                match term {
                    Term::Var(v) => {
                        out.push(Node::Leaf(vars.iter().position(|w| w == v).expect("joint variable")));
                    }
                    Term::Op(l, r) => {
                        let li = go(l, vars, out);
                        let ri = go(r, vars, out);
                        out.push(Node::Op(li, ri));
                    }
                }
                out.len() - 1
            }
            let mut out = Vec::new();
            go(term, &vars, &mut out);
            out
        };
        Tracer { terms: [flatten(s), flatten(t)], vars: vars.len() }
    }

    /// `Some((var, register))` or `None` for a zero bit, and the constant.
    fn trace(&self, side: usize, eqs: &[Option<(usize, usize, bool)>], mut reg: usize) -> (Option<(usize, usize)>, bool) {
        let nodes = &self.terms[side];
        let mut node = nodes.len() - 1;
        let mut constant = false;
        loop {
            match nodes[node] {
                Node::Leaf(v) => return (Some((v, reg)), constant),
                Node::Op(l, r) => match eqs[reg] {
                    None => return (None, constant),
                    Some((operand, source, c)) => {
                        node = if operand == 0 { l } else { r };
                        reg = source;
                        constant ^= c;
                    }
                },
            }
        }
    }

    /// The terms are separated iff some set of registers has cancelling
    /// atoms and odd total constant: an odd cycle in the graph whose edges
    /// join the two atoms of each register, weighted by its constant.
    fn separates(&self, paths: &[Path], cand: &[(usize, u32)], sc: &mut Scratch) -> bool {
        let user = cand.iter().map(|&(_, m)| m as usize + 1).max().unwrap_or(0).max(cand.len());
        let internal: usize = cand.iter().map(|&(p, _)| paths[p].len() - 1).sum();
        let regs = user + internal;
        sc.eqs.clear();
        sc.eqs.resize(regs, None);
        let mut next = user;
        for (n, &(p, m)) in cand.iter().enumerate() {
            let steps = paths[p].steps();
            let mut target = n;
            for (i, dir) in steps.iter().enumerate() {
                let source = if i + 1 == steps.len() {
                    m as usize
                } else {
                    next += 1;
                    next - 1
                };
                let operand = usize::from(*dir == Dir::R);
                sc.eqs[target] = Some((operand, source, n == 0 && i == 0));
                target = source;
            }
        }
        let zero = self.vars * regs;
        sc.parent.clear();
        sc.parent.extend(0..=zero);
        sc.parity.clear();
        sc.parity.resize(zero + 1, false);
        for reg in 0..regs {
            let (a, ca) = self.trace(0, &sc.eqs, reg);
            let (b, cb) = self.trace(1, &sc.eqs, reg);
            let node = |atom: Option<(usize, usize)>| atom.map_or(zero, |(v, r)| v * regs + r);
            let (ra, pa) = find(&mut sc.parent, &mut sc.parity, node(a));
            let (rb, pb) = find(&mut sc.parent, &mut sc.parity, node(b));
            let weight = ca ^ cb;
            if ra == rb {
                if pa ^ pb != weight {
                    return true;
                }
            } else {
                sc.parent[ra] = rb;
                sc.parity[ra] = pa ^ pb ^ weight;
            }
        }
        false
    }
}

/// Root of `x` and the parity of the path from `x` to it.
fn find(parent: &mut [usize], parity: &mut [bool], x: usize) -> (usize, bool) {
    let mut root = x;
    let mut acc = false;
    while parent[root] != root {
        acc ^= parity[root];
        root = parent[root];
    }
    // path compression, keeping parities relative to the root
    let (mut cur, mut cur_par) = (x, acc);
    while parent[cur] != root && cur != root {
        let next = parent[cur];
        let next_par = cur_par ^ parity[cur];
        parent[cur] = root;
        parity[cur] = cur_par;
        cur = next;
        cur_par = next_par;
    }
    (root, acc)
}

/// Every nonempty contiguous segment of every occurrence path, shortest
/// first, then lexicographic.
fn segment_paths(s: &Term, t: &Term) -> Vec<Path> {
    let mut set = BTreeSet::new();
    for (path, _) in s.occurrences().into_iter().chain(t.occurrences()) {
        let steps = path.steps();
        for i in 0..steps.len() {
            for j in i + 1..=steps.len() {
                set.insert(Path::from_dirs(steps[i..j].iter().copied()));
            }
        }
    }
    let mut paths: Vec<Path> = set.into_iter().collect();
    paths.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    paths
}

/// One candidate: (path index, source register) per summand.
type Visit<'a> = dyn FnMut(&[(usize, u32)]) -> ControlFlow<()> + 'a;

fn enumerate(paths: &[Path], max_summands: usize, visit: &mut Visit<'_>) -> ControlFlow<()> {
    let max_len = paths.iter().map(Path::len).max().unwrap_or(0);
    for count in 1..=max_summands {
        for total in count..=count * max_len {
            let mut tuples = Vec::new();
            path_tuples(paths, count, total, &mut Vec::new(), &mut tuples);
            if tuples.is_empty() {
                continue;
            }
            for extra in 0..=count {
                let sources = source_tuples(count, extra);
                for chosen in &tuples {
                    for src in &sources {
                        let cand: Vec<(usize, u32)> = chosen.iter().copied().zip(src.iter().copied()).collect();
                        visit(&cand)?;
                    }
                }
            }
        }
    }
    ControlFlow::Continue(())
}

/// Source registers for `count` summands: any of the targets `0..count`,
/// or extra registers `count..count+extra`, each used and introduced in
/// increasing order.
fn source_tuples(count: usize, extra: usize) -> Vec<Vec<u32>> {
    fn go(count: usize, extra: usize, introduced: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let left = count - cur.len();
        if left < extra - introduced {
            return;
        }
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for m in 0..count + introduced.min(extra) {
            cur.push(m as u32);
            go(count, extra, introduced, cur, out);
            cur.pop();
        }
        if introduced < extra {
            cur.push((count + introduced) as u32);
            go(count, extra, introduced + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(count, extra, 0, &mut Vec::new(), &mut out);
    out
}

/// Index tuples into `paths` with the given total length.
fn path_tuples(paths: &[Path], count: usize, total: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let used: usize = cur.iter().map(|&i| paths[i].len()).sum();
    if cur.len() == count {
        if used == total {
            out.push(cur.clone());
        }
        return;
    }
    let left = count - cur.len() - 1;
    for (i, p) in paths.iter().enumerate() {
        if used + p.len() + left > total {
            break;
        }
        cur.push(i);
        path_tuples(paths, count, total, cur, out);
        cur.pop();
    }
}
