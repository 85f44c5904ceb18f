//! Counting the operation tables on `n` elements in which no triple
//! associates, i.e. `(a*b)*c != a*(b*c)` for all `a, b, c`.
//!
//! Tables are filled in row-major order. A triple is checked as soon as the
//! last of the (up to four) entries it reads is filled, and the branch is cut
//! when it associates. Work is split over fixed prefixes of the first row.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    pub total_tables: u64,
    pub antiassociative_count: u64,
    /// Tables `x*y = f(x)` or `x*y = f(y)` with `f` fixpoint-free.
    pub literally_deranged_count: u64,
    pub elapsed_secs: f64,
    pub workers: usize,
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub workers: usize,
    /// Needed for `n = 4`.
    pub long_run: bool,
    pub checkpoint: Option<PathBuf>,
    /// Search nodes between checkpoint writes.
    pub checkpoint_every: u64,
    pub progress: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { workers: 1, long_run: false, checkpoint: None, checkpoint_every: 100_000_000, progress: false }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusCounts {
    pub antiassociative: u64,
    pub literally_deranged: u64,
    pub nodes: u64,
}

impl CensusCounts {
    fn add(&mut self, other: &CensusCounts) {
        self.antiassociative += other.antiassociative;
        self.literally_deranged += other.literally_deranged;
        self.nodes += other.nodes;
    }
}

/// Progress file: every prefix task below `prefix` is finished and
/// included in `counts`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: usize,
    pub prefix: usize,
    pub counts: CensusCounts,
}

fn check_order(n: usize, long_run: bool) -> Result<()> {
    match n {
        2 | 3 => Ok(()),
        4 if long_run => Ok(()),
        4 => Err(Error::Usage("n = 4 is a long run and needs the long-run option (--long)".into())),
        _ => Err(Error::Usage(format!("census supports n in 2..=4, got {n}"))),
    }
}

pub fn census(n: usize, opts: &CensusOptions) -> Result<CensusReport> {
    check_order(n, opts.long_run)?;
    let start = Instant::now();
    let prefix_len = n;
    let tasks = n.pow(prefix_len as u32);

    let mut resume = Checkpoint { n, prefix: 0, counts: CensusCounts::default() };
    if let Some(path) = &opts.checkpoint {
        if path.exists() {
            let saved: Checkpoint = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            if saved.n != n || saved.prefix > tasks {
                return Err(Error::Format(format!("checkpoint {} does not belong to n = {n}", path.display())));
            }
            resume = saved;
        }
    }

    let triples = TripleIndex::new(n);
    let next = AtomicUsize::new(resume.prefix);
    let state = Mutex::new(Progress {
        done: vec![false; tasks],
        results: vec![CensusCounts::default(); tasks],
        frontier: resume.prefix,
        base: resume.counts,
        nodes_since_save: 0,
    });
    for i in 0..resume.prefix {
        state.lock().expect("progress lock").done[i] = true;
    }

    let worker = || -> Result<()> {
        loop {
            let task = next.fetch_add(1, Ordering::Relaxed);
            if task >= tasks {
                return Ok(());
            }
            let mut table = vec![0u8; n * n];
            let mut rest = task;
            for slot in (0..prefix_len).rev() {
                table[slot] = (rest % n) as u8;
                rest /= n;
            }
            let mut counts = CensusCounts::default();
            let alive = (0..prefix_len).all(|pos| triples.consistent(&table, pos));
            if alive {
                dfs(&triples, &mut table, prefix_len, &mut counts);
            }
            let mut st = state.lock().expect("progress lock");
            st.finish(task, counts);
            if let Some(path) = &opts.checkpoint {
                if st.nodes_since_save >= opts.checkpoint_every || st.frontier == tasks {
                    st.save(n, path)?;
                }
            }
            if opts.progress {
                eprintln!("census n={n}: {}/{tasks} prefixes done, {} tables so far", st.frontier, st.settled().antiassociative);
            }
        }
    };

    let workers = opts.workers.max(1);
    if workers == 1 {
        worker()?;
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers).map(|_| scope.spawn(worker)).collect();
            handles.into_iter().try_for_each(|h| h.join().expect("census worker panicked"))
        })?;
    }

    let st = state.into_inner().expect("progress lock");
    let counts = st.settled();
    Ok(CensusReport {
        n,
        total_tables: (n as u64).pow((n * n) as u32),
        antiassociative_count: counts.antiassociative,
        literally_deranged_count: counts.literally_deranged,
        elapsed_secs: start.elapsed().as_secs_f64(),
        workers,
    })
}

struct Progress {
    done: Vec<bool>,
    results: Vec<CensusCounts>,
    frontier: usize,
    base: CensusCounts,
    nodes_since_save: u64,
}

impl Progress {
    fn finish(&mut self, task: usize, counts: CensusCounts) {
        self.done[task] = true;
        self.results[task] = counts;
        self.nodes_since_save += counts.nodes;
        while self.frontier < self.done.len() && self.done[self.frontier] {
            let c = self.results[self.frontier];
            self.base.add(&c);
            self.frontier += 1;
        }
    }

    fn settled(&self) -> CensusCounts {
        self.base
    }

    fn save(&mut self, n: usize, path: &PathBuf) -> Result<()> {
        let cp = Checkpoint { n, prefix: self.frontier, counts: self.base };
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string_pretty(&cp)?)?;
        std::fs::rename(&tmp, path)?;
        self.nodes_since_save = 0;
        Ok(())
    }
}

/// For each table position, the triples whose first-level entries
/// (`a*b` and `b*c`) are both filled once that position is.
struct TripleIndex {
    n: usize,
    by_pos: Vec<Vec<(u8, u8, u8)>>,
}

impl TripleIndex {
    fn new(n: usize) -> Self {
        let mut by_pos = vec![Vec::new(); n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let first = (a * n + b).max(b * n + c);
                    by_pos[first].push((a as u8, b as u8, c as u8));
                }
            }
        }
        TripleIndex { n, by_pos }
    }

    /// False if some triple whose entries are all among `table[..=pos]`,
    /// with `pos` the last of them, associates.
    fn consistent(&self, table: &[u8], pos: usize) -> bool {
        let n = self.n;
        for first in 0..=pos {
            for &(a, b, c) in &self.by_pos[first] {
                let (a, b, c) = (a as usize, b as usize, c as usize);
                let ab = table[a * n + b] as usize;
                let bc = table[b * n + c] as usize;
                let (left, right) = (ab * n + c, a * n + bc);
                if first.max(left).max(right) != pos {
                    continue;
                }
                if table[left] == table[right] {
                    return false;
                }
            }
        }
        true
    }
}

fn dfs(triples: &TripleIndex, table: &mut [u8], pos: usize, counts: &mut CensusCounts) {
    counts.nodes += 1;
    let n = triples.n;
    if pos == n * n {
        counts.antiassociative += 1;
        if literally_deranged(table, n) {
            counts.literally_deranged += 1;
        }
        return;
    }
    for v in 0..n as u8 {
        table[pos] = v;
        if triples.consistent(table, pos) {
            dfs(triples, table, pos + 1, counts);
        }
    }
}

fn literally_deranged(table: &[u8], n: usize) -> bool {
    let rows_constant = (0..n).all(|x| (0..n).all(|y| table[x * n + y] == table[x * n]));
    let cols_constant = (0..n).all(|x| (0..n).all(|y| table[x * n + y] == table[y]));
    let fixpoint_free = |f: &dyn Fn(usize) -> u8| (0..n).all(|x| f(x) as usize != x);
    (rows_constant && fixpoint_free(&|x| table[x * n])) || (cols_constant && fixpoint_free(&|y| table[y]))
}

/// Every table checked in full, without pruning; for cross-checking the
/// pruned count on small orders.
pub fn census_unpruned(n: usize) -> Result<CensusCounts> {
    if !(1..=3).contains(&n) {
        return Err(Error::Usage(format!("unpruned census is limited to n <= 3, got {n}")));
    }
    let cells = n * n;
    let total = (n as u64).pow(cells as u32);
    let mut counts = CensusCounts::default();
    let mut table = vec![0u8; cells];
    for code in 0..total {
        let mut rest = code;
        for cell in table.iter_mut().rev() {
            *cell = (rest % n as u64) as u8;
            rest /= n as u64;
        }
        counts.nodes += 1;
        let op = |x: usize, y: usize| table[x * n + y] as usize;
        let anti = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| op(op(a, b), c) != op(a, op(b, c)))));
        if anti {
            counts.antiassociative += 1;
            if literally_deranged(&table, n) {
                counts.literally_deranged += 1;
            }
        }
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_two() {
        let r = census(2, &CensusOptions::default()).unwrap();
        assert_eq!(r.total_tables, 16);
        assert_eq!(r.literally_deranged_count, 2);
        assert_eq!(r.antiassociative_count, census_unpruned(2).unwrap().antiassociative);
    }

    #[test]
    fn order_three_matches_unpruned() {
        let pruned = census(3, &CensusOptions::default()).unwrap();
        let full = census_unpruned(3).unwrap();
        assert_eq!(pruned.antiassociative_count, full.antiassociative);
        assert_eq!(pruned.literally_deranged_count, full.literally_deranged);
        assert_eq!(pruned.literally_deranged_count, 2 * 2u64.pow(3));
        let par = census(3, &CensusOptions { workers: 3, ..CensusOptions::default() }).unwrap();
        assert_eq!(par.antiassociative_count, pruned.antiassociative_count);
    }

    #[test]
    fn checkpoint_resume_gives_the_same_counts() {
        let path = std::env::temp_dir().join(format!("census-checkpoint-{}.json", std::process::id()));
        let _ = std::fs::remove_file(&path);
        let opts = CensusOptions { checkpoint: Some(path.clone()), checkpoint_every: 1, ..CensusOptions::default() };
        let first = census(3, &opts).unwrap();
        let saved: Checkpoint = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!((saved.n, saved.prefix, saved.counts.antiassociative), (3, 27, first.antiassociative_count));

        let partial = census_prefix_counts(3, 10);
        std::fs::write(&path, serde_json::to_string(&Checkpoint { n: 3, prefix: 10, counts: partial }).unwrap()).unwrap();
        let resumed = census(3, &opts).unwrap();
        assert_eq!(resumed.antiassociative_count, first.antiassociative_count);

        std::fs::write(&path, serde_json::to_string(&Checkpoint { n: 2, prefix: 0, counts: partial }).unwrap()).unwrap();
        assert!(matches!(census(3, &opts), Err(Error::Format(_))));
        std::fs::remove_file(&path).unwrap();
    }

    fn census_prefix_counts(n: usize, tasks: usize) -> CensusCounts {
        let triples = TripleIndex::new(n);
        let mut total = CensusCounts::default();
        for task in 0..tasks {
            let mut table = vec![0u8; n * n];
            let mut rest = task;
            for slot in (0..n).rev() {
                table[slot] = (rest % n) as u8;
                rest /= n;
            }
            if (0..n).all(|pos| triples.consistent(&table, pos)) {
                dfs(&triples, &mut table, n, &mut total);
            }
        }
        total
    }

    #[test]
    fn refusals() {
        assert!(matches!(census(4, &CensusOptions::default()), Err(Error::Usage(_))));
        assert!(census(5, &CensusOptions { long_run: true, ..CensusOptions::default() }).is_err());
        assert!(census(1, &CensusOptions::default()).is_err());
    }
}
