//! The backtracking core shared by every search mode.
//!
//! A partial ruler `0 = x_1 < … < x_i` carries the set `D` of differences it
//! already uses and, for modular shapes, the set `H` of residues `z` with
//! `2z ≡ x_j + x_m`. A candidate `z` is admissible iff `z ∉ H` and
//! `z − x_j ∉ D` for every `j`, i.e. `z ∉ H ∪ ⋃_j (D + x_j)`.
//!
//! Rulers are visited in a normal form so that each equivalence class under
//! translation and reflection is met once:
//!
//! * [`Shape::Canonical`] (modular): the first gap `x_2` is the smallest
//!   cyclic gap and the second gap is smaller than the closing gap
//!   `v − x_k`. This is exactly the lexicographically least translate of the
//!   ruler or its negation.
//! * [`Shape::MaxGapLast`] (modular): the closing gap is the largest, so
//!   `x_k` is the shortest rotation length, and `g_1 < g_{k−1}`.
//! * [`Shape::Linear`] (plain Golomb ruler): `g_1 < g_{k−1}`.
//!
//! All gaps of a Sidon set are distinct, so these normal forms are unique.

use super::bits::Bits;
use rayon::prelude::*;
use std::sync::atomic::{AtomicU32, AtomicU64, AtomicUsize, Ordering};

pub(crate) const MAX_MARKS: usize = 64;

/// Largest universe the engine is instantiated for.
pub(crate) const MAX_UNIVERSE: u32 = 64 * 256;

const FLUSH: u64 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Shape {
    Canonical,
    MaxGapLast,
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Goal {
    /// Stop at the first solution.
    First,
    /// Visit every solution.
    Count,
    /// Branch and bound on `x_k`, keeping the first shortest solution.
    Minimize,
}

#[derive(Clone, Debug)]
pub(crate) struct Problem {
    /// Modulus (ignored by [`Shape::Linear`]).
    pub v: u32,
    pub k: usize,
    pub shape: Shape,
    /// Largest admissible `x_k`.
    pub max_end: u32,
    /// `span_lb[m]` bounds from below the length of any `m`-mark Golomb
    /// ruler; indexed up to `k`.
    pub span_lb: Vec<u32>,
}

impl Problem {
    fn cyclic(&self) -> bool {
        self.shape != Shape::Linear
    }

    fn universe(&self) -> u32 {
        if self.cyclic() {
            self.v
        } else {
            self.max_end + 1
        }
    }

    fn lb(&self, m: usize) -> u32 {
        self.span_lb.get(m).copied().unwrap_or(0)
    }

    /// Score used to rank solutions: `x_k` for the length shapes, the
    /// shortest rotation length for the canonical shape.
    fn score(&self, x: &[u32]) -> u32 {
        match self.shape {
            Shape::Canonical => {
                let mut gmax = self.v - x[x.len() - 1];
                for w in x.windows(2) {
                    gmax = gmax.max(w[1] - w[0]);
                }
                self.v - gmax
            }
            _ => x[x.len() - 1],
        }
    }
}

#[derive(Clone, Debug, Default)]
pub(crate) struct RunResult {
    pub first: Option<Vec<u32>>,
    /// Lowest-score solution, first in visiting order among ties.
    pub best: Option<Vec<u32>>,
    pub count: u64,
    pub nodes: u64,
    pub budget_hit: bool,
}

struct Shared {
    /// Remaining node allowance, `u64::MAX` when unlimited.
    allowance: AtomicU64,
    limited: bool,
    /// Lowest task index that has produced a solution (goal First).
    best_task: AtomicUsize,
    /// Largest `x_k` still worth visiting (goal Minimize, ties allowed).
    bound: AtomicU32,
}

impl Shared {
    /// Takes up to `want` nodes from the allowance.
    fn grant(&self, want: u64) -> u64 {
        if !self.limited {
            return want;
        }
        let mut cur = self.allowance.load(Ordering::Relaxed);
        loop {
            let take = cur.min(want);
            if take == 0 {
                return 0;
            }
            match self.allowance.compare_exchange_weak(cur, cur - take, Ordering::Relaxed, Ordering::Relaxed) {
                Ok(_) => return take,
                Err(c) => cur = c,
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Abort {
    No,
    Budget,
    Cancelled,
    Done,
}

#[derive(Clone)]
struct Prefix<const W: usize> {
    marks: Vec<u32>,
    d: Bits<W>,
    h: Bits<W>,
    gmax: u32,
}

struct Dfs<'a, const W: usize> {
    p: &'a Problem,
    goal: Goal,
    shared: &'a Shared,
    task: usize,
    marks: [u32; MAX_MARKS],
    /// Local strict bound from this task's own best solution.
    max_end: u32,
    nodes: u64,
    credit: u64,
    since_sync: u64,
    abort: Abort,
    split_at: Option<usize>,
    prefixes: Vec<Prefix<W>>,
    result: RunResult,
    best_score: u32,
}

impl<'a, const W: usize> Dfs<'a, W> {
    fn new(p: &'a Problem, goal: Goal, shared: &'a Shared, task: usize) -> Self {
        Dfs {
            p,
            goal,
            shared,
            task,
            marks: [0; MAX_MARKS],
            max_end: p.max_end,
            nodes: 0,
            credit: 0,
            since_sync: 0,
            abort: Abort::No,
            split_at: None,
            prefixes: Vec::new(),
            result: RunResult::default(),
            best_score: u32::MAX,
        }
    }

    fn root(&self) -> (Bits<W>, Bits<W>) {
        let mut d = Bits::EMPTY;
        let mut h = Bits::EMPTY;
        if self.p.cyclic() {
            let v = self.p.v;
            if v % 2 == 0 {
                // v/2 is its own negative, so it cannot be a difference
                d.set(v / 2);
            }
            self.add_halves(&mut h, 0);
        }
        (d, h)
    }

    #[inline]
    fn add_halves(&self, h: &mut Bits<W>, s: u32) {
        let v = self.p.v;
        if v % 2 == 1 {
            h.set(((s as u64 * (v as u64 + 1) / 2) % v as u64) as u32);
        } else if s % 2 == 0 {
            h.set(s / 2);
            h.set(s / 2 + v / 2);
        }
    }

    /// Current ceiling on `x_k`.
    #[inline]
    fn ceiling(&self) -> u32 {
        match self.goal {
            Goal::Minimize => self.max_end.min(self.shared.bound.load(Ordering::Relaxed)),
            _ => self.max_end,
        }
    }

    /// Accounts for one node; false when the search must unwind.
    #[inline]
    fn tick(&mut self) -> bool {
        if self.credit == 0 {
            self.credit = self.shared.grant(FLUSH);
            if self.credit == 0 {
                self.abort = Abort::Budget;
                self.result.budget_hit = true;
                return false;
            }
        }
        self.credit -= 1;
        self.nodes += 1;
        self.since_sync += 1;
        if self.since_sync >= FLUSH {
            self.since_sync = 0;
            if self.goal == Goal::First && self.shared.best_task.load(Ordering::Relaxed) < self.task {
                self.abort = Abort::Cancelled;
                return false;
            }
        }
        true
    }

    fn solution(&mut self, k: usize) {
        let x = &self.marks[..k];
        self.result.count += 1;
        if self.result.first.is_none() {
            self.result.first = Some(x.to_vec());
        }
        let score = self.p.score(x);
        if score < self.best_score {
            self.best_score = score;
            self.result.best = Some(x.to_vec());
        }
        match self.goal {
            Goal::First => {
                self.shared.best_task.fetch_min(self.task, Ordering::Relaxed);
                self.abort = Abort::Done;
            }
            Goal::Minimize => {
                self.max_end = x[k - 1] - 1;
                self.shared.bound.fetch_min(x[k - 1], Ordering::Relaxed);
            }
            Goal::Count => {}
        }
    }

    /// Explores every extension of `marks[..i]`.
    fn node(&mut self, i: usize, d: &Bits<W>, h: &Bits<W>, gmax: u32) {
        if self.split_at == Some(i) {
            self.prefixes.push(Prefix { marks: self.marks[..i].to_vec(), d: *d, h: *h, gmax });
            return;
        }
        let p = self.p;
        let k = p.k;
        let r = k - i;
        let last = self.marks[i - 1];
        let g1 = if i >= 2 { self.marks[1] } else { 0 };
        let cyclic = p.cyclic();
        let v = p.v;

        let mut f = if cyclic { *h } else { Bits::EMPTY };
        for j in 0..i {
            f.or_shl(d, self.marks[j]);
        }

        let mut lo = (last + 1).max(p.lb(i + 1));
        // room needed after the new mark, as a length
        let tail: u32;
        let hi: u32;
        match p.shape {
            Shape::Canonical => {
                if i == 1 {
                    let kk = k as u32;
                    let need = kk * (kk - 1) / 2;
                    if v < need + kk {
                        return;
                    }
                    tail = 0;
                    hi = (v - need) / kk;
                } else {
                    lo = lo.max(last + g1 + 1);
                    // r further gaps, all distinct, unused and larger than g1
                    let Some(s) = d.sum_smallest_clear(g1 + 1, v, r) else { return };
                    let room = s.max(p.lb(r + 1));
                    if room >= v {
                        return;
                    }
                    let mut top = v - room;
                    if i >= 3 {
                        let g2 = self.marks[2] - self.marks[1];
                        top = top.min(v - g2 - 1);
                    }
                    tail = 0;
                    hi = top;
                }
            }
            Shape::MaxGapLast | Shape::Linear => {
                if r == 1 && i >= 2 {
                    lo = lo.max(last + g1 + 1);
                }
                tail = if r >= 2 {
                    let Some(s) = d.sum_smallest_clear(1, p.universe(), r - 1) else { return };
                    s.max(p.lb(r))
                } else {
                    0
                };
                let ceil = self.ceiling();
                if ceil < tail {
                    return;
                }
                hi = ceil - tail;
            }
        }
        let hi = hi.min(p.universe() - 1);
        if lo > hi {
            return;
        }

        let max_gap_last = p.shape == Shape::MaxGapLast;
        // for k = 3 the last mark fixes g_2, which must stay below the closing gap
        let closes_g2 = p.shape == Shape::Canonical && i == 2 && r == 1;
        f.for_each_clear(lo, hi, |z| {
            if closes_g2 && 2 * z >= v + g1 {
                return false;
            }
            if max_gap_last {
                // every internal gap must stay below the closing gap
                let gm = gmax.max(z - last);
                if z as u64 + tail as u64 + gm as u64 >= v as u64 {
                    return false;
                }
            }
            if self.goal == Goal::Minimize && z + tail > self.ceiling() {
                return false;
            }
            if !self.tick() {
                return false;
            }
            self.marks[i] = z;
            if r == 1 {
                self.solution(k);
                return self.abort == Abort::No;
            }
            let mut d2 = *d;
            for j in 0..i {
                let delta = z - self.marks[j];
                d2.set(delta);
                if cyclic {
                    d2.set(v - delta);
                }
            }
            let mut h2 = *h;
            if cyclic {
                for j in 0..=i {
                    let s = z + self.marks[j];
                    self.add_halves(&mut h2, if s >= v { s - v } else { s });
                }
            }
            self.node(i + 1, &d2, &h2, gmax.max(z - last));
            self.abort == Abort::No
        });
    }

    fn run_prefix(&mut self, pre: &Prefix<W>) {
        self.marks[..pre.marks.len()].copy_from_slice(&pre.marks);
        if self.goal == Goal::First && self.shared.best_task.load(Ordering::Relaxed) < self.task {
            return;
        }
        self.node(pre.marks.len(), &pre.d, &pre.h, pre.gmax);
    }
}

/// Threading and budget for a run.
#[derive(Clone, Copy, Debug)]
pub(crate) struct RunOptions {
    pub budget: Option<u64>,
    pub threads: usize,
}

pub(crate) fn run(p: &Problem, goal: Goal, opts: RunOptions) -> RunResult {
    assert!(p.k >= 2 && p.k <= MAX_MARKS);
    let u = p.universe();
    macro_rules! dispatch {
        ($($w:literal),*) => {
            $(if u <= 64 * $w { return run_w::<$w>(p, goal, opts); })*
        };
    }
    dispatch!(1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256);
    panic!("universe {u} exceeds {MAX_UNIVERSE}");
}

fn run_w<const W: usize>(p: &Problem, goal: Goal, opts: RunOptions) -> RunResult {
    let shared = Shared {
        allowance: AtomicU64::new(opts.budget.unwrap_or(u64::MAX)),
        limited: opts.budget.is_some(),
        best_task: AtomicUsize::new(usize::MAX),
        bound: AtomicU32::new(p.max_end),
    };
    let mut top = Dfs::<W>::new(p, goal, &shared, 0);
    top.marks[0] = 0;
    let (d, h) = top.root();
    let split = 3;
    if opts.threads <= 1 || p.k <= split {
        top.node(1, &d, &h, 0);
        top.result.nodes = top.nodes;
        return top.result;
    }
    top.split_at = Some(split);
    top.node(1, &d, &h, 0);
    let prefixes = std::mem::take(&mut top.prefixes);
    let head_nodes = top.nodes;
    let head_budget = top.result.budget_hit;

    let work = |(idx, pre): (usize, &Prefix<W>)| {
        let mut dfs = Dfs::<W>::new(p, goal, &shared, idx);
        dfs.run_prefix(pre);
        if shared.limited {
            shared.allowance.fetch_add(dfs.credit, Ordering::Relaxed);
        }
        dfs.result.nodes = dfs.nodes;
        dfs.result
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.threads).build();
    let parts: Vec<RunResult> = match pool {
        Ok(pool) => pool.install(|| prefixes.par_iter().enumerate().map(work).collect()),
        Err(_) => prefixes.iter().enumerate().map(work).collect(),
    };

    let mut out = RunResult { nodes: head_nodes, budget_hit: head_budget, ..RunResult::default() };
    let mut best_score = u32::MAX;
    for part in parts {
        out.nodes += part.nodes;
        out.count += part.count;
        out.budget_hit |= part.budget_hit;
        if out.first.is_none() {
            out.first = part.first;
        }
        if let Some(b) = part.best {
            let s = p.score(&b);
            if s < best_score {
                best_score = s;
                out.best = Some(b);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(shape: Shape, v: u32, k: usize, max_end: u32) -> Problem {
        Problem { v, k, shape, max_end, span_lb: vec![] }
    }

    fn opts(threads: usize) -> RunOptions {
        RunOptions { budget: None, threads }
    }

    #[test]
    fn canonical_small() {
        let r = run(&problem(Shape::Canonical, 7, 3, 6), Goal::Count, opts(1));
        assert_eq!(r.count, 1);
        assert_eq!(r.first.unwrap(), vec![0, 1, 3]);
        let r = run(&problem(Shape::Canonical, 22, 5, 21), Goal::First, opts(1));
        assert!(r.first.is_none() && !r.budget_hit);
    }

    #[test]
    fn linear_lengths() {
        // the only length-6 four-mark ruler up to mirror image
        let r = run(&problem(Shape::Linear, 0, 4, 6), Goal::Count, opts(1));
        assert_eq!((r.count, r.first.unwrap()), (1, vec![0, 1, 4, 6]));
        let r = run(&problem(Shape::Linear, 0, 4, 5), Goal::First, opts(1));
        assert!(r.first.is_none());
    }

    #[test]
    fn budget_is_exact_sequentially() {
        let p = problem(Shape::Canonical, 40, 5, 39);
        let full = run(&p, Goal::Count, opts(1));
        let r = run(&p, Goal::Count, RunOptions { budget: Some(full.nodes), threads: 1 });
        assert!(!r.budget_hit && r.count == full.count);
        let r = run(&p, Goal::Count, RunOptions { budget: Some(full.nodes - 1), threads: 1 });
        assert!(r.budget_hit && r.nodes == full.nodes - 1);
    }

    #[test]
    fn parallel_matches_sequential() {
        for (v, k) in [(40u32, 5usize), (57, 7), (31, 6)] {
            let p = problem(Shape::Canonical, v, k, v - 1);
            for goal in [Goal::First, Goal::Count] {
                let a = run(&p, goal, opts(1));
                let b = run(&p, goal, opts(3));
                assert_eq!(a.first, b.first);
                if goal == Goal::Count {
                    assert_eq!((a.count, a.nodes), (b.count, b.nodes));
                }
            }
            let q = problem(Shape::MaxGapLast, v, k, v - 1);
            let a = run(&q, Goal::Minimize, opts(1));
            let b = run(&q, Goal::Minimize, opts(2));
            assert_eq!(a.best, b.best);
        }
    }
}
