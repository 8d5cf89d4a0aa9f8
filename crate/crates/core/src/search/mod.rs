//! Exhaustive backtracking search for modular and plain Golomb rulers.

mod bits;
mod engine;
mod packing;
mod spectrum;

pub use packing::{difference_packing, PackingOutcome};
pub use spectrum::{spectrum, Spectrum, TrailEntry};
use crate::ruler::{verify_mgr, Ruler};
use engine::{Goal, Problem, RunOptions, Shape, MAX_MARKS, MAX_UNIVERSE};
use serde::{Deserialize, Serialize};
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("need v >= k >= 3, got v = {v}, k = {k}")]
    BadParameters { v: u32, k: usize },
    #[error("k = {0} exceeds the supported maximum of 64 marks")]
    TooManyMarks(usize),
    #[error("universe {0} exceeds the supported maximum")]
    TooLarge(u32),
    #[error("node budget exceeded")]
    BudgetExceeded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Stop at the lexicographically least canonical ruler.
    First,
    /// Count canonical rulers (one per translation/reflection class).
    All,
    /// Like `First`, read as a decision procedure.
    Prove,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Found,
    Exhausted,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub witness: Option<Ruler>,
    pub nodes_visited: u64,
    /// Shortest rotation length among the rulers met.
    pub min_length_found: Option<u32>,
    /// Number of canonical rulers (mode `all` only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub solutions: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Node cap; `None` is unlimited.
    pub budget: Option<u64>,
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: None, threads: 1 }
    }
}

impl SearchOptions {
    fn run(self) -> RunOptions {
        RunOptions { budget: self.budget, threads: self.threads.max(1) }
    }
}

fn check(v: u32, k: usize) -> Result<(), SearchError> {
    if k < 3 || v < k as u32 {
        return Err(SearchError::BadParameters { v, k });
    }
    if k > MAX_MARKS {
        return Err(SearchError::TooManyMarks(k));
    }
    if v > MAX_UNIVERSE {
        return Err(SearchError::TooLarge(v));
    }
    Ok(())
}

/// Marks whose exact minimal Golomb length is used as a pruning bound.
const EXACT_SPAN_MARKS: usize = 10;

static GOLOMB_TABLE: Mutex<Vec<Option<u32>>> = Mutex::new(Vec::new());

/// Lower bounds on the length of an `m`-mark Golomb ruler for `m ≤ k`:
/// exact values below `k` (up to a cap), then `L*(m) ≥ L*(m−1) + 1`.
fn span_bounds(k: usize) -> Vec<u32> {
    let exact = (k.saturating_sub(1)).min(EXACT_SPAN_MARKS);
    let mut lb = vec![0u32; k + 1];
    for m in 1..=k {
        lb[m] = if m <= exact {
            golomb_min_length_inner(m)
        } else {
            let tri = (m * (m - 1) / 2) as u32;
            tri.max(lb[m - 1] + 1)
        };
    }
    lb
}

fn witness(v: u32, marks: Option<Vec<u32>>) -> Option<Ruler> {
    marks.map(|x| {
        let r = Ruler::new(v, x).expect("engine emits increasing residues");
        debug_assert!(verify_mgr(&r).valid);
        r
    })
}

/// Backtracking search for a `(v, k)`-MGR.
pub fn search(v: u32, k: usize, mode: SearchMode, opts: SearchOptions) -> Result<SearchOutcome, SearchError> {
    check(v, k)?;
    let p = Problem { v, k, shape: Shape::Canonical, max_end: v - 1, span_lb: span_bounds(k) };
    let goal = match mode {
        SearchMode::All => Goal::Count,
        _ => Goal::First,
    };
    let res = engine::run(&p, goal, opts.run());
    let found = res.count > 0;
    let status = match (mode, found, res.budget_hit) {
        (SearchMode::All, _, true) => SearchStatus::BudgetExceeded,
        (_, true, _) => SearchStatus::Found,
        (_, false, true) => SearchStatus::BudgetExceeded,
        (_, false, false) => SearchStatus::Exhausted,
    };
    let min_length_found = res.best.as_ref().map(|b| {
        Ruler::new(v, b.clone()).expect("valid marks").min_rotation_length()
    });
    Ok(SearchOutcome {
        status,
        witness: witness(v, res.first),
        nodes_visited: res.nodes,
        min_length_found,
        solutions: (mode == SearchMode::All).then_some(res.count),
    })
}

/// Result of a shortest-rotation search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinLengthOutcome {
    pub status: SearchStatus,
    pub length: Option<u32>,
    /// A rotation of length `length` (`x_1 = 0`, `x_k = length`).
    pub witness: Option<Ruler>,
    pub nodes_visited: u64,
}

/// Shortest `x_k − x_1` over all `(v, k)`-MGRs with length below `below`
/// (all lengths when `None`).
pub fn min_length_below(
    v: u32,
    k: usize,
    below: Option<u32>,
    opts: SearchOptions,
) -> Result<MinLengthOutcome, SearchError> {
    check(v, k)?;
    let max_end = match below {
        Some(0) => {
            return Ok(MinLengthOutcome { status: SearchStatus::Exhausted, length: None, witness: None, nodes_visited: 0 })
        }
        Some(b) => (b - 1).min(v - 1),
        None => v - 1,
    };
    let p = Problem { v, k, shape: Shape::MaxGapLast, max_end, span_lb: span_bounds(k) };
    let res = engine::run(&p, Goal::Minimize, opts.run());
    let w = witness(v, res.best);
    let status = if res.budget_hit {
        SearchStatus::BudgetExceeded
    } else if w.is_some() {
        SearchStatus::Found
    } else {
        SearchStatus::Exhausted
    };
    Ok(MinLengthOutcome { status, length: w.as_ref().map(Ruler::length), witness: w, nodes_visited: res.nodes })
}

/// Minimal `x_k − x_1` over all `(v, k)`-MGRs, `None` if there are none.
pub fn min_length(v: u32, k: usize) -> Result<Option<u32>, SearchError> {
    Ok(min_length_below(v, k, None, SearchOptions::default())?.length)
}

fn golomb_min_length_inner(k: usize) -> u32 {
    match k {
        0 | 1 => return 0,
        2 => return 1,
        _ => {}
    }
    if let Some(Some(l)) = GOLOMB_TABLE.lock().unwrap().get(k) {
        return *l;
    }
    let x = optimal_golomb_marks(k, SearchOptions::default()).expect("unlimited search terminates");
    remember(k, x[k - 1]);
    x[k - 1]
}

fn remember(k: usize, l: u32) {
    let mut t = GOLOMB_TABLE.lock().unwrap();
    if t.len() <= k {
        t.resize(k + 1, None);
    }
    t[k] = Some(l);
}

fn optimal_golomb_marks(k: usize, opts: SearchOptions) -> Result<Vec<u32>, SearchError> {
    let lb = span_bounds(k);
    let known = GOLOMB_TABLE.lock().unwrap().get(k).copied().flatten();
    let mut target = known.unwrap_or(lb[k].max(lb[k - 1] + 1));
    let mut budget = opts.budget;
    loop {
        if target >= MAX_UNIVERSE {
            return Err(SearchError::TooLarge(target));
        }
        let p = Problem { v: 0, k, shape: Shape::Linear, max_end: target, span_lb: lb.clone() };
        let res = engine::run(&p, Goal::First, RunOptions { budget, threads: opts.threads.max(1) });
        if let Some(x) = res.first {
            return Ok(x);
        }
        if res.budget_hit {
            return Err(SearchError::BudgetExceeded);
        }
        budget = budget.map(|b| b - res.nodes);
        target += 1;
    }
}

/// Minimal length of a `k`-mark Golomb ruler, by exhaustive search with
/// increasing length targets.
pub fn golomb_min_length(k: usize) -> Result<u32, SearchError> {
    golomb_min_length_with(k, SearchOptions::default())
}

pub fn golomb_min_length_with(k: usize, opts: SearchOptions) -> Result<u32, SearchError> {
    Ok(optimal_golomb(k, opts)?.length())
}

/// An optimal `k`-mark Golomb ruler: the first one met at the minimal
/// length, in the normal form `x_2 − x_1 < x_k − x_{k−1}`.
pub fn optimal_golomb(k: usize, opts: SearchOptions) -> Result<Ruler, SearchError> {
    if !(3..=MAX_MARKS).contains(&k) {
        return Err(SearchError::BadParameters { v: 0, k });
    }
    let x = optimal_golomb_marks(k, opts)?;
    remember(k, x[k - 1]);
    Ok(Ruler::plain(x).expect("engine emits increasing marks"))
}
