//! Difference packings: `n` blocks of size `k` in `Z_v` whose in-block
//! differences are all distinct, i.e. `(v, k, 1)`-OOCs of size `n`.
//!
//! Work happens on difference classes `{d, v − d}`. The smallest class not
//! yet decided is either covered by a new block `{0, d, …}` or sent to the
//! leave; every other class of that block must then be larger than `d`.
//! For triples the class with the fewest completions is branched on instead.

use super::{SearchError, SearchOptions, SearchStatus, MAX_UNIVERSE};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingOutcome {
    pub status: SearchStatus,
    pub blocks: Option<Vec<Vec<u32>>>,
    pub nodes_visited: u64,
}

struct State {
    v: u32,
    k: usize,
    /// Classes `1..=top` that may be used; `v/2` is excluded for even `v`.
    top: u32,
    taken: Vec<bool>,
    blocks: Vec<Vec<u32>>,
    nodes: u64,
    budget: Option<u64>,
    hit: bool,
}

impl State {
    fn class(&self, x: u32, y: u32) -> u32 {
        let d = if x > y { x - y } else { y - x };
        d.min(self.v - d)
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            self.hit = true;
        }
        !self.hit
    }

    fn solve(&mut self, from: u32, blocks_left: usize, leave_left: u32) -> bool {
        if blocks_left == 0 {
            return true;
        }
        let Some(d) = (from..=self.top).find(|&d| !self.taken[d as usize]) else {
            return false;
        };
        self.taken[d as usize] = true;
        let mut block = vec![0, d];
        if self.extend(&mut block, d, blocks_left, leave_left) {
            return true;
        }
        if self.hit {
            return false;
        }
        if leave_left > 0 && self.tick() && self.solve(d + 1, blocks_left, leave_left - 1) {
            return true;
        }
        self.taken[d as usize] = false;
        false
    }

    /// Partners `(e, f)` completing `{d, e, f}` to the classes of a block
    /// `{0, d, x}`, without repeats.
    fn triples(&self, d: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for x in 1..self.v {
            if x == d {
                continue;
            }
            let (e, f) = (self.class(x, 0), self.class(x, d));
            let (e, f) = (e.min(f), e.max(f));
            if e != f
                && e != d
                && f != d
                && f <= self.top
                && !self.taken[e as usize]
                && !self.taken[f as usize]
                && !out.contains(&(e, f))
            {
                out.push((e, f));
            }
        }
        out
    }

    fn solve3(&mut self, blocks_left: usize, leave_left: u32) -> bool {
        if blocks_left == 0 {
            return true;
        }
        let mut pick: Option<(u32, Vec<(u32, u32)>)> = None;
        for d in 1..=self.top {
            if self.taken[d as usize] {
                continue;
            }
            let t = self.triples(d);
            if t.is_empty() && leave_left == 0 {
                return false;
            }
            if pick.as_ref().map_or(true, |(_, best)| t.len() < best.len()) {
                let done = t.len() <= 1;
                pick = Some((d, t));
                if done {
                    break;
                }
            }
        }
        let Some((d, options)) = pick else { return false };
        self.taken[d as usize] = true;
        for (e, f) in options {
            if !self.tick() {
                break;
            }
            self.taken[e as usize] = true;
            self.taken[f as usize] = true;
            let x = (1..self.v).find(|&x| x != d && self.class(x, 0).min(self.class(x, d)) == e && self.class(x, 0).max(self.class(x, d)) == f).unwrap();
            let mut b = vec![0, d, x];
            b.sort_unstable();
            self.blocks.push(b);
            if self.solve3(blocks_left - 1, leave_left) {
                return true;
            }
            self.blocks.pop();
            self.taken[e as usize] = false;
            self.taken[f as usize] = false;
        }
        if leave_left > 0 && self.tick() && self.solve3(blocks_left, leave_left - 1) {
            return true;
        }
        self.taken[d as usize] = false;
        false
    }

    fn extend(&mut self, block: &mut Vec<u32>, d: u32, blocks_left: usize, leave_left: u32) -> bool {
        if block.len() == self.k {
            self.blocks.push(block.clone());
            if self.solve(d + 1, blocks_left - 1, leave_left) {
                return true;
            }
            self.blocks.pop();
            return false;
        }
        let lo = if block.len() == 2 { 1 } else { block[block.len() - 1] + 1 };
        let mut fresh = Vec::with_capacity(block.len());
        for x in lo..self.v {
            if x == d || self.hit {
                continue;
            }
            fresh.clear();
            let ok = block.iter().all(|&y| {
                let c = self.class(x, y);
                let good = c > d && c <= self.top && !self.taken[c as usize] && !fresh.contains(&c);
                fresh.push(c);
                good
            });
            if !ok || !self.tick() {
                continue;
            }
            for &c in &fresh {
                self.taken[c as usize] = true;
            }
            block.push(x);
            if self.extend(block, d, blocks_left, leave_left) {
                return true;
            }
            block.pop();
            for &c in &fresh {
                self.taken[c as usize] = false;
            }
        }
        false
    }
}

/// Searches for `n` blocks of size `k` in `Z_v` with all `n·k(k−1)`
/// differences distinct. Blocks come out translated to contain 0.
pub fn difference_packing(v: u32, k: usize, n: usize, opts: SearchOptions) -> Result<PackingOutcome, SearchError> {
    if k < 2 || v < 2 {
        return Err(SearchError::BadParameters { v, k });
    }
    if v > MAX_UNIVERSE {
        return Err(SearchError::TooLarge(v));
    }
    let top = if v % 2 == 0 { v / 2 - 1 } else { (v - 1) / 2 };
    let need = (n * k * (k - 1) / 2) as u64;
    let none = |nodes| Ok(PackingOutcome { status: SearchStatus::Exhausted, blocks: None, nodes_visited: nodes });
    if need > top as u64 {
        return none(0);
    }
    let mut st = State {
        v,
        k,
        top,
        taken: vec![false; top as usize + 2],
        blocks: Vec::with_capacity(n),
        nodes: 0,
        budget: opts.budget,
        hit: false,
    };
    let leave = top - need as u32;
    let found = if k == 3 { st.solve3(n, leave) } else { st.solve(1, n, leave) };
    let status = if found {
        SearchStatus::Found
    } else if st.hit {
        SearchStatus::BudgetExceeded
    } else {
        SearchStatus::Exhausted
    };
    Ok(PackingOutcome { status, blocks: found.then_some(st.blocks), nodes_visited: st.nodes.min(opts.budget.unwrap_or(u64::MAX)) })
}
