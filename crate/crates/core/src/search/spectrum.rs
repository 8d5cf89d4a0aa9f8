//! The full spectrum `MGR(k)` of moduli admitting a `(v, k)`-MGR.
//!
//! Moduli are classified upward from `k² − k + 1` while tracking the shortest
//! ruler length `L` seen so far. Once `2L + 1 ≤ v` every larger modulus is
//! covered by embedding that ruler, so the scan stops.

use super::{min_length_below, search, SearchError, SearchMode, SearchOptions, SearchStatus};
use crate::ruler::Ruler;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrailEntry {
    pub v: u32,
    pub status: SearchStatus,
    pub witness: Option<Ruler>,
    pub nodes_visited: u64,
    /// Shortest rotation length established at this modulus (only when it
    /// improved on what was known, otherwise the witness's own).
    pub length: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    pub k: usize,
    /// Moduli below `tail_start` that admit a ruler.
    pub sporadic: Vec<u32>,
    /// Every `v ≥ tail_start` admits a ruler.
    pub tail_start: u32,
    /// First modulus covered by embedding `shortest` rather than by search.
    pub embed_from: u32,
    /// A shortest ruler seen; `2·length + 1 ≤ embed_from`.
    pub shortest: Option<Ruler>,
    pub trail: Vec<TrailEntry>,
    /// False when a node budget cut the scan short.
    pub complete: bool,
}

impl Spectrum {
    /// Whether a `(v, k)`-MGR exists according to this spectrum.
    pub fn contains(&self, v: u32) -> bool {
        v >= self.tail_start || self.sporadic.binary_search(&v).is_ok()
    }
}

pub fn spectrum(k: usize, opts: SearchOptions) -> Result<Spectrum, SearchError> {
    let first_v = (k * k - k + 1) as u32;
    let mut budget = opts.budget;
    let mut trail = Vec::new();
    let mut best: Option<Ruler> = None;
    let mut complete = true;
    let mut v = first_v;
    loop {
        if let Some(b) = &best {
            if 2 * b.length() + 1 <= v {
                break;
            }
        }
        let o = search(v, k, SearchMode::First, SearchOptions { budget, ..opts })?;
        budget = budget.map(|b| b.saturating_sub(o.nodes_visited));
        let mut entry = TrailEntry {
            v,
            status: o.status,
            witness: o.witness.clone(),
            nodes_visited: o.nodes_visited,
            length: o.min_length_found,
        };
        if o.status == SearchStatus::BudgetExceeded {
            trail.push(entry);
            complete = false;
            break;
        }
        if let Some(w) = &o.witness {
            let known = best.as_ref().map_or(u32::MAX, Ruler::length);
            let own = w.min_rotation_length();
            let bound = known.min(own);
            let m = min_length_below(v, k, Some(bound), SearchOptions { budget, ..opts })?;
            budget = budget.map(|b| b.saturating_sub(m.nodes_visited));
            entry.nodes_visited += m.nodes_visited;
            if m.status == SearchStatus::BudgetExceeded {
                complete = false;
            }
            let improved = match m.witness {
                Some(r) => Some(r),
                None if own < known => Some(crate::constructions::shortest_rotation(w)),
                None => None,
            };
            if let Some(r) = improved {
                entry.length = Some(r.length());
                best = Some(r);
            }
            trail.push(entry);
            if !complete {
                break;
            }
        } else {
            trail.push(entry);
        }
        v += 1;
    }
    let embed_from = v;
    // smallest v0 such that everything from v0 up to the embedding range exists
    let mut tail_start = embed_from;
    for e in trail.iter().rev() {
        if e.status == SearchStatus::Found && e.v + 1 == tail_start {
            tail_start = e.v;
        } else {
            break;
        }
    }
    if !complete {
        tail_start = u32::MAX;
    }
    let sporadic = trail
        .iter()
        .filter(|e| e.status == SearchStatus::Found && e.v < tail_start)
        .map(|e| e.v)
        .collect();
    Ok(Spectrum { k, sporadic, tail_start, embed_from, shortest: best, trail, complete })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_spectra() {
        let s = spectrum(3, SearchOptions::default()).unwrap();
        assert_eq!((s.sporadic.clone(), s.tail_start), (vec![], 7));
        let s = spectrum(5, SearchOptions::default()).unwrap();
        assert_eq!((s.sporadic.clone(), s.tail_start), (vec![21], 23));
        assert_eq!(s.shortest.as_ref().unwrap().length(), 11);
        assert!(s.contains(21) && !s.contains(22) && s.contains(1000));
    }

    #[test]
    fn budget_marks_incomplete() {
        let s = spectrum(7, SearchOptions { budget: Some(100), threads: 1 }).unwrap();
        assert!(!s.complete);
        assert_eq!(s.trail.last().unwrap().status, SearchStatus::BudgetExceeded);
    }
}
