//! Rows of the reference table rebuilt from a computed spectrum.
//!
//! One row per modulus searched (`ruler` with the witness, or `nonexistent`),
//! then a `lemma-double` row: from `v` on every modulus is covered by
//! embedding the shortest ruler, whose residues and length are given.

use mgr_core::search::{SearchStatus, Spectrum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Ruler,
    Nonexistent,
    LemmaDouble,
    BudgetExceeded,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ruler => "ruler",
            RowStatus::Nonexistent => "nonexistent",
            RowStatus::LemmaDouble => "lemma-double",
            RowStatus::BudgetExceeded => "budget-exceeded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub v: u32,
    pub k: usize,
    pub status: RowStatus,
    pub residues: Vec<u32>,
    pub length: Option<u32>,
}

pub const HEADER: [&str; 5] = ["v", "k", "status", "residues", "length"];

impl Row {
    pub fn fields(&self) -> Vec<String> {
        vec![
            self.v.to_string(),
            self.k.to_string(),
            self.status.as_str().to_string(),
            crate::output::join(&self.residues),
            crate::output::opt(self.length),
        ]
    }
}

pub fn rows(s: &Spectrum) -> Vec<Row> {
    let mut out = Vec::with_capacity(s.trail.len() + 1);
    for e in &s.trail {
        let (status, residues, length) = match (&e.status, &e.witness) {
            (SearchStatus::Found, Some(w)) => (RowStatus::Ruler, w.residues().to_vec(), Some(w.length())),
            (SearchStatus::BudgetExceeded, _) => (RowStatus::BudgetExceeded, Vec::new(), None),
            _ => (RowStatus::Nonexistent, Vec::new(), None),
        };
        out.push(Row { v: e.v, k: s.k, status, residues, length });
    }
    if s.complete {
        if let Some(b) = &s.shortest {
            out.push(Row {
                v: s.embed_from,
                k: s.k,
                status: RowStatus::LemmaDouble,
                residues: b.residues().to_vec(),
                length: Some(b.length()),
            });
        }
    }
    out
}

pub fn text(rows: &[Row]) -> String {
    let mut s = String::new();
    for r in rows {
        let what = match r.status {
            RowStatus::Ruler => crate::output::join(&r.residues),
            RowStatus::Nonexistent => "does not exist".to_string(),
            RowStatus::LemmaDouble => format!("embed {} (L = {})", crate::output::join(&r.residues), r.length.unwrap_or(0)),
            RowStatus::BudgetExceeded => "budget exceeded".to_string(),
        };
        let v = if r.status == RowStatus::LemmaDouble { format!("v >= {}", r.v) } else { format!("v = {}", r.v) };
        s.push_str(&format!("{v:<10} {:>3}  {what}\n", r.k));
    }
    s
}
