//! The ruler type, its difference profile, verification and canonical form.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RulerError {
    #[error("a ruler needs at least 3 marks, got {0}")]
    TooFewMarks(usize),
    #[error("modulus must be at least 3, got {0}")]
    ModulusTooSmall(u32),
    #[error("residues must be strictly increasing")]
    NotIncreasing,
    #[error("residue {0} is outside [0, {1})")]
    OutOfRange(u32, u32),
    #[error("record declares k = {declared} but lists {actual} residues")]
    OrderMismatch { declared: usize, actual: usize },
    #[error("embedding needs v >= 2L + 1 = {needed}, got {got}")]
    EmbedTooSmall { needed: u64, got: u32 },
    #[error("ruler is not a Golomb ruler: difference {0} repeats")]
    NotGolomb(u32),
}

/// `k` marks, either residues mod `v` or (with no modulus) plain integers.
///
/// Serialized as `{"v": 7, "k": 3, "residues": [0, 1, 3]}`; a plain ruler has `"v": null`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RulerRecord", into = "RulerRecord")]
pub struct Ruler {
    modulus: Option<u32>,
    marks: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RulerRecord {
    v: Option<u32>,
    k: usize,
    residues: Vec<u32>,
}

impl TryFrom<RulerRecord> for Ruler {
    type Error = RulerError;
    fn try_from(r: RulerRecord) -> Result<Self, RulerError> {
        if r.k != r.residues.len() {
            return Err(RulerError::OrderMismatch { declared: r.k, actual: r.residues.len() });
        }
        match r.v {
            Some(v) => Ruler::new(v, r.residues),
            None => Ruler::plain(r.residues),
        }
    }
}

impl From<Ruler> for RulerRecord {
    fn from(r: Ruler) -> Self {
        RulerRecord { v: r.modulus, k: r.marks.len(), residues: r.marks }
    }
}

impl Ruler {
    pub fn new(v: u32, residues: Vec<u32>) -> Result<Ruler, RulerError> {
        if v < 3 {
            return Err(RulerError::ModulusTooSmall(v));
        }
        if let Some(&x) = residues.iter().find(|&&x| x >= v) {
            return Err(RulerError::OutOfRange(x, v));
        }
        Self::check_marks(&residues)?;
        Ok(Ruler { modulus: Some(v), marks: residues })
    }

    /// A non-modular ruler.
    pub fn plain(marks: Vec<u32>) -> Result<Ruler, RulerError> {
        Self::check_marks(&marks)?;
        Ok(Ruler { modulus: None, marks })
    }

    fn check_marks(marks: &[u32]) -> Result<(), RulerError> {
        if marks.len() < 3 {
            return Err(RulerError::TooFewMarks(marks.len()));
        }
        if marks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(RulerError::NotIncreasing);
        }
        Ok(())
    }

    /// Builds from an arbitrary set of residues, reducing and sorting them.
    pub fn from_set(v: u32, residues: impl IntoIterator<Item = u64>) -> Result<Ruler, RulerError> {
        let mut r: Vec<u32> = residues.into_iter().map(|x| (x % v as u64) as u32).collect();
        r.sort_unstable();
        r.dedup();
        Ruler::new(v, r)
    }

    pub fn modulus(&self) -> Option<u32> {
        self.modulus
    }

    /// The modulus; panics on a plain ruler.
    pub fn v(&self) -> u32 {
        self.modulus.expect("plain ruler has no modulus")
    }

    pub fn k(&self) -> usize {
        self.marks.len()
    }

    pub fn residues(&self) -> &[u32] {
        &self.marks
    }

    /// `x_k - x_1`.
    pub fn length(&self) -> u32 {
        self.marks[self.marks.len() - 1] - self.marks[0]
    }

    /// Smallest length over all rotations: the modulus minus the largest cyclic gap.
    pub fn min_rotation_length(&self) -> u32 {
        match self.modulus {
            None => self.length(),
            Some(v) => v - self.gaps().into_iter().max().unwrap(),
        }
    }

    /// Cyclic gaps `x_2-x_1, …, x_k-x_{k-1}, v + x_1 - x_k`.
    pub fn gaps(&self) -> Vec<u32> {
        let mut g: Vec<u32> = self.marks.windows(2).map(|w| w[1] - w[0]).collect();
        if let Some(v) = self.modulus {
            g.push(v + self.marks[0] - self.marks[self.marks.len() - 1]);
        }
        g
    }

    /// Drops the modulus.
    pub fn to_plain(&self) -> Ruler {
        Ruler { modulus: None, marks: self.marks.clone() }
    }
}

impl fmt::Display for Ruler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let marks: Vec<String> = self.marks.iter().map(u32::to_string).collect();
        match self.modulus {
            Some(v) => write!(f, "({v},{})-ruler {{{}}}", self.k(), marks.join(",")),
            None => write!(f, "ruler {{{}}}", marks.join(",")),
        }
    }
}

/// Outcome of [`verify_mgr`]. A failing report names a repeated difference
/// and the two ordered pairs `(x, y)` with `x - y ≡ d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub valid: bool,
    pub witness: Option<RepeatedDifference>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepeatedDifference {
    pub d: u32,
    pub first: (u32, u32),
    pub second: (u32, u32),
}

/// Checks that all `k(k-1)` ordered differences are distinct and nonzero.
/// A plain ruler is checked as a Golomb ruler (positive differences only).
pub fn verify_mgr(r: &Ruler) -> VerifyReport {
    let x = r.residues();
    let span = match r.modulus() {
        Some(v) => v as usize,
        None => r.length() as usize + 1,
    };
    let mut seen: Vec<Option<(u32, u32)>> = vec![None; span];
    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(x.len() * x.len());
    for j in 1..x.len() {
        for i in 0..j {
            pairs.push((x[j], x[i]));
        }
    }
    if r.modulus().is_some() {
        for j in 1..x.len() {
            for i in 0..j {
                pairs.push((x[i], x[j]));
            }
        }
    }
    for (a, b) in pairs {
        let d = match r.modulus() {
            Some(v) => ((a as u64 + v as u64 - b as u64) % v as u64) as u32,
            None => a - b,
        };
        match seen[d as usize] {
            Some(first) => {
                return VerifyReport {
                    valid: false,
                    witness: Some(RepeatedDifference { d, first, second: (a, b) }),
                }
            }
            None => seen[d as usize] = Some((a, b)),
        }
    }
    VerifyReport { valid: true, witness: None }
}

/// Multiset of differences over Z_v together with the leave.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffProfile {
    pub v: u32,
    /// `multiplicity[d]` = number of ordered pairs with difference `d`; index 0 is always 0.
    pub multiplicity: Vec<u32>,
    pub leave: Vec<u32>,
    pub leave_even: usize,
    pub leave_odd: usize,
    pub length: u32,
}

impl DiffProfile {
    pub fn max_multiplicity(&self) -> u32 {
        self.multiplicity.iter().copied().max().unwrap_or(0)
    }

    /// Distinct nonzero differences.
    pub fn distinct(&self) -> usize {
        self.multiplicity.iter().filter(|&&m| m > 0).count()
    }
}

pub fn diff_profile(r: &Ruler) -> DiffProfile {
    let v = r.v();
    let mut multiplicity = vec![0u32; v as usize];
    let x = r.residues();
    for &a in x {
        for &b in x {
            if a != b {
                multiplicity[((a + v - b) % v) as usize] += 1;
            }
        }
    }
    let leave: Vec<u32> = (0..v).filter(|&d| multiplicity[d as usize] == 0).collect();
    let leave_even = leave.iter().filter(|&&d| d % 2 == 0).count();
    DiffProfile {
        v,
        leave_odd: leave.len() - leave_even,
        leave_even,
        leave,
        multiplicity,
        length: r.length(),
    }
}

/// Lexicographically least ruler among all translates of `r` and of `-r`,
/// each normalized to start at 0. A plain ruler is compared with its mirror image.
pub fn canonicalize(r: &Ruler) -> Ruler {
    let Some(v) = r.modulus() else {
        let l = r.length();
        let base: Vec<u32> = r.residues().iter().map(|&x| x - r.residues()[0]).collect();
        let mut mirror: Vec<u32> = base.iter().map(|&x| l - x).collect();
        mirror.sort_unstable();
        return Ruler { modulus: None, marks: base.min(mirror) };
    };
    let x = r.residues();
    let neg: Vec<u32> = x.iter().map(|&a| (v - a) % v).collect();
    let mut best: Option<Vec<u32>> = None;
    let mut cand = Vec::with_capacity(x.len());
    for set in [x, &neg[..]] {
        // a translate starts at 0 only if some element moves to 0
        for &t in set {
            cand.clear();
            cand.extend(set.iter().map(|&a| (a + v - t) % v));
            cand.sort_unstable();
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand.clone());
            }
        }
    }
    Ruler { modulus: Some(v), marks: best.unwrap() }
}

/// Reads the marks of `r` (a valid modular or plain Golomb ruler of length `L`)
/// as residues mod `v_new ≥ 2L + 1`.
pub fn embed(r: &Ruler, v_new: u32) -> Result<Ruler, RulerError> {
    let plain = Ruler::plain(r.residues().iter().map(|&x| x - r.residues()[0]).collect())?;
    if let Some(w) = verify_mgr(&plain).witness {
        return Err(RulerError::NotGolomb(w.d));
    }
    let needed = 2 * plain.length() as u64 + 1;
    if (v_new as u64) < needed {
        return Err(RulerError::EmbedTooSmall { needed, got: v_new });
    }
    Ruler::new(v_new, plain.marks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: u32, x: &[u32]) -> Ruler {
        Ruler::new(v, x.to_vec()).unwrap()
    }

    #[test]
    fn verify_examples() {
        assert!(verify_mgr(&r(7, &[0, 1, 3])).valid);
        let bad = verify_mgr(&r(7, &[0, 1, 2]));
        assert!(!bad.valid);
        assert_eq!(bad.witness, Some(RepeatedDifference { d: 1, first: (1, 0), second: (2, 1) }));
        assert!(verify_mgr(&r(21, &[0, 2, 7, 8, 11])).valid);
        // v/2 as a difference collides with its own negative
        let half = verify_mgr(&r(8, &[0, 1, 4]));
        assert_eq!(half.witness.unwrap().d, 4);
    }

    #[test]
    fn profile_examples() {
        let p = diff_profile(&r(7, &[0, 1, 3]));
        assert_eq!(p.leave, vec![0]);
        assert_eq!(&p.multiplicity[1..], &[1, 1, 1, 1, 1, 1]);
        let p = diff_profile(&r(8, &[0, 1, 3]));
        assert!(p.leave.contains(&0) && p.leave.contains(&4));
        // (14,4): v ≡ 2 mod 4, so both leave parity classes are odd
        assert!(!verify_mgr(&r(14, &[0, 1, 3, 7])).valid);
        let x = r(14, &[0, 1, 4, 6]);
        assert!(verify_mgr(&x).valid);
        let p = diff_profile(&x);
        assert_eq!(p.leave, vec![0, 7]);
        assert_eq!((p.leave_even, p.leave_odd), (1, 1));
        assert_eq!(p.distinct() + p.leave.len(), 14);
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonicalize(&r(7, &[1, 2, 4])).residues(), &[0, 1, 3]);
        assert_eq!(canonicalize(&r(7, &[0, 4, 6])).residues(), &[0, 1, 3]);
        let c = canonicalize(&r(21, &[0, 2, 7, 8, 11]));
        assert_eq!(canonicalize(&c), c);
    }

    #[test]
    fn embed_examples() {
        let e = embed(&Ruler::plain(vec![0, 1, 4, 6]).unwrap(), 13).unwrap();
        assert!(verify_mgr(&e).valid);
        assert_eq!(e.v(), 13);
        let e = embed(&r(7, &[0, 1, 3]), 8).unwrap();
        assert!(verify_mgr(&e).valid);
        assert_eq!(
            embed(&Ruler::plain(vec![0, 1, 4, 6]).unwrap(), 12),
            Err(RulerError::EmbedTooSmall { needed: 13, got: 12 })
        );
        assert!(matches!(embed(&Ruler::plain(vec![0, 1, 2]).unwrap(), 20), Err(RulerError::NotGolomb(1))));
    }

    #[test]
    fn record_errors() {
        assert_eq!(Ruler::new(7, vec![0, 1]), Err(RulerError::TooFewMarks(2)));
        assert_eq!(Ruler::new(7, vec![0, 3, 1]), Err(RulerError::NotIncreasing));
        assert_eq!(Ruler::new(7, vec![0, 1, 7]), Err(RulerError::OutOfRange(7, 7)));
        let json = r#"{"v":7,"k":4,"residues":[0,1,3]}"#;
        assert!(serde_json::from_str::<Ruler>(json).is_err());
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&r(7, &[0, 1, 3])).unwrap();
        assert_eq!(s, r#"{"v":7,"k":3,"residues":[0,1,3]}"#);
        let back: Ruler = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r(7, &[0, 1, 3]));
    }
}
