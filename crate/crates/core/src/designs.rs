//! Optical orthogonal codes, cyclic Steiner 2-designs and relative
//! difference families over `Z_v`.
//!
//! The nonexistence checks all rest on counting odd differences: a block
//! with `h` even and `k − h` odd residues has `2h(k − h)` odd differences,
//! and the total number of odd differences is fixed by the leave.

use crate::certify::{Certificate, Evidence, Representation, Verdict};
use crate::numtheory::{factorize, is_sum_two_squares, or_shifted, sum_n_squares_bounded, Parity};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OocError {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("a code needs at least one block")]
    NoBlocks,
    #[error("block {block} has {found} residues, expected {expected}")]
    MixedSizes { block: usize, expected: usize, found: usize },
    #[error("block {block} contains {value}, outside [0, {v})")]
    OutOfRange { block: usize, value: u64, v: u64 },
    #[error("block {block} repeats {value}")]
    Repeated { block: usize, value: u64 },
    #[error("block {0} is empty")]
    EmptyBlock(usize),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DesignError {
    #[error("modulus {0} must be even")]
    OddModulus(u64),
    #[error("order {0} must be even")]
    OddOrder(u64),
    #[error("order must be at least 2, got {0}")]
    OrderTooSmall(u64),
    #[error("v = {v} is too small for a code of order {k} (need v > k(k-1))")]
    TooSmall { v: u64, k: u64 },
    #[error("{w} does not divide {v}")]
    NotDivisor { v: u64, w: u64 },
    #[error("not applicable: {0}")]
    Inapplicable(String),
    #[error("family member (v = {v}, k = {k}) is not certified by the counting argument")]
    NotConfirmed { v: u64, k: u64 },
}

#[derive(Deserialize)]
struct RawOocCode {
    v: u64,
    lambda_a: u64,
    lambda_c: u64,
    blocks: Vec<Vec<u64>>,
}

/// A `(v, k, λ_a, λ_c)` optical orthogonal code given by the supports of
/// its codewords. Blocks are stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawOocCode")]
pub struct OocCode {
    pub v: u64,
    pub lambda_a: u64,
    pub lambda_c: u64,
    pub blocks: Vec<Vec<u64>>,
}

impl TryFrom<RawOocCode> for OocCode {
    type Error = OocError;
    fn try_from(r: RawOocCode) -> Result<Self, OocError> {
        OocCode::new(r.v, r.blocks, r.lambda_a, r.lambda_c)
    }
}

impl OocCode {
    pub fn new(v: u64, mut blocks: Vec<Vec<u64>>, lambda_a: u64, lambda_c: u64) -> Result<Self, OocError> {
        if v == 0 {
            return Err(OocError::ZeroModulus);
        }
        let k = blocks.first().ok_or(OocError::NoBlocks)?.len();
        for (i, b) in blocks.iter_mut().enumerate() {
            if b.is_empty() {
                return Err(OocError::EmptyBlock(i));
            }
            if b.len() != k {
                return Err(OocError::MixedSizes { block: i, expected: k, found: b.len() });
            }
            b.sort_unstable();
            if let Some(&value) = b.iter().find(|&&x| x >= v) {
                return Err(OocError::OutOfRange { block: i, value, v });
            }
            if let Some(w) = b.windows(2).find(|w| w[0] == w[1]) {
                return Err(OocError::Repeated { block: i, value: w[0] });
            }
        }
        Ok(OocCode { v, lambda_a, lambda_c, blocks })
    }

    /// A code with `λ_a = λ_c = 1`.
    pub fn packing(v: u64, blocks: Vec<Vec<u64>>) -> Result<Self, OocError> {
        Self::new(v, blocks, 1, 1)
    }

    pub fn k(&self) -> usize {
        self.blocks[0].len()
    }

    pub fn size(&self) -> usize {
        self.blocks.len()
    }

    /// Residues of `Z_v` not occurring as a difference within any block
    /// (including 0).
    pub fn leave(&self) -> Vec<u64> {
        let mut seen = vec![false; self.v as usize];
        seen[0] = true;
        for b in &self.blocks {
            for &x in b {
                for &y in b {
                    if x != y {
                        seen[((x + self.v - y) % self.v) as usize] = true;
                    }
                }
            }
        }
        let mut leave = vec![0];
        leave.extend((1..self.v).filter(|&d| !seen[d as usize]));
        leave
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OocReport {
    pub valid: bool,
    pub v: u64,
    pub k: usize,
    pub size: usize,
    /// Largest out-of-phase autocorrelation, with the block and shift.
    pub max_auto: u64,
    pub auto_at: Option<(usize, u64)>,
    /// Largest cross-correlation, with the block pair and shift.
    pub max_cross: u64,
    pub cross_at: Option<(usize, usize, u64)>,
    /// For `λ_a = λ_c = 1`: whether all in-block differences are distinct.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub difference_packing: Option<bool>,
    /// For valid `λ = 1` codes: whether the size meets the floor bound.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub optimal: Option<bool>,
    pub size_bound: u64,
}

fn correlation(v: u64, a: &[u64], member: &[bool], tau: u64) -> u64 {
    a.iter().filter(|&&x| member[((x + tau) % v) as usize]).count() as u64
}

/// Correlation maxima by direct computation over every shift.
pub fn verify_ooc(c: &OocCode) -> OocReport {
    let v = c.v;
    let members: Vec<Vec<bool>> = c
        .blocks
        .iter()
        .map(|b| {
            let mut m = vec![false; v as usize];
            b.iter().for_each(|&x| m[x as usize] = true);
            m
        })
        .collect();
    let (mut max_auto, mut auto_at) = (0, None);
    let (mut max_cross, mut cross_at) = (0, None);
    for (i, b) in c.blocks.iter().enumerate() {
        for tau in 1..v {
            let s = correlation(v, b, &members[i], tau);
            if s > max_auto {
                (max_auto, auto_at) = (s, Some((i, tau)));
            }
        }
        for j in 0..c.blocks.len() {
            if j == i {
                continue;
            }
            for tau in 0..v {
                let s = correlation(v, b, &members[j], tau);
                if s > max_cross {
                    (max_cross, cross_at) = (s, Some((i, j, tau)));
                }
            }
        }
    }
    let valid = max_auto <= c.lambda_a && max_cross <= c.lambda_c;
    let k = c.k();
    let unit = c.lambda_a == 1 && c.lambda_c == 1;
    let difference_packing = unit.then(|| distinct_differences(c));
    debug_assert!(difference_packing.map_or(true, |p| p == valid));
    let size_bound = if v > k as u64 && k >= 2 { ooc_size_bound(v, k as u64) } else { 0 };
    let optimal = (unit && valid && k >= 2).then(|| c.size() as u64 == size_bound);
    OocReport { valid, v, k, size: c.size(), max_auto, auto_at, max_cross, cross_at, difference_packing, optimal, size_bound }
}

fn distinct_differences(c: &OocCode) -> bool {
    let mut seen = vec![false; c.v as usize];
    for b in &c.blocks {
        for &x in b {
            for &y in b {
                if x != y {
                    let d = ((x + c.v - y) % c.v) as usize;
                    if seen[d] {
                        return false;
                    }
                    seen[d] = true;
                }
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinerReport {
    pub valid: bool,
    pub ooc: OocReport,
    pub leave: Vec<u64>,
    /// The leave is `{0}` or the subgroup of order `k`.
    pub leave_ok: bool,
}

/// A cyclic `S(2, k, v)` given by base blocks: a `(v, k, 1)`-OOC whose leave
/// is `{0}` or the order-`k` subgroup.
pub fn verify_cyclic_steiner(c: &OocCode) -> SteinerReport {
    let mut unit = c.clone();
    unit.lambda_a = 1;
    unit.lambda_c = 1;
    let ooc = verify_ooc(&unit);
    let leave = c.leave();
    let k = c.k() as u64;
    let subgroup: Vec<u64> = if c.v % k == 0 { (0..k).map(|i| i * (c.v / k)).collect() } else { vec![] };
    let leave_ok = leave == [0] || leave == subgroup;
    SteinerReport { valid: ooc.valid && leave_ok, ooc, leave, leave_ok }
}

/// `⌊(v − 1) / (k(k − 1))⌋`, the largest possible size of a `(v, k, 1)`-OOC.
pub fn ooc_size_bound(v: u64, k: u64) -> u64 {
    assert!(k >= 2 && v > k, "need v > k >= 2");
    (v - 1) / (k * (k - 1))
}

pub fn is_optimal(v: u64, k: u64, n: u64) -> bool {
    n == ooc_size_bound(v, k)
}

/// `(n, ℓ, S, T)` for `v = k(k−1)n + 2ℓ`.
fn counting_sets(v: u64, k: u64) -> Result<(u64, u64, Vec<u64>, Vec<u64>), DesignError> {
    if k < 2 {
        return Err(DesignError::OrderTooSmall(k));
    }
    if v % 2 == 1 {
        return Err(DesignError::OddModulus(v));
    }
    let kk = k * (k - 1);
    if v <= kk {
        return Err(DesignError::TooSmall { v, k });
    }
    let n = (v - 1) / kk;
    let ell = (v - kk * n) / 2;
    let s = (0..ell).map(|h| v / 4 - h).collect();
    let t = (0..=k / 2).map(|h| h * (k - h)).collect();
    Ok((n, ell, s, t))
}

/// Some `s ∈ S` written as a sum of exactly `n` elements of `T`, found with
/// a reachability table over (count, sum).
fn represent(s: &[u64], t: &[u64], n: u64) -> Option<Representation> {
    let cap = *s.iter().max()? as usize;
    let len = cap + 1;
    let words = len.div_ceil(64);
    let get = |layer: &[u64], x: usize| layer[x / 64] >> (x % 64) & 1 == 1;
    let mut layers: Vec<Vec<u64>> = vec![vec![0; words]];
    layers[0][0] = 1;
    // 0 ∈ T makes the layers increase, so a repeated layer is final
    while (layers.len() as u64) <= n {
        let prev = layers.last().unwrap();
        let mut next = vec![0u64; words];
        for &x in t {
            if x as usize <= cap {
                or_shifted(&mut next, prev, x as usize, len);
            }
        }
        if t.contains(&0) && next == *prev {
            break;
        }
        layers.push(next);
    }
    let last = layers.len() - 1;
    let layer = |c: u64| &layers[(c as usize).min(last)];
    let &target = s.iter().find(|&&x| get(layer(n), x as usize))?;
    let mut terms = Vec::with_capacity(n as usize);
    let mut rest = target as usize;
    for c in (1..=n).rev() {
        let &x = t
            .iter()
            .filter(|&&x| x as usize <= rest)
            .find(|&&x| get(layer(c - 1), rest - x as usize))
            .expect("reachable sums have a predecessor");
        terms.push(x);
        rest -= x as usize;
    }
    terms.sort_unstable_by(|a, b| b.cmp(a));
    Some(Representation { s: target, terms })
}

/// The counting argument for an optimal `(v, k, 1)`-OOC with `v` even: some
/// element of `S` must be a sum of `n` elements of `T`.
pub fn certify_optimal_ooc(v: u64, k: u64) -> Result<Certificate, DesignError> {
    let (n, ell, s, t) = counting_sets(v, k)?;
    let representation = represent(&s, &t, n);
    let verdict = if representation.is_some() { Verdict::Inconclusive } else { Verdict::Nonexistent };
    Ok(Certificate { v, k, verdict, evidence: Evidence::CountingArgument { n, ell, s, t, representation } })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OocFamily {
    /// Odd `k ≢ 1 mod 8` with `ℓ = 1` and `S` a single odd integer.
    #[serde(rename = "thm4.3")]
    Thm43 { k: u64, v_max: u64 },
    /// `v = 2k(k−1) + 2ℓ` where no element of `R` is a sum of two squares.
    RSet { ell: u64, k_min: u64, k_max: u64 },
    /// `v = 3k(k−1) + 2` for `k = (4^(a+1)(24c+7)+2)/3` or `4^(a+1)(8c+5)`.
    N3Ell1 { k_max: u64 },
    /// `v = 3k(k−1) + 4` for `k = (4^(a+3)(24c+23)−2)/3` or `4^(a+3)(8c+5)`.
    N3Ell2 { k_max: u64 },
    /// `v = 2k(k−1) + 2` where `k` has a prime `≡ 3 mod 4` to an odd power.
    KHalf { k_min: u64, k_max: u64 },
    /// The first `count` even `k` whose `R` (for this `ℓ`) is a run of
    /// non-sums of two squares.
    Infinite { ell: u64, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OocFamilyMember {
    pub v: u64,
    pub k: u64,
    /// The set `R` of the two-square criterion, for the kinds that use it.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<Vec<i64>>,
    pub certificate: Certificate,
}

/// `R` for `v = 2k(k−1) + 2ℓ`. For odd `k` membership is tested for plain
/// two-square representability.
pub fn r_set(k: u64, ell: u64) -> Vec<i64> {
    let (k, ell) = (k as i64, ell as i64);
    (0..ell)
        .map(|h| match (k % 2, ell % 2) {
            (0, _) => (k - ell + 1).div_euclid(2) + h,
            (_, 0) => k - ell + 2 * h,
            _ => k - ell + 2 * h + 1,
        })
        .collect()
}

fn r_obstructs(r: &[i64]) -> bool {
    r.iter().all(|&x| x < 0 || !is_sum_two_squares(x as u64))
}

fn pow4(e: u32) -> Option<u64> {
    4u64.checked_pow(e)
}

/// Values of `f(a, c)` up to `k_max` for `a, c ≥ 0`, where `f` grows in both.
fn two_parameter(k_max: u64, f: impl Fn(u64, u64) -> Option<u64>) -> Vec<u64> {
    let mut out = Vec::new();
    for a in 0.. {
        match f(a, 0) {
            Some(k) if k <= k_max => {}
            _ => break,
        }
        for c in 0.. {
            match f(a, c) {
                Some(k) if k <= k_max => out.push(k),
                _ => break,
            }
        }
    }
    out
}

fn confirm(v: u64, k: u64, r: Option<Vec<i64>>) -> Result<OocFamilyMember, DesignError> {
    let certificate = certify_optimal_ooc(v, k)?;
    if certificate.verdict != Verdict::Nonexistent {
        return Err(DesignError::NotConfirmed { v, k });
    }
    Ok(OocFamilyMember { v, k, r, certificate })
}

/// Enumerates a family of nonexistent optimal OOCs and certifies every member
/// with [`certify_optimal_ooc`].
pub fn family_scan_ooc(family: OocFamily) -> Result<Vec<OocFamilyMember>, DesignError> {
    let mut cand: Vec<(u64, u64, Option<Vec<i64>>)> = Vec::new();
    match family {
        OocFamily::Thm43 { k, v_max } => {
            let kk = k * k.saturating_sub(1);
            let classes: Vec<(u64, u64)> = match k % 8 {
                3 => vec![(3 * kk + 2, 4 * kk), (2 * kk + 2, 4 * kk)],
                5 => vec![(kk + 2, 2 * kk)],
                7 => vec![(kk + 2, 4 * kk), (2 * kk + 2, 4 * kk)],
                _ => return Err(DesignError::Inapplicable(format!("k = {k} is not 3, 5 or 7 mod 8"))),
            };
            for (r, m) in classes {
                cand.extend((r..=v_max).step_by(m as usize).map(|v| (v, k, None)));
            }
            cand.sort();
        }
        OocFamily::RSet { ell, k_min, k_max } => {
            for k in k_min.max(2)..=k_max {
                if ell == 0 || ell > k * (k - 1) / 2 {
                    continue;
                }
                let r = r_set(k, ell);
                if r_obstructs(&r) {
                    cand.push((2 * k * (k - 1) + 2 * ell, k, Some(r)));
                }
            }
        }
        OocFamily::N3Ell1 { k_max } => {
            let mut ks = two_parameter(k_max, |a, c| Some((pow4(a as u32 + 1)?.checked_mul(24 * c + 7)? + 2) / 3));
            ks.extend(two_parameter(k_max, |a, c| pow4(a as u32 + 1)?.checked_mul(8 * c + 5)));
            ks.sort_unstable();
            cand.extend(ks.into_iter().map(|k| (3 * k * (k - 1) + 2, k, None)));
        }
        OocFamily::N3Ell2 { k_max } => {
            let mut ks = two_parameter(k_max, |a, c| Some((pow4(a as u32 + 3)?.checked_mul(24 * c + 23)? - 2) / 3));
            ks.extend(two_parameter(k_max, |a, c| pow4(a as u32 + 3)?.checked_mul(8 * c + 5)));
            ks.sort_unstable();
            cand.extend(ks.into_iter().map(|k| (3 * k * (k - 1) + 4, k, None)));
        }
        OocFamily::KHalf { k_min, k_max } => {
            for k in k_min.max(2)..=k_max {
                if !factorize(k).no_odd_power_of_3_mod_4() {
                    cand.push((2 * k * (k - 1) + 2, k, None));
                }
            }
        }
        OocFamily::Infinite { ell, count } => {
            if ell == 0 {
                return Err(DesignError::Inapplicable("ell must be positive".into()));
            }
            // s + 1, …, s + ℓ all fail to be sums of two squares
            let mut run = 0u64;
            let mut x = 1u64;
            while cand.len() < count {
                if is_sum_two_squares(x) {
                    run = 0;
                } else {
                    run += 1;
                }
                if run >= ell {
                    let s = x - ell;
                    let k = 2 * (s + 1 + ell / 2);
                    if ell <= k * (k - 1) / 2 {
                        let r = r_set(k, ell);
                        debug_assert!(r_obstructs(&r));
                        cand.push((2 * k * (k - 1) + 2 * ell, k, Some(r)));
                    }
                }
                x += 1;
            }
        }
    }
    cand.into_par_iter().map(|(v, k, r)| confirm(v, k, r)).collect()
}

/// Necessary condition for a cyclic `S(2, k, n·k(k−1) + k)` with `k` even:
/// `kn/4` (n even) or `k(n−1)/4` (n odd) is a sum of `n` squares of parts
/// at most `k/2`. Only `n ∈ {2, 3}` can fail.
pub fn steiner_check(k: u64, n: u64) -> Result<Certificate, DesignError> {
    if k < 2 {
        return Err(DesignError::OrderTooSmall(k));
    }
    if k % 2 == 1 {
        return Err(DesignError::OddOrder(k));
    }
    if n == 0 {
        return Err(DesignError::Inapplicable("n must be positive".into()));
    }
    let v = n * k * (k - 1) + k;
    let target = if n % 2 == 0 { k * n / 4 } else { k * (n - 1) / 4 };
    let bound = k / 2;
    let witness = sum_n_squares_bounded(target, n as usize, bound, None).map(|w| w.parts);
    let verdict = if witness.is_some() { Verdict::Inconclusive } else { Verdict::Nonexistent };
    let note = (!(2..=3).contains(&n)).then(|| {
        format!("n = {n}: a representation always exists (four-square theorem), so the condition is vacuous")
    });
    Ok(Certificate { v, k, verdict, evidence: Evidence::SteinerSquares { n, target, bound, witness, note } })
}

/// Necessary condition for a `(Z_v, H, k, λ)` relative difference family
/// with `|H| = w`: `Σ (k − 2a_i)² = kn − λw` when `H` lies in the even
/// residues, `kn` otherwise, with parts of the parity of `k` and at most `k`.
pub fn rdf_check(v: u64, w: u64, k: u64, lambda: u64) -> Result<Certificate, DesignError> {
    if k < 2 {
        return Err(DesignError::OrderTooSmall(k));
    }
    if v % 2 == 1 {
        return Err(DesignError::OddModulus(v));
    }
    if w == 0 || v % w != 0 {
        return Err(DesignError::NotDivisor { v, w });
    }
    if lambda == 0 {
        return Err(DesignError::Inapplicable("lambda must be positive".into()));
    }
    let kk = k * (k - 1);
    let total = lambda * (v - w);
    if total == 0 || total % kk != 0 {
        return Err(DesignError::Inapplicable(format!("lambda (v - w) = {total} is not a positive multiple of k(k - 1) = {kk}")));
    }
    let n = total / kk;
    let h_in_s = (v / w) % 2 == 0;
    let target = if h_in_s { (k * n) as i64 - (lambda * w) as i64 } else { (k * n) as i64 };
    let parts_parity = Parity::of(k);
    let witness = if target < 0 {
        None
    } else {
        sum_n_squares_bounded(target as u64, n as usize, k, Some(parts_parity)).map(|w| w.parts)
    };
    let verdict = if witness.is_some() { Verdict::Inconclusive } else { Verdict::Nonexistent };
    let note = match (&witness, n >= 4) {
        (Some(_), true) => Some(format!("n = {n}: sums of four or more squares are rarely obstructed")),
        (None, _) => Some("no representation with parts k - 2a_i of the parity of k and at most k".into()),
        _ => None,
    };
    Ok(Certificate {
        v,
        k,
        verdict,
        evidence: Evidence::RdfSquares { w, lambda, n, h_in_s, target, bound: k, parts_parity, witness, note },
    })
}
