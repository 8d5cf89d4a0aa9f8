//! Nonexistence certificates for modular Golomb rulers.
//!
//! Every certificate records the integers its rule inspected, so
//! [`validate_mgr`] can re-derive the verdict with its own brute-force
//! arithmetic and without calling back into [`crate::numtheory`].

use crate::numtheory::{is_perfect_square, is_sum_two_squares, ternary_form_solvable, Parity};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Nonexistent,
    Inconclusive,
}

/// One arithmetic claim: `value` does or does not have `property`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    /// How the value was formed, e.g. `"k-2"`.
    pub quantity: String,
    pub value: i64,
    pub property: Property,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    PerfectSquare,
    SumOfTwoSquares,
}

/// Solvability of `a x² + b y² = z²` in nontrivial integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TernaryCheck {
    pub a: i64,
    pub b: i64,
    pub solution: Option<(i64, i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexedCheck {
    pub i: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub j: Option<i64>,
    pub value: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", content = "trace", rename_all = "kebab-case")]
pub enum Evidence {
    /// `v < k² − k + 1`: too few residues for `k(k−1)` distinct differences.
    TrivialBound { lower: u64 },
    /// `v = k² − k + 2`: the divisible-design conditions, split on `k mod 8`.
    BoseConnor {
        k_mod_8: u64,
        checks: Vec<Check>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        ternary: Option<TernaryCheck>,
    },
    /// Even `v = k² − k + 2ℓ`: no candidate discriminant is a square.
    #[serde(rename = "counting2")]
    Counting2 {
        ell: u64,
        v_mod_4: u64,
        /// `k − 2ℓ + 2 + 4i` (`v ≡ 2 mod 4`) or `k − 2ℓ + 4i` (`v ≡ 0 mod 4`), `0 ≤ i < ℓ`.
        candidates: Vec<IndexedCheck>,
    },
    /// `v ≡ 0 mod 4`: no `(i, j)` passes both the square and the two-square test.
    RefinedMod4 {
        ell: u64,
        v_mod_8: u64,
        /// `k − 2ℓ + 4i` for `0 ≤ i < ℓ`.
        squares: Vec<IndexedCheck>,
        /// For each square `i`: `k − 2ℓ + 2i + 4j (+2)` for `0 ≤ j ≤ ℓ−1−i`.
        pairs: Vec<IndexedCheck>,
    },
    /// Optimal OOC counting argument: some `s ∈ S` must be a sum of exactly
    /// `n` elements of `T`. `representation` is present iff one is.
    CountingArgument {
        n: u64,
        ell: u64,
        s: Vec<u64>,
        t: Vec<u64>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        representation: Option<Representation>,
    },
    /// Cyclic `S(2, k, n·k(k−1) + k)`: `k/2` must be a sum of `n` squares
    /// with parts at most `k/2`.
    SteinerSquares {
        n: u64,
        target: u64,
        bound: u64,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        witness: Option<Vec<u64>>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        note: Option<String>,
    },
    /// Relative difference family over `Z_v`: `target` must be a sum of `n`
    /// squares of parts `k − 2a_i` (parity of `k`, at most `k`).
    RdfSquares {
        w: u64,
        lambda: u64,
        n: u64,
        /// Whether the order-`w` subgroup lies in the even residues.
        h_in_s: bool,
        target: i64,
        bound: u64,
        parts_parity: Parity,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        witness: Option<Vec<u64>>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        note: Option<String>,
    },
    /// No rule fired; lists the rules that were tried.
    None { tried: Vec<String> },
}

/// `s = terms[0] + … + terms[n-1]` with every term in `T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representation {
    pub s: u64,
    pub terms: Vec<u64>,
}

impl Evidence {
    pub fn rule(&self) -> &'static str {
        match self {
            Evidence::TrivialBound { .. } => "trivial-bound",
            Evidence::BoseConnor { .. } => "bose-connor",
            Evidence::Counting2 { .. } => "counting2",
            Evidence::RefinedMod4 { .. } => "refined-mod4",
            Evidence::CountingArgument { .. } => "counting-argument",
            Evidence::SteinerSquares { .. } => "steiner-squares",
            Evidence::RdfSquares { .. } => "rdf-squares",
            Evidence::None { .. } => "none",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub v: u64,
    pub k: u64,
    pub verdict: Verdict,
    #[serde(flatten)]
    pub evidence: Evidence,
}

fn square_check(quantity: &str, value: i64) -> Check {
    Check { quantity: quantity.into(), value, property: Property::PerfectSquare, holds: is_perfect_square(value) }
}

fn two_squares_check(quantity: &str, value: i64) -> Check {
    let holds = value >= 0 && is_sum_two_squares(value as u64);
    Check { quantity: quantity.into(), value, property: Property::SumOfTwoSquares, holds }
}

fn two_sq(value: i64) -> bool {
    value >= 0 && is_sum_two_squares(value as u64)
}

/// The Bose–Connor conditions at `v = k² − k + 2`; `Some(true)` means a
/// necessary condition failed.
fn bose_connor(k: u64) -> (bool, Evidence) {
    let ki = k as i64;
    let m = k % 8;
    let mut checks = Vec::new();
    let mut ternary = None;
    match m {
        7 | 3 | 6 => checks.push(square_check("k-2", ki - 2)),
        2 => {
            checks.push(square_check("k-2", ki - 2));
            checks.push(two_squares_check("k", ki));
        }
        _ => {
            checks.push(square_check("k", ki));
            let b = if m <= 1 { 2 } else { -2 };
            let solution = ternary_form_solvable(ki - 2, b).expect("k >= 3 gives positive a");
            ternary = Some(TernaryCheck { a: ki - 2, b, solution });
        }
    }
    let fires = checks.iter().any(|c| !c.holds) || ternary.as_ref().is_some_and(|t| t.solution.is_none());
    (fires, Evidence::BoseConnor { k_mod_8: m, checks, ternary })
}

fn counting2(k: i64, ell: i64, v: u64) -> (bool, Evidence) {
    let shift = if v % 4 == 2 { 2 } else { 0 };
    let candidates: Vec<IndexedCheck> = (0..ell)
        .map(|i| {
            let value = k - 2 * ell + shift + 4 * i;
            IndexedCheck { i, j: None, value, holds: is_perfect_square(value) }
        })
        .collect();
    let fires = candidates.iter().all(|c| !c.holds);
    (fires, Evidence::Counting2 { ell: ell as u64, v_mod_4: v % 4, candidates })
}

fn refined_mod4(k: i64, ell: i64, v: u64) -> (bool, Evidence) {
    let extra = if v % 8 == 4 { 2 } else { 0 };
    let mut squares = Vec::new();
    let mut pairs = Vec::new();
    let mut witness = false;
    for i in 0..ell {
        let value = k - 2 * ell + 4 * i;
        let sq = is_perfect_square(value);
        squares.push(IndexedCheck { i, j: None, value, holds: sq });
        if !sq {
            continue;
        }
        for j in 0..=(ell - 1 - i) {
            let value = k - 2 * ell + 2 * i + 4 * j + extra;
            let ok = two_sq(value);
            pairs.push(IndexedCheck { i, j: Some(j), value, holds: ok });
            witness |= ok;
        }
    }
    (!witness, Evidence::RefinedMod4 { ell: ell as u64, v_mod_8: v % 8, squares, pairs })
}

/// Applies the nonexistence rules in order and reports the first that fires.
pub fn certify_mgr(v: u64, k: u64) -> Certificate {
    assert!(k >= 3, "k must be at least 3");
    let kk = k * k - k;
    let done = |evidence| Certificate { v, k, verdict: Verdict::Nonexistent, evidence };
    if v < kk + 1 {
        return done(Evidence::TrivialBound { lower: kk + 1 });
    }
    let mut tried = Vec::new();
    if v == kk + 2 {
        let (fires, ev) = bose_connor(k);
        if fires {
            return done(ev);
        }
        tried.push("bose-connor".to_string());
    }
    if v % 2 == 0 && v >= kk + 2 {
        let ell = ((v - kk) / 2) as i64;
        let (fires, ev) = counting2(k as i64, ell, v);
        if fires {
            return done(ev);
        }
        tried.push("counting2".to_string());
        if v % 4 == 0 {
            let (fires, ev) = refined_mod4(k as i64, ell, v);
            if fires {
                return done(ev);
            }
            tried.push("refined-mod4".to_string());
        }
    }
    Certificate { v, k, verdict: Verdict::Inconclusive, evidence: Evidence::None { tried } }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `k ∈ {4t²+4t+4, 4t²+4t+2}` at `v = k²−k+4s`, and
    /// `k ∈ {4t²+3, 4t²+1}` at `v = k²−k+4s−2`, for `1 ≤ s ≤ t`.
    MainNonexist { t: u64 },
    /// `k = n² − 2ℓ + 4`, `v = k² − k + 2ℓ`, `n ≥ ℓ + 1`, with `k − 2`
    /// (`v ≡ 0 mod 8`) resp. `k` (`v ≡ 4 mod 8`) not a sum of two squares.
    New35Cor { n: u64, ell: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub v: u64,
    pub k: u64,
    pub certificate: Certificate,
}

/// Members of a parametric nonexistence family, each confirmed by
/// [`certify_mgr`]. A member the certifier cannot confirm is still listed,
/// with its inconclusive certificate.
pub fn family_scan(family: Family) -> Vec<FamilyMember> {
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    match family {
        Family::MainNonexist { t } => {
            for k in [4 * t * t + 4 * t + 4, 4 * t * t + 4 * t + 2] {
                for s in 1..=t {
                    pairs.push((k * k - k + 4 * s, k));
                }
            }
            for k in [4 * t * t + 3, 4 * t * t + 1] {
                for s in 1..=t {
                    pairs.push((k * k - k + 4 * s - 2, k));
                }
            }
        }
        Family::New35Cor { n, ell } => {
            if ell >= 1 && n > ell && n * n + 4 >= 2 * ell + 3 {
                let k = n * n + 4 - 2 * ell;
                let v = k * k - k + 2 * ell;
                let applies = match v % 8 {
                    0 => !is_sum_two_squares(k - 2),
                    4 => !is_sum_two_squares(k),
                    _ => false,
                };
                if applies {
                    pairs.push((v, k));
                }
            }
        }
    }
    pairs.into_iter().map(|(v, k)| FamilyMember { v, k, certificate: certify_mgr(v, k) }).collect()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValidationError {
    #[error("certificate is for ({cv}, {ck}), expected ({v}, {k})")]
    WrongInstance { v: u64, k: u64, cv: u64, ck: u64 },
    #[error("rule {0} does not apply to this (v, k)")]
    NotApplicable(&'static str),
    #[error("claim about {0} is false")]
    FalseClaim(String),
    #[error("trace is incomplete: {0}")]
    Incomplete(String),
    #[error("the recorded checks do not imply nonexistence")]
    DoesNotImply,
}

// Independent arithmetic for the validator.

fn brute_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let mut r: i64 = 0;
    while r * r < n {
        r += 1;
    }
    r * r == n
}

fn brute_two_squares(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let mut a: i64 = 0;
    while 2 * a * a <= n {
        if brute_square(n - a * a) {
            return true;
        }
        a += 1;
    }
    false
}

fn core_of(n: u64) -> (u64, u64) {
    let (mut core, mut root, mut m, mut p) = (1u64, 1u64, n, 2u64);
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        core *= p.pow(e % 2);
        root *= p.pow(e / 2);
        p += 1;
    }
    (core * m, root)
}

/// No nontrivial solution of `a x² + b y² = z²`: by Legendre/Holzer a
/// solution of the squarefree-core form exists inside the box
/// `|x| ≤ √|b₀|, |y| ≤ √a₀`, so an exhaustive scan of it settles the claim.
fn brute_ternary_unsolvable(a: i64, b: i64) -> bool {
    let (a0, _) = core_of(a as u64);
    let (b0, _) = core_of(b.unsigned_abs());
    let b0 = if b < 0 { -(b0 as i64) } else { b0 as i64 };
    let a0 = a0 as i64;
    let (mut xm, mut ym) = (0i64, 0i64);
    while xm * xm <= b0.abs() {
        xm += 1;
    }
    while ym * ym <= a0 {
        ym += 1;
    }
    for x in 0..=2 * xm {
        for y in 0..=2 * ym {
            if (x, y) != (0, 0) && brute_square(a0 * x * x + b0 * y * y) {
                return false;
            }
        }
    }
    true
}

fn recheck(c: &Check) -> Result<(), ValidationError> {
    let actual = match c.property {
        Property::PerfectSquare => brute_square(c.value),
        Property::SumOfTwoSquares => brute_two_squares(c.value),
    };
    if actual != c.holds {
        return Err(ValidationError::FalseClaim(format!("{} = {}", c.quantity, c.value)));
    }
    Ok(())
}

fn indexed(c: &IndexedCheck, expected: i64, test: fn(i64) -> bool) -> Result<(), ValidationError> {
    if c.value != expected {
        return Err(ValidationError::FalseClaim(format!("value at i = {}, j = {:?}", c.i, c.j)));
    }
    if test(c.value) != c.holds {
        return Err(ValidationError::FalseClaim(format!("{}", c.value)));
    }
    Ok(())
}

/// Checks that `cert` is about `(v, k)` and re-derives it with [`validate`].
pub fn validate_mgr(cert: &Certificate, v: u64, k: u64) -> Result<(), ValidationError> {
    if (cert.v, cert.k) != (v, k) {
        return Err(ValidationError::WrongInstance { v, k, cv: cert.v, ck: cert.k });
    }
    validate(cert)
}

/// Re-derives a nonexistence certificate from its trace alone.
pub fn validate(cert: &Certificate) -> Result<(), ValidationError> {
    if cert.verdict != Verdict::Nonexistent {
        return Err(ValidationError::DoesNotImply);
    }
    let (v, k) = (cert.v, cert.k);
    if k < 2 {
        return Err(ValidationError::NotApplicable("k < 2"));
    }
    let kk = k * k - k;
    let ki = k as i64;
    match &cert.evidence {
        Evidence::TrivialBound { lower } => {
            if *lower != kk + 1 {
                return Err(ValidationError::FalseClaim("lower bound".into()));
            }
            if v >= *lower {
                return Err(ValidationError::NotApplicable("trivial-bound"));
            }
        }
        Evidence::BoseConnor { k_mod_8, checks, ternary } => {
            if v != kk + 2 {
                return Err(ValidationError::NotApplicable("bose-connor"));
            }
            if *k_mod_8 != k % 8 {
                return Err(ValidationError::FalseClaim("k mod 8".into()));
            }
            let want: Vec<(&str, i64, Property)> = match k % 8 {
                7 | 3 | 6 => vec![("k-2", ki - 2, Property::PerfectSquare)],
                2 => vec![("k-2", ki - 2, Property::PerfectSquare), ("k", ki, Property::SumOfTwoSquares)],
                _ => vec![("k", ki, Property::PerfectSquare)],
            };
            if checks.len() != want.len() {
                return Err(ValidationError::Incomplete("bose-connor checks".into()));
            }
            for (c, (_, value, prop)) in checks.iter().zip(&want) {
                if c.value != *value || c.property != *prop {
                    return Err(ValidationError::FalseClaim(c.quantity.clone()));
                }
                recheck(c)?;
            }
            let mut fails = checks.iter().any(|c| !c.holds);
            match (k % 8, ternary) {
                (0 | 1 | 4 | 5, Some(t)) => {
                    let b = if k % 8 <= 1 { 2 } else { -2 };
                    if (t.a, t.b) != (ki - 2, b) {
                        return Err(ValidationError::FalseClaim("ternary coefficients".into()));
                    }
                    match t.solution {
                        Some((x, y, z)) => {
                            if (x, y, z) == (0, 0, 0) || t.a * x * x + t.b * y * y != z * z {
                                return Err(ValidationError::FalseClaim("ternary solution".into()));
                            }
                        }
                        None => {
                            if !brute_ternary_unsolvable(t.a, t.b) {
                                return Err(ValidationError::FalseClaim("ternary unsolvable".into()));
                            }
                            fails = true;
                        }
                    }
                }
                (0 | 1 | 4 | 5, None) => return Err(ValidationError::Incomplete("ternary form".into())),
                (_, Some(_)) => return Err(ValidationError::NotApplicable("ternary form")),
                _ => {}
            }
            if !fails {
                return Err(ValidationError::DoesNotImply);
            }
        }
        Evidence::Counting2 { ell, v_mod_4, candidates } => {
            if v % 2 == 1 || v < kk + 2 || (v - kk) / 2 != *ell || v % 4 != *v_mod_4 {
                return Err(ValidationError::NotApplicable("counting2"));
            }
            let ell = *ell as i64;
            if candidates.len() as i64 != ell {
                return Err(ValidationError::Incomplete("candidates".into()));
            }
            let shift = if v % 4 == 2 { 2 } else { 0 };
            for (i, c) in candidates.iter().enumerate() {
                if c.i != i as i64 {
                    return Err(ValidationError::Incomplete("candidate order".into()));
                }
                indexed(c, ki - 2 * ell + shift + 4 * c.i, brute_square)?;
            }
            if candidates.iter().any(|c| c.holds) {
                return Err(ValidationError::DoesNotImply);
            }
        }
        Evidence::RefinedMod4 { ell, v_mod_8, squares, pairs } => {
            if v % 4 != 0 || v < kk + 2 || (v - kk) / 2 != *ell || v % 8 != *v_mod_8 {
                return Err(ValidationError::NotApplicable("refined-mod4"));
            }
            let ell = *ell as i64;
            let extra = if v % 8 == 4 { 2 } else { 0 };
            if squares.len() as i64 != ell {
                return Err(ValidationError::Incomplete("squares".into()));
            }
            let mut expected_pairs = Vec::new();
            for (i, c) in squares.iter().enumerate() {
                if c.i != i as i64 {
                    return Err(ValidationError::Incomplete("square order".into()));
                }
                indexed(c, ki - 2 * ell + 4 * c.i, brute_square)?;
                if c.holds {
                    expected_pairs.extend((0..=ell - 1 - c.i).map(|j| (c.i, j)));
                }
            }
            if pairs.len() != expected_pairs.len() {
                return Err(ValidationError::Incomplete("pairs".into()));
            }
            for (c, &(i, j)) in pairs.iter().zip(&expected_pairs) {
                if (c.i, c.j) != (i, Some(j)) {
                    return Err(ValidationError::Incomplete("pair order".into()));
                }
                indexed(c, ki - 2 * ell + 2 * i + 4 * j + extra, brute_two_squares)?;
            }
            if pairs.iter().any(|c| c.holds) {
                return Err(ValidationError::DoesNotImply);
            }
        }
        Evidence::CountingArgument { n, ell, s, t, representation } => {
            if v % 2 == 1 || v <= kk {
                return Err(ValidationError::NotApplicable("counting-argument"));
            }
            let n0 = (v - 1) / kk;
            let ell0 = (v - kk * n0) / 2;
            if (*n, *ell) != (n0, ell0) {
                return Err(ValidationError::FalseClaim("n, ell".into()));
            }
            let s0: Vec<u64> = (0..ell0).map(|h| v / 4 - h).collect();
            let t0: Vec<u64> = (0..=k / 2).map(|h| h * (k - h)).collect();
            if *s != s0 || *t != t0 {
                return Err(ValidationError::FalseClaim("S or T".into()));
            }
            if representation.is_some() {
                return Err(ValidationError::DoesNotImply);
            }
            if any_sum_of_n(&s0, &t0, n0 as usize) {
                return Err(ValidationError::FalseClaim("no element of S is a sum of n elements of T".into()));
            }
        }
        Evidence::SteinerSquares { n, target, bound, witness, .. } => {
            if k % 2 == 1 || *n == 0 || v != n * kk + k {
                return Err(ValidationError::NotApplicable("steiner-squares"));
            }
            let t0 = if n % 2 == 0 { k * n / 4 } else { k * (n - 1) / 4 };
            if (*target, *bound) != (t0, k / 2) {
                return Err(ValidationError::FalseClaim("target or bound".into()));
            }
            if witness.is_some() {
                return Err(ValidationError::DoesNotImply);
            }
            if brute_n_squares(*target as i64, *n as usize, *bound as i64, None) {
                return Err(ValidationError::FalseClaim(format!("{target} is not a sum of {n} squares")));
            }
        }
        Evidence::RdfSquares { w, lambda, n, h_in_s, target, bound, parts_parity, witness, .. } => {
            if v % 2 == 1 || *w == 0 || v % w != 0 || *lambda == 0 {
                return Err(ValidationError::NotApplicable("rdf-squares"));
            }
            if lambda * (v - w) != kk * n || *n == 0 {
                return Err(ValidationError::FalseClaim("lambda (v - w) = k (k - 1) n".into()));
            }
            let inside = (v / w) % 2 == 0;
            let t0 = if inside { (k * n) as i64 - (lambda * w) as i64 } else { (k * n) as i64 };
            let parity = if k % 2 == 0 { Parity::Even } else { Parity::Odd };
            if *h_in_s != inside || *target != t0 || *bound != k || *parts_parity != parity {
                return Err(ValidationError::FalseClaim("rdf target".into()));
            }
            if witness.is_some() {
                return Err(ValidationError::DoesNotImply);
            }
            if brute_n_squares(t0, *n as usize, k as i64, Some(k % 2)) {
                return Err(ValidationError::FalseClaim(format!("{t0} is not a sum of {n} squares")));
            }
        }
        Evidence::None { .. } => return Err(ValidationError::DoesNotImply),
    }
    Ok(())
}

/// Whether some element of `s` is a sum of exactly `n` elements of `t`:
/// multiset enumeration when that is small, otherwise a set-based sweep.
fn any_sum_of_n(s: &[u64], t: &[u64], n: usize) -> bool {
    let size = (t.len() as f64).powi(n as i32);
    if size <= 1e6 {
        fn rec(t: &[u64], from: usize, left: usize, acc: u64, s: &[u64]) -> bool {
            if left == 0 {
                return s.contains(&acc);
            }
            (from..t.len()).any(|i| rec(t, i, left - 1, acc + t[i], s))
        }
        return rec(t, 0, n, 0, s);
    }
    let cap = *s.iter().max().unwrap_or(&0);
    let mut reach = std::collections::BTreeSet::from([0u64]);
    for _ in 0..n {
        let mut next = std::collections::BTreeSet::new();
        for &a in &reach {
            for &b in t {
                if a + b <= cap {
                    next.insert(a + b);
                }
            }
        }
        reach = next;
    }
    s.iter().any(|x| reach.contains(x))
}

/// Whether `target` is a sum of `n` squares of parts in `[0, bound]`,
/// optionally all with parity `parity` (0 even, 1 odd).
fn brute_n_squares(target: i64, n: usize, bound: i64, parity: Option<u64>) -> bool {
    if target < 0 {
        return false;
    }
    fn rec(left: i64, n: usize, lo: i64, bound: i64, parity: Option<u64>) -> bool {
        if n == 0 {
            return left == 0;
        }
        let mut h = lo;
        while h <= bound && h * h <= left {
            if parity.map_or(true, |p| h as u64 % 2 == p) && rec(left - h * h, n - 1, h, bound, parity) {
                return true;
            }
            h += 1;
        }
        false
    }
    rec(target, n, 0, bound, parity)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_examples() {
        let c = certify_mgr(94, 10);
        assert_eq!(c.verdict, Verdict::Nonexistent);
        match &c.evidence {
            Evidence::Counting2 { candidates, .. } => {
                assert_eq!(candidates.iter().map(|c| c.value).collect::<Vec<_>>(), vec![8, 12]);
            }
            e => panic!("unexpected rule {}", e.rule()),
        }
        assert_eq!(validate_mgr(&c, 94, 10), Ok(()));

        let c = certify_mgr(44, 7);
        assert_eq!((c.verdict, c.evidence.rule()), (Verdict::Nonexistent, "bose-connor"));
        assert_eq!(validate_mgr(&c, 44, 7), Ok(()));

        let c = certify_mgr(32, 6);
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert_eq!(certify_mgr(20, 5).evidence.rule(), "trivial-bound");
    }

    #[test]
    fn json_shape() {
        let c = certify_mgr(94, 10);
        let j = serde_json::to_value(&c).unwrap();
        assert_eq!(j["verdict"], "nonexistent");
        assert_eq!(j["rule"], "counting2");
        assert_eq!(j["trace"]["candidates"][0]["value"], 8);
        let back: Certificate = serde_json::from_value(j).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn tampered_traces_are_rejected() {
        let mut c = certify_mgr(94, 10);
        if let Evidence::Counting2 { candidates, .. } = &mut c.evidence {
            candidates[1].value = 16;
        }
        assert!(validate_mgr(&c, 94, 10).is_err());
        let c = certify_mgr(94, 10);
        assert!(matches!(validate_mgr(&c, 96, 10), Err(ValidationError::WrongInstance { .. })));
    }

    #[test]
    fn counting_corollary_split() {
        // at l = 1 rule (c) asks k-2 (k = 2,3 mod 4) or k (k = 0,1 mod 4) to be a square
        for k in 3..=1000u64 {
            let v = k * k - k + 2;
            let (fires, _) = counting2(k as i64, 1, v);
            let needed = if k % 4 >= 2 { k - 2 } else { k };
            assert_eq!(fires, !is_perfect_square(needed as i64), "k = {k}");
        }
    }

    #[test]
    fn bose_connor_k7_mod8() {
        for k in (7..=1000u64).step_by(8) {
            let c = certify_mgr(k * k - k + 2, k);
            assert_eq!(c.verdict, Verdict::Nonexistent);
            validate_mgr(&c, k * k - k + 2, k).unwrap();
        }
    }

    #[test]
    fn families() {
        let m = family_scan(Family::MainNonexist { t: 3 });
        for (v, k) in [(50u64 * 49 + 4, 50u64), (52 * 51 + 12, 52), (37 * 36 + 2, 37), (39 * 38 + 10, 39)] {
            assert!(m.iter().any(|x| (x.v, x.k) == (v, k)), "({v}, {k})");
        }
        assert!(m.iter().all(|x| x.certificate.verdict == Verdict::Nonexistent));
        let m = family_scan(Family::New35Cor { n: 6, ell: 5 });
        assert_eq!(m.len(), 1);
        assert_eq!((m[0].k, m[0].v), (30, 30 * 29 + 10));
        assert_eq!(m[0].certificate.verdict, Verdict::Nonexistent);
    }
}
