//! Exact integer predicates and witnesses.
//!
//! Everything here works on machine integers; the parameters that show up in
//! the ruler and design questions are small, so trial division and bounded
//! enumeration are all that is needed.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumberTheoryError {
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("leading coefficient must be at least 1")]
    ZeroCoefficient,
    #[error("second coefficient must be nonzero")]
    ZeroSecondCoefficient,
    #[error("arithmetic overflow")]
    Overflow,
}

/// Prime factorization as `(prime, exponent)` pairs in increasing prime order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization(pub Vec<(u64, u32)>);

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn product(&self) -> u64 {
        self.0.iter().map(|&(p, e)| p.pow(e)).product()
    }

    /// True when every prime congruent to 3 mod 4 appears to an even power.
    pub fn no_odd_power_of_3_mod_4(&self) -> bool {
        self.0.iter().all(|&(p, e)| p % 4 != 3 || e % 2 == 0)
    }
}

/// Parts whose squares add up to `target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquaresWitness {
    pub parts: Vec<u64>,
    pub target: u64,
}

impl SquaresWitness {
    pub fn holds(&self) -> bool {
        self.parts
            .iter()
            .try_fold(0u64, |acc, &p| p.checked_mul(p).and_then(|s| acc.checked_add(s)))
            == Some(self.target)
    }
}

/// Required parity of every part in a bounded square decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: u64) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn admits(self, n: u64) -> bool {
        Parity::of(n) == self
    }
}

pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut out = Vec::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut m);
    let mut p = 3u64;
    while p.saturating_mul(p) <= m {
        push(p, &mut m);
        p += 2;
    }
    if m > 1 {
        out.push((m, 1));
    }
    Factorization(out)
}

/// Floor of the square root, exact for all `u64`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |s| s <= n) {
        r += 1;
    }
    r
}

pub fn is_perfect_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt(n as u64);
    r * r == n as u64
}

pub fn is_sum_two_squares(n: u64) -> bool {
    n == 0 || factorize(n).no_odd_power_of_3_mod_4()
}

pub fn two_squares_witness(n: u64) -> Option<SquaresWitness> {
    if !is_sum_two_squares(n) {
        return None;
    }
    let mut a = 0u64;
    while 2 * a * a <= n {
        let rest = n - a * a;
        let b = isqrt(rest);
        if b * b == rest {
            return Some(SquaresWitness { parts: vec![a, b], target: n });
        }
        a += 1;
    }
    unreachable!("two-squares criterion and enumeration disagree for {n}")
}

pub fn is_sum_three_squares(n: u64) -> bool {
    if n == 0 {
        return true;
    }
    let mut m = n;
    while m % 4 == 0 {
        m /= 4;
    }
    m % 8 != 7
}

/// Finds `n` parts, each in `[0, bound]` and of the requested parity, whose
/// squares sum to `target`. Parts are returned in nondecreasing order.
///
/// Reachability is tracked per part count with a bitset over partial sums,
/// so the cost is `n * (#admissible squares) * target / 64` word operations.
pub fn sum_n_squares_bounded(
    target: u64,
    n: usize,
    bound: u64,
    parity: Option<Parity>,
) -> Option<SquaresWitness> {
    if n == 0 {
        return (target == 0).then(|| SquaresWitness { parts: vec![], target });
    }
    let squares: Vec<(u64, u64)> = (0..=bound.min(isqrt(target)))
        .filter(|&h| parity.map_or(true, |p| p.admits(h)))
        .map(|h| (h, h * h))
        .collect();
    if squares.is_empty() {
        return None;
    }
    let len = target as usize + 1;
    let words = len.div_ceil(64);
    // layers[c] = sums reachable with exactly c parts
    let mut layers: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    let mut first = vec![0u64; words];
    first[0] = 1;
    layers.push(first);
    for _ in 0..n {
        let prev = layers.last().unwrap();
        let mut next = vec![0u64; words];
        for &(_, sq) in &squares {
            or_shifted(&mut next, prev, sq as usize, len);
        }
        layers.push(next);
    }
    let get = |layer: &[u64], s: usize| layer[s / 64] >> (s % 64) & 1 == 1;
    if !get(&layers[n], target as usize) {
        return None;
    }
    let mut parts = Vec::with_capacity(n);
    let mut s = target as usize;
    for c in (1..=n).rev() {
        let &(h, sq) = squares
            .iter()
            .find(|&&(_, sq)| sq as usize <= s && get(&layers[c - 1], s - sq as usize))
            .expect("reachable sum must have a predecessor");
        parts.push(h);
        s -= sq as usize;
    }
    parts.sort_unstable();
    Some(SquaresWitness { parts, target })
}

pub(crate) fn or_shifted(dst: &mut [u64], src: &[u64], shift: usize, len: usize) {
    let (ws, bs) = (shift / 64, shift % 64);
    for i in (ws..dst.len()).rev() {
        let lo = src[i - ws] << bs;
        let carry = if bs > 0 && i > ws { src[i - ws - 1] >> (64 - bs) } else { 0 };
        dst[i] |= lo | carry;
    }
    let tail = len % 64;
    if tail != 0 {
        if let Some(last) = dst.last_mut() {
            *last &= (1u64 << tail) - 1;
        }
    }
}

/// The `t` smallest primes congruent to 3 mod 4.
pub fn primes_3_mod_4(t: usize) -> Vec<u64> {
    (3u64..).step_by(4).filter(|&p| is_prime(p)).take(t).collect()
}

/// CRT construction: `s` with `s + i ≡ p_i (mod p_i²)` for the `t` smallest
/// primes `p_i ≡ 3 (mod 4)`. Each `s + i` is then divisible by `p_i` exactly
/// once, hence not a sum of two squares. Fails with `Overflow` once the
/// product of the `p_i²` leaves `u64`.
pub fn consecutive_non_two_squares_crt(t: usize) -> Result<u64, NumberTheoryError> {
    assert!(t >= 1);
    let primes = primes_3_mod_4(t);
    let mut system = Vec::with_capacity(t);
    for (i, &p) in primes.iter().enumerate() {
        let m = p.checked_mul(p).ok_or(NumberTheoryError::Overflow)?;
        let i = (i + 1) as u64 % m;
        system.push(((p + m - i) % m, m));
    }
    let s = crt(&system)?;
    debug_assert!((1..=t as u64).all(|i| !is_sum_two_squares(s + i)));
    Ok(s)
}

/// Smallest `s ≥ 0` such that none of `s+1, …, s+t` is a sum of two squares.
pub fn consecutive_non_two_squares_scan(t: usize) -> u64 {
    assert!(t >= 1);
    let mut run = 0usize;
    let mut n = 1u64;
    loop {
        if is_sum_two_squares(n) {
            run = 0;
        } else {
            run += 1;
            if run == t {
                return n - t as u64;
            }
        }
        n += 1;
    }
}

/// Minimal-scan variant for small `t`, CRT construction otherwise.
pub fn consecutive_non_two_squares(t: usize) -> u64 {
    if t <= 4 {
        consecutive_non_two_squares_scan(t)
    } else {
        consecutive_non_two_squares_crt(t).unwrap_or_else(|_| consecutive_non_two_squares_scan(t))
    }
}

/// True iff neither `n` nor `n+1` is a sum of three squares, i.e.
/// `n + 1 = 4^a (8b + 7)` with `a ≥ 2`.
pub fn consecutive_non_three_squares(n: u64) -> bool {
    let mut m = n + 1;
    let mut a = 0;
    while m % 4 == 0 {
        m /= 4;
        a += 1;
    }
    let closed = a >= 2 && m % 8 == 7;
    debug_assert_eq!(closed, !is_sum_three_squares(n) && !is_sum_three_squares(n + 1));
    closed
}

fn squarefree_split(n: u64) -> (u64, u64) {
    // n = core * root^2 with core squarefree
    let (mut core, mut root) = (1u64, 1u64);
    for &(p, e) in factorize(n).pairs() {
        root *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
    }
    (core, root)
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

fn is_qr_mod(a: i64, p: u64) -> bool {
    let r = a.rem_euclid(p as i64) as u64;
    r == 0 || pow_mod(r, (p - 1) / 2, p) == 1
}

/// Safety factor applied to every Holzer bound in [`ternary_form_solvable`].
pub const TERNARY_SEARCH_MARGIN: u64 = 2;

/// Nontrivial integer solution of `a·x² + b·y² = z²`, or `None` when there is none.
///
/// Both coefficients are reduced to squarefree cores `a₀, b₀`. After the
/// usual common-factor reduction the form has pairwise coprime squarefree
/// coefficients, and Holzer's theorem bounds a solution (if any) by
/// `|x| ≤ √|b₀|`, `|y| ≤ √a₀`, `|z| ≤ √(a₀|b₀|)`. The search covers that box
/// scaled by [`TERNARY_SEARCH_MARGIN`] (the `z` bound follows from the other
/// two), so `None` is a proof. An odd prime
/// `p | a₀` with `p ∤ b₀` and `b₀` a non-residue mod `p` rules the form out
/// without searching.
pub fn ternary_form_solvable(a: i64, b: i64) -> Result<Option<(i64, i64, i64)>, NumberTheoryError> {
    if a < 1 {
        return Err(NumberTheoryError::ZeroCoefficient);
    }
    if b == 0 {
        return Err(NumberTheoryError::ZeroSecondCoefficient);
    }
    let (a0, s) = squarefree_split(a as u64);
    let (b0_abs, t) = squarefree_split(b.unsigned_abs());
    let b0 = if b < 0 { -(b0_abs as i64) } else { b0_abs as i64 };
    for &(p, _) in factorize(a0).pairs() {
        if p > 2 && b0_abs % p != 0 && !is_qr_mod(b0, p) {
            return Ok(None);
        }
    }
    let xmax = TERNARY_SEARCH_MARGIN * (isqrt(b0_abs) + 1);
    let ymax = TERNARY_SEARCH_MARGIN * (isqrt(a0) + 1);
    for x in 0..=xmax as i64 {
        for y in 0..=ymax as i64 {
            if x == 0 && y == 0 {
                continue;
            }
            let rhs = a0 as i64 * x * x + b0 * y * y;
            if rhs >= 0 && is_perfect_square(rhs) {
                let z = isqrt(rhs as u64) as i64;
                let (s, t) = (s as i64, t as i64);
                return Ok(Some((t * x, s * y, s * t * z)));
            }
        }
    }
    Ok(None)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime `p ≥ n`.
pub fn next_prime(n: u64) -> u64 {
    let mut p = n.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// `Some((p, e))` when `q = p^e` with `p` prime and `e ≥ 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    match factorize(q).pairs() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1 || m == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// Least nonnegative solution of `x ≡ r_i (mod m_i)` for pairwise coprime `m_i`.
pub fn crt(system: &[(u64, u64)]) -> Result<u64, NumberTheoryError> {
    let mut x = 0u64;
    let mut modulus = 1u64;
    for &(r, m) in system {
        if m == 0 {
            return Err(NumberTheoryError::ZeroModulus);
        }
        if gcd(modulus, m) != 1 {
            return Err(NumberTheoryError::NotCoprime(modulus, m));
        }
        let inv = mod_inverse(modulus % m, m).ok_or(NumberTheoryError::NotCoprime(modulus, m))?;
        let diff = ((r % m) as i128 - (x % m) as i128).rem_euclid(m as i128) as u128;
        let step = diff * inv as u128 % m as u128;
        let next = modulus.checked_mul(m).ok_or(NumberTheoryError::Overflow)?;
        x = ((x as u128 + modulus as u128 * step) % next as u128) as u64;
        modulus = next;
    }
    Ok(x)
}
