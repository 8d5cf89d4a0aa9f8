//! Algebraic constructions of modular Golomb rulers.
//!
//! Singer and Bose sets are read off the powers of a primitive element of a
//! cubic or quadratic extension of GF(q); Ruzsa sets come from a primitive
//! root mod p via CRT.

use crate::field::{ExtensionField, FieldCtx, FieldElement, FieldError};
use crate::numtheory::{crt, is_prime, next_prime, prime_power};
use crate::ruler::{canonicalize, embed, Ruler, RulerError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("parameter {0} is too small")]
    TooSmall(u64),
    #[error("parameter {0} exceeds the supported range")]
    TooLarge(u64),
    #[error("cannot delete {delta} of {k} marks (need delta < k - 2)")]
    TooManyDeletions { delta: usize, k: usize },
    #[error("v = {v} is below 3k^2 - 1 = {bound}; use search instead")]
    BelowBound { v: u32, bound: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Ruler(#[from] RulerError),
}

fn base_field(q: u64) -> Result<FieldCtx, ConstructionError> {
    let (p, e) = prime_power(q).ok_or(ConstructionError::NotPrimePower(q))?;
    Ok(FieldCtx::new(p, e)?)
}

/// The planar difference set of PG(2, q): a `(q²+q+1, q+1)`-MGR in canonical form.
pub fn singer(q: u64) -> Result<Ruler, ConstructionError> {
    let f = base_field(q)?;
    let n = q * q + q + 1;
    if n > u32::MAX as u64 {
        return Err(ConstructionError::TooLarge(q));
    }
    let ext = ExtensionField::new(&f, 3)?;
    // exponents whose power lies in span{1, y}; this subspace is closed
    // under GF(q)* scaling, so one period of length n suffices
    let d: Vec<u64> = ext
        .powers(n)
        .enumerate()
        .filter(|(_, c)| c[2] == FieldElement::ZERO)
        .map(|(a, _)| a as u64)
        .collect();
    debug_assert_eq!(d.len() as u64, q + 1);
    Ok(canonicalize(&Ruler::from_set(n as u32, d)?))
}

/// A `(q²−1, q)`-MGR: exponents `a` with `θ^a − θ ∈ GF(q)`.
pub fn bose(q: u64) -> Result<Ruler, ConstructionError> {
    let f = base_field(q)?;
    let n = q * q - 1;
    if n > u32::MAX as u64 {
        return Err(ConstructionError::TooLarge(q));
    }
    let ext = ExtensionField::new(&f, 2)?;
    let b = ext
        .powers(n)
        .enumerate()
        .filter(|(_, c)| c[1] == FieldElement::ONE)
        .map(|(a, _)| a as u64);
    Ok(Ruler::from_set(n as u32, b)?)
}

/// A `(p²−p, p−1)`-MGR from a primitive root `g` mod `p`.
pub fn ruzsa(p: u64) -> Result<Ruler, ConstructionError> {
    if !is_prime(p) {
        return Err(ConstructionError::NotPrime(p));
    }
    if p < 5 {
        // p = 3 gives only two marks
        return Err(ConstructionError::TooSmall(p));
    }
    let f = FieldCtx::new(p, 1)?;
    let g = f.primitive().0 as u64;
    let mut gi = 1u64;
    let mut r = Vec::with_capacity(p as usize - 1);
    for i in 1..p {
        gi = gi * g % p;
        r.push(crt(&[(i % (p - 1), p - 1), (gi, p)]).expect("p - 1 and p are coprime"));
    }
    Ok(Ruler::from_set((p * p - p) as u32, r)?)
}

/// Removes the `delta` largest residues.
pub fn delete_points(r: &Ruler, delta: usize) -> Result<Ruler, ConstructionError> {
    let k = r.k();
    if delta + 2 >= k {
        return Err(ConstructionError::TooManyDeletions { delta, k });
    }
    let kept = r.residues()[..k - delta].to_vec();
    Ok(match r.modulus() {
        Some(v) => Ruler::new(v, kept)?,
        None => Ruler::plain(kept)?,
    })
}

/// Optimal rulers for `3 ≤ k ≤ 11` at the smallest admissible modulus.
const SMALL: [(u32, &[u32]); 9] = [
    (7, &[0, 1, 3]),
    (13, &[0, 1, 4, 6]),
    (21, &[0, 2, 7, 8, 11]),
    (31, &[0, 1, 4, 10, 12, 17]),
    (48, &[0, 5, 7, 18, 19, 22, 28]),
    (57, &[0, 4, 5, 17, 19, 25, 28, 35]),
    (73, &[0, 2, 10, 24, 25, 29, 36, 42, 45]),
    (91, &[0, 1, 6, 10, 23, 26, 34, 41, 53, 55]),
    (120, &[0, 1, 4, 9, 23, 30, 41, 43, 58, 68, 74]),
];

const MID_PRIME_POWERS: [u64; 6] = [11, 13, 16, 17, 19, 23];

/// The prime power `p ≥ k − 1` whose Singer set is trimmed for `k ≥ 12`.
pub fn exist_small_prime_power(k: usize) -> Option<u64> {
    match k {
        0..=11 => None,
        12..=24 => MID_PRIME_POWERS.iter().copied().find(|&p| p + 1 >= k as u64),
        _ => Some(next_prime(k as u64 - 1)),
    }
}

/// A `(v, k)`-MGR with `v ≤ ⌊3k²/2⌋`.
pub fn exist_small(k: usize) -> Result<Ruler, ConstructionError> {
    if k < 3 {
        return Err(ConstructionError::TooSmall(k as u64));
    }
    if k <= 11 {
        let (v, x) = SMALL[k - 3];
        return Ok(Ruler::new(v, x.to_vec())?);
    }
    let p = exist_small_prime_power(k).expect("k >= 12");
    let s = singer(p)?;
    delete_points(&s, (p + 1) as usize - k)
}

/// A `(v, k)`-MGR for any `v ≥ 3k² − 1`, by embedding [`exist_small`].
pub fn exist_any(k: usize, v: u32) -> Result<Ruler, ConstructionError> {
    let bound = 3 * (k as u64).pow(2) - 1;
    if (v as u64) < bound {
        return Err(ConstructionError::BelowBound { v, bound });
    }
    let base = exist_small(k)?;
    // the shortest rotation keeps the embedded ruler within 2L + 1 <= v
    let rot = shortest_rotation(&base);
    Ok(embed(&rot, v)?)
}

/// The rotation of a modular ruler that starts right after its largest gap.
pub fn shortest_rotation(r: &Ruler) -> Ruler {
    let v = r.v();
    let gaps = r.gaps();
    let (imax, _) = gaps.iter().enumerate().max_by_key(|&(i, &g)| (g, std::cmp::Reverse(i))).unwrap();
    let start = r.residues()[(imax + 1) % r.k()];
    Ruler::from_set(v, r.residues().iter().map(|&x| (x + v - start) as u64)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ruler::{diff_profile, verify_mgr};

    #[test]
    fn singer_examples() {
        let s = singer(2).unwrap();
        assert_eq!(s.residues(), &[0, 1, 3]);
        assert_eq!(s.v(), 7);
        let s = singer(4).unwrap();
        assert_eq!((s.v(), s.k()), (21, 5));
        assert!(verify_mgr(&s).valid);
        assert_eq!(singer(6), Err(ConstructionError::NotPrimePower(6)));
    }

    #[test]
    fn singer_is_planar() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let s = singer(q).unwrap();
            let p = diff_profile(&s);
            assert!(p.multiplicity[1..].iter().all(|&m| m == 1), "q = {q}");
        }
    }

    #[test]
    fn bose_and_ruzsa() {
        for (q, v) in [(7u64, 48u32), (11, 120), (3, 8), (4, 15), (8, 63), (9, 80)] {
            let b = bose(q).unwrap();
            assert_eq!((b.v(), b.k()), (v, q as usize));
            assert!(verify_mgr(&b).valid, "q = {q}");
        }
        for (p, v) in [(11u64, 110u32), (5, 20), (7, 42), (13, 156)] {
            let r = ruzsa(p).unwrap();
            assert_eq!((r.v(), r.k()), (v, p as usize - 1));
            assert!(verify_mgr(&r).valid, "p = {p}");
        }
        assert_eq!(ruzsa(4), Err(ConstructionError::NotPrime(4)));
        assert_eq!(bose(10), Err(ConstructionError::NotPrimePower(10)));
    }

    #[test]
    fn deletion() {
        let base = Ruler::new(7, vec![0, 1, 3]).unwrap();
        assert_eq!(delete_points(&base, 0).unwrap(), base);
        let r = delete_points(&singer(13).unwrap(), 1).unwrap();
        assert_eq!((r.v(), r.k()), (183, 13));
        assert!(verify_mgr(&r).valid);
        let r = delete_points(&singer(5).unwrap(), 2).unwrap();
        assert_eq!((r.v(), r.k()), (31, 4));
        assert!(verify_mgr(&r).valid);
        assert!(delete_points(&base, 1).is_err());
    }

    #[test]
    fn existence_examples() {
        let r = exist_small(5).unwrap();
        assert_eq!((r.v(), r.residues()), (21, &[0u32, 2, 7, 8, 11][..]));
        let r = exist_small(12).unwrap();
        assert_eq!((r.v(), r.k()), (133, 12));
        assert_eq!(exist_small_prime_power(12), Some(11));
        let r = exist_small(25).unwrap();
        assert_eq!((r.v(), r.k()), (871, 25));
        assert!(871 <= 3 * 625 / 2);
        for (k, v) in [(3usize, 26u32), (5, 74), (4, 47)] {
            let r = exist_any(k, v).unwrap();
            assert_eq!((r.v(), r.k()), (v, k));
            assert!(verify_mgr(&r).valid);
        }
        assert!(matches!(exist_any(4, 40), Err(ConstructionError::BelowBound { v: 40, bound: 47 })));
    }

    #[test]
    fn small_table_valid() {
        for k in 3..=11 {
            let r = exist_small(k).unwrap();
            assert!(verify_mgr(&r).valid, "k = {k}");
            assert_eq!(r.k(), k);
        }
    }
}
