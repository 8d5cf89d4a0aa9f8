//! Arithmetic in GF(p^m) with log/antilog tables, plus small-degree
//! extensions GF(q^d) over such a field for the difference-set constructions.

use crate::numtheory::{factorize, is_prime};
use thiserror::Error;

/// Largest field order accepted by [`FieldCtx::new`].
pub const FIELD_ORDER_CAP: u64 = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the cap of {FIELD_ORDER_CAP}")]
    TooLarge(u64),
    #[error("discrete logarithm of zero")]
    LogOfZero,
    #[error("extension degree {0} unsupported (only 2 and 3)")]
    UnsupportedExtension(u32),
}

/// An element of a [`FieldCtx`]: its coefficient vector `c_0 + c_1 x + …`
/// packed as the base-p integer `Σ c_i p^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);
}

/// GF(p^m) in the polynomial basis modulo the lexicographically least monic
/// irreducible polynomial of degree `m`, with the least primitive element as
/// log base.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u32,
    m: u32,
    order: u32,
    modulus: Vec<u32>,
    primitive: FieldElement,
    log: Vec<u32>,
    antilog: Vec<u32>,
}

impl FieldCtx {
    pub fn new(p: u64, m: u32) -> Result<FieldCtx, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = p.checked_pow(m).filter(|&q| q <= FIELD_ORDER_CAP).ok_or(FieldError::TooLarge(
            p.saturating_pow(m),
        ))?;
        let (p, order) = (p as u32, order as u32);
        let modulus = least_irreducible(p, m);
        let group = (order - 1) as u64;
        let maximal: Vec<u64> = factorize(group.max(1)).pairs().iter().map(|&(r, _)| group / r).collect();
        let primitive = (1..order)
            .find(|&g| {
                let g = digits(g, p, m);
                maximal.iter().all(|&e| poly_pow(&g, e, &modulus, p) != one(m))
            })
            .expect("a finite field has a primitive element");
        let g = digits(primitive, p, m);
        let mut log = vec![u32::MAX; order as usize];
        let mut antilog = Vec::with_capacity(group as usize);
        let mut cur = one(m);
        for i in 0..group as u32 {
            let idx = pack(&cur, p);
            antilog.push(idx);
            log[idx as usize] = i;
            cur = poly_mulmod(&cur, &g, &modulus, p);
        }
        Ok(FieldCtx { p, m, order, modulus, primitive: FieldElement(primitive), log, antilog })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients `c_0, …, c_m` of the monic modulus.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn primitive(&self) -> FieldElement {
        self.primitive
    }

    pub fn antilog_table(&self) -> &[u32] {
        &self.antilog
    }

    pub fn element(&self, coeffs: &[u32]) -> FieldElement {
        let mut v = vec![0u32; self.m as usize];
        for (i, &c) in coeffs.iter().enumerate() {
            v[i % self.m as usize] = (v[i % self.m as usize] + c) % self.p;
        }
        FieldElement(pack(&v, self.p))
    }

    pub fn coefficients(&self, a: FieldElement) -> Vec<u32> {
        digits(a.0, self.p, self.m)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(FieldElement)
    }

    /// Embedding of the prime subfield.
    pub fn from_int(&self, c: u64) -> FieldElement {
        FieldElement((c % self.p as u64) as u32)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.m == 1 {
            return FieldElement((a.0 + b.0) % self.p);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place = place.wrapping_mul(self.p);
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let d: Vec<u32> = digits(a.0, self.p, self.m).iter().map(|&c| (self.p - c) % self.p).collect();
        FieldElement(pack(&d, self.p))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = self.order - 1;
        let e = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % n as u64;
        FieldElement(self.antilog[e as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        let l = self.dlog(a).ok()?;
        let n = self.order - 1;
        Some(FieldElement(self.antilog[((n - l) % n) as usize]))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if a.0 == 0 {
            return if e == 0 { FieldElement::ONE } else { FieldElement::ZERO };
        }
        let n = (self.order - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        FieldElement(self.antilog[((l as u128 * e as u128) % n as u128) as usize])
    }

    /// `g^k` for the designated primitive element `g`.
    pub fn exp(&self, k: u64) -> FieldElement {
        FieldElement(self.antilog[(k % (self.order - 1) as u64) as usize])
    }

    pub fn dlog(&self, a: FieldElement) -> Result<u32, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::LogOfZero);
        }
        Ok(self.log[a.0 as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: FieldElement) -> Option<u64> {
        let l = self.dlog(a).ok()? as u64;
        let n = (self.order - 1) as u64;
        Some(n / crate::numtheory::gcd(l, n))
    }
}

fn one(m: u32) -> Vec<u32> {
    let mut v = vec![0; m as usize];
    v[0] = 1;
    v
}

fn digits(mut x: u32, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn pack(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

/// `a * b mod modulus` over Z_p; `a`, `b` have length m, `modulus` is monic of degree m.
fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = a.len();
    let p64 = p as u64;
    let mut prod = vec![0u64; 2 * m];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    for d in (m..2 * m).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        for (i, &mc) in modulus[..m].iter().enumerate() {
            let t = c * mc as u64 % p64;
            prod[d - m + i] = (prod[d - m + i] + p64 - t) % p64;
        }
        prod[d] = 0;
    }
    prod[..m].iter().map(|&c| c as u32).collect()
}

fn poly_pow(base: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let mut r = one(base.len() as u32);
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            r = poly_mulmod(&r, &b, modulus, p);
        }
        b = poly_mulmod(&b, &b, modulus, p);
        e >>= 1;
    }
    r
}

/// Remainder of `a` modulo the monic polynomial `d` (both as coefficient
/// vectors, lowest degree first).
fn poly_rem(a: &[u32], d: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dd = d.len() - 1;
    let p64 = p as u64;
    for top in (dd..r.len()).rev() {
        let c = r[top] % p64;
        if c == 0 {
            continue;
        }
        for (i, &dc) in d.iter().enumerate() {
            let idx = top - dd + i;
            r[idx] = (r[idx] + p64 * p64 - c * dc as u64 % p64) % p64;
        }
    }
    r.truncate(dd);
    r.into_iter().map(|c| c as u32).collect()
}

fn least_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    (0..count)
        .map(|lower| {
            let mut f = digits(lower as u32, p, m);
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = (f.len() - 1) as u32;
    if m == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    // exhaustive test against every monic divisor of degree ≤ m/2
    for d in 1..=m / 2 {
        for lower in 0..(p as u64).pow(d) {
            let mut g = digits(lower as u32, p, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// GF(q^d) for `d ∈ {2, 3}` as `GF(q)[y] / f(y)` where `f` is the least
/// monic irreducible polynomial (in the base field's element order) whose
/// root `y` is primitive. Powers of `y` are walked without tables, so `q^d`
/// may exceed [`FIELD_ORDER_CAP`].
#[derive(Debug, Clone)]
pub struct ExtensionField<'a> {
    base: &'a FieldCtx,
    /// `f_0, …, f_{d-1}`; `f` is monic of degree `d`.
    poly: Vec<FieldElement>,
}

impl<'a> ExtensionField<'a> {
    pub fn new(base: &'a FieldCtx, d: u32) -> Result<ExtensionField<'a>, FieldError> {
        if d != 2 && d != 3 {
            return Err(FieldError::UnsupportedExtension(d));
        }
        let q = base.order() as u64;
        let group = q.pow(d) - 1;
        let maximal: Vec<u64> = factorize(group).pairs().iter().map(|&(r, _)| group / r).collect();
        let mut idx = vec![0u32; d as usize];
        loop {
            let poly: Vec<FieldElement> = idx.iter().map(|&i| FieldElement(i)).collect();
            let ext = ExtensionField { base, poly };
            if ext.has_no_root() && maximal.iter().all(|&e| !ext.is_one(&ext.y_pow(e))) {
                return Ok(ext);
            }
            // next coefficient tuple in base-q order
            let mut pos = 0;
            loop {
                idx[pos] += 1;
                if idx[pos] < base.order() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
                assert!(pos < idx.len(), "primitive polynomial must exist");
            }
        }
    }

    pub fn base(&self) -> &FieldCtx {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.poly.len()
    }

    /// Order of the multiplicative group, `q^d - 1`.
    pub fn group_order(&self) -> u64 {
        (self.base.order() as u64).pow(self.degree() as u32) - 1
    }

    fn has_no_root(&self) -> bool {
        // a cubic or quadratic is irreducible iff it has no root in the base field
        self.base.elements().all(|t| {
            let mut acc = FieldElement::ONE;
            for c in self.poly.iter().rev() {
                acc = self.base.add(self.base.mul(acc, t), *c);
            }
            acc != FieldElement::ZERO
        })
    }

    pub fn one(&self) -> Vec<FieldElement> {
        let mut v = vec![FieldElement::ZERO; self.degree()];
        v[0] = FieldElement::ONE;
        v
    }

    pub fn is_one(&self, a: &[FieldElement]) -> bool {
        a[0] == FieldElement::ONE && a[1..].iter().all(|&c| c == FieldElement::ZERO)
    }

    /// `y · a` reduced modulo `f`.
    pub fn mul_by_y(&self, a: &[FieldElement]) -> Vec<FieldElement> {
        let d = self.degree();
        let top = a[d - 1];
        let mut out = vec![FieldElement::ZERO; d];
        for i in (1..d).rev() {
            out[i] = a[i - 1];
        }
        if top != FieldElement::ZERO {
            for i in 0..d {
                out[i] = self.base.sub(out[i], self.base.mul(top, self.poly[i]));
            }
        }
        out
    }

    pub fn mul(&self, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
        // Horner in y over the coefficients of b
        let d = self.degree();
        let mut acc = vec![FieldElement::ZERO; d];
        for &bc in b.iter().rev() {
            acc = self.mul_by_y(&acc);
            if bc != FieldElement::ZERO {
                for i in 0..d {
                    acc[i] = self.base.add(acc[i], self.base.mul(a[i], bc));
                }
            }
        }
        acc
    }

    pub fn y_pow(&self, mut e: u64) -> Vec<FieldElement> {
        let mut r = self.one();
        let mut b = vec![FieldElement::ZERO; self.degree()];
        b[1] = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    /// Iterator over `y^0, y^1, …, y^(count-1)`.
    pub fn powers(&self, count: u64) -> impl Iterator<Item = Vec<FieldElement>> + '_ {
        let mut cur = self.one();
        (0..count).map(move |_| {
            let out = cur.clone();
            cur = self.mul_by_y(&cur);
            out
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Schoolbook product of two packed elements, reduced by long division.
    fn oracle_mul(ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> FieldElement {
        let (p, m) = (ctx.characteristic(), ctx.degree() as usize);
        let (x, y) = (ctx.coefficients(a), ctx.coefficients(b));
        let mut prod = vec![0u32; 2 * m - 1];
        for i in 0..m {
            for j in 0..m {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        let mut r = poly_rem(&prod, ctx.modulus(), p);
        r.resize(m, 0);
        FieldElement(pack(&r, p))
    }

    #[test]
    fn creation_examples() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert_eq!(f5.primitive(), FieldElement(2));
        assert_eq!(FieldCtx::new(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(FieldCtx::new(2, 21).unwrap_err(), FieldError::TooLarge(1 << 21));
        let f8 = FieldCtx::new(2, 3).unwrap();
        // x^3 + x + 1 is the least irreducible cubic over GF(2)
        assert_eq!(f8.modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn gf4_product() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        let x = f4.element(&[0, 1]);
        let x1 = f4.element(&[1, 1]);
        assert_eq!(f4.mul(x, x1), FieldElement::ONE);
        assert_eq!(f4.mul(x, FieldElement::ONE), x);
        assert_eq!(oracle_mul(&f4, x, x1), FieldElement::ONE);
    }

    #[test]
    fn group_order_and_logs() {
        for (p, m) in [(2, 1), (2, 4), (3, 2), (5, 2), (7, 1), (3, 3), (2, 8), (13, 1)] {
            let f = FieldCtx::new(p, m).unwrap();
            let n = f.order() as u64 - 1;
            let g = f.primitive();
            assert_eq!(f.pow(g, n), FieldElement::ONE);
            assert_eq!(f.element_order(g), Some(n));
            let mut seen = vec![false; f.order() as usize];
            for &a in f.antilog_table() {
                assert!(!seen[a as usize], "duplicate in antilog table");
                seen[a as usize] = true;
            }
            assert!(!seen[0] && seen[1..].iter().all(|&s| s));
            for a in 0..n {
                assert_eq!(f.dlog(f.exp(a)).unwrap() as u64, a);
            }
            assert_eq!(f.dlog(FieldElement::ZERO), Err(FieldError::LogOfZero));
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for (p, m) in [(2, 2), (3, 2), (2, 4), (5, 2), (7, 2), (2, 5), (3, 3)] {
            let f = FieldCtx::new(p, m).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
                if a != FieldElement::ZERO {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.mul(a, b), oracle_mul(&f, a, b));
                }
            }
            // associativity and distributivity on a stride through the triples
            for &a in els.iter().step_by(3) {
                for &b in els.iter().step_by(2) {
                    for &c in &els {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn field_256_axioms() {
        let f = FieldCtx::new(2, 8).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b), oracle_mul(&f, a, b));
            }
        }
    }

    #[test]
    fn extension_is_primitive() {
        let base = FieldCtx::new(3, 1).unwrap();
        let ext = ExtensionField::new(&base, 3).unwrap();
        let n = ext.group_order();
        assert_eq!(n, 26);
        let powers: Vec<_> = ext.powers(n).collect();
        let mut uniq = powers.clone();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len() as u64, n);
        assert!(ext.is_one(&ext.y_pow(n)));
        assert!(ExtensionField::new(&base, 4).is_err());
    }
}
