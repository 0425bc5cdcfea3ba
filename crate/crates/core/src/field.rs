//! Exact arithmetic in small finite fields `F_q`, `q = p^k`.
//!
//! Elements are integers in `[0, q)` read base `p` as coefficient vectors
//! (constant term in the least significant digit). Extension fields reduce
//! modulo a canonical modulus: the lexicographically smallest monic
//! irreducible of degree `k`, comparing coefficients from the constant term
//! upward. Orders up to 256 get full lookup tables; larger orders fall back
//! to the generic polynomial routines.

use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Largest order for which add/mul/neg/inv lookup tables are built.
const TABLE_LIMIT: u32 = 256;

/// An element of a finite field, stored as its integer encoding.
///
/// Elements do not carry their field; all arithmetic goes through the
/// [`FieldSpec`] that produced them.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub(crate) u32);

impl FieldElement {
    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Wraps a raw residue already known to lie in range.
    #[inline]
    pub(crate) fn from_raw(v: u32) -> FieldElement {
        FieldElement(v)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite field `F_{p^k}` with its canonical modulus and, for small
/// orders, precomputed operation tables.
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    /// Coefficients `c_0..c_k` of the modulus, monic (`c_k = 1`).
    /// Empty for prime fields.
    modulus: Vec<u32>,
    add_t: Vec<u32>,
    mul_t: Vec<u32>,
    neg_t: Vec<u32>,
    inv_t: Vec<u32>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec(q={}={}^{})", self.q, self.p, self.k)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Digits of `v` base `p`, length `k`, constant term first.
fn digits(v: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    let mut v = v;
    for _ in 0..k {
        out.push(v % p);
        v /= p;
    }
    out
}

/// Remainder of polynomial division `a mod b` over `F_p`; coefficient
/// vectors are constant-term-first and `b` must be monic after trimming.
fn poly_rem(a: &[u32], b: &[u32], p: u64) -> Vec<u32> {
    let db = b.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    while r.len() > db {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for i in 0..db {
                let sub = (lead * b[i] as u64) % p;
                r[shift + i] = (r[shift + i] + p * p - sub) % p;
            }
        }
        r.pop();
    }
    while r.len() > 1 && *r.last().unwrap() % p == 0 {
        r.pop();
    }
    r.iter().map(|&c| (c % p) as u32).collect()
}

fn poly_is_zero(a: &[u32]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// True when the monic polynomial (constant-term-first, degree `k`) has no
/// monic divisor of degree `1..=k/2`.
fn poly_irreducible(cand: &[u32], p: u32, k: u32) -> bool {
    for d in 1..=(k / 2) {
        let count = (p as u64).pow(d);
        for t in 0..count {
            let mut div = digits_u64(t, p as u64, d as usize);
            div.push(1); // monic degree-d divisor
            if poly_is_zero(&poly_rem(cand, &div, p as u64)) {
                return false;
            }
        }
    }
    true
}

fn digits_u64(v: u64, p: u64, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    let mut v = v;
    for _ in 0..len {
        out.push((v % p) as u32);
        v /= p;
    }
    out
}

/// The canonical modulus: lexicographically smallest monic irreducible of
/// degree `k`, coefficients compared from the constant term upward.
fn canonical_modulus(p: u32, k: u32) -> Vec<u32> {
    debug_assert!(k >= 2);
    let q = (p as u64).pow(k);
    for t in 0..q {
        // Digit `c_0` varies slowest so candidates appear in lex order on
        // (c_0, c_1, ..., c_{k-1}).
        let mut cand = Vec::with_capacity(k as usize + 1);
        let mut rem = t;
        let mut pow = (p as u64).pow(k - 1);
        for _ in 0..k {
            cand.push((rem / pow) as u32);
            rem %= pow;
            pow = if pow > 1 { pow / p as u64 } else { 1 };
        }
        cand.push(1);
        if poly_irreducible(&cand, p, k) {
            return cand;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists");
}

impl FieldSpec {
    /// Builds `F_{p^k}` with the canonical modulus.
    pub fn new(p: u32, k: u32) -> Result<Arc<FieldSpec>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidDegree(k));
        }
        let q = (p as u64).checked_pow(k).filter(|&q| q <= 1 << 16);
        let q = match q {
            Some(q) => q as u32,
            None => return Err(Error::InvalidDegree(k)),
        };
        let modulus = if k == 1 { Vec::new() } else { canonical_modulus(p, k) };
        let mut spec = FieldSpec {
            p,
            k,
            q,
            modulus,
            add_t: Vec::new(),
            mul_t: Vec::new(),
            neg_t: Vec::new(),
            inv_t: Vec::new(),
        };
        if q <= TABLE_LIMIT {
            spec.build_tables();
        }
        Ok(Arc::new(spec))
    }

    /// Builds the field of order `q`, factoring `q` as a prime power.
    pub fn from_order(q: u64) -> Result<Arc<FieldSpec>> {
        if q < 2 {
            return Err(Error::NotPrimePower(q));
        }
        let mut p = 2u64;
        while p * p <= q && q % p != 0 {
            p += 1;
        }
        if q % p != 0 {
            p = q; // q itself is prime
        }
        let mut k = 0u32;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        if rest != 1 {
            return Err(Error::NotPrimePower(q));
        }
        FieldSpec::new(p as u32, k)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        self.add_t = vec![0; q * q];
        self.mul_t = vec![0; q * q];
        self.neg_t = vec![0; q];
        self.inv_t = vec![0; q];
        for a in 0..self.q {
            self.neg_t[a as usize] = self.neg_generic(a);
            for b in 0..self.q {
                self.add_t[(a as usize) * q + b as usize] = self.add_generic(a, b);
                self.mul_t[(a as usize) * q + b as usize] = self.mul_generic(a, b);
            }
        }
        for a in 1..self.q {
            self.inv_t[a as usize] = self.inv_generic(a);
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients `c_0..c_k`; empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The element with integer encoding `v`.
    pub fn element(&self, v: u64) -> Result<FieldElement> {
        if v < self.q as u64 {
            Ok(FieldElement(v as u32))
        } else {
            Err(Error::ElementOutOfRange { value: v, q: self.q })
        }
    }

    /// All elements in encoding order `0, 1, ..., q-1`.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    fn add_generic(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return ((a as u64 + b as u64) % self.p as u64) as u32;
        }
        let (da, db) = (digits(a, self.p, self.k), digits(b, self.p, self.k));
        let mut v = 0u32;
        let mut pw = 1u32;
        for i in 0..self.k as usize {
            v += ((da[i] + db[i]) % self.p) * pw;
            pw *= self.p;
        }
        v
    }

    fn neg_generic(&self, a: u32) -> u32 {
        if self.k == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let da = digits(a, self.p, self.k);
        let mut v = 0u32;
        let mut pw = 1u32;
        for &c in da.iter() {
            v += (if c == 0 { 0 } else { self.p - c }) * pw;
            pw *= self.p;
        }
        v
    }

    fn mul_generic(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.k == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let (da, db) = (digits(a, self.p, self.k), digits(b, self.p, self.k));
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // Reduce x^(k+d) terms by the monic modulus.
        for d in (k..2 * k - 1).rev() {
            let c = prod[d];
            if c != 0 {
                prod[d] = 0;
                for i in 0..k {
                    let sub = (c * self.modulus[i] as u64) % p;
                    prod[d - k + i] = (prod[d - k + i] + p - sub) % p;
                }
            }
        }
        let mut v = 0u32;
        let mut pw = 1u32;
        for item in prod.iter().take(k) {
            v += (*item as u32) * pw;
            pw *= self.p;
        }
        v
    }

    fn inv_generic(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        if self.k == 1 {
            // Extended Euclid over the integers.
            let (mut r0, mut r1) = (self.p as i64, a as i64);
            let (mut t0, mut t1) = (0i64, 1i64);
            while r1 != 0 {
                let qt = r0 / r1;
                (r0, r1) = (r1, r0 - qt * r1);
                (t0, t1) = (t1, t0 - qt * t1);
            }
            debug_assert_eq!(r0, 1);
            return t0.rem_euclid(self.p as i64) as u32;
        }
        // Extension fields: a^(q-2).
        self.pow_raw(a, self.q as u64 - 2)
    }

    fn pow_raw(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_generic(acc, base);
            }
            base = self.mul_generic(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: u32, b: u32) -> u32 {
        if !self.add_t.is_empty() {
            self.add_t[(a * self.q + b) as usize]
        } else {
            self.add_generic(a, b)
        }
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if !self.mul_t.is_empty() {
            self.mul_t[(a * self.q + b) as usize]
        } else {
            self.mul_generic(a, b)
        }
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u32) -> u32 {
        if !self.neg_t.is_empty() {
            self.neg_t[a as usize]
        } else {
            self.neg_generic(a)
        }
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub(crate) fn inv_raw(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        if !self.inv_t.is_empty() {
            self.inv_t[a as usize]
        } else {
            self.inv_generic(a)
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add_raw(a.0, b.0))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.sub_raw(a.0, b.0))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg_raw(a.0))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul_raw(a.0, b.0))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero(self.q));
        }
        Ok(FieldElement(self.inv_raw(a.0)))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        FieldElement(self.pow_raw(a.0, e))
    }
}

/// Checks that two fields are the same, for cross-object operations.
pub(crate) fn same_field(a: &FieldSpec, b: &FieldSpec) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::MismatchedField(a.order(), b.order()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_small_fields() -> Vec<Arc<FieldSpec>> {
        [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]
            .iter()
            .map(|&(p, k)| FieldSpec::new(p, k).unwrap())
            .collect()
    }

    #[test]
    fn f4_has_canonical_modulus() {
        let f4 = FieldSpec::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]); // x^2 + x + 1
    }

    #[test]
    fn f8_modulus_follows_lex_order() {
        // Constant-term-first comparison prefers x^3 + x^2 + 1 over x^3 + x + 1.
        let f8 = FieldSpec::new(2, 3).unwrap();
        assert_eq!(f8.modulus(), &[1, 0, 1, 1]);
    }

    #[test]
    fn f9_modulus_is_x2_plus_1() {
        let f9 = FieldSpec::new(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        // x * x = -1 = 2, i.e. 3 * 3 -> 2 in encodings.
        assert_eq!(f9.mul(FieldElement(3), FieldElement(3)), FieldElement(2));
    }

    #[test]
    fn prime_field_has_empty_modulus() {
        let f7 = FieldSpec::new(7, 1).unwrap();
        assert!(f7.modulus().is_empty());
    }

    #[test]
    fn f4_multiplication_example() {
        let f4 = FieldSpec::new(2, 2).unwrap();
        // x * x = x + 1: encodings 2 * 2 -> 3.
        assert_eq!(f4.mul(FieldElement(2), FieldElement(2)), FieldElement(3));
    }

    #[test]
    fn f7_inverse_example() {
        let f7 = FieldSpec::new(7, 1).unwrap();
        assert_eq!(f7.inv(FieldElement(2)).unwrap(), FieldElement(4));
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        assert!(f5.inv(FieldElement(0)).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FieldSpec::new(4, 1).is_err());
        assert!(FieldSpec::new(2, 0).is_err());
        assert!(FieldSpec::from_order(12).is_err());
        assert!(FieldSpec::from_order(1).is_err());
    }

    #[test]
    fn from_order_factors_prime_powers() {
        let f = FieldSpec::from_order(49).unwrap();
        assert_eq!((f.p(), f.extension_degree()), (7, 2));
        let f = FieldSpec::from_order(11).unwrap();
        assert_eq!((f.p(), f.extension_degree()), (11, 1));
    }

    #[test]
    fn field_axioms_exhaustive_small_orders() {
        for f in all_small_fields() {
            let q = f.order();
            let els: Vec<_> = f.elements().collect();
            assert_eq!(els.len(), q as usize);
            for &a in &els {
                assert_eq!(f.add(a, f.zero()), a);
                assert_eq!(f.mul(a, f.one()), a);
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        for f in all_small_fields() {
            let q = f.order() as u64;
            let mut max_order = 0u64;
            for a in f.elements().skip(1) {
                let mut ord = 1u64;
                let mut acc = a;
                while acc != f.one() {
                    acc = f.mul(acc, a);
                    ord += 1;
                    assert!(ord <= q - 1);
                }
                max_order = max_order.max(ord);
            }
            assert_eq!(max_order, q - 1);
        }
    }

    #[test]
    fn element_range_check() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert!(f3.element(2).is_ok());
        assert!(f3.element(3).is_err());
    }
}
