//! Integer partitions and the partition statistics used by the census
//! bounds: conjugates, `n(lambda)`, multiplicities, hook-length counts,
//! the part-increment map `phi_r`, and the quadratic form `h`.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// A partition: weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Partition> {
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(Error::InvalidPartition(format!(
                    "parts not weakly decreasing: {:?}",
                    parts
                )));
            }
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition("zero part".into()));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Partition {
        Partition { parts: Vec::new() }
    }

    /// Sum of the parts.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The `i`-th part (0-based), 0 beyond the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Conjugate partition: `lambda'_i = #{j : lambda_j >= i}`.
    pub fn conjugate(&self) -> Partition {
        let cols = self.part(0);
        let mut parts = Vec::with_capacity(cols);
        for i in 1..=cols {
            parts.push(self.parts.iter().filter(|&&p| p >= i).count());
        }
        Partition { parts }
    }

    /// `n(lambda) = sum (i-1) * lambda_i`.
    pub fn n_stat(&self) -> usize {
        self.parts.iter().enumerate().map(|(i, &p)| i * p).sum()
    }

    /// Multiplicity vector: entry `i` (0-based) counts parts equal to `i+1`.
    /// Length `lambda_1`; equals `lambda' - L lambda'` entrywise.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0usize; self.part(0)];
        for &p in &self.parts {
            m[p - 1] += 1;
        }
        m
    }

    /// Number of standard Young tableaux of this shape (hook length formula).
    pub fn hook_count(&self) -> BigUint {
        let n = self.n();
        let conj = self.conjugate();
        let mut fact = BigUint::one();
        for i in 1..=n {
            fact *= BigUint::from(i);
        }
        let mut hooks = BigUint::one();
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 1..=row {
                let h = row - j + conj.part(j - 1) - i;
                hooks *= BigUint::from(h);
            }
        }
        let (quot, rem) = num::integer::div_rem(fact.clone(), hooks.clone());
        assert!(rem.is_zero(), "hook product must divide n!");
        quot
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Partition> {
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("partition must look like (3,2,1): {s}")))?;
        if inner.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad part {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// All partitions of `n` in lexicographically decreasing order,
/// starting at `(n)` and ending at `(1,...,1)`.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for first in (1..=rest.min(max)).rev() {
            prefix.push(first);
            rec(rest - first, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n.max(1), &mut Vec::new(), &mut out);
    out
}

/// `p(n)` via the Euler pentagonal-number recurrence.
pub fn partition_count(n: usize) -> BigUint {
    let mut memo: Vec<BigInt> = vec![BigInt::one()];
    for m in 1..=n {
        let mut acc = BigInt::zero();
        let mut k = 1i64;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            let g2 = k * (3 * k + 1) / 2;
            if g1 as usize > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let mut term = memo[m - g1 as usize].clone();
            if g2 as usize <= m {
                term += &memo[m - g2 as usize];
            }
            acc += BigInt::from(sign) * term;
            k += 1;
        }
        memo.push(acc);
    }
    memo[n].to_biguint().expect("p(n) is positive")
}

/// `<a, b> = sum a_i b_i` with zero padding.
pub fn inner(a: &Partition, b: &Partition) -> usize {
    (0..a.len().max(b.len())).map(|i| a.part(i) * b.part(i)).sum()
}

/// Increments part `r` (0-based; `r = len` appends a part 1) and reorders so
/// the incremented part lands first among parts of its size. Returns the new
/// partition and the position map `w`: part `i` of the input (with the new
/// part indexed `len` when appended) moves to position `w[i]`.
pub fn phi(lam: &Partition, r: usize) -> Result<(Partition, Vec<usize>)> {
    let ell = lam.len();
    if r > ell {
        return Err(Error::IndexOutOfRange(format!(
            "phi index {r} exceeds part count {ell}"
        )));
    }
    let mut sizes: Vec<usize> = lam.parts.clone();
    if r == ell {
        sizes.push(1);
    } else {
        sizes[r] += 1;
    }
    let cur = sizes[r];
    // Positions of the unmoved parts, in order, with `r` skipped.
    let others: Vec<usize> = (0..sizes.len()).filter(|&i| i != r).collect();
    let t = others
        .iter()
        .position(|&i| sizes[i] <= cur)
        .unwrap_or(others.len());
    let mut w = vec![0usize; sizes.len()];
    for (j, &i) in others.iter().enumerate() {
        w[i] = if j < t { j } else { j + 1 };
    }
    w[r] = t;
    let mut new_parts = vec![0usize; sizes.len()];
    for (i, &s) in sizes.iter().enumerate() {
        new_parts[w[i]] = s;
    }
    Ok((Partition::new(new_parts)?, w))
}

/// `h` on an integer vector: `|v|^2 - |v - Lv|^2` where `L` shifts left.
pub fn h_int(v: &[usize]) -> i64 {
    let mut norm = 0i64;
    let mut diff = 0i64;
    for i in 0..v.len() {
        let vi = v[i] as i64;
        let vn = if i + 1 < v.len() { v[i + 1] as i64 } else { 0 };
        norm += vi * vi;
        diff += (vi - vn) * (vi - vn);
    }
    norm - diff
}

/// A finitely supported rational vector, zero-extended beyond its length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalVector {
    coords: Vec<BigRational>,
}

impl RationalVector {
    pub fn new(coords: Vec<BigRational>) -> RationalVector {
        let mut coords = coords;
        while coords.last().map(|c| c.is_zero()).unwrap_or(false) {
            coords.pop();
        }
        RationalVector { coords }
    }

    pub fn from_ints(v: &[i64]) -> RationalVector {
        RationalVector::new(v.iter().map(|&x| BigRational::from(BigInt::from(x))).collect())
    }

    pub fn from_usizes(v: &[usize]) -> RationalVector {
        RationalVector::new(
            v.iter()
                .map(|&x| BigRational::from(BigInt::from(x)))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coordinate `i` (0-based), zero beyond the support.
    pub fn get(&self, i: usize) -> BigRational {
        self.coords.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> RationalVector {
        RationalVector::new(self.coords.iter().map(|x| x * c).collect())
    }

    /// Sets coordinate `i`, growing the support as needed.
    pub fn with_coord(&self, i: usize, value: BigRational) -> RationalVector {
        let mut coords = self.coords.clone();
        if coords.len() <= i {
            coords.resize(i + 1, BigRational::zero());
        }
        coords[i] = value;
        RationalVector::new(coords)
    }

    pub fn one_norm(&self) -> BigRational {
        self.coords.iter().map(|c| c.abs()).sum()
    }

    pub fn two_norm_sq(&self) -> BigRational {
        self.coords.iter().map(|c| c * c).sum()
    }

    /// True when the coordinates are weakly decreasing and nonnegative.
    pub fn in_decreasing_cone(&self) -> bool {
        if self.coords.iter().any(|c| c.is_negative()) {
            return false;
        }
        self.coords.windows(2).all(|w| w[0] >= w[1])
    }

    /// `h(v) = |v|^2 - |v - Lv|^2`, exact.
    pub fn h_value(&self) -> BigRational {
        let mut acc = self.two_norm_sq();
        for i in 0..self.coords.len() {
            let d = self.get(i) - self.get(i + 1);
            acc -= &d * &d;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(pt(&[3, 2]).conjugate(), pt(&[2, 2, 1]));
        assert_eq!(pt(&[2, 2, 1]).conjugate(), pt(&[3, 2]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
    }

    #[test]
    fn conjugation_is_an_involution() {
        for n in 0..=10 {
            for lam in partitions_of(n) {
                assert_eq!(lam.conjugate().conjugate(), lam);
            }
        }
    }

    #[test]
    fn n_stat_identities() {
        assert_eq!(pt(&[3, 2]).n_stat(), 2);
        for n in 0..=12 {
            for lam in partitions_of(n) {
                let conj = lam.conjugate();
                let binom: usize = conj.parts().iter().map(|&c| c * (c - 1) / 2).sum();
                assert_eq!(lam.n_stat(), binom);
                let norm_sq: usize = conj.parts().iter().map(|&c| c * c).sum();
                assert_eq!(2 * lam.n_stat(), norm_sq - n);
            }
        }
    }

    #[test]
    fn multiplicities_match_conjugate_differences() {
        for n in 0..=12 {
            for lam in partitions_of(n) {
                let m = lam.multiplicities();
                let conj = lam.conjugate();
                for (i, &mi) in m.iter().enumerate() {
                    assert_eq!(mi, conj.part(i) - conj.part(i + 1));
                }
                assert_eq!(m.iter().sum::<usize>(), lam.len());
            }
        }
    }

    #[test]
    fn enumeration_order_and_counts() {
        let p4 = partitions_of(4);
        let shown: Vec<String> = p4.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["(4)", "(3,1)", "(2,2)", "(2,1,1)", "(1,1,1,1)"]);
        for n in 0..=25 {
            let listed = partitions_of(n).len();
            assert_eq!(BigUint::from(listed), partition_count(n));
        }
        assert_eq!(partition_count(40), BigUint::from(37338u32));
    }

    #[test]
    fn hook_counts() {
        assert_eq!(pt(&[2, 1]).hook_count(), BigUint::from(2u32));
        assert_eq!(pt(&[3, 2]).hook_count(), BigUint::from(5u32));
        // Row-sum-of-squares identity (RSK): sum over shapes of f^2 = n!.
        for n in 1..=10 {
            let mut acc = BigUint::zero();
            for lam in partitions_of(n) {
                let f = lam.hook_count();
                acc += &f * &f;
            }
            let mut fact = BigUint::one();
            for i in 1..=n {
                fact *= BigUint::from(i);
            }
            assert_eq!(acc, fact);
        }
    }

    #[test]
    fn hook_count_is_at_most_sqrt_factorial() {
        for n in 1..=12 {
            let mut fact = BigUint::one();
            for i in 1..=n {
                fact *= BigUint::from(i);
            }
            for lam in partitions_of(n) {
                let f = lam.hook_count();
                assert!(&f * &f <= fact);
            }
        }
    }

    #[test]
    fn inner_product_equals_min_sum() {
        for a in 0..=8 {
            for b in 0..=8 {
                for lam in partitions_of(a) {
                    for mu in partitions_of(b) {
                        let direct: usize = (0..lam.len())
                            .flat_map(|i| (0..mu.len()).map(move |j| (i, j)))
                            .map(|(i, j)| lam.part(i).min(mu.part(j)))
                            .sum();
                        assert_eq!(inner(&lam.conjugate(), &mu.conjugate()), direct);
                    }
                }
            }
        }
    }

    #[test]
    fn phi_worked_example() {
        let lam = pt(&[3, 2, 2, 1, 1, 1, 1]);
        let (mu, w) = phi(&lam, 5).unwrap();
        assert_eq!(mu, pt(&[3, 2, 2, 2, 1, 1, 1]));
        assert_eq!(w, vec![0, 2, 3, 4, 5, 1, 6]);
        // Position map property: mu[w[i]] = lam[i] away from the increment.
        for i in 0..lam.len() {
            if i != 5 {
                assert_eq!(mu.part(w[i]), lam.part(i));
            }
        }
        assert_eq!(mu.part(w[5]), lam.part(5) + 1);
    }

    #[test]
    fn phi_appends_and_caps() {
        let lam = pt(&[2, 1]);
        let (mu, w) = phi(&lam, 2).unwrap();
        assert_eq!(mu, pt(&[2, 1, 1]));
        // New size-1 part goes first among the size-1 parts.
        assert_eq!(w, vec![0, 2, 1]);
        assert!(phi(&lam, 3).is_err());
        let (mu, w) = phi(&Partition::empty(), 0).unwrap();
        assert_eq!(mu, pt(&[1]));
        assert_eq!(w, vec![0]);
    }

    #[test]
    fn phi_no_tie_is_identity_map() {
        let lam = pt(&[4, 2, 1]);
        let (mu, w) = phi(&lam, 1).unwrap();
        assert_eq!(mu, pt(&[4, 3, 1]));
        assert_eq!(w, vec![0, 1, 2]);
    }

    #[test]
    fn h_values() {
        assert_eq!(h_int(&[2, 1]), 3);
        assert_eq!(h_int(&[2, 1, 1]), 4);
        assert_eq!(h_int(&[1]), 0);
        let v = RationalVector::from_ints(&[2, 1, 1]);
        assert_eq!(v.h_value(), BigRational::from(BigInt::from(4)));
    }

    #[test]
    fn rational_vector_zero_extension() {
        let v = RationalVector::from_ints(&[3, 1, 0, 0]);
        assert_eq!(v.len(), 2);
        assert_eq!(v.get(7), BigRational::zero());
        assert_eq!(v.one_norm(), BigRational::from(BigInt::from(4)));
        assert!(v.in_decreasing_cone());
        assert!(!RationalVector::from_ints(&[1, 2]).in_decreasing_cone());
    }

    #[test]
    fn partition_parse_round_trip() {
        for n in 0..=9 {
            for lam in partitions_of(n) {
                let shown = lam.to_string();
                let back: Partition = shown.parse().unwrap();
                assert_eq!(back, lam);
            }
        }
        assert!("(1,2)".parse::<Partition>().is_err());
        assert!("3,2".parse::<Partition>().is_err());
    }
}
