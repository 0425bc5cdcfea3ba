//! The analytic side of the class-count bound, made exact: the quadratic
//! form `h`, its pointwise lemma suite, the `3 h <= n^2` maximization, the
//! exponent identity behind the per-shape bound, and the constant algebra
//! in Q(sqrt 2) that produces the final exponent.

use crate::error::{Error, Result};
use crate::gaparray::g_worst_size;
use crate::partitions::{partitions_of, RationalVector};
use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// An element `a + b sqrt(2)` of Q(sqrt 2); equality is componentwise,
/// which coincides with equality of real values.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticNumber {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadraticNumber {
    pub fn new(a: BigRational, b: BigRational) -> QuadraticNumber {
        QuadraticNumber { a, b }
    }

    pub fn from_rational(a: BigRational) -> QuadraticNumber {
        QuadraticNumber::new(a, BigRational::zero())
    }

    pub fn from_ratio(n: i64, d: i64) -> QuadraticNumber {
        QuadraticNumber::from_rational(ratio(n, d))
    }

    pub fn sqrt2() -> QuadraticNumber {
        QuadraticNumber::new(BigRational::zero(), BigRational::one())
    }

    pub fn zero() -> QuadraticNumber {
        QuadraticNumber::from_rational(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn square(&self) -> QuadraticNumber {
        self * self
    }

    /// Exact sign of the real value. On the mixed-sign cases this compares
    /// `a^2` with `2 b^2`; the two are never equal for nonzero components
    /// since sqrt(2) is irrational.
    pub fn sign(&self) -> Ordering {
        match (self.a.cmp(&BigRational::zero()), self.b.cmp(&BigRational::zero())) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            (Ordering::Greater, Ordering::Less) | (Ordering::Less, Ordering::Greater) => {
                let aa = &self.a * &self.a;
                let bb2 = ratio(2, 1) * &self.b * &self.b;
                if self.a.is_positive() {
                    aa.cmp(&bb2)
                } else {
                    bb2.cmp(&aa)
                }
            }
        }
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {} sqrt(2)", self.a, self.b)
    }
}

impl Add for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn add(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        QuadraticNumber::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn sub(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        QuadraticNumber::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn mul(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        QuadraticNumber::new(
            &self.a * &rhs.a + ratio(2, 1) * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber::new(-self.a.clone(), -self.b.clone())
    }
}

impl PartialOrd for QuadraticNumber {
    fn partial_cmp(&self, other: &QuadraticNumber) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticNumber {
    fn cmp(&self, other: &QuadraticNumber) -> Ordering {
        (self - other).sign()
    }
}

/// `epsilon = (4/21)(5 - 3 sqrt 2)`.
pub fn epsilon() -> QuadraticNumber {
    &QuadraticNumber::from_ratio(4, 21)
        * &(&QuadraticNumber::from_ratio(5, 1) - &(&QuadraticNumber::from_ratio(3, 1) * &QuadraticNumber::sqrt2()))
}

/// `delta = epsilon / 2`.
pub fn delta() -> QuadraticNumber {
    &QuadraticNumber::from_ratio(1, 2) * &epsilon()
}

/// `alpha = 4/49 + (20/49) sqrt 2`.
pub fn alpha() -> QuadraticNumber {
    QuadraticNumber::new(ratio(4, 49), ratio(20, 49))
}

/// The final exponent constant `c = alpha - 1/2 = (20/49) sqrt 2 - 41/98`.
pub fn c_constant() -> QuadraticNumber {
    &alpha() - &QuadraticNumber::from_ratio(1, 2)
}

/// Outcome of one verification sweep.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: String,
    pub checked: u64,
    pub violations: Vec<String>,
}

impl CheckReport {
    fn new(name: &str) -> CheckReport {
        CheckReport {
            name: name.to_string(),
            checked: 0,
            violations: Vec::new(),
        }
    }

    fn flag(&mut self, message: String) {
        if self.violations.len() < 16 {
            self.violations.push(message);
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "checked": self.checked,
            "passed": self.passed(),
            "violations": self.violations,
        })
    }
}

/// Partial derivative of `h` at `v` in coordinate `i` (1-based):
/// `2 v_2` for `i = 1`, else `2 v_{i-1} - 2 v_i + 2 v_{i+1}`.
pub fn h_partials(v: &RationalVector, i: usize) -> Result<BigRational> {
    if i == 0 {
        return Err(Error::IndexOutOfRange(
            "partial derivatives are indexed from 1".into(),
        ));
    }
    let two = ratio(2, 1);
    if i == 1 {
        return Ok(&two * v.get(1));
    }
    Ok(&two * (v.get(i - 2) - v.get(i - 1) + v.get(i)))
}

/// Pointwise checks of the h-function lemma on decreasing nonnegative
/// samples: homogeneity, the two partial-derivative dominance statements,
/// and both upper bounds; the last two only on the half-concentrated
/// subset `v_1 >= ||v||_1 / 2`. A centered finite difference cross-checks
/// the partials (exact, since h is quadratic).
pub fn check_h_lemma(samples: &[RationalVector]) -> Result<CheckReport> {
    let mut report = CheckReport::new("h-lemma pointwise suite");
    let half = ratio(1, 2);
    let scalars = [ratio(-2, 1), ratio(-1, 1), ratio(0, 1), ratio(1, 2), ratio(3, 1)];
    let step = ratio(1, 3);
    for v in samples {
        if !v.in_decreasing_cone() {
            return Err(Error::VerificationFailed(format!(
                "sample {v:?} is not weakly decreasing nonnegative"
            )));
        }
        report.checked += 1;
        let h = v.h_value();
        // Part 1: homogeneity h(cv) = c^2 h(v).
        for c in &scalars {
            if (v.scale(c)).h_value() != c * c * &h {
                report.flag(format!("homogeneity fails at {v:?} with c = {c}"));
            }
        }
        // Exact centered differences agree with the stated partials.
        for i in 1..=v.len() + 2 {
            let up = v.with_coord(i - 1, v.get(i - 1) + &step).h_value();
            let down = v.with_coord(i - 1, v.get(i - 1) - &step).h_value();
            let centered = (up - down) / (&step * ratio(2, 1));
            if centered != h_partials(v, i)? {
                report.flag(format!("partial formula fails at {v:?}, i = {i}"));
            }
        }
        // Part 2: the first partial dominates all from the third on.
        let d1 = h_partials(v, 1)?;
        for k in 3..=v.len() + 2 {
            if d1 < h_partials(v, k)? {
                report.flag(format!("first partial fails to dominate k = {k} at {v:?}"));
            }
        }
        // Part 3: h(v) <= 2 ||v||_1 v_2 - 3 v_2^2.
        let v2 = v.get(1);
        if h > ratio(2, 1) * v.one_norm() * &v2 - ratio(3, 1) * &v2 * &v2 {
            report.flag(format!("second-coordinate bound fails at {v:?}"));
        }
        if v.get(0) >= &half * v.one_norm() {
            // Part 4: the second partial dominates all from the fourth on.
            let d2 = h_partials(v, 2)?;
            for k in 4..=v.len() + 2 {
                if d2 < h_partials(v, k)? {
                    report.flag(format!(
                        "second partial fails to dominate k = {k} at {v:?}"
                    ));
                }
            }
            // Part 5: h(v) <= ||v||_1 v_1 - (3/4) v_1^2.
            let v1 = v.get(0);
            if h > v.one_norm() * &v1 - ratio(3, 4) * &v1 * &v1 {
                report.flag(format!("first-coordinate bound fails at {v:?}"));
            }
        }
    }
    Ok(report)
}

/// `3 h(lambda') <= n^2` for every partition of every `n <= n_max`.
pub fn check_max_third(n_max: usize) -> CheckReport {
    let mut report = CheckReport::new("third-of-square maximization");
    for n in 1..=n_max {
        for lam in partitions_of(n) {
            report.checked += 1;
            let h = crate::partitions::h_int(lam.conjugate().parts());
            if 3 * h > (n * n) as i64 {
                report.flag(format!("3 h({lam}') = {} exceeds n^2 = {}", 3 * h, n * n));
            }
        }
    }
    report
}

/// The constant algebra: all three exponent expressions equal `alpha`,
/// `c = alpha - 1/2`, `c < 7/44`, and `0 < delta < epsilon < 1/6`.
pub fn check_constants() -> CheckReport {
    let mut report = CheckReport::new("exponent constant algebra");
    let e = epsilon();
    let d = delta();
    let a = alpha();
    let two_thirds = QuadraticNumber::from_ratio(2, 3);
    let first = &two_thirds - &(&QuadraticNumber::from_ratio(3, 2) * &d.square());
    let second = &two_thirds - &(&QuadraticNumber::from_ratio(3, 8) * &e.square());
    let third = {
        let u = &two_thirds - &e;
        let w = &QuadraticNumber::from_ratio(1, 3) - &d;
        &(&QuadraticNumber::from_ratio(1, 1) - &u.square()) - &w.square()
    };
    report.checked = 7;
    if first != a {
        report.flag(format!("2/3 - (3/2) delta^2 = {first} differs from alpha = {a}"));
    }
    if second != a {
        report.flag(format!("2/3 - (3/8) epsilon^2 = {second} differs from alpha = {a}"));
    }
    if third != a {
        report.flag(format!(
            "1 - (2/3 - epsilon)^2 - (1/3 - delta)^2 = {third} differs from alpha = {a}"
        ));
    }
    let c = c_constant();
    if &a - &QuadraticNumber::from_ratio(1, 2) != c {
        report.flag("c is not alpha - 1/2".to_string());
    }
    if c >= QuadraticNumber::from_ratio(7, 44) {
        report.flag(format!("c = {c} is not below 7/44"));
    }
    if d.sign() != Ordering::Greater || d >= e {
        report.flag("0 < delta < epsilon fails".to_string());
    }
    if e >= QuadraticNumber::from_ratio(1, 6) {
        report.flag(format!("epsilon = {e} is not below 1/6"));
    }
    report
}

/// The exponent identity behind the per-shape bound, as an exact equality:
/// `n l - n/2 - n(lambda) - |G^lambda| = -l/2 + h(lambda')/2` for every
/// `lambda` of every `n <= n_max` (so the left side is at most
/// `h(lambda')/2`).
pub fn check_g_exponent_identity(n_max: usize) -> CheckReport {
    let mut report = CheckReport::new("extremal exponent identity");
    for n in 1..=n_max {
        for lam in partitions_of(n) {
            report.checked += 1;
            let l = lam.len() as i64;
            let left = ratio(n as i64 * l, 1) - ratio(n as i64, 2)
                - ratio(lam.n_stat() as i64, 1)
                - ratio(g_worst_size(&lam) as i64, 1);
            let h = crate::partitions::h_int(lam.conjugate().parts());
            let right = ratio(-l, 2) + ratio(h, 2);
            if left != right {
                report.flag(format!("identity fails at {lam}: {left} vs {right}"));
            }
            if left > ratio(h, 2) {
                report.flag(format!("bound fails at {lam}"));
            }
        }
    }
    report
}

/// Reproducible pseudo-random samples from the decreasing nonnegative
/// cone: short vectors with small rational entries, sorted.
pub fn sample_vectors(count: usize, seed: u64) -> Vec<RationalVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let len = rng.gen_range(1..=6usize);
        let mut coords: Vec<BigRational> = (0..len)
            .map(|_| ratio(rng.gen_range(0..=48i64), rng.gen_range(1..=8i64)))
            .collect();
        coords.sort();
        coords.reverse();
        out.push(RationalVector::new(coords));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: (i64, i64), b: (i64, i64)) -> QuadraticNumber {
        QuadraticNumber::new(ratio(a.0, a.1), ratio(b.0, b.1))
    }

    #[test]
    fn quadratic_arithmetic() {
        let x = q((1, 2), (3, 1));
        let y = q((-2, 1), (1, 3));
        assert_eq!(&x + &y, q((-3, 2), (10, 3)));
        assert_eq!(&x - &y, q((5, 2), (8, 3)));
        // (1/2 + 3 s)(-2 + s/3) with s^2 = 2: -1 + 2 = 1; s terms: 1/6 - 6.
        assert_eq!(&x * &y, q((1, 1), (-35, 6)));
        assert_eq!(QuadraticNumber::sqrt2().square(), q((2, 1), (0, 1)));
    }

    #[test]
    fn sign_cases() {
        assert_eq!(QuadraticNumber::zero().sign(), Ordering::Equal);
        assert_eq!(q((3, 1), (-2, 1)).sign(), Ordering::Greater); // 9 > 8
        assert_eq!(q((-3, 1), (2, 1)).sign(), Ordering::Less);
        assert_eq!(q((-7, 1), (5, 1)).sign(), Ordering::Greater); // 50 > 49
        assert_eq!(q((7, 1), (-5, 1)).sign(), Ordering::Less);
        assert_eq!(q((0, 1), (-1, 1)).sign(), Ordering::Less);
        assert!(QuadraticNumber::sqrt2() > q((7, 5), (0, 1)));
        assert!(QuadraticNumber::sqrt2() < q((3, 2), (0, 1)));
    }

    #[test]
    fn constants_pass() {
        let report = check_constants();
        assert!(report.passed(), "{:?}", report.violations);
        // The margin below 7/44 is tiny but positive.
        let gap = &QuadraticNumber::from_ratio(7, 44) - &c_constant();
        assert_eq!(gap.sign(), Ordering::Greater);
        let wide = &QuadraticNumber::from_ratio(8, 44) - &c_constant();
        assert_eq!(wide.sign(), Ordering::Greater);
        assert_eq!(
            c_constant(),
            QuadraticNumber::new(ratio(-41, 98), ratio(20, 49))
        );
    }

    #[test]
    fn partial_examples() {
        let v = RationalVector::from_ints(&[1]);
        assert!(h_partials(&v, 1).unwrap().is_zero());
        let v = RationalVector::from_ints(&[3, 2, 1]);
        assert_eq!(h_partials(&v, 2).unwrap(), ratio(4, 1));
        assert_eq!(h_partials(&v, 1).unwrap(), ratio(4, 1));
        assert_eq!(h_partials(&v, 4).unwrap(), ratio(2, 1));
        assert!(h_partials(&v, 0).is_err());
    }

    #[test]
    fn h_lemma_on_conjugates_and_samples() {
        let mut samples = Vec::new();
        for n in 1..=12 {
            for lam in partitions_of(n) {
                samples.push(RationalVector::from_usizes(lam.conjugate().parts()));
            }
        }
        samples.extend(sample_vectors(500, 0x5eed));
        let report = check_h_lemma(&samples).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.checked as usize, samples.len());
        // The boundary case v_1 = ||v||_1 / 2 goes through part 5.
        let boundary = RationalVector::from_ints(&[2, 1, 1]);
        assert_eq!(boundary.h_value(), ratio(4, 1));
        assert!(check_h_lemma(&[boundary]).unwrap().passed());
        // Non-cone samples are rejected, not silently skipped.
        let bad = RationalVector::from_ints(&[1, 2]);
        assert!(check_h_lemma(&[bad]).is_err());
    }

    #[test]
    fn max_third_small() {
        let report = check_max_third(16);
        assert!(report.passed(), "{:?}", report.violations);
        // Tight at n = 3: lambda = (2,1) has 3 h = 9 = n^2.
        let lam = crate::partitions::Partition::new(vec![2, 1]).unwrap();
        assert_eq!(crate::partitions::h_int(lam.conjugate().parts()), 3);
    }

    #[test]
    fn exponent_identity_small() {
        let report = check_g_exponent_identity(12);
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.checked, (1..=12).map(|n| partitions_of(n).len() as u64).sum::<u64>());
    }

    #[test]
    fn samples_are_reproducible() {
        assert_eq!(sample_vectors(10, 7), sample_vectors(10, 7));
        assert!(sample_vectors(50, 7).iter().all(|v| v.in_decreasing_cone()));
    }
}
