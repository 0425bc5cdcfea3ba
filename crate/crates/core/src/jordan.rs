//! Canonical conjugation of strictly upper-triangular matrices to Jordan
//! form, one corner size at a time, with every step matrix recorded.
//!
//! A level takes a matrix whose leading (n-1)-corner is already a Jordan
//! matrix `J_mu` and conjugates by five explicit matrices in order: `E`
//! clears the non-block-bottom entries of the last column, `Delta`
//! normalizes the leading survivor to 1, `L` clears the remaining block
//! bottoms, `sigma` cycles the last row/column into the grown block, and
//! `tau` restores the decreasing block order. Each step asserts the state
//! it is promised to produce.

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::matrix::{
    jordan_composition, jordan_matrix, parse_jordan, permutation_matrix, Matrix,
};
use crate::partitions::Partition;
use std::fmt;

/// Which of the five step matrices a trace entry holds.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum StepLabel {
    E,
    Delta,
    L,
    Sigma,
    Tau,
}

impl fmt::Display for StepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StepLabel::E => "E",
            StepLabel::Delta => "Delta",
            StepLabel::L => "L",
            StepLabel::Sigma => "Sigma",
            StepLabel::Tau => "Tau",
        };
        write!(f, "{s}")
    }
}

/// One recursion level: the five steps applied to a matrix whose leading
/// corner is already Jordan, plus the accumulated conjugator for this size.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConjugationTrace {
    /// Corner size n handled by this level.
    pub size: usize,
    /// Jordan shape of the leading (n-1)-corner on entry.
    pub mu: Partition,
    /// Jordan shape of the full n-corner on exit.
    pub lambda: Partition,
    /// The level's input (corner already `J_mu`).
    pub start: Matrix,
    /// The five step matrices in application order.
    pub steps: Vec<(StepLabel, Matrix)>,
    /// States after each step.
    pub stages: Vec<Matrix>,
    /// Index of the block of `mu` that grew; `None` means a new size-1 block.
    pub extended: Option<usize>,
    /// Conjugator accumulated up to this corner size (for a standalone
    /// level this is just the product of the five steps).
    pub accumulated: Matrix,
}

impl ConjugationTrace {
    /// Product of the five step matrices, outermost last.
    pub fn level_conjugator(&self) -> Result<Matrix> {
        let n = self.size;
        let mut y = Matrix::identity(n, self.start.field());
        for (_, m) in &self.steps {
            y = m.mul(&y)?;
        }
        Ok(y)
    }

    /// Re-applies every step to the recorded input and checks that each
    /// recorded stage (and step invertibility) is reproduced.
    pub fn replay(&self) -> Result<()> {
        let mut state = self.start.clone();
        if self.steps.len() != self.stages.len() {
            return Err(Error::VerificationFailed(
                "trace steps and stages differ in length".into(),
            ));
        }
        for ((label, m), expect) in self.steps.iter().zip(&self.stages) {
            let inv = m
                .inverse()
                .map_err(|_| Error::VerificationFailed(format!("step {label} not invertible")))?;
            state = m.mul(&state)?.mul(&inv)?;
            if state != *expect {
                return Err(Error::VerificationFailed(format!(
                    "replaying step {label} diverges from the recorded stage"
                )));
            }
        }
        Ok(())
    }
}

/// Jordan shape of a strictly upper-triangular matrix via rank decay:
/// the conjugate shape has `lambda'_i = rank(a^{i-1}) - rank(a^i)`.
pub fn shape(a: &Matrix) -> Result<Partition> {
    if !a.is_strictly_upper() {
        return Err(Error::NotStrictlyUpper);
    }
    let n = a.rows();
    let mut conj_parts = Vec::new();
    let mut power = Matrix::identity(n, a.field());
    let mut prev_rank = n;
    while prev_rank > 0 {
        power = power.mul(a)?;
        let r = power.rank();
        conj_parts.push(prev_rank - r);
        prev_rank = r;
    }
    Partition::new(conj_parts).map(|c| c.conjugate())
}

/// Row indices (0-based) of the block bottoms of `J_mu`.
fn block_bottoms(mu: &Partition) -> Vec<usize> {
    let mut out = Vec::with_capacity(mu.len());
    let mut acc = 0;
    for &p in mu.parts() {
        acc += p;
        out.push(acc - 1);
    }
    out
}

fn check_level_input(a: &Matrix, mu: &Partition) -> Result<()> {
    if !a.is_strictly_upper() {
        return Err(Error::NotStrictlyUpper);
    }
    let n = a.rows();
    if n == 0 || mu.n() != n - 1 {
        return Err(Error::DimensionMismatch(format!(
            "corner shape {mu} does not fit a matrix of size {n}"
        )));
    }
    let corner = a.restrict(n - 1)?;
    if corner != jordan_matrix(mu, a.field()) {
        return Err(Error::VerificationFailed(format!(
            "leading corner is not the Jordan matrix of {mu}"
        )));
    }
    Ok(())
}

/// True when the last column is supported on block bottoms of `mu` only.
fn column_on_bottoms(a: &Matrix, mu: &Partition) -> bool {
    let n = a.rows();
    let bottoms = block_bottoms(mu);
    (0..n - 1).all(|i| a.get(i, n - 1).is_zero() || bottoms.contains(&i))
}

/// Step 1: clear the last column everywhere except block bottoms by the
/// transvection product `E = prod_i (1 + A[i][n] e_{i+1,n})`, `i <= n-2`.
/// The degenerate index `i = n-1` (a diagonal scaling, not a transvection)
/// is omitted; it would not change the conjugate anyway.
pub fn step_e(a: &Matrix, mu: &Partition) -> Result<(Matrix, Matrix)> {
    check_level_input(a, mu)?;
    let n = a.rows();
    let mut e = Matrix::identity(n, a.field());
    for i in 0..n.saturating_sub(2) {
        e.set(i + 1, n - 1, a.get(i, n - 1));
    }
    let a1 = a.conjugate_by(&e)?;
    assert_eq!(
        a1.restrict(n - 1)?,
        jordan_matrix(mu, a.field()),
        "E must leave the Jordan corner alone"
    );
    assert!(
        column_on_bottoms(&a1, mu),
        "after E the last column must live on block bottoms"
    );
    Ok((e, a1))
}

/// Step 2: scale the last column so its first nonzero entry becomes 1,
/// via `Delta = diag(1,...,1,x)` where `x` is that entry (1 if none).
pub fn step_delta(a1: &Matrix) -> Result<(Matrix, Matrix)> {
    let n = a1.rows();
    if n == 0 || !a1.is_strictly_upper() {
        return Err(Error::NotStrictlyUpper);
    }
    let f = a1.field();
    let x = (0..n - 1)
        .map(|i| a1.get(i, n - 1))
        .find(|e| !e.is_zero())
        .unwrap_or_else(|| f.one());
    let mut delta = Matrix::identity(n, f);
    delta.set(n - 1, n - 1, x);
    let a2 = a1.conjugate_by(&delta)?;
    let lead = (0..n - 1).map(|i| a2.get(i, n - 1)).find(|e| !e.is_zero());
    assert!(
        lead.map(|e| e == f.one()).unwrap_or(true),
        "after Delta the leading last-column entry must be 1"
    );
    Ok((delta, a2))
}

/// The block of `mu` whose bottom row holds the leading last-column entry,
/// or `None` for a zero column. Errors if the support is not a block bottom.
pub fn extended_block(a: &Matrix, mu: &Partition) -> Result<Option<usize>> {
    let n = a.rows();
    let bottoms = block_bottoms(mu);
    let Some(first) = (0..n - 1).find(|&i| !a.get(i, n - 1).is_zero()) else {
        return Ok(None);
    };
    bottoms
        .iter()
        .position(|&b| b == first)
        .map(Some)
        .ok_or_else(|| {
            Error::VerificationFailed(format!(
                "last-column support at row {first} is not a block bottom of {mu}"
            ))
        })
}

/// Step 3: clear every block-bottom entry of the last column below the
/// leading one. The factor for block `j` adds a multiple of the trailing
/// rows of block `r` to the rows of block `j`; the factors commute.
pub fn step_l(a2: &Matrix, mu: &Partition) -> Result<(Matrix, Matrix)> {
    check_level_input(a2, mu)?;
    let n = a2.rows();
    let f = a2.field();
    if !column_on_bottoms(a2, mu) {
        return Err(Error::VerificationFailed(
            "step L input must have its last column on block bottoms".into(),
        ));
    }
    let bottoms = block_bottoms(mu);
    let r = extended_block(a2, mu)?;
    let mut l = Matrix::identity(n, f);
    if let Some(r) = r {
        if a2.get(bottoms[r], n - 1) != f.one() {
            return Err(Error::VerificationFailed(
                "step L input must have leading entry 1".into(),
            ));
        }
        let starts: Vec<usize> = bottoms
            .iter()
            .zip(mu.parts())
            .map(|(&b, &len)| b + 1 - len)
            .collect();
        for j in r + 1..mu.len() {
            let alpha = FieldElement::from_raw(f.neg_raw(a2.get_raw(bottoms[j], n - 1)));
            if alpha.is_zero() {
                continue;
            }
            // Block j (length mu_j) maps onto the trailing mu_j rows of
            // block r, aligned at the bottoms.
            let offset = starts[r] + mu.part(r) - mu.part(j);
            for t in 0..mu.part(j) {
                l.set(starts[j] + t, offset + t, alpha);
            }
        }
    }
    let a3 = a2.conjugate_by(&l)?;
    assert_eq!(
        a3.restrict(n - 1)?,
        jordan_matrix(mu, f),
        "L must leave the Jordan corner alone"
    );
    for i in 0..n - 1 {
        let expect_one = r.map(|r| bottoms[r] == i).unwrap_or(false);
        let v = a3.get(i, n - 1);
        assert!(
            if expect_one { v == f.one() } else { v.is_zero() },
            "after L the last column must be a single 1 at the target block bottom"
        );
    }
    Ok((l, a3))
}

/// Step 4: cycle the trailing rows/columns so the surviving last-column
/// entry lands on the superdiagonal, growing block `r` by one; a zero
/// column instead leaves a new size-1 block at the end.
pub fn step_sigma(a3: &Matrix, mu: &Partition) -> Result<(Matrix, Matrix)> {
    check_level_input(a3, mu)?;
    let n = a3.rows();
    let f = a3.field();
    let bottoms = block_bottoms(mu);
    let r = extended_block(a3, mu)?;
    let mut w: Vec<usize> = (0..n).collect();
    let mut sizes: Vec<usize> = mu.parts().to_vec();
    match r {
        Some(r) => {
            let b = bottoms[r];
            for t in b + 1..n - 1 {
                w[t] = t + 1;
            }
            w[n - 1] = b + 1;
            sizes[r] += 1;
        }
        None => sizes.push(1),
    }
    let sigma = permutation_matrix(&w, f)?;
    let a4 = a3.conjugate_by(&sigma)?;
    assert_eq!(
        a4,
        jordan_composition(&sizes, f),
        "after sigma the matrix must be a direct sum of Jordan blocks"
    );
    Ok((sigma, a4))
}

/// Step 5: stable reordering of Jordan blocks into weakly decreasing size
/// order; the block at `current` moves before every block of equal size.
pub fn step_tau(a4: &Matrix, block_sizes: &[usize], current: usize) -> Result<(Matrix, Matrix)> {
    let n = a4.rows();
    let f = a4.field();
    if current >= block_sizes.len() {
        return Err(Error::IndexOutOfRange(format!(
            "block index {current} of {}",
            block_sizes.len()
        )));
    }
    if a4 != &jordan_composition(block_sizes, f) {
        return Err(Error::VerificationFailed(
            "step tau input must be the direct sum of the stated blocks".into(),
        ));
    }
    let others: Vec<usize> = (0..block_sizes.len()).filter(|&b| b != current).collect();
    if others
        .windows(2)
        .any(|w| block_sizes[w[0]] < block_sizes[w[1]])
    {
        return Err(Error::VerificationFailed(
            "at most one block may be out of descending order".into(),
        ));
    }
    let t = others
        .iter()
        .position(|&b| block_sizes[b] <= block_sizes[current])
        .unwrap_or(others.len());
    let mut order: Vec<usize> = others;
    order.insert(t, current);
    let starts: Vec<usize> = block_sizes
        .iter()
        .scan(0usize, |acc, &s| {
            let out = *acc;
            *acc += s;
            Some(out)
        })
        .collect();
    let mut w = vec![0usize; n];
    let mut pos = 0usize;
    for &b in &order {
        for i in 0..block_sizes[b] {
            w[starts[b] + i] = pos + i;
        }
        pos += block_sizes[b];
    }
    let tau = permutation_matrix(&w, f)?;
    let a5 = a4.conjugate_by(&tau)?;
    let lambda = {
        let mut sorted = block_sizes.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(sorted)?
    };
    assert_eq!(
        a5,
        jordan_matrix(&lambda, f),
        "after tau the blocks must be in decreasing order"
    );
    Ok((tau, a5))
}

/// Runs one full level on a matrix whose leading corner is already Jordan,
/// recording all five steps. `accumulated` is the level conjugator alone.
pub fn conjugate_level(a: &Matrix) -> Result<ConjugationTrace> {
    if !a.is_strictly_upper() {
        return Err(Error::NotStrictlyUpper);
    }
    let n = a.rows();
    if n < 2 {
        return Err(Error::DimensionMismatch(
            "a level needs a corner of size at least 1".into(),
        ));
    }
    let mu = parse_jordan(&a.restrict(n - 1)?)?;
    let (e, a1) = step_e(a, &mu)?;
    let (delta, a2) = step_delta(&a1)?;
    let (l, a3) = step_l(&a2, &mu)?;
    let extended = extended_block(&a3, &mu)?;
    let (sigma, a4) = step_sigma(&a3, &mu)?;
    let (sizes, current) = match extended {
        Some(r) => {
            let mut s = mu.parts().to_vec();
            s[r] += 1;
            (s, r)
        }
        None => {
            let mut s = mu.parts().to_vec();
            s.push(1);
            (s, mu.len())
        }
    };
    let (tau, a5) = step_tau(&a4, &sizes, current)?;
    let lambda = parse_jordan(&a5)?;
    let trace = ConjugationTrace {
        size: n,
        mu,
        lambda,
        start: a.clone(),
        steps: vec![
            (StepLabel::E, e),
            (StepLabel::Delta, delta),
            (StepLabel::L, l),
            (StepLabel::Sigma, sigma),
            (StepLabel::Tau, tau),
        ],
        stages: vec![a1, a2, a3, a4, a5.clone()],
        extended,
        accumulated: Matrix::identity(n, a.field()),
    };
    let y = trace.level_conjugator()?;
    assert_eq!(
        a.conjugate_by(&y)?,
        a5,
        "level conjugator must reproduce the final stage"
    );
    Ok(ConjugationTrace {
        accumulated: y,
        ..trace
    })
}

/// Builds the canonical conjugator `X` with `X a X^{-1} = J_shape(a)`,
/// working up corner by corner. Each returned trace holds the accumulated
/// conjugator for its corner size.
pub fn canonical_conjugator(a: &Matrix) -> Result<(Matrix, Vec<ConjugationTrace>)> {
    if !a.is_strictly_upper() {
        return Err(Error::NotStrictlyUpper);
    }
    let n = a.rows();
    let f = a.field();
    let mut x = Matrix::identity(n.min(1), f);
    let mut levels = Vec::new();
    for k in 2..=n {
        let xe = x.extend_one();
        let corner = a.restrict(k)?;
        let pre = corner.conjugate_by(&xe)?;
        let mut level = conjugate_level(&pre)?;
        x = level.accumulated.mul(&xe)?;
        level.accumulated = x.clone();
        levels.push(level);
    }
    let lam = shape(a)?;
    if n > 0 {
        assert_eq!(
            a.conjugate_by(&x)?,
            jordan_matrix(&lam, f),
            "the accumulated conjugator must reach the Jordan matrix of the rank-derived shape"
        );
    }
    Ok((x, levels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::matrix::transvection;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn f(q: u64) -> Arc<FieldSpec> {
        FieldSpec::from_order(q).unwrap()
    }

    fn pt(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// The 9x9 worked example: corner J_(3,2,2,1) and last column
    /// (3,1,0,2,2,4,0,1) over a field where those residues make sense.
    fn example_matrix(q: u64) -> Matrix {
        let field = f(q);
        let mut a = jordan_matrix(&pt(&[3, 2, 2, 1]), &field).extend_one();
        a.set(8, 8, field.zero());
        for (i, v) in [3u64, 1, 0, 2, 2, 4, 0, 1].iter().enumerate() {
            a.set(i, 8, field.element(*v).unwrap());
        }
        a
    }

    fn col(a: &Matrix, j: usize) -> Vec<u32> {
        (0..a.rows()).map(|i| a.get(i, j).value()).collect()
    }

    #[test]
    fn shape_examples() {
        let field = f(7);
        let zero = Matrix::zeros(4, 4, &field);
        assert_eq!(shape(&zero).unwrap(), pt(&[1, 1, 1, 1]));
        let j = jordan_matrix(&pt(&[3, 2]), &field);
        assert_eq!(shape(&j).unwrap(), pt(&[3, 2]));
        assert_eq!(shape(&example_matrix(7)).unwrap(), pt(&[3, 3, 2, 1]));
        let not_upper = Matrix::identity(2, &field);
        assert!(shape(&not_upper).is_err());
    }

    #[test]
    fn worked_example_stage_columns() {
        for q in [7u64, 11] {
            let a = example_matrix(q);
            let field = a.field().clone();
            let trace = conjugate_level(&a).unwrap();
            assert_eq!(trace.mu, pt(&[3, 2, 2, 1]));
            assert_eq!(trace.lambda, pt(&[3, 3, 2, 1]));
            // After E: only block bottoms (rows 5 and 8, 1-based) survive.
            assert_eq!(col(&trace.stages[0], 8), vec![0, 0, 0, 0, 2, 0, 0, 1, 0]);
            // After Delta: leading entry scaled to 1, the other by 1/2.
            let half = field.inv(field.element(2).unwrap()).unwrap().value();
            assert_eq!(half, if q == 7 { 4 } else { 6 });
            assert_eq!(col(&trace.stages[1], 8), vec![0, 0, 0, 0, 1, 0, 0, half, 0]);
            // After L: a single 1 at row 5 (1-based).
            assert_eq!(col(&trace.stages[2], 8), vec![0, 0, 0, 0, 1, 0, 0, 0, 0]);
            assert_eq!(trace.extended, Some(1));
            // Sigma is the cycle (6,7,8,9), 1-based.
            let w: Vec<usize> = vec![0, 1, 2, 3, 4, 6, 7, 8, 5];
            assert_eq!(
                trace.steps[3].1,
                permutation_matrix(&w, &field).unwrap()
            );
            // The grown block ties with the leading size-3 block, so tau
            // moves it first even though the matrix is unchanged.
            assert_eq!(trace.stages[3], trace.stages[4]);
            let wt: Vec<usize> = vec![3, 4, 5, 0, 1, 2, 6, 7, 8];
            assert_eq!(
                trace.steps[4].1,
                permutation_matrix(&wt, &field).unwrap()
            );
            assert_eq!(trace.stages[4], jordan_matrix(&pt(&[3, 3, 2, 1]), &field));
            trace.replay().unwrap();
            // Full recursion on the same matrix reaches the same endpoint.
            let (x, levels) = canonical_conjugator(&a).unwrap();
            assert_eq!(
                a.conjugate_by(&x).unwrap(),
                jordan_matrix(&pt(&[3, 3, 2, 1]), &field)
            );
            assert_eq!(levels.len(), 8);
        }
    }

    #[test]
    fn e_factors_commute() {
        let a = example_matrix(7);
        let field = a.field().clone();
        let n = a.rows();
        let mut forward = Matrix::identity(n, &field);
        let mut backward = Matrix::identity(n, &field);
        for i in 0..n - 2 {
            let t = transvection(n, i + 1, n - 1, a.get(i, n - 1), &field).unwrap();
            forward = forward.mul(&t).unwrap();
            backward = t.mul(&backward).unwrap();
        }
        assert_eq!(forward, backward);
        let (e, _) = step_e(&a, &pt(&[3, 2, 2, 1])).unwrap();
        assert_eq!(e, forward);
    }

    #[test]
    fn zero_column_level_appends_a_block() {
        let field = f(3);
        let mut a = jordan_matrix(&pt(&[2, 1]), &field).extend_one();
        a.set(3, 3, field.zero());
        let trace = conjugate_level(&a).unwrap();
        assert_eq!(trace.extended, None);
        assert_eq!(trace.lambda, pt(&[2, 1, 1]));
        for (label, m) in &trace.steps {
            if *label != StepLabel::Tau {
                assert_eq!(*m, Matrix::identity(4, &field), "step {label} should be trivial");
            }
        }
        // The new size-1 block is inserted before the old one.
        let wt = vec![0, 1, 3, 2];
        assert_eq!(trace.steps[4].1, permutation_matrix(&wt, &field).unwrap());
    }

    #[test]
    fn zero_matrix_conjugator_is_the_reversal() {
        for n in 1..=6 {
            let field = f(5);
            let zero = Matrix::zeros(n, n, &field);
            let (x, _) = canonical_conjugator(&zero).unwrap();
            let w: Vec<usize> = (0..n).map(|i| n - 1 - i).collect();
            assert_eq!(x, permutation_matrix(&w, &field).unwrap());
        }
    }

    #[test]
    fn jordan_matrix_conjugator_is_a_permutation() {
        let field = f(3);
        for parts in [vec![3, 2], vec![2, 2, 1], vec![4, 1], vec![1, 1, 1, 1]] {
            let j = jordan_matrix(&pt(&parts), &field);
            let (x, _) = canonical_conjugator(&j).unwrap();
            let n = j.rows();
            for i in 0..n {
                let ones = (0..n).filter(|&k| !x.get(i, k).is_zero()).count();
                assert_eq!(ones, 1);
                assert!(x.flatten().iter().all(|e| e.value() <= 1));
            }
        }
    }

    #[test]
    fn exhaustive_small_endpoints() {
        // Every strictly upper 4x4 over F_2 lands exactly on J_shape.
        let field = f(2);
        let cells = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for bits in 0..64u32 {
            let mut a = Matrix::zeros(4, 4, &field);
            for (t, &(i, j)) in cells.iter().enumerate() {
                if bits >> t & 1 == 1 {
                    a.set(i, j, field.one());
                }
            }
            let (x, levels) = canonical_conjugator(&a).unwrap();
            let lam = shape(&a).unwrap();
            assert_eq!(
                a.conjugate_by(&x).unwrap(),
                jordan_matrix(&lam, &field)
            );
            for level in &levels {
                level.replay().unwrap();
            }
        }
    }

    #[test]
    fn shape_is_conjugation_invariant() {
        let field = f(5);
        let mut rng = ChaCha8Rng::seed_from_u64(0x7e57_ab1e);
        let a = example_matrix(5);
        let base = shape(&a).unwrap();
        let n = a.rows();
        let mut found = 0;
        while found < 10 {
            let vals: Vec<u32> = (0..n * n).map(|_| rng.gen_range(0..5)).collect();
            let g = Matrix::from_values(n, n, &vals, &field).unwrap();
            if g.inverse().is_err() {
                continue;
            }
            found += 1;
            let conj = a.conjugate_by(&g).unwrap();
            // May no longer be strictly upper; compare rank decay directly.
            let mut power = Matrix::identity(n, &field);
            let mut ranks = vec![n];
            for _ in 0..n {
                power = power.mul(&conj).unwrap();
                ranks.push(power.rank());
            }
            let conj_parts: Vec<usize> = (1..=n)
                .map(|i| ranks[i - 1] - ranks[i])
                .take_while(|&d| d > 0)
                .collect();
            let lam = Partition::new(conj_parts).unwrap().conjugate();
            assert_eq!(lam, base);
        }
    }

    #[test]
    fn determinism() {
        let a = example_matrix(7);
        let t1 = canonical_conjugator(&a).unwrap();
        let t2 = canonical_conjugator(&a).unwrap();
        assert_eq!(t1.0, t2.0);
        assert_eq!(t1.1, t2.1);
    }

    #[test]
    fn step_preconditions_are_checked() {
        let field = f(3);
        let mut bad = jordan_matrix(&pt(&[2, 1]), &field).extend_one();
        bad.set(3, 3, field.zero());
        // Corner claims (3) but is J_(2,1).
        assert!(step_e(&bad, &pt(&[3])).is_err());
        let not_upper = Matrix::identity(3, &field);
        assert!(step_delta(&not_upper).is_err());
        assert!(canonical_conjugator(&not_upper).is_err());
    }
}
