//! Lower-central-series slices of the unitriangular group, the Sylvester
//! operator `X -> AX - XB`, commuting probabilities computed two ways, and
//! the rank-stratified pair counts with their bound.
//!
//! The slice `U_{n,k}` keeps the cells at distance more than `k` above the
//! diagonal; `k = 0` is the whole group and `k >= n/2` is abelian. Matrices
//! are again identified with their strictly upper parts.

use crate::census::{
    biguint_pow, binom2, check_budget, class_count, fill_commutator_upper, for_each_element,
    rank_raw, upper_cells,
};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::partitions::{inner, partition_count};
use num::bigint::BigInt;
use num::{BigRational, BigUint, One, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Parameters of one slice `U_{n,k}(q)`.
#[derive(Clone)]
pub struct LcsParams {
    pub n: usize,
    pub k: usize,
    pub spec: Arc<FieldSpec>,
}

impl LcsParams {
    pub fn new(n: usize, k: usize, spec: Arc<FieldSpec>) -> Result<LcsParams> {
        if n == 0 || k + 1 > n {
            return Err(Error::DimensionMismatch(format!(
                "slice index k = {k} must satisfy 0 <= k <= n - 1 = {}",
                n.wrapping_sub(1)
            )));
        }
        Ok(LcsParams { n, k, spec })
    }
}

/// Cells of the slice: `(i, j)` with `j - i >= k + 1`, row-major.
pub fn lcs_cells(n: usize, k: usize) -> Vec<(usize, usize)> {
    let mut cells = Vec::new();
    for i in 0..n {
        for j in i + k + 1..n {
            cells.push((i, j));
        }
    }
    cells
}

/// `dim U_{n,k} = C(n-k, 2)`.
pub fn lcs_dim(n: usize, k: usize) -> usize {
    if n <= k + 1 {
        0
    } else {
        binom2(n - k)
    }
}

/// The wedge-shaped space of `a x b` matrices with `X_{i,j} = 0` whenever
/// `i - j >= a - k`: the off-diagonal block of an element of `U_{a+b,k}`.
/// (Only the i/j difference matters, so the block's forced-zero region sits
/// in the lower left corner.)
pub struct WedgeSpace {
    pub a: usize,
    pub b: usize,
    pub k: usize,
    cells: Vec<(usize, usize)>,
}

impl WedgeSpace {
    pub fn new(a: usize, b: usize, k: usize) -> WedgeSpace {
        let mut cells = Vec::new();
        for i in 0..a {
            for j in 0..b {
                if i + k < a + j {
                    cells.push((i, j));
                }
            }
        }
        // The block decomposition is exact: this wedge accounts for all
        // slice cells missed by the two diagonal blocks.
        assert_eq!(
            cells.len() + lcs_dim(a, k) + lcs_dim(b, k),
            lcs_dim(a + b, k),
            "wedge dimension must complete the slice dimension"
        );
        WedgeSpace { a, b, k, cells }
    }

    pub fn dim(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    pub fn contains(&self, x: &Matrix) -> bool {
        if x.rows() != self.a || x.cols() != self.b {
            return false;
        }
        for i in 0..self.a {
            for j in 0..self.b {
                if i + self.k >= self.a + j && !x.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Domain choice for [`sylvester_op`].
pub enum SylvesterDomain<'a> {
    /// All of the `a x b` matrices, flattened row-major.
    Full,
    /// A wedge subspace, coordinates in its cell order.
    Wedge(&'a WedgeSpace),
}

/// The operator `X -> a_mat * X - X * b_mat` as a matrix in flattened
/// coordinates. On a wedge domain the operator must stabilize the wedge;
/// a leak out of it is reported rather than projected away. Strictly
/// upper pairs never leak.
pub fn sylvester_op(a_mat: &Matrix, b_mat: &Matrix, domain: SylvesterDomain) -> Result<Matrix> {
    let (a, b) = (a_mat.rows(), b_mat.rows());
    let f = a_mat.field();
    crate::field::same_field(f, b_mat.field())?;
    let cells: Vec<(usize, usize)> = match &domain {
        SylvesterDomain::Full => {
            let mut all = Vec::with_capacity(a * b);
            for i in 0..a {
                for j in 0..b {
                    all.push((i, j));
                }
            }
            all
        }
        SylvesterDomain::Wedge(w) => {
            if w.a != a || w.b != b {
                return Err(Error::DimensionMismatch(format!(
                    "wedge is {}x{} but the operator acts on {a}x{b}",
                    w.a, w.b
                )));
            }
            w.cells.to_vec()
        }
    };
    let d = cells.len();
    let mut slot = vec![usize::MAX; a * b];
    for (t, &(i, j)) in cells.iter().enumerate() {
        slot[i * b + j] = t;
    }
    let mut op = Matrix::zeros(d, d, f);
    let mut image = Matrix::zeros(a, b, f);
    for (c, &(i, j)) in cells.iter().enumerate() {
        // T(e_{ij}) has column j of a_mat in column j and row i of -b_mat
        // in row i.
        for r in 0..a {
            image.set_raw(r, j, a_mat.get_raw(r, i));
        }
        for t in 0..b {
            let v = image.get_raw(i, t);
            image.set_raw(i, t, f.sub_raw(v, b_mat.get_raw(j, t)));
        }
        for r in 0..a {
            for t in 0..b {
                let v = image.get_raw(r, t);
                if v == 0 {
                    continue;
                }
                let row = slot[r * b + t];
                if row == usize::MAX {
                    return Err(Error::VerificationFailed(format!(
                        "operator leaks the wedge: basis cell ({i},{j}) maps onto forbidden cell ({r},{t})"
                    )));
                }
                op.set_raw(row, c, v);
                image.set_raw(r, t, 0);
            }
        }
    }
    Ok(op)
}

/// Rank of the Sylvester operator on the full matrix space.
pub fn rank_sylvester(a_mat: &Matrix, b_mat: &Matrix) -> Result<usize> {
    Ok(sylvester_op(a_mat, b_mat, SylvesterDomain::Full)?.rank())
}

/// Runs `body` over every matrix supported on the given cells.
fn for_each_on_cells<F: FnMut(&Matrix)>(
    n: usize,
    cells: &[(usize, usize)],
    spec: &Arc<FieldSpec>,
    mut body: F,
) {
    let q = spec.order();
    let m = cells.len();
    let mut digits = vec![0u32; m];
    let mut a = Matrix::zeros(n, n, spec);
    loop {
        body(&a);
        let mut t = m;
        loop {
            if t == 0 {
                return;
            }
            t -= 1;
            let (i, j) = cells[t];
            if digits[t] + 1 < q {
                digits[t] += 1;
                a.set_raw(i, j, digits[t]);
                break;
            }
            digits[t] = 0;
            a.set_raw(i, j, 0);
        }
    }
}

/// Commuting probability of `U_{n,k}(q)` by direct enumeration: one
/// restricted elimination per element, never per pair.
pub fn cp_direct(params: &LcsParams) -> Result<BigRational> {
    let q = params.spec.order() as u64;
    let dim = lcs_dim(params.n, params.k);
    check_budget(q, 2 * dim as u32, false)?;
    let cells = lcs_cells(params.n, params.k);
    let d = cells.len();
    let mut buf = vec![0u32; d * d];
    let mut numerator = BigUint::zero();
    for_each_on_cells(params.n, &cells, &params.spec, |a| {
        fill_commutator_upper(a, &cells, &mut buf);
        let kernel = d - rank_raw(&mut buf, d, d, params.spec.as_ref());
        numerator += biguint_pow(q, kernel as u32);
    });
    Ok(BigRational::new(
        BigInt::from(numerator),
        BigInt::from(biguint_pow(q, 2 * dim as u32)),
    ))
}

/// All commuting pairs within the slice, as matrices.
fn commuting_pairs(n: usize, k: usize, spec: &Arc<FieldSpec>) -> Result<Vec<(Matrix, Matrix)>> {
    let cells = lcs_cells(n, k);
    let mut pairs = Vec::new();
    let mut failure = None;
    for_each_on_cells(n, &cells, spec, |a| {
        if failure.is_some() {
            return;
        }
        match crate::census::centralizer_subspace_on(a, &cells) {
            Ok(space) => for_each_element(&space, n, |b| {
                pairs.push((a.clone(), b.clone()));
            }),
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(pairs),
    }
}

/// Commuting probability of `U_{a+b,k}(q)` through the block decomposition:
/// a sum of `q^(-dim(im T_1 + im T_2))` over commuting pairs on each
/// diagonal block, with the operators acting on the wedge.
pub fn cp_decomposed(a: usize, b: usize, k: usize, spec: &Arc<FieldSpec>) -> Result<BigRational> {
    let q = spec.order() as u64;
    let (da, db) = (lcs_dim(a, k), lcs_dim(b, k));
    check_budget(q, 2 * (da + db) as u32, false)?;
    let wedge = WedgeSpace::new(a, b, k);
    let m = wedge.dim();
    let a_pairs = commuting_pairs(a, k, spec)?;
    let b_pairs = commuting_pairs(b, k, spec)?;
    // Sum q^(m - dim(im T_1 + im T_2)) over all quadruples; the image sum
    // is the column space of the two operators side by side.
    let mut tally = BigUint::zero();
    let mut stacked = vec![0u32; m * 2 * m];
    for (a1, a2) in &a_pairs {
        for (b1, b2) in &b_pairs {
            let op1 = sylvester_op(a1, b1, SylvesterDomain::Wedge(&wedge))?;
            let op2 = sylvester_op(a2, b2, SylvesterDomain::Wedge(&wedge))?;
            for r in 0..m {
                for c in 0..m {
                    stacked[r * 2 * m + c] = op1.get_raw(r, c);
                    stacked[r * 2 * m + m + c] = op2.get_raw(r, c);
                }
            }
            let rank = rank_raw(&mut stacked, m, 2 * m, spec.as_ref());
            tally += biguint_pow(q, (m - rank) as u32);
        }
    }
    let denom = biguint_pow(q, m as u32)
        * biguint_pow(q, 2 * da as u32)
        * biguint_pow(q, 2 * db as u32);
    Ok(BigRational::new(BigInt::from(tally), BigInt::from(denom)))
}

/// Cumulative rank-stratified pair counts
/// `N_r = #{(A, B) : rank T_{A,B} <= r}`, keyed by `r`, via the shape
/// strata of both factors; verifies the squared growth bound
/// `N_r^2 <= p(a)^2 p(b)^2 a! b! q^((a-b)^2 + 2r)` for every `r`.
pub fn n_rank_census(
    a: usize,
    b: usize,
    spec: &Arc<FieldSpec>,
) -> Result<BTreeMap<usize, BigUint>> {
    let q = spec.order() as u64;
    check_budget(q, (binom2(a) + binom2(b)) as u32, false)?;
    let census_a = class_count(a, spec)?;
    let census_b = class_count(b, spec)?;
    let mut by_rank: BTreeMap<usize, BigUint> = BTreeMap::new();
    for (lam, sa) in &census_a.per_shape {
        for (mu, sb) in &census_b.per_shape {
            let rank = a * b - inner(&lam.conjugate(), &mu.conjugate());
            *by_rank.entry(rank).or_insert_with(BigUint::zero) += &sa.count * &sb.count;
        }
    }
    let mut cumulative = BTreeMap::new();
    let mut acc = BigUint::zero();
    let mut fact = BigUint::one();
    for i in 1..=a {
        fact *= BigUint::from(i);
    }
    for i in 1..=b {
        fact *= BigUint::from(i);
    }
    let p2 = {
        let p = partition_count(a) * partition_count(b);
        &p * &p
    };
    for r in 0..=a * b {
        if let Some(c) = by_rank.get(&r) {
            acc += c;
        }
        let diff = a.abs_diff(b);
        let bound = &p2 * &fact * biguint_pow(q, (diff * diff + 2 * r) as u32);
        if &acc * &acc > bound {
            return Err(Error::VerificationFailed(format!(
                "rank census bound fails at r = {r}: N_r = {acc}, bound^(1/2) base {bound}"
            )));
        }
        cumulative.insert(r, acc.clone());
    }
    Ok(cumulative)
}

/// Exhaustively confirms `rank T_{A,B} = ab - <shape(A)', shape(B)'>` over
/// all strictly upper pairs; returns the number of pairs checked.
pub fn check_rank_shape(a: usize, b: usize, spec: &Arc<FieldSpec>) -> Result<u64> {
    let q = spec.order() as u64;
    check_budget(q, (binom2(a) + binom2(b)) as u32, false)?;
    let a_cells = upper_cells(a);
    let b_cells = upper_cells(b);
    let mut checked = 0u64;
    let mut failure: Option<Error> = None;
    for_each_on_cells(a, &a_cells, spec, |x| {
        if failure.is_some() {
            return;
        }
        let lam = crate::jordan::shape(x).expect("strictly upper").conjugate();
        for_each_on_cells(b, &b_cells, spec, |y| {
            if failure.is_some() {
                return;
            }
            let mu = crate::jordan::shape(y).expect("strictly upper").conjugate();
            match rank_sylvester(x, y) {
                Ok(rank) => {
                    if rank != a * b - inner(&lam, &mu) {
                        failure = Some(Error::VerificationFailed(format!(
                            "rank of the Sylvester operator is {rank}, expected {} for shapes {lam}' {mu}'",
                            a * b - inner(&lam, &mu)
                        )));
                    }
                    checked += 1;
                }
                Err(e) => failure = Some(e),
            }
        });
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(checked),
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow4_inv(m: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(4u32).pow(m))
}

fn pow2_inv(m: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2u32).pow(m))
}

/// `beta_m`, computed by the recurrence `beta_m = (beta_{m-1} - (1 - 2^-m)^2)/4`
/// from `beta_0 = 0` and cross-checked against the closed form
/// `-1/3 - (2/3) 4^-m + 2^-m - 4^-(m+1) m` at every step.
pub fn beta(m: u32) -> BigRational {
    let mut value = BigRational::zero();
    for t in 1..=m {
        let step = BigRational::one() - pow2_inv(t);
        value = (value - &step * &step) * ratio(1, 4);
        debug_assert_eq!(value, beta_closed(t));
    }
    let closed = beta_closed(m);
    assert_eq!(value, closed, "recurrence and closed form must agree");
    value
}

fn beta_closed(m: u32) -> BigRational {
    ratio(-1, 3) - ratio(2, 3) * pow4_inv(m) + pow2_inv(m)
        - pow4_inv(m + 1) * BigRational::from(BigInt::from(m))
}

/// `gamma_m = 1/6 - (13/24) 4^-m + 2^-(m+1) - 4^-(m+1) m`, with the
/// combination identity `gamma_m = (1 - 2^-(1+m))^2 / 2 + beta_m` asserted.
pub fn gamma(m: u32) -> BigRational {
    let value = ratio(1, 6) - ratio(13, 24) * pow4_inv(m) + pow2_inv(m + 1)
        - pow4_inv(m + 1) * BigRational::from(BigInt::from(m));
    let half_square = {
        let lead = BigRational::one() - pow2_inv(m + 1);
        &lead * &lead * ratio(1, 2)
    };
    assert_eq!(
        value,
        half_square + beta(m),
        "closed form must match the combination step"
    );
    value
}
