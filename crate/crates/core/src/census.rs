//! Exact censuses of the upper unitriangular groups: class counts via the
//! orbit-counting identity, per-shape strata, commuting-pair strata, and
//! the sweep verifying the extremal containment for every group element.
//!
//! Group elements are identified with their strictly upper-triangular parts
//! (the nilpotent `A` with element `1 + A`); commutation and conjugacy only
//! see `A`. Enumeration walks all `q^C(n,2)` such matrices, sharded by a
//! fixed prefix of the row-major cell list so parallel runs merge
//! deterministically.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::gaparray::{g_worst, GapArray};
use crate::jordan::{canonical_conjugator, shape};
use crate::matrix::{Matrix, Subspace};
use crate::partitions::{h_int, partition_count, Partition};
use num::integer::div_rem;
use num::{BigUint, One, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Default enumeration budget: refuse scans larger than `2^BUDGET_BITS`.
pub const BUDGET_BITS: u32 = 34;

/// Fails unless `q^exponent <= 2^BUDGET_BITS` or the override is set.
pub fn check_budget(q: u64, exponent: u32, override_budget: bool) -> Result<()> {
    if override_budget {
        return Ok(());
    }
    let limit = 1u128 << BUDGET_BITS;
    let mut acc: u128 = 1;
    for _ in 0..exponent {
        acc = acc.saturating_mul(q as u128);
        if acc > limit {
            return Err(Error::BudgetExceeded(format!("{q}^{exponent}"), BUDGET_BITS));
        }
    }
    Ok(())
}

/// Census switches; the defaults match [`class_count`].
#[derive(Clone, Copy, Default)]
pub struct CensusOptions {
    /// Also enumerate each centralizer to stratify commuting pairs by the
    /// shapes of both members.
    pub pairs: bool,
    /// Skip the enumeration budget check.
    pub override_budget: bool,
}

/// Per-shape tallies.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShapeStats {
    /// Number of elements of this shape.
    pub count: BigUint,
    /// Commuting pairs whose first member has this shape.
    pub comm: BigUint,
}

/// The complete outcome of one census.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CensusRecord {
    pub n: usize,
    pub q: u64,
    /// `C(n,2)`, the dimension of the strictly upper space.
    pub dim: usize,
    pub total_comm_pairs: BigUint,
    pub class_count: BigUint,
    pub per_shape: BTreeMap<Partition, ShapeStats>,
    pub per_shape_pair: Option<BTreeMap<(Partition, Partition), BigUint>>,
}

impl CensusRecord {
    /// Re-checks the internal identities: the orbit-counting division, the
    /// stratum sums, and pair-map symmetry and marginals.
    pub fn validate(&self) -> Result<()> {
        let q_dim = biguint_pow(self.q, self.dim as u32);
        if &self.class_count * &q_dim != self.total_comm_pairs {
            return Err(Error::VerificationFailed(
                "class count times group order differs from commuting pairs".into(),
            ));
        }
        let f_sum: BigUint = self.per_shape.values().map(|s| s.count.clone()).sum();
        if f_sum != q_dim {
            return Err(Error::VerificationFailed(
                "shape stratum sizes do not sum to the group order".into(),
            ));
        }
        let comm_sum: BigUint = self.per_shape.values().map(|s| s.comm.clone()).sum();
        if comm_sum != self.total_comm_pairs {
            return Err(Error::VerificationFailed(
                "per-shape commuting pairs do not sum to the total".into(),
            ));
        }
        if let Some(pairs) = &self.per_shape_pair {
            for ((a, b), count) in pairs {
                let mirrored = pairs.get(&(b.clone(), a.clone())).cloned().unwrap_or_default();
                if *count != mirrored {
                    return Err(Error::VerificationFailed(format!(
                        "pair stratum ({a},{b}) is not symmetric"
                    )));
                }
            }
            for (lam, stats) in &self.per_shape {
                let marginal: BigUint = pairs
                    .iter()
                    .filter(|((a, _), _)| a == lam)
                    .map(|(_, c)| c.clone())
                    .sum();
                if marginal != stats.comm {
                    return Err(Error::VerificationFailed(format!(
                        "pair strata for {lam} do not sum to its commuting count"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let shapes: Vec<serde_json::Value> = self
            .per_shape
            .iter()
            .map(|(lam, s)| {
                serde_json::json!({
                    "shape": lam.to_string(),
                    "count": s.count.to_string(),
                    "comm": s.comm.to_string(),
                })
            })
            .collect();
        let mut out = serde_json::json!({
            "schema": 1,
            "n": self.n,
            "q": self.q,
            "dim": self.dim,
            "total_comm_pairs": self.total_comm_pairs.to_string(),
            "class_count": self.class_count.to_string(),
            "per_shape": shapes,
        });
        if let Some(pairs) = &self.per_shape_pair {
            let listed: Vec<serde_json::Value> = pairs
                .iter()
                .map(|((a, b), c)| {
                    serde_json::json!({
                        "first": a.to_string(),
                        "second": b.to_string(),
                        "count": c.to_string(),
                    })
                })
                .collect();
            out["per_shape_pair"] = serde_json::Value::Array(listed);
        }
        out
    }
}

pub(crate) fn binom2(n: usize) -> usize {
    n * (n - 1) / 2
}

pub(crate) fn biguint_pow(q: u64, e: u32) -> BigUint {
    num::pow::pow(BigUint::from(q), e as usize)
}

/// Strictly-upper cell coordinates in row-major order.
pub(crate) fn upper_cells(n: usize) -> Vec<(usize, usize)> {
    let mut cells = Vec::with_capacity(binom2(n));
    for i in 0..n {
        for j in i + 1..n {
            cells.push((i, j));
        }
    }
    cells
}

/// Runs `body` once per strictly upper-triangular matrix, sharded by a
/// fixed prefix of the cell list; per-shard states come back in shard
/// order so any fold over them is schedule-independent.
fn scan_shards<S, I, B>(n: usize, spec: &Arc<FieldSpec>, init: I, body: B) -> Vec<S>
where
    S: Send,
    I: Fn() -> S + Sync,
    B: Fn(&Matrix, &mut S) + Sync,
{
    let q = spec.order() as u64;
    let d = binom2(n);
    // Prefix length: enough shards to spread work, at most q^2-ish many.
    let mut prefix = 0usize;
    let mut shards: u64 = 1;
    while prefix < d && shards < 64 {
        shards *= q;
        prefix += 1;
    }
    let cells = upper_cells(n);
    (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut state = init();
            let mut a = Matrix::zeros(n, n, spec);
            let mut idx = shard;
            for t in (0..prefix).rev() {
                let (i, j) = cells[t];
                a.set_raw(i, j, (idx % q) as u32);
                idx /= q;
            }
            let m = d - prefix;
            let mut digits = vec![0u32; m];
            'outer: loop {
                body(&a, &mut state);
                let mut t = m;
                loop {
                    if t == 0 {
                        break 'outer;
                    }
                    t -= 1;
                    let (i, j) = cells[prefix + t];
                    if digits[t] + 1 < q as u32 {
                        digits[t] += 1;
                        a.set_raw(i, j, digits[t]);
                        break;
                    }
                    digits[t] = 0;
                    a.set_raw(i, j, 0);
                }
            }
            state
        })
        .collect()
}

/// Row echelon rank of a flat row-major buffer, destroying it.
pub(crate) fn rank_raw(buf: &mut [u32], rows: usize, cols: usize, f: &FieldSpec) -> usize {
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| buf[r * cols + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for j in col..cols {
                buf.swap(rank * cols + j, pivot * cols + j);
            }
        }
        let inv = f.inv_raw(buf[rank * cols + col]);
        for j in col..cols {
            buf[rank * cols + j] = f.mul_raw(buf[rank * cols + j], inv);
        }
        for r in rank + 1..rows {
            let c = buf[r * cols + col];
            if c != 0 {
                for j in col..cols {
                    let s = f.mul_raw(c, buf[rank * cols + j]);
                    buf[r * cols + j] = f.sub_raw(buf[r * cols + j], s);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Fills the commutator operator `X -> aX - Xa` restricted to the given
/// cell coordinates (both sides) into `buf`, a `d x d` row-major scratch.
/// The cell set must be closed under the operator for matrices supported
/// on it, which holds for the strictly upper cells and every `j - i > k`
/// slice of them.
pub(crate) fn fill_commutator_upper(a: &Matrix, cells: &[(usize, usize)], buf: &mut [u32]) {
    let n = a.rows();
    let d = cells.len();
    let f = a.field();
    buf.iter_mut().for_each(|x| *x = 0);
    let mut row_of = vec![usize::MAX; n * n];
    for (t, &(i, j)) in cells.iter().enumerate() {
        row_of[i * n + j] = t;
    }
    for (c, &(k, l)) in cells.iter().enumerate() {
        // a * e_{kl} hits (i, l) with a[i][k]; strictly upper since i < k < l.
        for i in 0..k {
            let v = a.get_raw(i, k);
            if v != 0 {
                buf[row_of[i * n + l] * d + c] = v;
            }
        }
        // e_{kl} * a hits (k, j) with a[l][j]; strictly upper since k < l < j.
        for j in l + 1..n {
            let v = a.get_raw(l, j);
            if v != 0 {
                let slot = &mut buf[row_of[k * n + j] * d + c];
                *slot = f.sub_raw(*slot, v);
            }
        }
    }
}

/// Dimension of the centralizer of `a` in the strictly upper matrices,
/// i.e. of the group centralizer of the unitriangular element `1 + a`.
pub fn centralizer_dim_u(a: &Matrix) -> Result<usize> {
    if !a.is_strictly_upper() {
        return Err(Error::NotStrictlyUpper);
    }
    let n = a.rows();
    let cells = upper_cells(n);
    let d = cells.len();
    let mut buf = vec![0u32; d * d];
    fill_commutator_upper(a, &cells, &mut buf);
    Ok(d - rank_raw(&mut buf, d, d, a.field()))
}

/// The centralizer of `a` within the span of the given cells, as a
/// subspace of flattened n x n matrices. The cell set must be closed
/// under the commutator operator (see [`fill_commutator_upper`]).
pub(crate) fn centralizer_subspace_on(a: &Matrix, cells: &[(usize, usize)]) -> Result<Subspace> {
    if !a.is_strictly_upper() {
        return Err(Error::NotStrictlyUpper);
    }
    let n = a.rows();
    let f = a.field();
    let d = cells.len();
    let mut buf = vec![0u32; d * d];
    fill_commutator_upper(a, cells, &mut buf);
    let op = Matrix::from_values(d, d, &buf, f)?;
    let kernel = op.nullspace();
    let rows: Vec<Vec<crate::field::FieldElement>> = kernel
        .basis()
        .iter()
        .map(|v| {
            let mut flat = vec![f.zero(); n * n];
            for (t, &(i, j)) in cells.iter().enumerate() {
                flat[i * n + j] = v[t];
            }
            flat
        })
        .collect();
    Subspace::from_rows(n * n, rows, f)
}

/// The centralizer of `a` in the strictly upper matrices as a subspace of
/// flattened n x n matrices.
pub fn centralizer_subspace_u(a: &Matrix) -> Result<Subspace> {
    centralizer_subspace_on(a, &upper_cells(a.rows()))
}

/// The centralizer of `a` in the full matrix algebra as a subspace of
/// flattened n x n matrices.
pub fn centralizer_subspace_m(a: &Matrix) -> Result<Subspace> {
    let n = a.rows();
    if n != a.cols() {
        return Err(Error::DimensionMismatch("centralizer of a non-square matrix".into()));
    }
    let f = a.field();
    let mut op = Matrix::zeros(n * n, n * n, f);
    for k in 0..n {
        for l in 0..n {
            let c = k * n + l;
            for i in 0..n {
                let v = a.get(i, k);
                if !v.is_zero() {
                    let prev = op.get(i * n + l, c);
                    op.set(i * n + l, c, f.add(prev, v));
                }
            }
            for j in 0..n {
                let v = a.get(l, j);
                if !v.is_zero() {
                    let prev = op.get(k * n + j, c);
                    op.set(k * n + j, c, f.sub(prev, v));
                }
            }
        }
    }
    Ok(op.nullspace())
}

struct LocalStats {
    /// Per shape: histogram over centralizer dimension.
    hist: BTreeMap<Partition, Vec<u64>>,
    pairs: Option<BTreeMap<(Partition, Partition), u64>>,
}

/// Full census with options; see [`class_count`] and [`comm_strata`].
pub fn census_with_options(
    n: usize,
    spec: &Arc<FieldSpec>,
    opts: CensusOptions,
) -> Result<CensusRecord> {
    let q = spec.order() as u64;
    let d = binom2(n);
    check_budget(q, d as u32, opts.override_budget)?;
    if opts.pairs {
        check_budget(q, 2 * d as u32, opts.override_budget)?;
    }
    let locals = scan_shards(
        n,
        spec,
        || LocalStats {
            hist: BTreeMap::new(),
            pairs: opts.pairs.then(BTreeMap::new),
        },
        |a, stats| {
            let lam = shape(a).expect("enumerated matrices are strictly upper");
            let dim = centralizer_dim_u(a).expect("enumerated matrices are strictly upper");
            let hist = stats
                .hist
                .entry(lam.clone())
                .or_insert_with(|| vec![0u64; d + 1]);
            hist[dim] += 1;
            if let Some(pairs) = &mut stats.pairs {
                let centralizer = centralizer_subspace_u(a)
                    .expect("enumerated matrices are strictly upper");
                for_each_element(&centralizer, n, |b| {
                    let mu = shape(b).expect("centralizer elements are strictly upper");
                    *pairs.entry((lam.clone(), mu)).or_insert(0) += 1;
                });
            }
        },
    );

    let mut hist: BTreeMap<Partition, Vec<u64>> = BTreeMap::new();
    let mut pair_counts: Option<BTreeMap<(Partition, Partition), BigUint>> =
        opts.pairs.then(BTreeMap::new);
    for local in locals {
        for (lam, h) in local.hist {
            let merged = hist.entry(lam).or_insert_with(|| vec![0u64; d + 1]);
            for (m, v) in merged.iter_mut().zip(h) {
                *m += v;
            }
        }
        if let (Some(into), Some(from)) = (&mut pair_counts, local.pairs) {
            for (key, v) in from {
                *into.entry(key).or_insert_with(BigUint::zero) += BigUint::from(v);
            }
        }
    }

    let mut per_shape = BTreeMap::new();
    let mut total = BigUint::zero();
    for (lam, h) in hist {
        let mut count = BigUint::zero();
        let mut comm = BigUint::zero();
        for (dim, &c) in h.iter().enumerate() {
            if c == 0 {
                continue;
            }
            count += BigUint::from(c);
            comm += BigUint::from(c) * biguint_pow(q, dim as u32);
        }
        total += &comm;
        per_shape.insert(lam, ShapeStats { count, comm });
    }
    let q_dim = biguint_pow(q, d as u32);
    let (class_count, rem) = div_rem(total.clone(), q_dim.clone());
    if !rem.is_zero() {
        return Err(Error::InexactDivision(total.to_string(), q_dim.to_string()));
    }
    let record = CensusRecord {
        n,
        q,
        dim: d,
        total_comm_pairs: total,
        class_count,
        per_shape,
        per_shape_pair: pair_counts,
    };
    record.validate()?;
    Ok(record)
}

/// Applies `body` to every element of a subspace of flattened n x n
/// matrices (all `q^dim` coefficient combinations of its basis).
pub(crate) fn for_each_element<F: FnMut(&Matrix)>(space: &Subspace, n: usize, mut body: F) {
    let f = space.field().clone();
    let q = f.order();
    let dim = space.dim();
    let basis = space.basis();
    let mut coeffs = vec![0u32; dim];
    let mut b = Matrix::zeros(n, n, &f);
    loop {
        body(&b);
        let mut t = dim;
        loop {
            if t == 0 {
                return;
            }
            t -= 1;
            if coeffs[t] + 1 < q {
                coeffs[t] += 1;
                break;
            }
            coeffs[t] = 0;
        }
        // Rebuild from scratch; spaces here are tiny.
        let mut flat = vec![0u32; n * n];
        for (k, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (x, e) in basis[k].iter().enumerate() {
                flat[x] = f.add_raw(flat[x], f.mul_raw(c, e.value()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                b.set_raw(i, j, flat[i * n + j]);
            }
        }
    }
}

/// Conjugacy-class count of the unitriangular group via the orbit-counting
/// identity, with per-shape strata.
pub fn class_count(n: usize, spec: &Arc<FieldSpec>) -> Result<CensusRecord> {
    census_with_options(n, spec, CensusOptions::default())
}

/// Number of elements of each shape.
pub fn shape_census(n: usize, spec: &Arc<FieldSpec>) -> Result<BTreeMap<Partition, BigUint>> {
    let record = class_count(n, spec)?;
    check_shape_bound(&record)?;
    Ok(record
        .per_shape
        .into_iter()
        .map(|(lam, s)| (lam, s.count))
        .collect())
}

/// Commuting-pair census; with `pairs` set, strata are keyed by the shapes
/// of both members.
pub fn comm_strata(n: usize, spec: &Arc<FieldSpec>, pairs: bool) -> Result<CensusRecord> {
    census_with_options(
        n,
        spec,
        CensusOptions {
            pairs,
            override_budget: false,
        },
    )
}

/// Per-shape count bound: `F_lambda <= f^lambda * q^(C(n,2) - n(lambda))`.
pub fn check_shape_bound(record: &CensusRecord) -> Result<()> {
    for (lam, stats) in &record.per_shape {
        let bound = lam.hook_count()
            * biguint_pow(record.q, (record.dim - lam.n_stat()) as u32);
        if stats.count > bound {
            return Err(Error::VerificationFailed(format!(
                "shape stratum {lam} has {} elements, above the hook bound {bound}",
                stats.count
            )));
        }
    }
    Ok(())
}

/// Commuting-pair bound per shape: `comm(lambda)^2 <= n! * q^(n^2 + h(lambda'))`.
pub fn check_comm_bound(record: &CensusRecord) -> Result<()> {
    let n = record.n;
    let mut fact = BigUint::one();
    for i in 1..=n {
        fact *= BigUint::from(i);
    }
    for (lam, stats) in &record.per_shape {
        let h = h_int(lam.conjugate().parts());
        let exponent = n as i64 * n as i64 + h;
        assert!(exponent >= 0, "bound exponent must be nonnegative");
        let bound = &fact * biguint_pow(record.q, exponent as u32);
        if &stats.comm * &stats.comm > bound {
            return Err(Error::VerificationFailed(format!(
                "comm({lam})^2 = {} exceeds n! q^(n^2+h) = {bound}",
                &stats.comm * &stats.comm
            )));
        }
    }
    Ok(())
}

/// Class-count bound: `k <= p(n) * ceil(sqrt(n!)) * q^(ceil(n^2/6) + ceil(n/2))`.
pub fn check_class_count_bound(record: &CensusRecord) -> Result<()> {
    let n = record.n;
    let mut fact = BigUint::one();
    for i in 1..=n {
        fact *= BigUint::from(i);
    }
    let mut root = fact.sqrt();
    if &root * &root < fact {
        root += BigUint::one();
    }
    let exponent = (n * n).div_ceil(6) + n.div_ceil(2);
    let bound = partition_count(n) * root * biguint_pow(record.q, exponent as u32);
    if record.class_count > bound {
        return Err(Error::VerificationFailed(format!(
            "class count {} exceeds the bound {bound}",
            record.class_count
        )));
    }
    Ok(())
}

/// Outcome of the containment sweep.
#[derive(Clone, Debug)]
pub struct WorstGapReport {
    pub n: usize,
    pub q: u64,
    pub checked: u64,
    /// Descriptions of failing elements (capped); empty means the
    /// containment held everywhere.
    pub violations: Vec<String>,
}

/// For every strictly upper `A`: conjugates a basis of its centralizer by
/// the canonical conjugator and tests membership in the extremal subspace
/// of its shape.
pub fn verify_worst_gap(n: usize, spec: &Arc<FieldSpec>) -> Result<WorstGapReport> {
    let q = spec.order() as u64;
    check_budget(q, binom2(n) as u32, false)?;
    let locals = scan_shards(
        n,
        spec,
        || (0u64, Vec::<String>::new(), BTreeMap::<Partition, GapArray>::new()),
        |a, (checked, violations, cache)| {
            *checked += 1;
            let (x, _) = canonical_conjugator(a).expect("input is strictly upper");
            let lam = shape(a).expect("input is strictly upper");
            let g = cache.entry(lam.clone()).or_insert_with(|| g_worst(&lam));
            let centralizer = centralizer_subspace_u(a).expect("input is strictly upper");
            let x_inv = x.inverse().expect("conjugator is invertible");
            for m in centralizer.basis_matrices().expect("ambient is square") {
                let t = x.mul(&m).and_then(|xm| xm.mul(&x_inv)).expect("sizes agree");
                if !g.membership(&t).expect("sizes agree") && violations.len() < 8 {
                    violations.push(format!(
                        "shape {lam}: conjugated centralizer element escapes the gap subspace of a = {:?}",
                        a
                    ));
                }
            }
        },
    );
    let mut checked = 0u64;
    let mut violations = Vec::new();
    for (c, v, _) in locals {
        checked += c;
        for item in v {
            if violations.len() < 8 {
                violations.push(item);
            }
        }
    }
    Ok(WorstGapReport {
        n,
        q,
        checked,
        violations,
    })
}

/// An interpolated class-count polynomial and its degree verdict.
#[derive(Clone, Debug)]
pub struct ClassPolynomial {
    /// Coefficients, constant term first, exact rationals.
    pub coeffs: Vec<num::BigRational>,
    pub degree: usize,
    pub expected_degree: usize,
    pub integer_coefficients: bool,
    /// True when the fit was over-determined (points >= degree + 2), so the
    /// degree (and polynomiality on the samples) is certified.
    pub certified: bool,
}

impl ClassPolynomial {
    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        serde_json::json!({
            "schema": 1,
            "coefficients": coeffs,
            "degree": self.degree,
            "expected_degree": self.expected_degree,
            "integer_coefficients": self.integer_coefficients,
            "certified": self.certified,
        })
    }
}

/// Nearest integer to `(n^2 + 6n) / 12` (never a half-integer).
pub fn expected_degree(n: usize) -> usize {
    (n * n + 6 * n + 6) / 12
}

/// Exact Lagrange interpolation of class counts against `q`.
pub fn interpolate_class_polynomial(
    n: usize,
    q_list: &[u64],
    counts: &[BigUint],
) -> Result<ClassPolynomial> {
    use num::BigRational;
    use num::bigint::BigInt;
    if q_list.len() != counts.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} sample orders vs {} counts",
            q_list.len(),
            counts.len()
        )));
    }
    if q_list.is_empty() {
        return Err(Error::InsufficientPoints { got: 0, need: 2 });
    }
    for (i, q) in q_list.iter().enumerate() {
        if q_list[..i].contains(q) {
            return Err(Error::DuplicatePoint(*q));
        }
    }
    let xs: Vec<BigRational> = q_list
        .iter()
        .map(|&q| BigRational::from(BigInt::from(q)))
        .collect();
    let ys: Vec<BigRational> = counts
        .iter()
        .map(|c| BigRational::from(BigInt::from(c.clone())))
        .collect();
    let k = xs.len();
    let mut poly = vec![BigRational::zero(); k];
    for i in 0..k {
        let mut numer = vec![BigRational::zero(); k];
        numer[0] = BigRational::one();
        let mut deg = 0usize;
        let mut denom = BigRational::one();
        for j in 0..k {
            if j == i {
                continue;
            }
            // Multiply the accumulated numerator by (x - x_j) in place.
            for t in (0..=deg + 1).rev() {
                let lower = if t > 0 {
                    numer[t - 1].clone()
                } else {
                    BigRational::zero()
                };
                let shifted = &numer[t] * &xs[j];
                numer[t] = lower - shifted;
            }
            deg += 1;
            denom *= &xs[i] - &xs[j];
        }
        let scale = &ys[i] / denom;
        for (p, c) in poly.iter_mut().zip(&numer) {
            *p += c * &scale;
        }
    }
    while poly.len() > 1 && poly.last().map(|c| c.is_zero()).unwrap_or(false) {
        poly.pop();
    }
    let degree = poly.len() - 1;
    let integer_coefficients = poly.iter().all(|c| c.is_integer());
    Ok(ClassPolynomial {
        certified: k >= degree + 2,
        coeffs: poly,
        degree,
        expected_degree: expected_degree(n),
        integer_coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::jordan_matrix;
    use crate::partitions::partitions_of;

    fn f(q: u64) -> Arc<FieldSpec> {
        FieldSpec::from_order(q).unwrap()
    }

    fn pt(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn centralizer_dims() {
        let field = f(2);
        let zero = Matrix::zeros(4, 4, &field);
        assert_eq!(centralizer_dim_u(&zero).unwrap(), 6);
        for n in 2..=6 {
            let j = jordan_matrix(&pt(&[n]), &field);
            assert_eq!(centralizer_dim_u(&j).unwrap(), n - 1);
        }
        let j21 = jordan_matrix(&pt(&[2, 1]), &field);
        assert_eq!(centralizer_dim_u(&j21).unwrap(), 2);
        // Full-algebra centralizer of J_(2,1) has dimension |lambda'|^2 = 5.
        assert_eq!(centralizer_subspace_m(&j21).unwrap().dim(), 5);
        assert!(centralizer_dim_u(&Matrix::identity(3, &field)).is_err());
    }

    #[test]
    fn centralizer_subspace_matches_dim() {
        let field = f(3);
        for bits in 0..81u32 {
            let mut a = Matrix::zeros(3, 3, &field);
            a.set_raw(0, 1, bits % 3);
            a.set_raw(0, 2, bits / 3 % 3);
            a.set_raw(1, 2, bits / 9 % 3);
            let dim = centralizer_dim_u(&a).unwrap();
            let space = centralizer_subspace_u(&a).unwrap();
            assert_eq!(space.dim(), dim);
            for m in space.basis_matrices().unwrap() {
                assert!(m.is_strictly_upper());
                assert_eq!(a.mul(&m).unwrap(), m.mul(&a).unwrap());
            }
        }
    }

    #[test]
    fn small_class_counts() {
        for q in [2u64, 3, 4, 5] {
            let record = class_count(2, &f(q)).unwrap();
            assert_eq!(record.class_count, BigUint::from(q));
            let record3 = class_count(3, &f(q)).unwrap();
            assert_eq!(record3.class_count, BigUint::from(q * q + q - 1));
        }
    }

    #[test]
    fn shape_census_n3_q2() {
        let census = shape_census(3, &f(2)).unwrap();
        assert_eq!(census[&pt(&[3])], BigUint::from(2u32));
        assert_eq!(census[&pt(&[2, 1])], BigUint::from(5u32));
        assert_eq!(census[&pt(&[1, 1, 1])], BigUint::from(1u32));
    }

    #[test]
    fn n2_strata_formulas() {
        for q in [2u64, 3, 5] {
            let record = comm_strata(2, &f(q), true).unwrap();
            let s2 = &record.per_shape[&pt(&[2])];
            let s11 = &record.per_shape[&pt(&[1, 1])];
            assert_eq!(s2.count, BigUint::from(q - 1));
            assert_eq!(s11.count, BigUint::from(1u32));
            assert_eq!(s2.comm, BigUint::from((q - 1) * q));
            assert_eq!(s11.comm, BigUint::from(q));
            record.validate().unwrap();
        }
    }

    #[test]
    fn n3_q2_total_pairs() {
        let record = comm_strata(3, &f(2), true).unwrap();
        assert_eq!(record.total_comm_pairs, BigUint::from(40u32));
        record.validate().unwrap();
        // Pair strata are symmetric and have the right marginals
        // (validate checks both); spot-check one asymmetric-looking cell.
        let pairs = record.per_shape_pair.as_ref().unwrap();
        assert_eq!(
            pairs[&(pt(&[3]), pt(&[2, 1]))],
            pairs[&(pt(&[2, 1]), pt(&[3]))]
        );
    }

    #[test]
    fn census_is_deterministic() {
        let a = census_with_options(4, &f(2), CensusOptions { pairs: true, override_budget: false })
            .unwrap();
        let b = census_with_options(4, &f(2), CensusOptions { pairs: true, override_budget: false })
            .unwrap();
        assert_eq!(a, b);
        check_shape_bound(&a).unwrap();
        check_comm_bound(&a).unwrap();
        check_class_count_bound(&a).unwrap();
    }

    #[test]
    fn budget_guard() {
        assert!(check_budget(2, 30, false).is_ok());
        assert!(check_budget(2, 40, false).is_err());
        assert!(check_budget(2, 40, true).is_ok());
        assert!(matches!(
            class_count(9, &f(2)),
            Err(Error::BudgetExceeded(_, _))
        ));
    }

    #[test]
    fn worst_gap_small() {
        for q in [2u64, 3] {
            let report = verify_worst_gap(3, &f(q)).unwrap();
            assert_eq!(report.checked, q.pow(3));
            assert!(report.violations.is_empty());
        }
        let report = verify_worst_gap(4, &f(2)).unwrap();
        assert_eq!(report.checked, 64);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn interpolation_small() {
        // k(U_2) = q.
        let counts: Vec<BigUint> = [2u32, 3, 4].iter().map(|&q| BigUint::from(q)).collect();
        let poly = interpolate_class_polynomial(2, &[2, 3, 4], &counts).unwrap();
        assert_eq!(poly.degree, 1);
        assert_eq!(poly.expected_degree, 1);
        assert!(poly.integer_coefficients);
        assert!(poly.certified);
        assert!(poly.coeffs[0].is_zero());
        assert!(poly.coeffs[1].is_one());
        // k(U_3) = q^2 + q - 1 from real censuses.
        let qs = [2u64, 3, 4, 5];
        let counts: Vec<BigUint> = qs
            .iter()
            .map(|&q| class_count(3, &f(q)).unwrap().class_count)
            .collect();
        let poly = interpolate_class_polynomial(3, &qs, &counts).unwrap();
        assert_eq!(poly.degree, 2);
        assert_eq!(poly.expected_degree, 2);
        assert!(poly.integer_coefficients);
        assert!(poly.certified);
        use num::bigint::BigInt;
        let expect: Vec<num::BigRational> = [-1i64, 1, 1]
            .iter()
            .map(|&c| num::BigRational::from(BigInt::from(c)))
            .collect();
        assert_eq!(poly.coeffs, expect);
        assert!(matches!(
            interpolate_class_polynomial(3, &[2, 2], &counts[..2]),
            Err(Error::DuplicatePoint(2))
        ));
    }

    #[test]
    fn expected_degree_examples() {
        assert_eq!(expected_degree(2), 1);
        assert_eq!(expected_degree(3), 2);
        assert_eq!(expected_degree(4), 3);
        assert_eq!(expected_degree(5), 5);
        assert_eq!(expected_degree(6), 6);
    }

    #[test]
    fn yip_bound_strict_cases() {
        for q in [2u64, 3] {
            for n in 1..=4 {
                let record = class_count(n, &f(q)).unwrap();
                check_shape_bound(&record).unwrap();
                for lam in partitions_of(n) {
                    assert!(record.per_shape.contains_key(&lam), "missing stratum {lam}");
                }
            }
        }
    }
}
