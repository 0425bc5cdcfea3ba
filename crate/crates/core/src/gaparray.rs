//! Gap arrays: integer matrices attached to a partition that carve out
//! subspaces of block-Toeplitz matrices by zeroing a prescribed number of
//! low diagonals per block, together with the increment map `psi` and the
//! extremal array used by the containment theorem.

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::matrix::{Matrix, Subspace};
use crate::partitions::{phi, Partition};
use num::{BigUint, One};
use std::sync::Arc;

/// An ell x ell array `G` of type `lambda` (ell parts) with
/// `max(0, lambda_i - lambda_j) <= G[i][j] <= lambda_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GapArray {
    shape: Partition,
    cells: Vec<usize>,
}

impl GapArray {
    pub fn new(shape: Partition, cells: Vec<usize>) -> Result<GapArray> {
        let ell = shape.len();
        if cells.len() != ell * ell {
            return Err(Error::InvalidGapArray(format!(
                "type {shape} needs {} cells, got {}",
                ell * ell,
                cells.len()
            )));
        }
        for i in 0..ell {
            for j in 0..ell {
                let g = cells[i * ell + j];
                let lo = shape.part(i).saturating_sub(shape.part(j));
                let hi = shape.part(i);
                if g < lo || g > hi {
                    return Err(Error::InvalidGapArray(format!(
                        "cell ({i},{j}) = {g} outside [{lo},{hi}] for type {shape}"
                    )));
                }
            }
        }
        Ok(GapArray { shape, cells })
    }

    pub fn from_rows(shape: Partition, rows: &[Vec<usize>]) -> Result<GapArray> {
        let cells = rows.iter().flatten().copied().collect();
        GapArray::new(shape, cells)
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    /// Number of blocks (parts of the type partition).
    pub fn len(&self) -> usize {
        self.shape.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shape.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        assert!(i < self.len() && j < self.len(), "gap cell ({i},{j}) out of range");
        self.cells[i * self.len() + j]
    }

    /// `|G|`: the sum of all cells.
    pub fn size(&self) -> usize {
        self.cells.iter().sum()
    }

    /// `dim C(G) = n * ell - |G|`.
    pub fn subspace_dim(&self) -> usize {
        self.shape.n() * self.len() - self.size()
    }

    /// Cellwise comparison; `le(g, h)` iff `C(h)` is a subspace of `C(g)`.
    pub fn le(&self, other: &GapArray) -> Result<bool> {
        if self.shape != other.shape {
            return Err(Error::InvalidGapArray(format!(
                "comparing types {} and {}",
                self.shape, other.shape
            )));
        }
        Ok(self.cells.iter().zip(&other.cells).all(|(a, b)| a <= b))
    }

    /// Row `r` dominates every lower row and column `r` is dominated by
    /// every later column: `G[j][k] <= G[r][k]` and `G[k][r] <= G[k][j]`
    /// for all `j > r`, all `k`. (`r` is 0-based.)
    pub fn is_r_valid(&self, r: usize) -> Result<bool> {
        let ell = self.len();
        if r >= ell {
            return Err(Error::IndexOutOfRange(format!(
                "row {r} of a {ell}-block gap array"
            )));
        }
        for j in r + 1..ell {
            for k in 0..ell {
                if self.get(j, k) > self.get(r, k) || self.get(k, r) > self.get(k, j) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The increment map: grows part `r` of the type (0-based; `r = len()`
    /// appends a new part 1 after first bordering the array with a zero row
    /// and a column `(lambda_1, ..., lambda_ell, 0)`), then decrements every
    /// nonzero entry of column `r`, increments all of row `r`, and permutes
    /// row/column `r` to the first position of its block size. Returns the
    /// new array and the position map `w` shared with `phi`.
    pub fn psi(&self, r: usize) -> Result<(GapArray, Vec<usize>)> {
        let ell = self.len();
        if r > ell {
            return Err(Error::IndexOutOfRange(format!(
                "psi index {r} exceeds block count {ell}"
            )));
        }
        let m = if r == ell { ell + 1 } else { ell };
        let mut c = vec![0usize; m * m];
        for i in 0..ell {
            for j in 0..ell {
                c[i * m + j] = self.get(i, j);
            }
        }
        if r == ell {
            for i in 0..ell {
                c[i * m + ell] = self.shape.part(i);
            }
        }
        for i in 0..m {
            if c[i * m + r] > 0 {
                c[i * m + r] -= 1;
            }
        }
        for j in 0..m {
            c[r * m + j] += 1;
        }
        let (new_shape, w) = phi(&self.shape, r)?;
        let mut out = vec![0usize; m * m];
        for i in 0..m {
            for j in 0..m {
                out[w[i] * m + w[j]] = c[i * m + j];
            }
        }
        Ok((GapArray::new(new_shape, out)?, w))
    }

    /// Membership in `C(G)`: blockwise constant on diagonals, with only the
    /// diagonals meeting the block's right edge in its top `a - G[i][j]`
    /// rows allowed to be nonzero.
    pub fn membership(&self, x: &Matrix) -> Result<bool> {
        let n = self.shape.n();
        if x.rows() != n || x.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "membership of a {}x{} matrix in C(G) of type {} (size {n})",
                x.rows(),
                x.cols(),
                self.shape
            )));
        }
        let starts = block_starts(&self.shape);
        for bi in 0..self.len() {
            for bj in 0..self.len() {
                let a = self.shape.part(bi);
                let b = self.shape.part(bj);
                let free = a - self.get(bi, bj);
                for dx in 0..a {
                    for dy in 0..b {
                        let v = x.get(starts[bi] + dx, starts[bj] + dy);
                        // Diagonal index: the row (1-based) at which this
                        // diagonal meets the block's rightmost column.
                        let t = dx + b - dy;
                        if t > free {
                            if !v.is_zero() {
                                return Ok(false);
                            }
                        } else if dx + 1 < a && dy + 1 < b {
                            if v != x.get(starts[bi] + dx + 1, starts[bj] + dy + 1) {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// Canonical basis of `C(G)` inside flattened n x n matrices: one basis
    /// vector per free diagonal of each block.
    pub fn basis(&self, field: &Arc<FieldSpec>) -> Subspace {
        let n = self.shape.n();
        let starts = block_starts(&self.shape);
        let one = field.one();
        let mut rows: Vec<Vec<FieldElement>> = Vec::new();
        for bi in 0..self.len() {
            for bj in 0..self.len() {
                let a = self.shape.part(bi);
                let b = self.shape.part(bj);
                let free = a - self.get(bi, bj);
                for t in 1..=free {
                    let mut v = vec![field.zero(); n * n];
                    // Walk the diagonal up-left from its right-column cell.
                    let mut dx = t - 1;
                    let mut dy = b - 1;
                    loop {
                        v[(starts[bi] + dx) * n + starts[bj] + dy] = one;
                        if dx == 0 || dy == 0 {
                            break;
                        }
                        dx -= 1;
                        dy -= 1;
                    }
                    rows.push(v);
                }
            }
        }
        Subspace::from_rows(n * n, rows, field).expect("constructed rows have ambient length")
    }

    /// JSON form `{"type": [...], "cells": [[...]]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let ell = self.len();
        let rows: Vec<Vec<usize>> = (0..ell)
            .map(|i| (0..ell).map(|j| self.get(i, j)).collect())
            .collect();
        serde_json::json!({ "type": self.shape.parts(), "cells": rows })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<GapArray> {
        let parts: Vec<usize> = serde_json::from_value(v["type"].clone())
            .map_err(|e| Error::Parse(format!("gap array type: {e}")))?;
        let rows: Vec<Vec<usize>> = serde_json::from_value(v["cells"].clone())
            .map_err(|e| Error::Parse(format!("gap array cells: {e}")))?;
        GapArray::from_rows(Partition::new(parts)?, &rows)
    }
}

fn block_starts(shape: &Partition) -> Vec<usize> {
    let mut starts = Vec::with_capacity(shape.len());
    let mut acc = 0;
    for &p in shape.parts() {
        starts.push(acc);
        acc += p;
    }
    starts
}

/// The minimal array `G[i][j] = max(0, lambda_i - lambda_j)`; its subspace
/// is the full centralizer of `J_lambda`.
pub fn g_min(shape: &Partition) -> GapArray {
    let ell = shape.len();
    let cells = (0..ell * ell)
        .map(|t| {
            let (i, j) = (t / ell, t % ell);
            shape.part(i).saturating_sub(shape.part(j))
        })
        .collect();
    GapArray::new(shape.clone(), cells).expect("minimal cells satisfy the bounds")
}

/// The maximal array `G[i][j] = lambda_i`; its subspace is zero.
pub fn g_max(shape: &Partition) -> GapArray {
    let ell = shape.len();
    let cells = (0..ell * ell).map(|t| shape.part(t / ell)).collect();
    GapArray::new(shape.clone(), cells).expect("maximal cells satisfy the bounds")
}

/// The extremal array of the containment theorem:
/// `lambda_i - lambda_j` when `lambda_i > lambda_j`, 1 on and above the
/// diagonal within equal parts, 0 below.
pub fn g_worst(shape: &Partition) -> GapArray {
    let ell = shape.len();
    let mut cells = vec![0usize; ell * ell];
    for i in 0..ell {
        for j in 0..ell {
            let (a, b) = (shape.part(i), shape.part(j));
            cells[i * ell + j] = if a > b {
                a - b
            } else if a == b && i <= j {
                1
            } else {
                0
            };
        }
    }
    GapArray::new(shape.clone(), cells).expect("extremal cells satisfy the bounds")
}

/// Closed form for `|g_worst(lambda)|`:
/// `n*ell - n - 2n(lambda) + (sum m_i^2 + ell)/2` with `m_i` the part
/// multiplicities; the division is exact.
pub fn g_worst_size(shape: &Partition) -> usize {
    let n = shape.n();
    let ell = shape.len();
    let m_sq: usize = shape.multiplicities().iter().map(|&m| m * m).sum();
    let doubled = 2 * n * ell + m_sq + ell - 2 * n - 4 * shape.n_stat();
    assert!(doubled % 2 == 0, "closed form must be an even numerator");
    doubled / 2
}

/// Iterator over every gap array of the given type, in odometer order over
/// the cell boxes of the validity bounds.
pub struct GapArrayIter {
    shape: Partition,
    lo: Vec<usize>,
    hi: Vec<usize>,
    cur: Vec<usize>,
    done: bool,
}

impl Iterator for GapArrayIter {
    type Item = GapArray;

    fn next(&mut self) -> Option<GapArray> {
        if self.done {
            return None;
        }
        let out = GapArray {
            shape: self.shape.clone(),
            cells: self.cur.clone(),
        };
        let mut i = self.cur.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cur[i] < self.hi[i] {
                self.cur[i] += 1;
                break;
            }
            self.cur[i] = self.lo[i];
        }
        Some(out)
    }
}

/// All gap arrays of type `shape`.
pub fn enumerate(shape: &Partition) -> GapArrayIter {
    let ell = shape.len();
    let mut lo = Vec::with_capacity(ell * ell);
    let mut hi = Vec::with_capacity(ell * ell);
    for i in 0..ell {
        for j in 0..ell {
            lo.push(shape.part(i).saturating_sub(shape.part(j)));
            hi.push(shape.part(i));
        }
    }
    GapArrayIter {
        shape: shape.clone(),
        cur: lo.clone(),
        lo,
        hi,
        done: false,
    }
}

/// Number of gap arrays of type `shape` (product of the box widths).
pub fn count(shape: &Partition) -> BigUint {
    let ell = shape.len();
    let mut acc = BigUint::one();
    for i in 0..ell {
        for j in 0..ell {
            let width = shape.part(i).min(shape.part(j)) + 1;
            acc *= BigUint::from(width);
        }
    }
    acc
}
