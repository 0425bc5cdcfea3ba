//! Dense matrices and subspaces over small finite fields.
//!
//! Everything reduces to exact Gaussian elimination. Subspaces are kept in
//! reduced row echelon form so that structural equality is set equality.

use crate::error::{Error, Result};
use crate::field::{same_field, FieldElement, FieldSpec};
use crate::partitions::Partition;
use std::fmt;
use std::sync::Arc;

/// A rows x cols matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
    field: Arc<FieldSpec>,
}

impl Matrix {
    pub fn new(
        rows: usize,
        cols: usize,
        entries: Vec<FieldElement>,
        field: Arc<FieldSpec>,
    ) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        for e in &entries {
            if e.value() >= field.order() {
                return Err(Error::ElementOutOfRange {
                    value: e.value() as u64,
                    q: field.order(),
                });
            }
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
            field,
        })
    }

    /// Builds a matrix from raw residue values.
    pub fn from_values(
        rows: usize,
        cols: usize,
        values: &[u32],
        field: &Arc<FieldSpec>,
    ) -> Result<Matrix> {
        let entries = values
            .iter()
            .map(|&v| field.element(v as u64))
            .collect::<Result<Vec<_>>>()?;
        Matrix::new(rows, cols, entries, Arc::clone(field))
    }

    pub fn zeros(rows: usize, cols: usize, field: &Arc<FieldSpec>) -> Matrix {
        Matrix {
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
            field: Arc::clone(field),
        }
    }

    pub fn identity(n: usize, field: &Arc<FieldSpec>) -> Matrix {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        self.entries[i * self.cols + j] = v;
    }

    #[inline]
    pub(crate) fn get_raw(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j].value()
    }

    #[inline]
    pub(crate) fn set_raw(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.cols + j] = FieldElement::from_raw(v);
    }

    /// Row-major flattening, length rows*cols.
    pub fn flatten(&self) -> Vec<FieldElement> {
        self.entries.clone()
    }

    /// Inverse of [`flatten`](Self::flatten) for square matrices.
    pub fn from_flat(n: usize, flat: &[FieldElement], field: &Arc<FieldSpec>) -> Result<Matrix> {
        Matrix::new(n, n, flat.to_vec(), Arc::clone(field))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_strictly_upper(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..=i.min(self.cols - 1)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let f = &self.field;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| FieldElement::from_raw(f.add_raw(a.value(), b.value())))
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
            field: Arc::clone(&self.field),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let f = &self.field;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| FieldElement::from_raw(f.sub_raw(a.value(), b.value())))
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
            field: Arc::clone(&self.field),
        })
    }

    pub fn scale(&self, c: FieldElement) -> Matrix {
        let f = &self.field;
        let entries = self
            .entries
            .iter()
            .map(|a| FieldElement::from_raw(f.mul_raw(a.value(), c.value())))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
            field: Arc::clone(&self.field),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        same_field(&self.field, &other.field)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(self.rows, other.cols, &self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get_raw(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get_raw(k, j);
                    if b == 0 {
                        continue;
                    }
                    let cur = out.get_raw(i, j);
                    out.set_raw(i, j, f.add_raw(cur, f.mul_raw(a, b)));
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows, &self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Matrix power for square matrices; `pow(0)` is the identity.
    pub fn pow(&self, e: usize) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of non-square matrix".into()));
        }
        let mut acc = Matrix::identity(self.rows, &self.field);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Reduced row echelon form and the pivot column indices.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut rows: Vec<Vec<u32>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get_raw(i, j)).collect())
            .collect();
        let pivots = rref_rows(&mut rows, &self.field);
        // rref_rows culls zero rows; restore them to keep the shape.
        rows.resize(self.rows, vec![0; self.cols]);
        let entries = rows
            .into_iter()
            .flatten()
            .map(FieldElement::from_raw)
            .collect();
        (
            Matrix {
                rows: self.rows,
                cols: self.cols,
                entries,
                field: Arc::clone(&self.field),
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<u32>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get_raw(i, j)).collect())
            .collect();
        rref_rows(&mut rows, &self.field).len()
    }

    /// Right nullspace: all x with (self)x = 0, as a subspace of F^cols.
    pub fn nullspace(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut pivot_at = vec![usize::MAX; self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            pivot_at[col] = row;
        }
        let f = &self.field;
        for free in 0..self.cols {
            if pivot_at[free] != usize::MAX {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for col in 0..self.cols {
                let row = pivot_at[col];
                if row != usize::MAX {
                    v[col] = FieldElement::from_raw(f.neg_raw(r.get_raw(row, free)));
                }
            }
            basis.push(v);
        }
        Subspace::from_rows_unchecked(self.cols, basis, &self.field)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let f = &self.field;
        // Augment with the identity and row reduce.
        let mut rows: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut row: Vec<u32> = (0..n).map(|j| self.get_raw(i, j)).collect();
                row.extend((0..n).map(|j| u32::from(i == j)));
                row
            })
            .collect();
        let pivots = rref_rows(&mut rows, f);
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Err(Error::Singular);
        }
        let entries = rows
            .into_iter()
            .flat_map(|row| row[n..].to_vec())
            .map(FieldElement::from_raw)
            .collect();
        Ok(Matrix {
            rows: n,
            cols: n,
            entries,
            field: Arc::clone(&self.field),
        })
    }

    /// `g * self * g^{-1}`.
    pub fn conjugate_by(&self, g: &Matrix) -> Result<Matrix> {
        g.mul(self)?.mul(&g.inverse()?)
    }

    /// Leading principal k x k corner.
    pub fn restrict(&self, k: usize) -> Result<Matrix> {
        if k > self.rows || k > self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot restrict {}x{} to corner of size {}",
                self.rows, self.cols, k
            )));
        }
        let mut out = Matrix::zeros(k, k, &self.field);
        for i in 0..k {
            for j in 0..k {
                out.set(i, j, self.get(i, j));
            }
        }
        Ok(out)
    }

    /// Direct sum with a 1x1 identity block: `self (+) (1)`.
    pub fn extend_one(&self) -> Matrix {
        let n = self.rows;
        let mut out = Matrix::zeros(n + 1, self.cols + 1, &self.field);
        for i in 0..n {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        out.set(n, self.cols, self.field.one());
        out
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        same_field(&self.field, &other.field)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Plain text form: header `rows cols q=<order>`, then one line per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} q={}\n", self.rows, self.cols, self.field.order());
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses the [`to_text`](Self::to_text) format, constructing the field
    /// from the stated order.
    pub fn from_text(text: &str) -> Result<Matrix> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix text".into()))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 3 || !toks[2].starts_with("q=") {
            return Err(Error::Parse(format!(
                "header must be `rows cols q=<order>`, got {header:?}"
            )));
        }
        let rows: usize = toks[0].parse().map_err(|e| Error::Parse(format!("rows: {e}")))?;
        let cols: usize = toks[1].parse().map_err(|e| Error::Parse(format!("cols: {e}")))?;
        let q: u64 = toks[2][2..]
            .parse()
            .map_err(|e| Error::Parse(format!("order: {e}")))?;
        let field = FieldSpec::from_order(q)?;
        let mut values = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {rows} matrix rows")))?;
            let row: Vec<u32> = line
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(format!("entry {t:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if row.len() != cols {
                return Err(Error::Parse(format!(
                    "row has {} entries, expected {cols}",
                    row.len()
                )));
            }
            values.extend(row);
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing content after matrix rows".into()));
        }
        Matrix::from_values(rows, cols, &values, &field)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over GF({})", self.rows, self.cols, self.field.order())?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// In-place reduced row echelon form on raw residue rows; returns pivot
/// column indices in order.
pub(crate) fn rref_rows(rows: &mut Vec<Vec<u32>>, f: &FieldSpec) -> Vec<usize> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut next_row = 0usize;
    for col in 0..ncols {
        let Some(src) = (next_row..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(next_row, src);
        let inv = f.inv_raw(rows[next_row][col]);
        for x in rows[next_row].iter_mut() {
            *x = f.mul_raw(*x, inv);
        }
        for r in 0..rows.len() {
            if r != next_row && rows[r][col] != 0 {
                let c = rows[r][col];
                for j in col..ncols {
                    let s = f.mul_raw(c, rows[next_row][j]);
                    rows[r][j] = f.sub_raw(rows[r][j], s);
                }
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == rows.len() {
            break;
        }
    }
    rows.retain(|r| r.iter().any(|&x| x != 0));
    pivots
}

/// Nilpotent Jordan matrix with block sizes given by a composition
/// (not necessarily decreasing): ones on the superdiagonal inside blocks.
pub fn jordan_composition(sizes: &[usize], field: &Arc<FieldSpec>) -> Matrix {
    let n: usize = sizes.iter().sum();
    let mut m = Matrix::zeros(n, n, field);
    let mut start = 0;
    for &s in sizes {
        for i in 0..s.saturating_sub(1) {
            m.set(start + i, start + i + 1, field.one());
        }
        start += s;
    }
    m
}

/// Nilpotent Jordan matrix `J_lambda` with decreasing block sizes.
pub fn jordan_matrix(shape: &Partition, field: &Arc<FieldSpec>) -> Matrix {
    jordan_composition(shape.parts(), field)
}

/// Reads off the block sizes of a nilpotent Jordan matrix with decreasing
/// blocks, failing if the matrix has any other form.
pub fn parse_jordan(m: &Matrix) -> Result<Partition> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("Jordan matrix must be square".into()));
    }
    let n = m.rows();
    for i in 0..n {
        for j in 0..n {
            let e = m.get(i, j);
            if j == i + 1 {
                if e.value() > 1 {
                    return Err(Error::Parse(format!(
                        "superdiagonal entry ({i},{j}) is {e}, not 0 or 1"
                    )));
                }
            } else if !e.is_zero() {
                return Err(Error::Parse(format!("nonzero entry off the superdiagonal at ({i},{j})")));
            }
        }
    }
    let mut sizes = Vec::new();
    let mut run = 1usize;
    for i in 0..n.saturating_sub(1) {
        if m.get(i, i + 1).value() == 1 {
            run += 1;
        } else {
            sizes.push(run);
            run = 1;
        }
    }
    if n > 0 {
        sizes.push(run);
    }
    Partition::new(sizes).map_err(|_| Error::Parse("Jordan blocks not in decreasing order".into()))
}

/// Elementary transvection `I + alpha * e_{i,j}`, `i != j`.
pub fn transvection(
    n: usize,
    i: usize,
    j: usize,
    alpha: FieldElement,
    field: &Arc<FieldSpec>,
) -> Result<Matrix> {
    if i >= n || j >= n {
        return Err(Error::IndexOutOfRange(format!("transvection ({i},{j}) in size {n}")));
    }
    if i == j {
        return Err(Error::IndexOutOfRange("transvection needs i != j".into()));
    }
    let mut m = Matrix::identity(n, field);
    m.set(i, j, alpha);
    Ok(m)
}

/// Permutation matrix `P_w` with `P[w[i]][i] = 1`, so that conjugation
/// relabels coordinates: `(P A P^{-1})[w[i]][w[j]] = A[i][j]`.
pub fn permutation_matrix(w: &[usize], field: &Arc<FieldSpec>) -> Result<Matrix> {
    let n = w.len();
    let mut seen = vec![false; n];
    for &wi in w {
        if wi >= n || seen[wi] {
            return Err(Error::NotPermutation(wi));
        }
        seen[wi] = true;
    }
    let mut m = Matrix::zeros(n, n, field);
    for (i, &wi) in w.iter().enumerate() {
        m.set(wi, i, field.one());
    }
    Ok(m)
}

/// A linear subspace of F^ambient with canonical (RREF) basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<FieldElement>>,
    field: Arc<FieldSpec>,
}

impl Subspace {
    /// Span of the given vectors, canonicalized.
    pub fn from_rows(
        ambient: usize,
        rows: Vec<Vec<FieldElement>>,
        field: &Arc<FieldSpec>,
    ) -> Result<Subspace> {
        for r in &rows {
            if r.len() != ambient {
                return Err(Error::DimensionMismatch(format!(
                    "vector of length {} in ambient dimension {ambient}",
                    r.len()
                )));
            }
        }
        Ok(Subspace::from_rows_unchecked(ambient, rows, field))
    }

    fn from_rows_unchecked(
        ambient: usize,
        rows: Vec<Vec<FieldElement>>,
        field: &Arc<FieldSpec>,
    ) -> Subspace {
        let mut raw: Vec<Vec<u32>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|e| e.value()).collect())
            .collect();
        rref_rows(&mut raw, field);
        let basis = raw
            .into_iter()
            .map(|r| r.into_iter().map(FieldElement::from_raw).collect())
            .collect();
        Subspace {
            ambient,
            basis,
            field: Arc::clone(field),
        }
    }

    pub fn zero(ambient: usize, field: &Arc<FieldSpec>) -> Subspace {
        Subspace {
            ambient,
            basis: Vec::new(),
            field: Arc::clone(field),
        }
    }

    /// Span of flattened n x n matrices.
    pub fn from_matrices(ambient_side: usize, mats: &[Matrix], field: &Arc<FieldSpec>) -> Result<Subspace> {
        let ambient = ambient_side * ambient_side;
        let rows = mats
            .iter()
            .map(|m| {
                if m.rows() != ambient_side || m.cols() != ambient_side {
                    return Err(Error::DimensionMismatch(format!(
                        "expected {0}x{0} matrix in span",
                        ambient_side
                    )));
                }
                same_field(field, m.field())?;
                Ok(m.flatten())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::from_rows_unchecked(ambient, rows, field))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    /// Canonical RREF basis rows.
    pub fn basis(&self) -> &[Vec<FieldElement>] {
        &self.basis
    }

    /// Basis rows reshaped to n x n matrices (requires ambient = n^2).
    pub fn basis_matrices(&self) -> Result<Vec<Matrix>> {
        let n = int_sqrt(self.ambient).ok_or_else(|| {
            Error::DimensionMismatch(format!("ambient {} is not a square", self.ambient))
        })?;
        self.basis
            .iter()
            .map(|r| Matrix::from_flat(n, r, &self.field))
            .collect()
    }

    pub fn contains_vector(&self, v: &[FieldElement]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                self.ambient
            )));
        }
        let f = &self.field;
        let mut work: Vec<u32> = v.iter().map(|e| e.value()).collect();
        for row in &self.basis {
            let pivot = row.iter().position(|e| !e.is_zero()).expect("basis rows nonzero");
            let c = work[pivot];
            if c != 0 {
                for j in pivot..self.ambient {
                    let s = f.mul_raw(c, row[j].value());
                    work[j] = f.sub_raw(work[j], s);
                }
            }
        }
        Ok(work.iter().all(|&x| x == 0))
    }

    pub fn contains_matrix(&self, m: &Matrix) -> Result<bool> {
        same_field(&self.field, m.field())?;
        self.contains_vector(&m.flatten())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        for row in &self.basis {
            if !other.contains_vector(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Ok(Subspace::from_rows_unchecked(self.ambient, rows, &self.field))
    }

    /// Intersection via the left kernel of the stacked basis.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let da = self.dim();
        let db = other.dim();
        if da == 0 || db == 0 {
            return Ok(Subspace::zero(self.ambient, &self.field));
        }
        // Columns of T are the basis vectors of self, then the negated basis
        // vectors of other; kernel elements (u, w) give sum u_i a_i in both.
        let f = &self.field;
        let mut t = Matrix::zeros(self.ambient, da + db, &self.field);
        for (i, row) in self.basis.iter().enumerate() {
            for (x, e) in row.iter().enumerate() {
                t.set(x, i, *e);
            }
        }
        for (j, row) in other.basis.iter().enumerate() {
            for (x, e) in row.iter().enumerate() {
                t.set(x, da + j, FieldElement::from_raw(f.neg_raw(e.value())));
            }
        }
        let kernel = t.nullspace();
        let mut rows = Vec::with_capacity(kernel.dim());
        for k in kernel.basis() {
            let mut v = vec![0u32; self.ambient];
            for (i, row) in self.basis.iter().enumerate() {
                let c = k[i].value();
                if c != 0 {
                    for (x, e) in row.iter().enumerate() {
                        v[x] = f.add_raw(v[x], f.mul_raw(c, e.value()));
                    }
                }
            }
            rows.push(v.into_iter().map(FieldElement::from_raw).collect());
        }
        Ok(Subspace::from_rows_unchecked(self.ambient, rows, &self.field))
    }

    /// Image under conjugation by g on flattened n x n matrices:
    /// spans of `g M g^{-1}` for basis matrices M.
    pub fn conjugated(&self, g: &Matrix) -> Result<Subspace> {
        same_field(&self.field, g.field())?;
        let mats = self.basis_matrices()?;
        let n = int_sqrt(self.ambient).expect("checked by basis_matrices");
        if g.rows() != n || g.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "conjugating ambient {0}x{0} by {1}x{2}",
                n,
                g.rows(),
                g.cols()
            )));
        }
        let g_inv = g.inverse()?;
        let rows = mats
            .iter()
            .map(|m| Ok(g.mul(m)?.mul(&g_inv)?.flatten()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::from_rows_unchecked(self.ambient, rows, &self.field))
    }

    /// Lift from (n-1) x (n-1) matrices to n x n: embed in the top-left
    /// corner, let the off-corner column vary freely above the last row, and
    /// zero the whole last row. Dimension grows by exactly n-1.
    pub fn overline(&self, n: usize) -> Result<Subspace> {
        if n == 0 || self.ambient != (n - 1) * (n - 1) {
            return Err(Error::DimensionMismatch(format!(
                "overline to size {n} from ambient {}",
                self.ambient
            )));
        }
        let m = n - 1;
        let f = &self.field;
        let mut rows: Vec<Vec<FieldElement>> = Vec::with_capacity(self.dim() + m);
        for row in &self.basis {
            let mut v = vec![f.zero(); n * n];
            for i in 0..m {
                for j in 0..m {
                    v[i * n + j] = row[i * m + j];
                }
            }
            rows.push(v);
        }
        for i in 0..m {
            let mut v = vec![f.zero(); n * n];
            v[i * n + (n - 1)] = f.one();
            rows.push(v);
        }
        let out = Subspace::from_rows_unchecked(n * n, rows, &self.field);
        assert_eq!(out.dim(), self.dim() + m, "overline must add exactly n-1 dimensions");
        Ok(out)
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        same_field(&self.field, &other.field)?;
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "ambient {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Subspace dim {} of F^{} over GF({})",
            self.dim(),
            self.ambient,
            self.field.order()
        )?;
        for row in &self.basis {
            let shown: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", shown.join(" "))?;
        }
        Ok(())
    }
}

pub(crate) fn int_sqrt(x: usize) -> Option<usize> {
    let mut r = 0usize;
    while let Some(sq) = (r + 1).checked_mul(r + 1) {
        if sq > x {
            break;
        }
        r += 1;
    }
    if r * r == x {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use proptest::prelude::*;

    fn f(q: u64) -> Arc<FieldSpec> {
        FieldSpec::from_order(q).unwrap()
    }

    fn m(rows: usize, cols: usize, vals: &[u32], q: u64) -> Matrix {
        Matrix::from_values(rows, cols, vals, &f(q)).unwrap()
    }

    #[test]
    fn multiplication_and_identity() {
        let a = m(2, 2, &[1, 2, 0, 1], 3);
        let b = m(2, 2, &[1, 1, 1, 0], 3);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab, m(2, 2, &[0, 1, 1, 0], 3));
        let id = Matrix::identity(2, &f(3));
        assert_eq!(a.mul(&id).unwrap(), a);
        assert_eq!(id.mul(&a).unwrap(), a);
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(3, 3, &[1, 2, 0, 0, 1, 4, 0, 0, 1], 5);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(3, &f(5)));
        assert_eq!(inv.mul(&a).unwrap(), Matrix::identity(3, &f(5)));
        let sing = m(2, 2, &[1, 2, 2, 4], 5);
        assert!(matches!(sing.inverse(), Err(Error::Singular)));
    }

    #[test]
    fn rref_and_rank() {
        let a = m(3, 3, &[1, 2, 3, 2, 4, 6, 0, 0, 1], 7);
        let (r, pivots) = a.rref();
        assert_eq!(pivots, vec![0, 2]);
        assert_eq!(a.rank(), 2);
        assert_eq!(r, m(3, 3, &[1, 2, 0, 0, 0, 1, 0, 0, 0], 7));
    }

    #[test]
    fn nullspace_matches_rank_nullity() {
        let a = m(3, 4, &[1, 0, 2, 1, 0, 1, 1, 1, 1, 1, 3, 2], 5);
        let ns = a.nullspace();
        assert_eq!(ns.dim(), 4 - a.rank());
        for v in ns.basis() {
            let col = Matrix::new(4, 1, v.clone(), f(5)).unwrap();
            assert!(a.mul(&col).unwrap().is_zero());
        }
    }

    #[test]
    fn jordan_and_parse_round_trip() {
        let lam = Partition::new(vec![3, 2, 2, 1]).unwrap();
        let j = jordan_matrix(&lam, &f(7));
        assert_eq!(parse_jordan(&j).unwrap(), lam);
        assert!(j.is_strictly_upper());
        // (3,2,2,1) has nilpotency degree 3.
        assert!(!j.pow(2).unwrap().is_zero());
        assert!(j.pow(3).unwrap().is_zero());
        let not_sorted = jordan_composition(&[1, 2], &f(7));
        assert!(parse_jordan(&not_sorted).is_err());
    }

    #[test]
    fn permutation_conjugation_relabels() {
        let q = f(5);
        let w = vec![2, 0, 1];
        let p = permutation_matrix(&w, &q).unwrap();
        let a = m(3, 3, &[0, 1, 2, 3, 0, 4, 1, 1, 0], 5);
        let c = a.conjugate_by(&p).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(c.get(w[i], w[j]), a.get(i, j));
            }
        }
        // Composition: P_w P_v = P_{w o v}.
        let v = vec![1, 2, 0];
        let pv = permutation_matrix(&v, &q).unwrap();
        let wv: Vec<usize> = v.iter().map(|&i| w[i]).collect();
        assert_eq!(p.mul(&pv).unwrap(), permutation_matrix(&wv, &q).unwrap());
        assert!(permutation_matrix(&[0, 0, 1], &q).is_err());
    }

    #[test]
    fn transvection_inverse_is_negation() {
        let q = f(7);
        let t = transvection(4, 1, 3, q.element(5).unwrap(), &q).unwrap();
        let neg = transvection(4, 1, 3, q.element(2).unwrap(), &q).unwrap();
        assert_eq!(t.mul(&neg).unwrap(), Matrix::identity(4, &q));
        assert!(transvection(4, 2, 2, q.one(), &q).is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let a = m(2, 3, &[0, 1, 2, 3, 0, 1], 4);
        let text = a.to_text();
        assert_eq!(text, "2 3 q=4\n0 1 2\n3 0 1\n");
        assert_eq!(Matrix::from_text(&text).unwrap(), a);
        assert!(Matrix::from_text("2 2\n0 0\n0 0\n").is_err());
        assert!(Matrix::from_text("1 1 q=6\n0\n").is_err());
        assert!(Matrix::from_text("1 2 q=3\n0\n").is_err());
    }

    #[test]
    fn subspace_equality_is_canonical() {
        let q = f(3);
        let e = |v: &[u32]| v.iter().map(|&x| q.element(x as u64).unwrap()).collect::<Vec<_>>();
        let s1 = Subspace::from_rows(3, vec![e(&[1, 1, 0]), e(&[0, 0, 1])], &q).unwrap();
        let s2 = Subspace::from_rows(3, vec![e(&[2, 2, 1]), e(&[1, 1, 1])], &q).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(s1.dim(), 2);
        assert!(s1.contains_vector(&e(&[2, 2, 2])).unwrap());
        assert!(!s1.contains_vector(&e(&[1, 0, 0])).unwrap());
    }

    #[test]
    fn sum_and_intersection_dimension_formula() {
        let q = f(2);
        let e = |v: &[u32]| v.iter().map(|&x| q.element(x as u64).unwrap()).collect::<Vec<_>>();
        let a = Subspace::from_rows(4, vec![e(&[1, 0, 0, 0]), e(&[0, 1, 0, 0])], &q).unwrap();
        let b = Subspace::from_rows(4, vec![e(&[0, 1, 0, 0]), e(&[0, 0, 1, 0])], &q).unwrap();
        let s = a.sum(&b).unwrap();
        let i = a.intersect(&b).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(i.dim(), 1);
        assert!(i.contains_vector(&e(&[0, 1, 0, 0])).unwrap());
        assert!(i.is_subspace_of(&a).unwrap());
        assert!(i.is_subspace_of(&b).unwrap());
        assert!(a.is_subspace_of(&s).unwrap());
    }

    #[test]
    fn overline_adds_column_dimensions() {
        let q = f(2);
        // Ambient 2x2 full matrix space, lifted to 3x3.
        let full = Subspace::from_rows(
            4,
            (0..4)
                .map(|i| {
                    let mut v = vec![q.zero(); 4];
                    v[i] = q.one();
                    v
                })
                .collect(),
            &q,
        )
        .unwrap();
        let lifted = full.overline(3).unwrap();
        assert_eq!(lifted.dim(), 6);
        // Bottom row is pinned to zero, including the corner.
        let mut probe = Matrix::zeros(3, 3, &q);
        probe.set(2, 2, q.one());
        assert!(!lifted.contains_matrix(&probe).unwrap());
        let mut probe2 = Matrix::zeros(3, 3, &q);
        probe2.set(0, 2, q.one());
        probe2.set(1, 2, q.one());
        assert!(lifted.contains_matrix(&probe2).unwrap());
    }

    #[test]
    fn conjugated_subspace_of_centralizer() {
        // C(J_(2)) in M_2 is spanned by I and J; conjugation preserves dim.
        let q = f(3);
        let j = jordan_matrix(&Partition::new(vec![2]).unwrap(), &q);
        let id = Matrix::identity(2, &q);
        let c = Subspace::from_matrices(2, &[id.clone(), j.clone()], &q).unwrap();
        let g = m(2, 2, &[1, 1, 0, 1], 3);
        let cg = c.conjugated(&g).unwrap();
        assert_eq!(cg.dim(), 2);
        // g commutes with J here, so the space is fixed.
        assert_eq!(cg, c);
    }

    proptest! {
        #[test]
        fn prop_rank_nullity(seed in 0u64..500) {
            let q = f(3);
            let rows = 1 + (seed % 4) as usize;
            let cols = 1 + ((seed / 4) % 4) as usize;
            let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let mut vals = Vec::with_capacity(rows * cols);
            for _ in 0..rows * cols {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                vals.push(((state >> 33) % 3) as u32);
            }
            let a = Matrix::from_values(rows, cols, &vals, &q).unwrap();
            prop_assert_eq!(a.rank() + a.nullspace().dim(), cols);
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn prop_rref_idempotent(seed in 0u64..200) {
            let q = f(5);
            let mut state = seed.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            let mut vals = Vec::with_capacity(9);
            for _ in 0..9 {
                state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
                vals.push(((state >> 40) % 5) as u32);
            }
            let a = Matrix::from_values(3, 3, &vals, &q).unwrap();
            let (r, _) = a.rref();
            let (rr, _) = r.rref();
            prop_assert_eq!(r, rr);
        }
    }
}
