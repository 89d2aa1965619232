//! Dense matrices over commutative rings.
//!
//! Determinants over exact rings use single-step fraction-free (Bareiss)
//! elimination, which only ever divides exactly. Floating matrices use
//! partially pivoted elimination for determinants and a fully pivoted,
//! thresholded elimination for rank.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{default_tolerance, Scalar, ScalarKind};

/// Commutative ring operations needed by the generic matrix kernels.
pub trait Ring: Clone + fmt::Debug + fmt::Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn try_add(&self, other: &Self) -> Result<Self>;
    fn try_sub(&self, other: &Self) -> Result<Self>;
    fn try_mul(&self, other: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    /// Division known to be exact in the ring (field division for fields).
    fn div_exact(&self, other: &Self) -> Result<Self>;
}

impl Ring for Scalar {
    fn zero_like(&self) -> Self {
        Scalar::zero(self.kind())
    }
    fn one_like(&self) -> Self {
        Scalar::one(self.kind())
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        Scalar::try_add(self, other)
    }
    fn try_sub(&self, other: &Self) -> Result<Self> {
        Scalar::try_sub(self, other)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        Scalar::try_mul(self, other)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn div_exact(&self, other: &Self) -> Result<Self> {
        Scalar::try_div(self, other)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R = Scalar> {
    rows: usize,
    cols: usize,
    entries: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<R>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    pub fn filled(rows: usize, cols: usize, value: &R) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![value.clone(); rows * cols],
        }
    }

    /// Identity matrix whose entries have the ring "kind" of `proto`.
    pub fn identity(n: usize, proto: &R) -> Self {
        let mut m = Matrix::filled(n, n, &proto.zero_like());
        for i in 0..n {
            m.entries[i * n + i] = proto.one_like();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[R] {
        &self.entries
    }

    pub fn map<S>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map<S>(&self, f: impl Fn(&R) -> Result<S>) -> Result<Matrix<S>> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.try_sub(b))
            .collect::<Result<_>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, c: &R) -> Result<Self> {
        self.try_map(|a| c.try_mul(a))
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: Option<R> = None;
                for k in 0..self.cols {
                    let p = self.get(i, k).try_mul(other.get(k, j))?;
                    acc = Some(match acc {
                        Some(a) => a.try_add(&p)?,
                        None => p,
                    });
                }
                entries.push(match acc {
                    Some(a) => a,
                    None => self.entries.first().or(other.entries.first()).map_or_else(
                        || unreachable!("product with an empty inner dimension needs a prototype entry"),
                        |e| e.zero_like(),
                    ),
                });
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    pub fn trace(&self) -> Result<R> {
        if !self.is_square() || self.rows == 0 {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let mut acc = self.get(0, 0).clone();
        for i in 1..self.rows {
            acc = acc.try_add(self.get(i, i))?;
        }
        Ok(acc)
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.rows,
            cols: cols.len(),
            entries,
        }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let entries = rows.iter().flat_map(|&i| self.row(i).iter().cloned()).collect();
        Matrix {
            rows: rows.len(),
            cols: self.cols,
            entries,
        }
    }

    /// Concatenates a grid of blocks. Blocks in one grid row share their row
    /// count; blocks in one grid column share their column count.
    pub fn block_assemble(grid: &[Vec<Matrix<R>>]) -> Result<Self> {
        let first = grid
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty block grid".into()))?;
        let widths: Vec<usize> = first.iter().map(Matrix::cols).collect();
        let mut entries = Vec::new();
        let mut rows = 0;
        for (bi, block_row) in grid.iter().enumerate() {
            if block_row.len() != widths.len() {
                return Err(Error::DimensionMismatch(format!(
                    "block row {bi} has {} blocks",
                    block_row.len()
                )));
            }
            let height = block_row.first().map_or(0, Matrix::rows);
            for (bj, b) in block_row.iter().enumerate() {
                if b.rows != height || b.cols != widths[bj] {
                    return Err(Error::DimensionMismatch(format!(
                        "block ({bi},{bj}) is {}x{}, expected {height}x{}",
                        b.rows, b.cols, widths[bj]
                    )));
                }
            }
            for i in 0..height {
                for b in block_row {
                    entries.extend_from_slice(b.row(i));
                }
            }
            rows += height;
        }
        Ok(Matrix {
            rows,
            cols: widths.iter().sum(),
            entries,
        })
    }

    /// Fraction-free Bareiss elimination. Every division is exact in the ring.
    pub fn det_bareiss(&self) -> Result<R> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Err(Error::NotSquare(0, 0));
        }
        let mut a: Vec<Vec<R>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev: Option<R> = None;
        for k in 0..n.saturating_sub(1) {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(a[0][0].zero_like());
            };
            if p != k {
                a.swap(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[k][k].try_mul(&a[i][j])?.try_sub(&a[i][k].try_mul(&a[k][j])?)?;
                    a[i][j] = match &prev {
                        Some(d) => num.div_exact(d)?,
                        None => num,
                    };
                }
                a[i][k] = a[i][k].zero_like();
            }
            prev = Some(a[k][k].clone());
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if negate { det.neg() } else { det })
    }
}

impl Matrix<Scalar> {
    /// Builds an exact rational matrix from integer rows.
    pub fn int(rows: &[&[i64]]) -> Matrix<Scalar> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::int(v)).collect())
                .collect(),
        )
        .expect("rectangular integer rows")
    }

    pub fn zeros(rows: usize, cols: usize, kind: ScalarKind) -> Matrix<Scalar> {
        Matrix::filled(rows, cols, &Scalar::zero(kind))
    }

    pub fn eye(n: usize, kind: ScalarKind) -> Matrix<Scalar> {
        Matrix::identity(n, &Scalar::one(kind))
    }

    /// The common kind of all entries.
    pub fn kind(&self) -> Result<ScalarKind> {
        self.entries
            .iter()
            .try_fold(ScalarKind::Rational, |k, e| k.unify(e.kind()))
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(Scalar::is_exact)
    }

    pub fn to_complex(&self) -> Matrix<Scalar> {
        self.map(|e| Scalar::Complex(e.to_complex()))
    }

    fn complex_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Scalar::to_complex).collect())
            .collect()
    }

    pub fn row_norms(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.abs().powi(2)).sum::<f64>().sqrt())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(Scalar::abs).fold(0.0, f64::max)
    }

    /// Hadamard bound: product of the row norms, an upper bound on `|det|`.
    pub fn hadamard_bound(&self) -> f64 {
        self.row_norms().iter().product()
    }

    /// Determinant: Bareiss for exact kinds, partially pivoted elimination
    /// for floats.
    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() || self.rows == 0 {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        match self.kind()? {
            ScalarKind::Complex => Ok(Scalar::Complex(det_pivoted(self.complex_rows()))),
            _ => self.det_bareiss(),
        }
    }

    /// Rank with the default tolerance.
    pub fn rank(&self) -> Result<usize> {
        self.rank_with_tolerance(default_tolerance())
    }

    /// Exact kinds: exact row rank. Floats: fully pivoted elimination that
    /// stops once the largest remaining pivot is below `tol` times the
    /// largest row norm.
    pub fn rank_with_tolerance(&self, tol: f64) -> Result<usize> {
        if self.rows == 0 || self.cols == 0 {
            return Ok(0);
        }
        match self.kind()? {
            ScalarKind::Complex => {
                let cutoff = tol * self.row_norms().into_iter().fold(0.0, f64::max);
                Ok(rank_pivoted(self.complex_rows(), cutoff))
            }
            k => self.rank_exact(k),
        }
    }

    fn rank_exact(&self, kind: ScalarKind) -> Result<usize> {
        let mut a: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.promote(kind)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let inv = a[rank][col].try_inv()?;
            for i in rank + 1..self.rows {
                if a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].try_mul(&inv)?;
                for j in col..self.cols {
                    a[i][j] = a[i][j].try_sub(&f.try_mul(&a[rank][j])?)?;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        Ok(rank)
    }

    /// Inverse by Gauss-Jordan elimination (partial pivoting for floats).
    pub fn inverse(&self) -> Result<Matrix<Scalar>> {
        if !self.is_square() || self.rows == 0 {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let kind = self.kind()?;
        let mut a: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut row: Vec<Scalar> = self.row(i).iter().map(|e| e.promote(kind)).collect::<Result<_>>()?;
                row.extend((0..n).map(|j| Scalar::from_i64((i == j) as i64, kind)));
                Ok(row)
            })
            .collect::<Result<_>>()?;
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = if kind.is_exact() {
                (col..n).find(|&i| !a[i][col].is_zero())
            } else {
                (col..n)
                    .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                    .filter(|&i| a[i][col].abs() > default_tolerance() * 1e-6 * scale)
            };
            let p = pivot.ok_or(Error::Singular)?;
            a.swap(col, p);
            let inv = a[col][col].try_inv()?;
            for j in 0..2 * n {
                a[col][j] = a[col][j].try_mul(&inv)?;
            }
            for i in 0..n {
                if i == col || a[i][col].is_exactly_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                for j in 0..2 * n {
                    a[i][j] = a[i][j].try_sub(&f.try_mul(&a[col][j])?)?;
                }
            }
        }
        Matrix::from_rows(a.into_iter().map(|row| row[n..].to_vec()).collect())
    }

    /// Largest entry magnitude of `self - other`.
    pub fn max_deviation(&self, other: &Matrix<Scalar>) -> Result<f64> {
        Ok(self.try_sub(other)?.max_abs())
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_exactly_zero)
    }
}

fn det_pivoted(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm()))
            .unwrap_or(k);
        if a[p][k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k + 1..n {
                let v = a[k][j];
                a[i][j] -= f * v;
            }
        }
    }
    det
}

fn rank_pivoted(mut a: Vec<Vec<Complex64>>, cutoff: f64) -> usize {
    let (rows, cols) = (a.len(), a[0].len());
    let mut col_order: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    while rank < rows.min(cols) {
        let mut best = (rank, rank, 0.0);
        for i in rank..rows {
            for (jj, &j) in col_order.iter().enumerate().skip(rank) {
                let v = a[i][j].norm();
                if v > best.2 {
                    best = (i, jj, v);
                }
            }
        }
        if best.2 <= cutoff {
            break;
        }
        a.swap(rank, best.0);
        col_order.swap(rank, best.1);
        let pc = col_order[rank];
        for i in rank + 1..rows {
            let f = a[i][pc] / a[rank][pc];
            for &j in &col_order[rank..] {
                let v = a[rank][j];
                a[i][j] -= f * v;
            }
        }
        rank += 1;
    }
    rank
}

impl<R: fmt::Display> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entries[i * self.cols + j])?;
            }
        }
        Ok(())
    }
}

impl FromStr for Matrix<Scalar> {
    type Err = Error;

    /// Rows separated by `;`, entries by `,`.
    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(|row| row.split(',').map(str::parse::<Scalar>).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let m = Matrix::from_rows(rows)?;
        m.kind()?;
        Ok(m)
    }
}
