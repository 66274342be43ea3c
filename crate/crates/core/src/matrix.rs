//! Dense matrices and vectors over [`Scalar`], with exact arithmetic for the
//! rational and quadratic kinds and a float embedding for spectral work.

use std::hash::Hash;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarKind};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    kind: ScalarKind,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn from_rows(rows_data: Vec<Vec<Scalar>>) -> Result<Self> {
        let rows = rows_data.len();
        if rows == 0 {
            return Err(Error::DimMismatch("empty matrix".into()));
        }
        let cols = rows_data[0].len();
        let kind = rows_data[0]
            .first()
            .ok_or_else(|| Error::DimMismatch("empty row".into()))?
            .kind();
        let mut data = Vec::with_capacity(rows * cols);
        for r in &rows_data {
            if r.len() != cols {
                return Err(Error::DimMismatch("ragged rows".into()));
            }
            for s in r {
                if s.kind() != kind {
                    return Err(Error::KindMismatch {
                        expected: kind,
                        got: s.kind(),
                    });
                }
                if let Scalar::Float(x) = s {
                    if !x.is_finite() {
                        return Err(Error::NonFinite);
                    }
                }
                data.push(s.clone());
            }
        }
        Ok(Matrix {
            rows,
            cols,
            kind,
            data,
        })
    }

    pub fn zeros(rows: usize, cols: usize, kind: ScalarKind) -> Self {
        Matrix {
            rows,
            cols,
            kind,
            data: vec![Scalar::zero(kind); rows * cols],
        }
    }

    pub fn identity(n: usize, kind: ScalarKind) -> Self {
        let mut m = Matrix::zeros(n, n, kind);
        for i in 0..n {
            m.set(i, i, Scalar::one(kind));
        }
        m
    }

    pub fn from_f64_rows(rows_data: &[Vec<f64>]) -> Result<Self> {
        Matrix::from_rows(
            rows_data
                .iter()
                .map(|r| r.iter().map(|&x| Scalar::Float(x)).collect())
                .collect(),
        )
    }

    pub fn from_i64_rows(rows_data: &[Vec<i64>], kind: ScalarKind) -> Result<Self> {
        Matrix::from_rows(
            rows_data
                .iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x, kind)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert_eq!(v.kind(), self.kind);
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Scalar)> {
        let cols = self.cols;
        self.data
            .iter()
            .enumerate()
            .map(move |(k, s)| ((k / cols, k % cols), s))
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows, self.kind);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if self.kind != rhs.kind {
            return Err(Error::KindMismatch {
                expected: self.kind,
                got: rhs.kind,
            });
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols, self.kind);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Scalar::zero(self.kind);
                for k in 0..self.cols {
                    if self.get(i, k).is_zero() || rhs.get(k, j).is_zero() {
                        continue;
                    }
                    acc = acc.checked_add(&self.get(i, k).checked_mul(rhs.get(k, j))?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimMismatch("matrix-vector size".into()));
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = Scalar::zero(self.kind);
            for k in 0..self.cols {
                if self.get(i, k).is_zero() || v[k].is_zero() {
                    continue;
                }
                acc = acc.checked_add(&self.get(i, k).checked_mul(&v[k])?)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Exact determinant by fraction-free-ish Gaussian elimination for exact
    /// kinds; float LU for floats.
    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::DimMismatch("det of non-square".into()));
        }
        if self.kind == ScalarKind::Float64 {
            return Ok(Scalar::Float(self.to_f64().determinant()));
        }
        let n = self.rows;
        let mut m = self.data.clone();
        let at = |m: &Vec<Scalar>, i: usize, j: usize| m[i * n + j].clone();
        let mut det = Scalar::one(self.kind);
        for col in 0..n {
            let mut pivot = None;
            for row in col..n {
                if !at(&m, row, col).is_zero() {
                    pivot = Some(row);
                    break;
                }
            }
            let Some(p) = pivot else {
                return Ok(Scalar::zero(self.kind));
            };
            if p != col {
                for j in 0..n {
                    m.swap(col * n + j, p * n + j);
                }
                det = det.neg();
            }
            let pv = at(&m, col, col);
            det = det.checked_mul(&pv)?;
            for row in (col + 1)..n {
                let factor = at(&m, row, col).checked_div(&pv)?;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let sub = factor.checked_mul(&at(&m, col, j))?;
                    m[row * n + j] = at(&m, row, j).checked_sub(&sub)?;
                }
            }
        }
        Ok(det)
    }

    /// Exact inverse via Gauss-Jordan for exact kinds, nalgebra for floats.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimMismatch("inverse of non-square".into()));
        }
        if self.kind == ScalarKind::Float64 {
            let inv = self
                .to_f64()
                .try_inverse()
                .ok_or(Error::Singular)?;
            return Matrix::from_dmatrix(&inv);
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut b = Matrix::identity(n, self.kind).data;
        let at = |m: &Vec<Scalar>, i: usize, j: usize| m[i * n + j].clone();
        for col in 0..n {
            let mut pivot = None;
            for row in col..n {
                if !at(&a, row, col).is_zero() {
                    pivot = Some(row);
                    break;
                }
            }
            let p = pivot.ok_or(Error::Singular)?;
            if p != col {
                for j in 0..n {
                    a.swap(col * n + j, p * n + j);
                    b.swap(col * n + j, p * n + j);
                }
            }
            let pv = at(&a, col, col);
            for j in 0..n {
                a[col * n + j] = at(&a, col, j).checked_div(&pv)?;
                b[col * n + j] = at(&b, col, j).checked_div(&pv)?;
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let f = at(&a, row, col);
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let sa = f.checked_mul(&at(&a, col, j))?;
                    a[row * n + j] = at(&a, row, j).checked_sub(&sa)?;
                    let sb = f.checked_mul(&at(&b, col, j))?;
                    b[row * n + j] = at(&b, row, j).checked_sub(&sb)?;
                }
            }
        }
        Ok(Matrix {
            rows: n,
            cols: n,
            kind: self.kind,
            data: b,
        })
    }

    /// Exact kernel basis (columns) of the matrix, for exact kinds only.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<Scalar>>> {
        if self.kind == ScalarKind::Float64 {
            return Err(Error::Precondition(
                "exact kernel requires exact scalars".into(),
            ));
        }
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let at = |m: &Vec<Scalar>, i: usize, j: usize| m[i * cols + j].clone();
        let mut pivot_cols = Vec::new();
        let mut r = 0usize;
        for c in 0..cols {
            let mut pivot = None;
            for row in r..rows {
                if !at(&a, row, c).is_zero() {
                    pivot = Some(row);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            if p != r {
                for j in 0..cols {
                    a.swap(r * cols + j, p * cols + j);
                }
            }
            let pv = at(&a, r, c);
            for j in 0..cols {
                a[r * cols + j] = at(&a, r, j).checked_div(&pv)?;
            }
            for row in 0..rows {
                if row == r {
                    continue;
                }
                let f = at(&a, row, c);
                if f.is_zero() {
                    continue;
                }
                for j in 0..cols {
                    let s = f.checked_mul(&at(&a, r, j))?;
                    a[row * cols + j] = at(&a, row, j).checked_sub(&s)?;
                }
            }
            pivot_cols.push(c);
            r += 1;
            if r == rows {
                break;
            }
        }
        let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
        let mut basis = Vec::new();
        for &fc in &free_cols {
            let mut v = vec![Scalar::zero(self.kind); cols];
            v[fc] = Scalar::one(self.kind);
            for (ri, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = at(&a, ri, fc).neg();
            }
            basis.push(v);
        }
        Ok(basis)
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_f64())
    }

    pub fn from_dmatrix(m: &DMatrix<f64>) -> Result<Matrix> {
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Matrix {
            rows: m.nrows(),
            cols: m.ncols(),
            kind: ScalarKind::Float64,
            data: m.transpose().iter().cloned().map(Scalar::Float).collect(),
        })
    }

    /// Largest absolute entry after float embedding.
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|s| s.to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// Sum of absolute entries after float embedding.
    pub fn l1_norm(&self) -> f64 {
        self.data.iter().map(|s| s.to_f64().abs()).sum()
    }

    /// Hash key for word deduplication: exact entries for exact kinds,
    /// entries rounded on a 1e-12 grid for floats.
    pub fn dedup_key(&self) -> MatrixKey {
        match self.kind {
            ScalarKind::Float64 => MatrixKey::Rounded(
                self.data
                    .iter()
                    .map(|s| {
                        let x = s.to_f64();
                        (x / 1e-12).round() as i128
                    })
                    .collect(),
            ),
            _ => MatrixKey::Exact(self.clone()),
        }
    }

    /// Entrywise maximum absolute difference after float embedding.
    pub fn distance_inf(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a.to_f64() - b.to_f64()).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MatrixKey {
    Exact(Matrix),
    Rounded(Vec<i128>),
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<&Scalar>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect();
        rows.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows = Vec::<Vec<Scalar>>::deserialize(de)?;
        Matrix::from_rows(rows).map_err(|e| D::Error::custom(e.to_string()))
    }
}
