//! Exact rational scalars and dense linear algebra.
//!
//! Every elimination in the crate goes through [`Matrix::rref`]; rank,
//! kernels, linear solves and determinants are all read off the same
//! Gauss-Jordan pass.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let r = Rational::from_str(s).ok()?;
    if r.denom().is_zero() {
        return None;
    }
    Some(r)
}

/// Rendering used everywhere rationals are printed: `p/q`, or `p` when the
/// denominator is one.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Sylvester inertia of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub positives: usize,
    pub negatives: usize,
    pub zeros: usize,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn diagonal(diag: &[Rational]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    /// Builds a matrix from row vectors; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            entries.extend(r.iter().cloned());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect();
        Self::from_rows(&rows).expect("ragged integer matrix")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Rational>]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
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

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.get(i, i).is_zero() && (0..i).all(|j| *self.get(i, j) == -self.get(j, i))
            })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    /// Gauss-Jordan elimination. Returns the reduced matrix, the pivot
    /// columns and the product of the raw pivots times the sign of the
    /// row permutation (the determinant when the matrix is square and of
    /// full rank).
    fn gauss_jordan(&self) -> (Matrix, Vec<usize>, Rational) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut factor = Rational::one();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                m.swap_rows(p, row);
                factor = -factor;
            }
            let pivot = m.get(row, col).clone();
            factor *= &pivot;
            if !pivot.is_one() {
                let inv = pivot.recip();
                for j in col..m.cols {
                    let v = m.get(row, j) * &inv;
                    m.set(row, j, v);
                }
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let pj = m.get(row, j);
                    if pj.is_zero() {
                        continue;
                    }
                    let v = m.get(r, j) - &f * pj;
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots, factor)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rref(&self) -> Rref {
        let (matrix, pivots, _) = self.gauss_jordan();
        Rref {
            matrix,
            rank: pivots.len(),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let (_, pivots, factor) = self.gauss_jordan();
        Ok(if pivots.len() == self.rows {
            factor
        } else {
            Rational::zero()
        })
    }

    /// Some solution of `self · x = b`, or `None` when the system is
    /// inconsistent. Free variables are set to zero.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let r = aug.rref();
        if r.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &p) in r.pivots.iter().enumerate() {
            x[p] = r.matrix.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Basis of the right kernel, one vector per free column, in column order.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let r = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !r.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &p) in r.pivots.iter().enumerate() {
                    v[p] = -r.matrix.get(row, f);
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::one());
        }
        let r = aug.rref();
        if r.rank < n || r.pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.matrix.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Inertia by symmetric (congruence) elimination. A zero diagonal with a
    /// nonzero off-diagonal entry `a_ij` is repaired by adding row/column `j`
    /// to row/column `i`, which puts `2·a_ij` on the diagonal.
    pub fn symmetric_signature(&self) -> Result<Signature> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = self.rows;
        let mut a = self.clone();
        let (mut positives, mut negatives) = (0, 0);
        let mut k = 0;
        while k < n {
            if let Some(i) = (k..n).find(|&i| !a.get(i, i).is_zero()) {
                a.swap_sym(i, k);
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a.get(i, j).is_zero())
            {
                a.add_sym(i, j);
                a.swap_sym(i, k);
            } else {
                break;
            }
            let p = a.get(k, k).clone();
            if p.is_positive() {
                positives += 1;
            } else {
                negatives += 1;
            }
            for r in k + 1..n {
                let f = a.get(r, k) / &p;
                if f.is_zero() {
                    continue;
                }
                for c in k + 1..n {
                    let v = a.get(r, c) - &f * a.get(k, c);
                    a.set(r, c, v);
                }
            }
            for r in k + 1..n {
                a.set(r, k, Rational::zero());
                a.set(k, r, Rational::zero());
            }
            k += 1;
        }
        Ok(Signature {
            positives,
            negatives,
            zeros: n - positives - negatives,
        })
    }

    fn swap_sym(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.swap_rows(a, b);
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    // row_i += row_j, then col_i += col_j
    fn add_sym(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            let v = self.get(i, c) + self.get(j, c);
            self.set(i, c, v);
        }
        for r in 0..self.rows {
            let v = self.get(r, i) + self.get(r, j);
            self.set(r, i, v);
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(fmt_rational).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
