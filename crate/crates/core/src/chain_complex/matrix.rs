//! Sparse matrices with arbitrary-precision integer entries.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// Row-major sparse integer matrix; absent entries are zero.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BTreeMap<usize, BigInt>>,
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}x{}", self.rows, self.cols)?;
        if self.rows * self.cols <= 400 {
            for r in 0..self.rows {
                let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            for (j, &v) in r.as_ref().iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.entries[r].get(&c).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        if v.is_zero() {
            self.entries[r].remove(&c);
        } else {
            self.entries[r].insert(c, v);
        }
    }

    /// Nonzero entries of row `r`, by column.
    /// `row[target] += factor · row[source]`.
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        let src: Vec<(usize, BigInt)> = self.entries[source].iter().map(|(&c, v)| (c, v.clone())).collect();
        for (c, v) in src {
            let new = self.get(target, c) + factor * v;
            self.set(target, c, new);
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.entries.swap(a, b);
    }

    pub fn negate_row(&mut self, r: usize) {
        for v in self.entries[r].values_mut() {
            *v = -std::mem::take(v);
        }
    }

    /// The submatrix made of rows `start..`.
    pub fn rows_from(&self, start: usize) -> Self {
        let entries: Vec<_> = self.entries.iter().skip(start).cloned().collect();
        Self { rows: entries.len(), cols: self.cols, entries }
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, BigInt> {
        &self.entries[r]
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BTreeMap::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c)).collect()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, row) in self.entries.iter().enumerate() {
            for (&c, v) in row {
                t.entries[c].insert(r, v.clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ContractViolation(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (r, row) in self.entries.iter().enumerate() {
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (&k, a) in row {
                for (&c, b) in &other.entries[k] {
                    *acc.entry(c).or_default() += a * b;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.entries[r] = acc;
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols);
        self.entries
            .iter()
            .map(|row| row.iter().map(|(&c, v)| v * &x[c]).sum())
            .collect()
    }

    /// Determinant of a square matrix by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Domain("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.to_dense();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(if n == 0 { BigInt::one() } else { sign * &a[n - 1][n - 1] })
    }

    /// True when every off-diagonal entry vanishes.
    pub fn is_diagonal(&self) -> bool {
        self.entries.iter().enumerate().all(|(r, row)| row.keys().all(|&c| c == r))
    }

    pub fn max_abs(&self) -> BigInt {
        self.entries
            .iter()
            .flat_map(|row| row.values())
            .map(|v| v.abs())
            .max()
            .unwrap_or_default()
    }
}

/// Matrix of `δ: Cᵖ(K, ℤ) → Cᵖ⁺¹(K, ℤ)` in canonical simplex order.
///
/// For `p` equal to the dimension the matrix has no rows.
pub fn coboundary_matrix(complex: &SimplicialComplex, p: usize) -> Result<IntegerMatrix> {
    match complex.dimension() {
        Some(d) if p <= d => {}
        _ => {
            return Err(Error::Domain(format!(
                "degree {p} exceeds complex dimension {:?}",
                complex.dimension()
            )))
        }
    }
    let faces = complex.face_indices(p);
    let mut m = IntegerMatrix::zeros(faces.len(), complex.count(p));
    for (r, fs) in faces.iter().enumerate() {
        for (i, &c) in fs.iter().enumerate() {
            m.set(r, c, BigInt::from(if i % 2 == 0 { 1 } else { -1 }));
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coboundary_matrix_shapes() {
        let s2 = SimplicialComplex::simplex_boundary(3);
        let d0 = coboundary_matrix(&s2, 0).unwrap();
        assert_eq!((d0.rows(), d0.cols()), (6, 4));
        for r in 0..6 {
            let vals: Vec<BigInt> = d0.row(r).values().cloned().collect();
            assert_eq!(vals.len(), 2);
            assert_eq!(vals.iter().sum::<BigInt>(), BigInt::zero());
        }
        let tri = SimplicialComplex::simplex(2);
        let d1 = coboundary_matrix(&tri, 1).unwrap();
        assert_eq!(d1, IntegerMatrix::from_rows(&[[1, -1, 1]]));
        assert!(matches!(coboundary_matrix(&tri, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn consecutive_coboundaries_compose_to_zero() {
        let s3 = SimplicialComplex::simplex_boundary(4);
        for p in 0..3 {
            let a = coboundary_matrix(&s3, p).unwrap();
            let b = coboundary_matrix(&s3, p + 1).unwrap();
            assert!(b.mul(&a).unwrap().is_zero());
        }
    }

    #[test]
    fn bareiss_determinant() {
        let m = IntegerMatrix::from_rows(&[[2, -1, 0], [1, 3, 4], [0, 5, -2]]);
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) = -52 - 2
        assert_eq!(m.determinant().unwrap(), BigInt::from(-54));
        let swap = IntegerMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(swap.determinant().unwrap(), BigInt::from(-1));
        assert_eq!(IntegerMatrix::zeros(0, 0).determinant().unwrap(), BigInt::one());
    }
}
