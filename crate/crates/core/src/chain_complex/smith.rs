//! Smith normal form over ℤ by sparse exact elimination.
//!
//! The transforms are kept as logs of elementary operations rather than as
//! dense matrices: coboundary matrices of meshed 3-manifolds have tens of
//! thousands of columns, and only their action on vectors is ever needed.
//! Dense `U`, `V` can still be materialized for small inputs.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;

/// One elementary row or column operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryOp {
    Swap(usize, usize),
    /// `line[target] += factor · line[source]`
    AddMultiple { target: usize, source: usize, factor: BigInt },
    Negate(usize),
}

/// `D = U·M·V` with `D` diagonal, `d₁ | d₂ | …` and `U`, `V` unimodular.
///
/// `U` is the product of `row_ops` (first op applied first), `V` the product
/// of `col_ops`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    rows: usize,
    cols: usize,
    diagonal: Vec<BigInt>,
    row_ops: Vec<ElementaryOp>,
    col_ops: Vec<ElementaryOp>,
}

struct Elimination {
    rows: Vec<BTreeMap<usize, BigInt>>,
    col_index: Vec<BTreeSet<usize>>,
    row_active: Vec<bool>,
    col_active: Vec<bool>,
    live_rows: BTreeSet<usize>,
    row_ops: Vec<ElementaryOp>,
    col_ops: Vec<ElementaryOp>,
}

impl Elimination {
    fn new(m: &IntegerMatrix) -> Self {
        let mut col_index = vec![BTreeSet::new(); m.cols()];
        let mut rows = Vec::with_capacity(m.rows());
        let mut live_rows = BTreeSet::new();
        for r in 0..m.rows() {
            let row = m.row(r).clone();
            for &c in row.keys() {
                col_index[c].insert(r);
            }
            if !row.is_empty() {
                live_rows.insert(r);
            }
            rows.push(row);
        }
        Self {
            rows,
            col_index,
            row_active: vec![true; m.rows()],
            col_active: vec![true; m.cols()],
            live_rows,
            row_ops: Vec::new(),
            col_ops: Vec::new(),
        }
    }

    fn get(&self, r: usize, c: usize) -> BigInt {
        self.rows[r].get(&c).cloned().unwrap_or_default()
    }

    fn set(&mut self, r: usize, c: usize, v: BigInt) {
        if v.is_zero() {
            if self.rows[r].remove(&c).is_some() {
                self.col_index[c].remove(&r);
                if self.rows[r].is_empty() {
                    self.live_rows.remove(&r);
                }
            }
        } else {
            if self.rows[r].insert(c, v).is_none() {
                self.col_index[c].insert(r);
            }
            if self.row_active[r] {
                self.live_rows.insert(r);
            }
        }
    }

    fn row_add(&mut self, target: usize, source: usize, factor: BigInt) {
        let src: Vec<(usize, BigInt)> = self.rows[source].iter().map(|(&c, v)| (c, v.clone())).collect();
        for (c, v) in src {
            let new = self.get(target, c) + &factor * v;
            self.set(target, c, new);
        }
        self.row_ops.push(ElementaryOp::AddMultiple { target, source, factor });
    }

    fn col_add(&mut self, target: usize, source: usize, factor: BigInt) {
        let src: Vec<usize> = self.col_index[source].iter().copied().collect();
        for r in src {
            let new = self.get(r, target) + &factor * self.get(r, source);
            self.set(r, target, new);
        }
        self.col_ops.push(ElementaryOp::AddMultiple { target, source, factor });
    }

    fn negate_row(&mut self, r: usize) {
        for v in self.rows[r].values_mut() {
            *v = -std::mem::take(v);
        }
        self.row_ops.push(ElementaryOp::Negate(r));
    }

    /// Smallest nonzero absolute value among active entries, ties broken by
    /// row-major position.
    fn global_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for &r in &self.live_rows {
            for (&c, v) in &self.rows[r] {
                let a = v.abs();
                if best.as_ref().is_none_or(|(b, _, _)| a < *b) {
                    let unit = a.is_one();
                    best = Some((a, r, c));
                    if unit {
                        return best.map(|(_, r, c)| (r, c));
                    }
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    }

    /// Reduces row `r` and column `c` to the single entry `(r, c)`, which
    /// then divides every remaining active entry. Returns the final pivot.
    fn settle(&mut self, mut r: usize, mut c: usize) -> (usize, usize) {
        loop {
            let p = self.get(r, c);
            let below: Vec<usize> = self.col_index[c].iter().copied().filter(|&i| i != r).collect();
            for i in below {
                let q = self.get(i, c).div_floor(&p);
                if !q.is_zero() {
                    self.row_add(i, r, -q);
                }
            }
            let right: Vec<usize> = self.rows[r].keys().copied().filter(|&j| j != c).collect();
            for j in right {
                let q = self.get(r, j).div_floor(&p);
                if !q.is_zero() {
                    self.col_add(j, c, -q);
                }
            }
            // remainders left in the pivot row or column become the new pivot
            let mut smallest: Option<(BigInt, usize, usize)> = None;
            let candidates = self.rows[r]
                .iter()
                .filter(|(&j, _)| j != c)
                .map(|(&j, v)| (v.abs(), r, j))
                .chain(
                    self.col_index[c]
                        .iter()
                        .filter(|&&i| i != r)
                        .map(|&i| (self.get(i, c).abs(), i, c)),
                );
            for cand in candidates {
                if smallest.as_ref().is_none_or(|s| cand.0 < s.0) {
                    smallest = Some(cand);
                }
            }
            if let Some((_, i, j)) = smallest {
                r = i;
                c = j;
                continue;
            }
            if !p.abs().is_one() {
                let offending = self.live_rows.iter().find_map(|&i| {
                    (i != r && self.rows[i].values().any(|v| !v.is_multiple_of(&p))).then_some(i)
                });
                if let Some(i) = offending {
                    self.row_add(r, i, BigInt::one());
                    continue;
                }
            }
            return (r, c);
        }
    }
}

/// Logs the swaps that move pivot `k` from position `line` to `k`.
fn placement_swaps(n: usize, pivot_lines: &[usize]) -> Vec<ElementaryOp> {
    let mut pos_of: Vec<usize> = (0..n).collect();
    let mut at_pos: Vec<usize> = (0..n).collect();
    let mut ops = Vec::new();
    for (k, &line) in pivot_lines.iter().enumerate() {
        let cur = pos_of[line];
        if cur != k {
            ops.push(ElementaryOp::Swap(k, cur));
            let other = at_pos[k];
            at_pos[k] = line;
            at_pos[cur] = other;
            pos_of[line] = k;
            pos_of[other] = cur;
        }
    }
    ops
}

/// Smith normal form of `m`.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithDecomposition {
    let mut work = Elimination::new(m);
    let mut pivots = Vec::new();
    while let Some((r0, c0)) = work.global_pivot() {
        let (r, c) = work.settle(r0, c0);
        if work.get(r, c).is_negative() {
            work.negate_row(r);
        }
        pivots.push((r, c, work.get(r, c)));
        work.row_active[r] = false;
        work.col_active[c] = false;
        work.live_rows.remove(&r);
    }
    let mut row_ops = work.row_ops;
    let mut col_ops = work.col_ops;
    let pivot_rows: Vec<usize> = pivots.iter().map(|p| p.0).collect();
    let pivot_cols: Vec<usize> = pivots.iter().map(|p| p.1).collect();
    row_ops.extend(placement_swaps(m.rows(), &pivot_rows));
    col_ops.extend(placement_swaps(m.cols(), &pivot_cols));
    SmithDecomposition {
        rows: m.rows(),
        cols: m.cols(),
        diagonal: pivots.into_iter().map(|p| p.2).collect(),
        row_ops,
        col_ops,
    }
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Nonzero diagonal entries `d₁ | d₂ | …`, all positive.
    pub fn diagonal(&self) -> &[BigInt] {
        &self.diagonal
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row_ops(&self) -> &[ElementaryOp] {
        &self.row_ops
    }

    pub fn col_ops(&self) -> &[ElementaryOp] {
        &self.col_ops
    }

    pub fn d(&self) -> IntegerMatrix {
        let mut d = IntegerMatrix::zeros(self.rows, self.cols);
        for (i, v) in self.diagonal.iter().enumerate() {
            d.set(i, i, v.clone());
        }
        d
    }

    /// `U·x`.
    pub fn apply_u(&self, x: &mut [BigInt]) {
        for op in &self.row_ops {
            match op {
                ElementaryOp::Swap(i, j) => x.swap(*i, *j),
                ElementaryOp::AddMultiple { target, source, factor } => {
                    let add = factor * &x[*source];
                    x[*target] += add;
                }
                ElementaryOp::Negate(i) => x[*i] = -std::mem::take(&mut x[*i]),
            }
        }
    }

    /// `U⁻¹·x`.
    pub fn apply_u_inverse(&self, x: &mut [BigInt]) {
        for op in self.row_ops.iter().rev() {
            match op {
                ElementaryOp::Swap(i, j) => x.swap(*i, *j),
                ElementaryOp::AddMultiple { target, source, factor } => {
                    let sub = factor * &x[*source];
                    x[*target] -= sub;
                }
                ElementaryOp::Negate(i) => x[*i] = -std::mem::take(&mut x[*i]),
            }
        }
    }

    /// `Uᵀ·y`.
    pub fn apply_u_transpose(&self, y: &mut [BigInt]) {
        for op in self.row_ops.iter().rev() {
            match op {
                ElementaryOp::Swap(i, j) => y.swap(*i, *j),
                ElementaryOp::AddMultiple { target, source, factor } => {
                    let add = factor * &y[*target];
                    y[*source] += add;
                }
                ElementaryOp::Negate(i) => y[*i] = -std::mem::take(&mut y[*i]),
            }
        }
    }

    /// `V·x`.
    pub fn apply_v(&self, x: &mut [BigInt]) {
        for op in self.col_ops.iter().rev() {
            match op {
                ElementaryOp::Swap(i, j) => x.swap(*i, *j),
                ElementaryOp::AddMultiple { target, source, factor } => {
                    let add = factor * &x[*target];
                    x[*source] += add;
                }
                ElementaryOp::Negate(i) => x[*i] = -std::mem::take(&mut x[*i]),
            }
        }
    }

    /// `V⁻¹·x`.
    pub fn apply_v_inverse(&self, x: &mut [BigInt]) {
        for op in &self.col_ops {
            match op {
                ElementaryOp::Swap(i, j) => x.swap(*i, *j),
                ElementaryOp::AddMultiple { target, source, factor } => {
                    let sub = factor * &x[*target];
                    x[*source] -= sub;
                }
                ElementaryOp::Negate(i) => x[*i] = -std::mem::take(&mut x[*i]),
            }
        }
    }

    /// `(V⁻¹)ᵀ·y`.
    pub fn apply_v_inverse_transpose(&self, y: &mut [BigInt]) {
        for op in self.col_ops.iter().rev() {
            match op {
                ElementaryOp::Swap(i, j) => y.swap(*i, *j),
                ElementaryOp::AddMultiple { target, source, factor } => {
                    let sub = factor * &y[*source];
                    y[*target] -= sub;
                }
                ElementaryOp::Negate(i) => y[*i] = -std::mem::take(&mut y[*i]),
            }
        }
    }

    /// Replaces `m` by `V⁻¹·m`, working row by row on the sparse matrix.
    pub fn apply_v_inverse_to_rows(&self, m: &mut IntegerMatrix) {
        for op in &self.col_ops {
            match op {
                ElementaryOp::Swap(i, j) => m.swap_rows(*i, *j),
                ElementaryOp::AddMultiple { target, source, factor } => {
                    m.add_row_multiple(*source, *target, &-factor);
                }
                ElementaryOp::Negate(i) => m.negate_row(*i),
            }
        }
    }

    fn columns_of(n: usize, apply: impl Fn(&mut [BigInt])) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(n, n);
        for j in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[j] = BigInt::one();
            apply(&mut e);
            for (i, v) in e.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn u(&self) -> IntegerMatrix {
        Self::columns_of(self.rows, |x| self.apply_u(x))
    }

    pub fn u_inverse(&self) -> IntegerMatrix {
        Self::columns_of(self.rows, |x| self.apply_u_inverse(x))
    }

    pub fn v(&self) -> IntegerMatrix {
        Self::columns_of(self.cols, |x| self.apply_v(x))
    }

    pub fn v_inverse(&self) -> IntegerMatrix {
        Self::columns_of(self.cols, |x| self.apply_v_inverse(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain_complex::complex::SimplicialComplex;
    use crate::chain_complex::matrix::coboundary_matrix;
    use proptest::prelude::*;

    fn check(m: &IntegerMatrix) -> SmithDecomposition {
        let s = smith_normal_form(m);
        let (u, v) = (s.u(), s.v());
        assert_eq!(u.mul(m).unwrap().mul(&v).unwrap(), s.d(), "U M V != D for {m:?}");
        assert!(u.determinant().unwrap().abs().is_one());
        assert!(v.determinant().unwrap().abs().is_one());
        assert_eq!(u.mul(&s.u_inverse()).unwrap(), IntegerMatrix::identity(m.rows()));
        assert_eq!(v.mul(&s.v_inverse()).unwrap(), IntegerMatrix::identity(m.cols()));
        for w in s.diagonal().windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(s.diagonal().iter().all(|d| d.is_positive()));
        s
    }

    #[test]
    fn diag_two_three() {
        let s = check(&IntegerMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(s.diagonal(), &[BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_and_unit() {
        let s = check(&IntegerMatrix::zeros(3, 2));
        assert_eq!(s.rank(), 0);
        assert_eq!(s.u(), IntegerMatrix::identity(3));
        assert_eq!(s.v(), IntegerMatrix::identity(2));
        let s = check(&IntegerMatrix::from_rows(&[[1]]));
        assert_eq!(s.d(), IntegerMatrix::from_rows(&[[1]]));
    }

    #[test]
    fn known_four_by_four() {
        let m = IntegerMatrix::from_rows(&[
            [-6, 111, -36, 6],
            [5, -672, 210, 74],
            [0, -255, 81, 24],
            [-7, 255, -81, -10],
        ]);
        let s = check(&m);
        assert_eq!(s.diagonal(), &[BigInt::from(1), BigInt::from(3), BigInt::from(21)]);
    }

    #[test]
    fn empty_shapes() {
        check(&IntegerMatrix::zeros(0, 4));
        check(&IntegerMatrix::zeros(4, 0));
    }

    #[test]
    fn coboundaries_of_the_tetrahedron_boundary() {
        let k = SimplicialComplex::simplex_boundary(3);
        for p in 0..2 {
            let s = check(&coboundary_matrix(&k, p).unwrap());
            assert!(s.diagonal().iter().all(|d| d.is_one()));
        }
    }

    #[test]
    fn transposed_actions_agree_with_dense() {
        let m = IntegerMatrix::from_rows(&[[4, 6, 2], [6, 9, 3], [2, 8, 10]]);
        let s = check(&m);
        let y: Vec<BigInt> = [3, -1, 2].iter().map(|&v| BigInt::from(v)).collect();
        let mut a = y.clone();
        s.apply_u_transpose(&mut a);
        assert_eq!(a, s.u().transpose().mul_vec(&y));
        let mut b = y.clone();
        s.apply_v_inverse_transpose(&mut b);
        assert_eq!(b, s.v_inverse().transpose().mul_vec(&y));
    }

    proptest! {
        #[test]
        fn random_matrices(rows in 0usize..6, cols in 0usize..6, seed in any::<u64>()) {
            let mut s = seed;
            let mut data = vec![vec![0i64; cols]; rows];
            for row in data.iter_mut() {
                for v in row.iter_mut() {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let r = (s >> 33) % 17;
                    *v = if r < 6 { 0 } else { r as i64 - 11 };
                }
            }
            let m = if rows == 0 { IntegerMatrix::zeros(0, cols) } else { IntegerMatrix::from_rows(&data) };
            check(&m);
        }
    }
}
