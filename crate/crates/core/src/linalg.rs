//! Dense matrices over a [`Field`] with exact elimination.
//!
//! Storage is always dense row-major. Rank computations on large matrices
//! switch to a sparse-row elimination; everything that needs an echelon form
//! uses dense first-pivot reduction so results are reproducible.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::{pow_mod, Field, Scalar};

/// Matrices with more entries than this use sparse elimination for `rank`.
pub const SPARSE_THRESHOLD: usize = 1 << 14;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_text()).collect();
            write!(f, "[{}]", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { field, rows, cols, data }
    }

    /// Builds from row vectors; all rows must have length `cols`.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Matrix {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Matrix { field, rows: n, cols, data }
    }

    /// Builds from column vectors of length `rows`.
    pub fn from_cols(field: Field, rows: usize, cols: &[Vec<Scalar>]) -> Matrix {
        Matrix::from_fn(field, rows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_fn(field, rows.len(), cols, |r, c| field.int(rows[r][c]))
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Scalar) {
        let i = r * self.cols + c;
        self.data[i] = &self.data[i] + v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.field, self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let b = o.get(k, c);
                    if !b.is_zero() {
                        out.add_at(r, c, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        let mut out = vec![self.field.zero(); self.rows];
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let a = self.get(r, c);
                if !a.is_zero() {
                    *o = &*o + &(a * x);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.shape(), o.shape(), "shape mismatch in sum");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.shape(), o.shape(), "shape mismatch in difference");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&self.field.int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * s).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    /// Horizontal concatenation; all parts must have `rows` rows.
    pub fn hstack(field: Field, rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.rows, rows);
            out.set_block(0, off, m);
            off += m.cols;
        }
        out
    }

    pub fn vstack(field: Field, cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.cols, cols);
            out.set_block(off, 0, m);
            off += m.rows;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, m: &Matrix) {
        assert!(r0 + m.rows <= self.rows && c0 + m.cols <= self.cols, "block out of range");
        for r in 0..m.rows {
            for c in 0..m.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = m.get(r, c).clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(self.field, rows, cols, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, idx.len(), |r, c| self.get(r, idx[c]).clone())
    }

    pub fn kron(&self, o: &Matrix) -> Matrix {
        Matrix::from_fn(self.field, self.rows * o.rows, self.cols * o.cols, |r, c| {
            self.get(r / o.rows, c / o.cols) * o.get(r % o.rows, c % o.cols)
        })
    }

    pub fn rank(&self) -> usize {
        if self.rows * self.cols > SPARSE_THRESHOLD {
            self.rank_sparse()
        } else {
            self.rank_dense()
        }
    }

    pub fn rank_dense(&self) -> usize {
        self.rref().1.len()
    }

    pub fn rank_sparse(&self) -> usize {
        match self.field {
            Field::Prime(p) => sparse_rank(&ModP(p), self),
            Field::Rational => sparse_rank(&Rat, self),
        }
    }

    /// Reduced row echelon form with first-nonzero pivoting, and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        match self.field {
            Field::Prime(p) => rref_with(&ModP(p), self),
            Field::Rational => rref_with(&Rat, self),
        }
    }

    /// Columns spanning the kernel, one per free column of the echelon form.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, piv) = self.rref();
        let mut is_piv = vec![None; self.cols];
        for (i, &c) in piv.iter().enumerate() {
            is_piv[c] = Some(i);
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| is_piv[c].is_none()).collect();
        let mut out = Matrix::zeros(self.field, self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, self.field.one());
            for (i, &c) in piv.iter().enumerate() {
                let v = r.get(i, f);
                if !v.is_zero() {
                    out.set(c, k, -v);
                }
            }
        }
        out
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let bm = Matrix::from_cols(self.field, self.rows, &[b.to_vec()]);
        self.solve_matrix(&bm).map(|x| x.col(0))
    }

    /// Some `X` with `self * X = B`, if one exists.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, b.rows);
        let aug = Matrix::hstack(self.field, self.rows, &[self, b]);
        let (r, piv) = aug.rref();
        if piv.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (i, &c) in piv.iter().enumerate() {
            for k in 0..b.cols {
                x.set(c, k, r.get(i, self.cols + k).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve_matrix(&Matrix::identity(self.field, self.rows))?;
        Some(x)
    }

    /// Indices of a maximal set of independent columns (first-pivot choice).
    pub fn pivot_cols(&self) -> Vec<usize> {
        self.rref().1
    }

    /// Column space basis as a matrix of independent columns of `self`.
    pub fn column_basis(&self) -> Matrix {
        self.select_cols(&self.pivot_cols())
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }
}

/// Field operations used by the elimination kernels.
trait Arith {
    type E: Clone;
    fn from_scalar(&self, s: &Scalar) -> Self::E;
    fn to_scalar(&self, e: Self::E) -> Scalar;
    fn zero(&self) -> Self::E;
    fn is_zero(&self, e: &Self::E) -> bool;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `a - c * b`
    fn sub_mul(&self, a: &Self::E, c: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
}

struct ModP(u64);
struct Rat;

impl Arith for ModP {
    type E = u64;
    fn from_scalar(&self, s: &Scalar) -> u64 {
        match s {
            Scalar::P { v, .. } => *v,
            Scalar::Q(_) => panic!("rational entry in a prime-field matrix"),
        }
    }
    fn to_scalar(&self, e: u64) -> Scalar {
        Scalar::P { v: e, p: self.0 }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, e: &u64) -> bool {
        *e == 0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn sub_mul(&self, a: &u64, c: &u64, b: &u64) -> u64 {
        let p = self.0;
        (a + p - c * b % p) % p
    }
    fn inv(&self, a: &u64) -> u64 {
        pow_mod(*a, self.0 - 2, self.0)
    }
}

impl Arith for Rat {
    type E = BigRational;
    fn from_scalar(&self, s: &Scalar) -> BigRational {
        match s {
            Scalar::Q(q) => q.clone(),
            Scalar::P { .. } => panic!("prime-field entry in a rational matrix"),
        }
    }
    fn to_scalar(&self, e: BigRational) -> Scalar {
        Scalar::Q(e)
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn is_zero(&self, e: &BigRational) -> bool {
        e.is_zero()
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub_mul(&self, a: &BigRational, c: &BigRational, b: &BigRational) -> BigRational {
        a - c * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        BigRational::one() / a
    }
}

fn rref_with<A: Arith>(ar: &A, m: &Matrix) -> (Matrix, Vec<usize>) {
    let (nr, nc) = m.shape();
    let mut rows: Vec<Vec<A::E>> = (0..nr).map(|r| m.row(r).iter().map(|s| ar.from_scalar(s)).collect()).collect();
    let mut piv = Vec::new();
    let mut top = 0;
    for c in 0..nc {
        if top == nr {
            break;
        }
        let Some(pr) = (top..nr).find(|&r| !ar.is_zero(&rows[r][c])) else { continue };
        rows.swap(top, pr);
        let inv = ar.inv(&rows[top][c]);
        for x in rows[top].iter_mut().skip(c) {
            *x = ar.mul(x, &inv);
        }
        let pivot_row = rows[top].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == top || ar.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for k in c..nc {
                if !ar.is_zero(&pivot_row[k]) {
                    row[k] = ar.sub_mul(&row[k], &f, &pivot_row[k]);
                }
            }
        }
        piv.push(c);
        top += 1;
    }
    let data = rows.into_iter().flatten().map(|e| ar.to_scalar(e)).collect();
    (Matrix { field: m.field, rows: nr, cols: nc, data }, piv)
}

fn sparse_rank<A: Arith>(ar: &A, m: &Matrix) -> usize {
    use std::collections::BTreeMap;
    // pivot column -> normalized row with leading entry 1 at that column
    let mut pivots: BTreeMap<usize, Vec<(usize, A::E)>> = BTreeMap::new();
    for r in 0..m.rows {
        let mut row: Vec<(usize, A::E)> =
            m.row(r).iter().enumerate().filter(|(_, s)| !s.is_zero()).map(|(c, s)| (c, ar.from_scalar(s))).collect();
        while let Some((lead, coef)) = row.first().cloned() {
            match pivots.get(&lead) {
                Some(p) => row = axpy_sparse(ar, &row, &coef, p),
                None => {
                    let inv = ar.inv(&coef);
                    let normed = row.iter().map(|(c, x)| (*c, ar.mul(x, &inv))).collect();
                    pivots.insert(lead, normed);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// `a - c * b` for sorted sparse rows.
fn axpy_sparse<A: Arith>(ar: &A, a: &[(usize, A::E)], c: &A::E, b: &[(usize, A::E)]) -> Vec<(usize, A::E)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let zero = ar.zero();
    while i < a.len() || j < b.len() {
        let ci = a.get(i).map_or(usize::MAX, |x| x.0);
        let cj = b.get(j).map_or(usize::MAX, |x| x.0);
        if ci < cj {
            out.push(a[i].clone());
            i += 1;
        } else if cj < ci {
            let v = ar.sub_mul(&zero, c, &b[j].1);
            if !ar.is_zero(&v) {
                out.push((cj, v));
            }
            j += 1;
        } else {
            let v = ar.sub_mul(&a[i].1, c, &b[j].1);
            if !ar.is_zero(&v) {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Adds `c * x` into `acc`.
pub fn axpy(acc: &mut [Scalar], c: &Scalar, x: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(x) {
        if !b.is_zero() {
            *a = &*a + &(c * b);
        }
    }
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_ranks() {
        let q = Field::Rational;
        assert_eq!(Matrix::identity(q, 3).rank(), 3);
        assert_eq!(Matrix::zeros(q, 2, 5).rank(), 0);
        assert_eq!(Matrix::from_ints(q, &[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernels() {
        let q = Field::Rational;
        assert_eq!(Matrix::identity(q, 3).kernel_basis().cols(), 0);
        assert_eq!(Matrix::zeros(q, 3, 3).kernel_basis().cols(), 3);
        let k = Matrix::from_ints(q, &[&[1, 1]]).kernel_basis();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.get(0, 0), &-k.get(1, 0));
        assert!(!k.get(0, 0).is_zero());
    }

    #[test]
    fn solve_and_inverse() {
        let f = Field::prime(11).unwrap();
        let a = Matrix::from_ints(f, &[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(f, 2));
        let s = Matrix::from_ints(f, &[&[1, 1], &[1, 1]]);
        assert!(s.solve(&[f.int(1), f.int(0)]).is_none());
        assert!(s.solve(&[f.int(3), f.int(3)]).is_some());
    }
}
