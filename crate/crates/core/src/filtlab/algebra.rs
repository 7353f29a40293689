use serde::Serialize;

use crate::error::{input, invariant, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{is_zero_vec, Matrix};

/// `num / den` with representatives and a coordinate map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quot {
    /// Representatives of a basis of the quotient, as columns.
    pub reps: Matrix,
    /// Applied to an element of `num`, gives its coordinates in the quotient.
    pub coord: Matrix,
}

impl Quot {
    pub fn new(num: &Matrix, den: &Matrix) -> Quot {
        let field = num.field();
        let n = num.rows();
        let both = Matrix::hstack(field, n, &[den, num]);
        let piv = both.pivot_cols();
        let dcols = piv.iter().filter(|&&p| p < den.cols()).count();
        let chosen: Vec<usize> = piv.iter().filter(|&&p| p >= den.cols()).map(|p| p - den.cols()).collect();
        let reps = num.select_cols(&chosen);
        let dbasis = den.column_basis();
        debug_assert_eq!(dbasis.cols(), dcols);
        let full = Matrix::hstack(field, n, &[&dbasis, &reps, &Matrix::identity(field, n)]);
        let basis = full.select_cols(&full.pivot_cols());
        let inv = basis.inverse().expect("a basis of the ambient space");
        let coord = inv.block(dbasis.cols(), 0, reps.cols(), n);
        Quot { reps, coord }
    }

    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    pub fn coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.coord.mul_vec(v)
    }

    pub fn rep(&self, i: usize) -> Vec<Scalar> {
        self.reps.col(i)
    }
}

/// A commutative finite-dimensional algebra with a length-`n` descending filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredAlgebra {
    pub field: Field,
    pub labels: Vec<String>,
    /// `mult[i][j]` holds the coordinates of `e_i e_j`.
    pub mult: Vec<Vec<Vec<Scalar>>>,
    pub unit: Vec<Scalar>,
    /// `filtration[k]` spans `F^{-k}` for `0 <= k <= n`.
    pub filtration: Vec<Matrix>,
    adapted: Adapted,
}

/// A basis compatible with the filtration; `level[b]` is the largest `k` with `b ∈ F^{-k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adapted {
    pub basis: Matrix,
    pub level: Vec<usize>,
    inv: Matrix,
}

impl Adapted {
    fn new(field: Field, dim: usize, filtration: &[Matrix]) -> Adapted {
        let mut cur = Matrix::zeros(field, dim, 0);
        let mut level = Vec::new();
        for k in (0..filtration.len().saturating_sub(1)).rev() {
            let q = Quot::new(&filtration[k], &cur);
            level.extend(std::iter::repeat_n(k, q.dim()));
            cur = Matrix::hstack(field, dim, &[&cur, &q.reps]);
        }
        if cur.cols() < dim {
            // filtration does not start at the whole algebra; complete at level 0
            let q = Quot::new(&Matrix::identity(field, dim), &cur);
            level.extend(std::iter::repeat_n(0, q.dim()));
            cur = Matrix::hstack(field, dim, &[&cur, &q.reps]);
        }
        let inv = cur.inverse().expect("adapted basis spans");
        Adapted { basis: cur, level, inv }
    }

    pub fn len(&self) -> usize {
        self.level.len()
    }

    pub fn is_empty(&self) -> bool {
        self.level.is_empty()
    }

    pub fn decompose(&self, a: &[Scalar]) -> Vec<Scalar> {
        self.inv.mul_vec(a)
    }

    pub fn element(&self, b: usize) -> Vec<Scalar> {
        self.basis.col(b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationViolation {
    pub check: String,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    pub ok: bool,
    pub violations: Vec<FiltrationViolation>,
}

impl FilteredAlgebra {
    pub fn new(
        field: Field,
        labels: Vec<String>,
        mult: Vec<Vec<Vec<Scalar>>>,
        unit: Vec<Scalar>,
        filtration: Vec<Matrix>,
    ) -> Result<FilteredAlgebra> {
        let n = labels.len();
        if mult.len() != n || mult.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return input("structure constants do not match the basis size");
        }
        if unit.len() != n {
            return input("unit has the wrong length");
        }
        if filtration.len() < 2 {
            return input("filtration needs length at least 1");
        }
        if filtration.iter().any(|f| f.rows() != n) {
            return input("filtration vectors have the wrong length");
        }
        let filtration: Vec<Matrix> = filtration.iter().map(|f| f.column_basis()).collect();
        let adapted = Adapted::new(field, n, &filtration);
        Ok(FilteredAlgebra { field, labels, mult, unit, filtration, adapted })
    }

    /// `k[x]/x^a` with `F^{-k} = (x^{steps[k]})`; `steps[0] = 0` and the last step is at least `a`.
    pub fn truncated_polynomial(field: Field, a: usize, steps: &[usize]) -> Result<FilteredAlgebra> {
        if steps.first() != Some(&0) || steps.last().is_none_or(|&s| s < a) {
            return input("steps must start at 0 and end at or above the nilpotency order");
        }
        let labels = (0..a).map(|i| if i == 0 { "1".to_string() } else { format!("x^{i}") }).collect();
        let e = |i: usize| -> Vec<Scalar> { (0..a).map(|j| if i == j { field.one() } else { field.zero() }).collect() };
        let mult = (0..a).map(|i| (0..a).map(|j| if i + j < a { e(i + j) } else { vec![field.zero(); a] }).collect()).collect();
        let filtration = steps
            .iter()
            .map(|&s| {
                let cols: Vec<Vec<Scalar>> = (s.min(a)..a).map(e).collect();
                Matrix::from_cols(field, a, &cols)
            })
            .collect();
        FilteredAlgebra::new(field, labels, mult, e(0), filtration)
    }

    /// `k[x]/x^a` with the `x`-adic filtration of length `a`.
    pub fn adic(field: Field, a: usize) -> FilteredAlgebra {
        let steps: Vec<usize> = (0..=a).collect();
        FilteredAlgebra::truncated_polynomial(field, a, &steps).expect("adic steps are valid")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Length of the filtration.
    pub fn n(&self) -> usize {
        self.filtration.len() - 1
    }

    pub fn adapted(&self) -> &Adapted {
        &self.adapted
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.mult[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = &out[k] + &(&xy * c);
                    }
                }
            }
        }
        out
    }

    /// The matrix of `y ↦ a y`.
    pub fn left_mul(&self, a: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim()).map(|k| self.mul(a, &self.basis_vec(k))).collect();
        Matrix::from_cols(self.field, self.dim(), &cols)
    }

    pub fn whole(&self) -> Matrix {
        Matrix::identity(self.field, self.dim())
    }

    pub fn zero_space(&self) -> Matrix {
        Matrix::zeros(self.field, self.dim(), 0)
    }

    /// `F^m` for any integer `m`.
    pub fn f(&self, m: i64) -> Matrix {
        if m >= 0 {
            self.whole()
        } else if (-m) as usize >= self.n() {
            self.filtration[self.n()].clone()
        } else {
            self.filtration[(-m) as usize].clone()
        }
    }

    /// Span of all products `u_i v_j`.
    pub fn product(&self, u: &Matrix, v: &Matrix) -> Matrix {
        let mut cols = Vec::new();
        for i in 0..u.cols() {
            for j in 0..v.cols() {
                cols.push(self.mul(&u.col(i), &v.col(j)));
            }
        }
        Matrix::from_cols(self.field, self.dim(), &cols).column_basis()
    }

    pub fn sum(&self, u: &Matrix, v: &Matrix) -> Matrix {
        Matrix::hstack(self.field, self.dim(), &[u, v]).column_basis()
    }

    /// `u^d`, with `u^0` the whole algebra.
    pub fn power(&self, u: &Matrix, d: usize) -> Matrix {
        (0..d).fold(self.whole(), |acc, _| self.product(&acc, u))
    }

    pub fn contains(&self, u: &Matrix, v: &[Scalar]) -> bool {
        if is_zero_vec(v) {
            return true;
        }
        let both = Matrix::hstack(self.field, self.dim(), &[u, &Matrix::from_cols(self.field, self.dim(), &[v.to_vec()])]);
        both.rank() == u.rank()
    }

    pub fn subspace_of(&self, v: &Matrix, u: &Matrix) -> bool {
        (0..v.cols()).all(|i| self.contains(u, &v.col(i)))
    }

    pub fn is_ideal(&self, u: &Matrix) -> bool {
        self.subspace_of(&self.product(&self.whole(), u), u)
    }

    pub fn same_space(&self, u: &Matrix, v: &Matrix) -> bool {
        u.rank() == v.rank() && self.subspace_of(u, v)
    }

    /// The same algebra with another filtration.
    pub fn with_filtration(&self, filtration: Vec<Matrix>) -> Result<FilteredAlgebra> {
        FilteredAlgebra::new(self.field, self.labels.clone(), self.mult.clone(), self.unit.clone(), filtration)
    }

    /// `G^i = F^{⌊i/d⌋}`, of length `dn`.
    pub fn stretch(&self, d: usize) -> FilteredAlgebra {
        let filt = (0..=d * self.n()).map(|k| self.f(-((k as i64 + d as i64 - 1) / d as i64))).collect();
        self.with_filtration(filt).expect("stretching keeps shapes")
    }

    /// `F^i = G^{di}` for a filtration of length divisible by `d`.
    pub fn veronese_filtration(&self, d: usize) -> Result<FilteredAlgebra> {
        if d == 0 || !self.n().is_multiple_of(d) {
            return input(format!("length {} is not divisible by {d}", self.n()));
        }
        let filt = (0..=self.n() / d).map(|k| self.f(-((d * k) as i64))).collect();
        self.with_filtration(filt)
    }

    /// The same algebra and filtration in the basis given by the columns of `g`.
    pub fn change_basis(&self, g: &Matrix) -> Result<FilteredAlgebra> {
        let gi = g.inverse().ok_or_else(|| crate::error::Error::Input("basis change is not invertible".into()))?;
        let n = self.dim();
        let mult = (0..n).map(|i| (0..n).map(|j| gi.mul_vec(&self.mul(&g.col(i), &g.col(j)))).collect()).collect();
        let filt = self.filtration.iter().map(|f| gi.mul(f)).collect();
        FilteredAlgebra::new(self.field, self.labels.clone(), mult, gi.mul_vec(&self.unit), filt)
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        (0..self.dim()).map(|j| if i == j { self.field.one() } else { self.field.zero() }).collect()
    }
}

/// Checks algebra axioms and the filtration conditions, with witnesses.
pub fn validate_filtration(r: &FilteredAlgebra) -> FiltrationReport {
    let mut v = Vec::new();
    let mut fail = |check: &str, witness: String| v.push(FiltrationViolation { check: check.into(), witness });
    let n = r.dim();
    for i in 0..n {
        for j in 0..n {
            let (ei, ej) = (r.basis_vec(i), r.basis_vec(j));
            if r.mul(&ei, &ej) != r.mul(&ej, &ei) {
                fail("commutative", format!("e{i} e{j}"));
            }
            for k in 0..n {
                let ek = r.basis_vec(k);
                if r.mul(&r.mul(&ei, &ej), &ek) != r.mul(&ei, &r.mul(&ej, &ek)) {
                    fail("associative", format!("e{i} e{j} e{k}"));
                }
            }
        }
        if r.mul(&r.unit, &r.basis_vec(i)) != r.basis_vec(i) {
            fail("unit", format!("e{i}"));
        }
    }
    let len = r.n();
    if r.filtration[0].rank() != n {
        fail("F^0 is everything", format!("dim F^0 = {}", r.filtration[0].rank()));
    }
    if r.filtration[len].cols() != 0 {
        fail("F^-n = 0", format!("dim F^-{len} = {}", r.filtration[len].cols()));
    }
    for k in 0..len {
        if !r.subspace_of(&r.filtration[k + 1], &r.filtration[k]) {
            fail("descending", format!("F^-{} not inside F^-{k}", k + 1));
        }
    }
    for k in 0..=len {
        if !r.is_ideal(&r.filtration[k]) {
            fail("ideal", format!("F^-{k}"));
        }
    }
    for i in 1..len {
        for j in i..len {
            let p = r.product(&r.filtration[i], &r.filtration[j]);
            if !r.subspace_of(&p, &r.f(-((i + j) as i64))) {
                fail("multiplicative", format!("F^-{i} F^-{j} not inside F^-{}", i + j));
            }
        }
    }
    FiltrationReport { ok: v.is_empty(), violations: v }
}

fn require_valid(r: &FilteredAlgebra) -> Result<()> {
    let rep = validate_filtration(r);
    if !rep.ok {
        let w = &rep.violations[0];
        return invariant(format!("invalid filtered algebra: {} ({})", w.check, w.witness));
    }
    Ok(())
}

pub(crate) fn ensure_valid(r: &FilteredAlgebra) -> Result<()> {
    require_valid(r)
}

/// The `d`-refinement `G^i = F^j I^r + F^{j-1}` for `i = jd - r`, `0 <= r < d`.
pub fn refine(r: &FilteredAlgebra, ideal: &Matrix, d: usize) -> Result<FilteredAlgebra> {
    require_valid(r)?;
    if d == 0 {
        return input("refinement degree must be positive");
    }
    if ideal.rows() != r.dim() {
        return input("ideal vectors have the wrong length");
    }
    let ideal = ideal.column_basis();
    if !r.is_ideal(&ideal) {
        return input("I is not an ideal");
    }
    if !r.subspace_of(&r.power(&ideal, d), &r.f(-1)) {
        return input(format!("I^{d} is not inside F^-1"));
    }
    let filt: Vec<Matrix> = (0..=d * r.n())
        .map(|k| {
            let j = -((k / d) as i64);
            let rem = k % d;
            r.sum(&r.product(&r.f(j), &r.power(&ideal, rem)), &r.f(j - 1))
        })
        .collect();
    let g = r.with_filtration(filt)?;
    for i in 0..=r.n() {
        if !r.same_space(&g.f(-((d * i) as i64)), &r.f(-(i as i64))) {
            return invariant(format!("refinement misses G^{} = F^{}", -((d * i) as i64), -(i as i64)));
        }
    }
    require_valid(&g)?;
    Ok(g)
}

/// Checks that `f` (columns = images of basis vectors) is a unital algebra map respecting filtrations.
pub fn check_filtered_map(r: &FilteredAlgebra, s: &FilteredAlgebra, f: &Matrix) -> Result<()> {
    if f.shape() != (s.dim(), r.dim()) {
        return input("map has the wrong shape");
    }
    if r.n() != s.n() {
        return input("filtrations have different lengths");
    }
    if f.mul_vec(&r.unit) != s.unit {
        return invariant("map is not unital");
    }
    for i in 0..r.dim() {
        for j in 0..r.dim() {
            let (ei, ej) = (r.basis_vec(i), r.basis_vec(j));
            if f.mul_vec(&r.mul(&ei, &ej)) != s.mul(&f.mul_vec(&ei), &f.mul_vec(&ej)) {
                return invariant(format!("map is not multiplicative on e{i} e{j}"));
            }
        }
    }
    for k in 0..=r.n() {
        if !s.subspace_of(&f.mul(&r.filtration[k]), &s.filtration[k]) {
            return invariant(format!("map does not preserve F^-{k}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let q = Field::Rational;
        assert!(validate_filtration(&FilteredAlgebra::adic(q, 1)).ok);
        assert!(validate_filtration(&FilteredAlgebra::adic(q, 2)).ok);
        let r = FilteredAlgebra::adic(q, 3);
        // F^-1 = span(x + 1·x^2 ... ) replaced by span(1 + x): not an ideal
        let bad = Matrix::from_cols(q, 3, &[vec![q.one(), q.one(), q.zero()]]);
        let mut filt = r.filtration.clone();
        filt[1] = bad;
        let rep = validate_filtration(&r.with_filtration(filt).unwrap());
        assert!(!rep.ok);
        assert!(rep.violations.iter().any(|v| v.check == "ideal"));
    }

    #[test]
    fn refine_x4() {
        let q = Field::Rational;
        let r = FilteredAlgebra::truncated_polynomial(q, 4, &[0, 2, 4]).unwrap();
        let x = Matrix::from_cols(q, 4, &[r.basis_vec(1)]);
        let ideal = r.product(&r.whole(), &x);
        let g = refine(&r, &ideal, 2).unwrap();
        let pw = |s: usize| -> Matrix {
            let cols: Vec<Vec<Scalar>> = (s..4).map(|i| r.basis_vec(i)).collect();
            Matrix::from_cols(q, 4, &cols)
        };
        for k in 1..=4 {
            assert!(r.same_space(&g.f(-(k as i64)), &pw(k)), "G^-{k}");
        }
        assert!(refine(&r, &ideal, 1).is_err());
        let same = refine(&r, &r.f(-1), 1).unwrap();
        assert_eq!(same.filtration.len(), r.filtration.len());
        for k in 0..=2 {
            assert!(r.same_space(&same.filtration[k], &r.filtration[k]));
        }
    }

    #[test]
    fn stretch_and_veronese() {
        let q = Field::Prime(7);
        let r = FilteredAlgebra::adic(q, 3);
        let s = r.stretch(2);
        assert_eq!(s.n(), 6);
        assert!(validate_filtration(&s).ok);
        let v = s.veronese_filtration(2).unwrap();
        for k in 0..=3 {
            assert!(r.same_space(&v.filtration[k], &r.filtration[k]));
        }
    }
}
