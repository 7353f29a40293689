//! Cochain complexes on a finite window, graded maps, and the standard
//! constructions: shift, cone, tensor product, hom complex, cohomology.

use std::collections::BTreeMap;

use crate::error::{input, invariant, Result};
use crate::field::{Field, Scalar};
use crate::linalg::Matrix;

/// A cochain complex supported on `[lo, lo + dims.len() - 1]`.
///
/// `diffs[k]` is the differential from degree `lo + k` to `lo + k + 1`,
/// of shape `dims[k+1] x dims[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    field: Field,
    lo: i32,
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl Complex {
    /// Validated constructor: shapes must match and `d∘d = 0`.
    pub fn new(field: Field, lo: i32, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<Complex> {
        let c = Complex::new_unchecked(field, lo, dims, diffs)?;
        c.check_d_squared()?;
        Ok(c)
    }

    /// Checks shapes only.
    pub fn new_unchecked(field: Field, lo: i32, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<Complex> {
        if diffs.len() != dims.len().saturating_sub(1) {
            return input(format!("{} differentials for {} degrees", diffs.len(), dims.len()));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.shape() != (dims[k + 1], dims[k]) {
                return input(format!(
                    "differential in degree {} has shape {:?}, expected {:?}",
                    lo + k as i32,
                    d.shape(),
                    (dims[k + 1], dims[k])
                ));
            }
            if d.field() != field {
                return input("differential over the wrong field");
            }
        }
        Ok(Complex { field, lo, dims, diffs })
    }

    pub fn zero(field: Field) -> Complex {
        Complex { field, lo: 0, dims: Vec::new(), diffs: Vec::new() }
    }

    /// `k^dim` in a single degree.
    pub fn concentrated(field: Field, degree: i32, dim: usize) -> Complex {
        Complex { field, lo: degree, dims: vec![dim], diffs: Vec::new() }
    }

    /// The two-term complex `k^a --m--> k^b` in degrees `lo, lo+1`.
    pub fn two_term(lo: i32, m: Matrix) -> Result<Complex> {
        let f = m.field();
        Complex::new(f, lo, vec![m.cols(), m.rows()], vec![m])
    }

    pub fn check_d_squared(&self) -> Result<()> {
        for k in 1..self.diffs.len() {
            if !self.diffs[k].mul(&self.diffs[k - 1]).is_zero() {
                return invariant(format!("d∘d ≠ 0 starting in degree {}", self.lo + k as i32 - 1));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn lo(&self) -> i32 {
        self.lo
    }
    /// Top of the window; `lo - 1` for an empty window.
    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }
    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: i32) -> usize {
        if k < self.lo || k > self.hi() {
            0
        } else {
            self.dims[(k - self.lo) as usize]
        }
    }

    /// Differential from degree `k` to `k+1` (a zero matrix outside the window).
    pub fn d(&self, k: i32) -> Matrix {
        self.d_ref(k).cloned().unwrap_or_else(|| Matrix::zeros(self.field, self.dim(k + 1), self.dim(k)))
    }

    pub fn d_ref(&self, k: i32) -> Option<&Matrix> {
        if k < self.lo {
            return None;
        }
        self.diffs.get((k - self.lo) as usize)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Index of the first basis vector of degree `k` in the total basis.
    pub fn offset(&self, k: i32) -> usize {
        let upto = (k - self.lo).clamp(0, self.dims.len() as i32) as usize;
        self.dims[..upto].iter().sum()
    }

    /// Degree of the total basis vector `idx`.
    pub fn degree_of(&self, idx: usize) -> i32 {
        let mut acc = 0;
        for (i, d) in self.dims.iter().enumerate() {
            acc += d;
            if idx < acc {
                return self.lo + i as i32;
            }
        }
        panic!("index {idx} outside a complex of total dimension {acc}")
    }

    /// The differential as one square matrix on the total basis.
    pub fn total_differential(&self) -> Matrix {
        let n = self.total_dim();
        let mut m = Matrix::zeros(self.field, n, n);
        for k in self.degrees() {
            if let Some(d) = self.d_ref(k) {
                m.set_block(self.offset(k + 1), self.offset(k), d);
            }
        }
        m
    }

    /// Applies the differential to a total-basis vector.
    pub fn apply_d(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.total_dim()];
        for k in self.degrees() {
            let Some(d) = self.d_ref(k) else { continue };
            let o = self.offset(k);
            let part = &v[o..o + self.dim(k)];
            if part.iter().all(Scalar::is_zero) {
                continue;
            }
            let img = d.mul_vec(part);
            let t = self.offset(k + 1);
            for (i, x) in img.into_iter().enumerate() {
                out[t + i] = x;
            }
        }
        out
    }

    /// Drops zero-dimensional degrees at both ends of the window.
    pub fn trimmed(&self) -> Complex {
        let first = self.dims.iter().position(|&d| d > 0);
        let Some(first) = first else { return Complex::zero(self.field) };
        let last = self.dims.iter().rposition(|&d| d > 0).unwrap();
        Complex {
            field: self.field,
            lo: self.lo + first as i32,
            dims: self.dims[first..=last].to_vec(),
            diffs: self.diffs[first..last].to_vec(),
        }
    }

    /// Equality up to zero padding of the window.
    pub fn same_as(&self, o: &Complex) -> bool {
        self.trimmed() == o.trimmed()
    }

    /// `C[n]`: degree k holds `C^{k+n}`, differential multiplied by `(-1)^n`.
    pub fn shift(&self, n: i32) -> Complex {
        let s = self.field.sign(n as i64);
        Complex { field: self.field, lo: self.lo - n, dims: self.dims.clone(), diffs: self.diffs.iter().map(|d| d.scale(&s)).collect() }
    }

    /// The complex with the same spaces and differential scaled by `s`.
    pub fn scaled(&self, s: &Scalar) -> Complex {
        Complex { field: self.field, lo: self.lo, dims: self.dims.clone(), diffs: self.diffs.iter().map(|d| d.scale(s)).collect() }
    }

    /// Direct sum; in each degree the summands appear in the given order.
    pub fn direct_sum(field: Field, parts: &[&Complex]) -> Complex {
        let nonempty: Vec<&&Complex> = parts.iter().filter(|c| !c.dims.is_empty()).collect();
        if nonempty.is_empty() {
            return Complex::zero(field);
        }
        let lo = nonempty.iter().map(|c| c.lo).min().unwrap();
        let hi = nonempty.iter().map(|c| c.hi()).max().unwrap();
        let dims: Vec<usize> = (lo..=hi).map(|k| parts.iter().map(|c| c.dim(k)).sum()).collect();
        let diffs = (lo..hi)
            .map(|k| {
                let mut m = Matrix::zeros(field, dims[(k + 1 - lo) as usize], dims[(k - lo) as usize]);
                let (mut r, mut c) = (0, 0);
                for p in parts {
                    if let Some(d) = p.d_ref(k) {
                        m.set_block(r, c, d);
                    }
                    r += p.dim(k + 1);
                    c += p.dim(k);
                }
                m
            })
            .collect();
        Complex { field, lo, dims, diffs }
    }

    /// Cohomology dimensions, nonzero entries only.
    pub fn cohomology(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        let ranks: Vec<usize> = self.diffs.iter().map(Matrix::rank).collect();
        for (i, &dim) in self.dims.iter().enumerate() {
            let out_rank = ranks.get(i).copied().unwrap_or(0);
            let in_rank = if i > 0 { ranks[i - 1] } else { 0 };
            let h = dim - out_rank - in_rank;
            if h > 0 {
                out.insert(self.lo + i as i32, h);
            }
        }
        out
    }

    pub fn cohomology_dim(&self, k: i32) -> usize {
        let out_rank = self.d_ref(k).map_or(0, Matrix::rank);
        let in_rank = self.d_ref(k - 1).map_or(0, Matrix::rank);
        self.dim(k) - out_rank - in_rank
    }

    pub fn is_acyclic(&self) -> bool {
        self.cohomology().is_empty()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|k| if k % 2 == 0 { self.dim(k) as i64 } else { -(self.dim(k) as i64) }).sum()
    }

    /// `c ⊗ d` with `d(x⊗y) = dx⊗y + (-1)^{|x|} x⊗dy` and Kronecker bases.
    pub fn tensor(c: &Complex, d: &Complex) -> Complex {
        let field = c.field;
        if c.dims.is_empty() || d.dims.is_empty() {
            return Complex::zero(field);
        }
        let lo = c.lo + d.lo;
        let hi = c.hi() + d.hi();
        // summand (i, j) offset within degree i+j
        let off = |i: i32, j: i32| -> usize { (c.lo..i).map(|a| c.dim(a) * d.dim(i + j - a)).sum() };
        let dims: Vec<usize> = (lo..=hi).map(|k| (c.lo..=c.hi()).map(|i| c.dim(i) * d.dim(k - i)).sum()).collect();
        let mut diffs = Vec::new();
        for k in lo..hi {
            let mut m = Matrix::zeros(field, dims[(k + 1 - lo) as usize], dims[(k - lo) as usize]);
            for i in c.degrees() {
                let j = k - i;
                if d.dim(j) == 0 || c.dim(i) == 0 {
                    continue;
                }
                let src = off(i, j);
                if c.dim(i + 1) > 0 {
                    let blk = c.d(i).kron(&Matrix::identity(field, d.dim(j)));
                    m.set_block(off(i + 1, j), src, &blk);
                }
                if d.dim(j + 1) > 0 {
                    let blk = Matrix::identity(field, c.dim(i)).kron(&d.d(j)).scale(&field.sign(i as i64));
                    m.set_block(off(i, j + 1), src, &blk);
                }
            }
            diffs.push(m);
        }
        Complex { field, lo, dims, diffs }
    }

    /// `Hom(c, d)` with `d(f) = d∘f - (-1)^{|f|} f∘d`.
    ///
    /// Degree k is `⊕_i Hom(c^i, d^{i+k})` in ascending `i`; each block is a
    /// `dim d^{i+k} x dim c^i` matrix vectorized row-major.
    pub fn hom_complex(c: &Complex, d: &Complex) -> Complex {
        let field = c.field;
        if c.dims.is_empty() || d.dims.is_empty() {
            return Complex::zero(field);
        }
        let lo = d.lo - c.hi();
        let hi = d.hi() - c.lo;
        let blk = |i: i32, k: i32| c.dim(i) * d.dim(i + k);
        let off = |i: i32, k: i32| -> usize { (c.lo..i).map(|a| blk(a, k)).sum() };
        let dims: Vec<usize> = (lo..=hi).map(|k| c.degrees().map(|i| blk(i, k)).sum()).collect();
        let mut diffs = Vec::new();
        for k in lo..hi {
            let mut m = Matrix::zeros(field, dims[(k + 1 - lo) as usize], dims[(k - lo) as usize]);
            for i in c.degrees() {
                if blk(i, k) == 0 {
                    continue;
                }
                let (p, q) = (d.dim(i + k), c.dim(i));
                // d_D ∘ f lands in Hom(c^i, d^{i+k+1})
                if blk(i, k + 1) > 0 {
                    let left = d.d(i + k).kron(&Matrix::identity(field, q));
                    let cur = m.block(off(i, k + 1), off(i, k), blk(i, k + 1), blk(i, k));
                    m.set_block(off(i, k + 1), off(i, k), &cur.add(&left));
                }
                // -(-1)^k f ∘ d_C lands in Hom(c^{i-1}, d^{i+k})
                if c.dim(i - 1) > 0 {
                    let right = Matrix::identity(field, p).kron(&c.d(i - 1).transpose()).scale(&field.sign(k as i64 + 1));
                    let cur = m.block(off(i - 1, k + 1), off(i, k), blk(i - 1, k + 1), blk(i, k));
                    m.set_block(off(i - 1, k + 1), off(i, k), &cur.add(&right));
                }
            }
            diffs.push(m);
        }
        Complex { field, lo, dims, diffs }
    }

    /// `cone(f)^k = T^k ⊕ S^{k+1}` with `d = [[d_T, f], [0, -d_S]]`.
    pub fn cone(f: &GradedMap) -> Result<Complex> {
        if f.degree != 0 {
            return input(format!("cone of a map of degree {}", f.degree));
        }
        if !f.is_closed() {
            return input("cone of a map that does not commute with the differentials");
        }
        let (s, t) = (&f.source, &f.target);
        let field = s.field;
        let s1 = s.shift(1);
        let base = Complex::direct_sum(field, &[t, &s1]);
        if base.dims.is_empty() {
            return Ok(base);
        }
        let mut diffs = base.diffs.clone();
        for k in base.lo..base.hi() {
            let fk = f.comp(k + 1);
            if fk.rows() > 0 && fk.cols() > 0 {
                diffs[(k - base.lo) as usize].set_block(0, t.dim(k), &fk);
            }
        }
        Ok(Complex { diffs, ..base })
    }
}

/// A homogeneous linear map `source -> target` of degree `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub source: Complex,
    pub target: Complex,
    pub degree: i32,
    /// One matrix per source degree in the source window.
    comps: Vec<Matrix>,
}

impl GradedMap {
    pub fn new(source: Complex, target: Complex, degree: i32, comps: Vec<Matrix>) -> Result<GradedMap> {
        if comps.len() != source.dims.len() {
            return input(format!("{} components for a source window of {}", comps.len(), source.dims.len()));
        }
        for (i, m) in comps.iter().enumerate() {
            let k = source.lo + i as i32;
            if m.shape() != (target.dim(k + degree), source.dim(k)) {
                return input(format!("component in degree {k} has shape {:?}", m.shape()));
            }
        }
        Ok(GradedMap { source, target, degree, comps })
    }

    pub fn zero(source: &Complex, target: &Complex, degree: i32) -> GradedMap {
        let comps = source.degrees().map(|k| Matrix::zeros(source.field, target.dim(k + degree), source.dim(k))).collect();
        GradedMap { source: source.clone(), target: target.clone(), degree, comps }
    }

    pub fn identity(c: &Complex) -> GradedMap {
        let comps = c.dims.iter().map(|&n| Matrix::identity(c.field, n)).collect();
        GradedMap { source: c.clone(), target: c.clone(), degree: 0, comps }
    }

    /// Builds a map from a matrix on total bases (blocks outside the degree pattern must vanish).
    pub fn from_total(source: &Complex, target: &Complex, degree: i32, m: &Matrix) -> Result<GradedMap> {
        if m.shape() != (target.total_dim(), source.total_dim()) {
            return input("total matrix has the wrong shape");
        }
        let mut comps = Vec::new();
        for k in source.degrees() {
            comps.push(m.block(target.offset(k + degree), source.offset(k), target.dim(k + degree), source.dim(k)));
        }
        let g = GradedMap { source: source.clone(), target: target.clone(), degree, comps };
        if &g.total_matrix() != m {
            return input("total matrix is not homogeneous of the given degree");
        }
        Ok(g)
    }

    /// Component from source degree `k`.
    pub fn comp(&self, k: i32) -> Matrix {
        if k < self.source.lo || k > self.source.hi() {
            return Matrix::zeros(self.source.field, self.target.dim(k + self.degree), self.source.dim(k));
        }
        self.comps[(k - self.source.lo) as usize].clone()
    }

    pub fn comps(&self) -> &[Matrix] {
        &self.comps
    }

    pub fn total_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.source.field, self.target.total_dim(), self.source.total_dim());
        for k in self.source.degrees() {
            let c = &self.comps[(k - self.source.lo) as usize];
            if c.rows() > 0 && c.cols() > 0 {
                m.set_block(self.target.offset(k + self.degree), self.source.offset(k), c);
            }
        }
        m
    }

    /// `d_T ∘ f - (-1)^{|f|} f ∘ d_S`.
    pub fn differential(&self) -> GradedMap {
        let f = self.source.field;
        let s = f.sign(self.degree as i64 + 1);
        let comps = self
            .source
            .degrees()
            .map(|k| {
                let a = self.target.d(k + self.degree).mul(&self.comp(k));
                let b = self.comp(k + 1).mul(&self.source.d(k)).scale(&s);
                a.add(&b)
            })
            .collect();
        GradedMap { source: self.source.clone(), target: self.target.clone(), degree: self.degree + 1, comps }
    }

    pub fn is_closed(&self) -> bool {
        self.differential().comps.iter().all(Matrix::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Matrix::is_zero)
    }

    /// `g ∘ f`.
    pub fn compose(g: &GradedMap, f: &GradedMap) -> Result<GradedMap> {
        if !g.source.same_as(&f.target) {
            return input("composing maps whose middle complexes differ");
        }
        let comps = f.source.degrees().map(|k| g.comp(k + f.degree).mul(&f.comp(k))).collect();
        Ok(GradedMap { source: f.source.clone(), target: g.target.clone(), degree: f.degree + g.degree, comps })
    }

    pub fn add(&self, o: &GradedMap) -> GradedMap {
        assert_eq!(self.degree, o.degree);
        let comps = self.comps.iter().zip(&o.comps).map(|(a, b)| a.add(b)).collect();
        GradedMap { comps, ..self.clone() }
    }

    pub fn scale(&self, s: &Scalar) -> GradedMap {
        let comps = self.comps.iter().map(|a| a.scale(s)).collect();
        GradedMap { comps, ..self.clone() }
    }

    /// `(f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y)` on the bases of [`Complex::tensor`].
    pub fn tensor(f: &GradedMap, g: &GradedMap) -> GradedMap {
        let field = f.source.field;
        let (s, t) = (Complex::tensor(&f.source, &g.source), Complex::tensor(&f.target, &g.target));
        let off = |c: &Complex, d: &Complex, i: i32, j: i32| -> usize { (c.lo..i).map(|a| c.dim(a) * d.dim(i + j - a)).sum() };
        let deg = f.degree + g.degree;
        let mut out = GradedMap::zero(&s, &t, deg);
        for k in s.degrees() {
            let mut m = Matrix::zeros(field, t.dim(k + deg), s.dim(k));
            for i in f.source.degrees() {
                let j = k - i;
                let (a, b) = (f.comp(i), g.comp(j));
                if a.rows() * a.cols() * b.rows() * b.cols() == 0 {
                    continue;
                }
                let blk = a.kron(&b).scale(&field.sign((g.degree * i) as i64));
                m.set_block(off(&f.target, &g.target, i + f.degree, j + g.degree), off(&f.source, &g.source, i, j), &blk);
            }
            out.comps[(k - s.lo) as usize] = m;
        }
        out
    }

    /// Ranks of the induced map on cohomology, degree by degree.
    pub fn induced_on_cohomology(&self) -> Vec<InducedMap> {
        induced_map(&self.source, &self.target, self.degree, &|k| self.comp(k))
    }

    /// Whether the induced map on cohomology is bijective in every degree.
    pub fn is_quasi_isomorphism(&self) -> bool {
        self.induced_on_cohomology().iter().all(InducedMap::is_iso)
    }
}

/// The map `H^k(S) -> H^{k+r}(T)` in one degree.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct InducedMap {
    pub degree: i32,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl InducedMap {
    pub fn is_iso(&self) -> bool {
        self.rank == self.source_dim && self.rank == self.target_dim
    }
}

/// Induced map on cohomology of a closed map given by its components.
///
/// The rank is `rank([f·Z | B]) - rank(B)` where `Z` spans the cocycles of
/// the source and `B` the coboundaries of the target.
pub fn induced_map(s: &Complex, t: &Complex, r: i32, comp: &dyn Fn(i32) -> Matrix) -> Vec<InducedMap> {
    let field = s.field;
    let lo = s.lo.min(t.lo - r);
    let hi = s.hi().max(t.hi() - r);
    let mut out = Vec::new();
    for k in lo..=hi {
        let hs = s.cohomology_dim(k);
        let ht = t.cohomology_dim(k + r);
        if hs == 0 && ht == 0 {
            continue;
        }
        let rank = if hs == 0 {
            0
        } else {
            let z = s.d(k).kernel_basis();
            let fz = comp(k).mul(&z);
            let b = t.d(k + r - 1);
            let rb = b.rank();
            Matrix::hstack(field, t.dim(k + r), &[&fz, &b]).rank() - rb
        };
        out.push(InducedMap { degree: k, source_dim: hs, target_dim: ht, rank });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn spec_cohomology_examples() {
        let k = Complex::concentrated(q(), 0, 1);
        assert_eq!(k.cohomology(), BTreeMap::from([(0, 1)]));
        let id = Complex::two_term(0, Matrix::identity(q(), 1)).unwrap();
        assert!(id.is_acyclic());
        // 0 → ℚ² → ℚ → 0 with d = (1 1), placed in degrees −1, 0
        let c = Complex::two_term(-1, Matrix::from_ints(q(), &[&[1, 1]])).unwrap();
        assert_eq!(c.cohomology(), BTreeMap::from([(-1, 1)]));
    }

    #[test]
    fn shift_examples() {
        let c = Complex::two_term(-1, Matrix::from_ints(q(), &[&[1, 1]])).unwrap();
        assert_eq!(c.shift(0), c);
        assert_eq!(c.shift(1).shift(-1), c);
        let k = Complex::concentrated(q(), 0, 1).shift(2);
        assert_eq!((k.lo(), k.dim(-2)), (-2, 1));
        let s = c.shift(1);
        assert_eq!(s.d(-2), c.d(-1).neg());
    }

    #[test]
    fn cone_examples() {
        // cone((1 1): ℚ²[0] → ℚ[0])
        let s = Complex::concentrated(q(), 0, 2);
        let t = Complex::concentrated(q(), 0, 1);
        let f = GradedMap::new(s.clone(), t.clone(), 0, vec![Matrix::from_ints(q(), &[&[1, 1]])]).unwrap();
        let c = Complex::cone(&f).unwrap();
        assert_eq!(c.cohomology(), BTreeMap::from([(-1, 1)]));
        let zero = GradedMap::zero(&s, &t, 0);
        let cz = Complex::cone(&zero).unwrap();
        assert_eq!(cz.cohomology(), BTreeMap::from([(-1, 2), (0, 1)]));
        let ci = Complex::cone(&GradedMap::identity(&s)).unwrap();
        assert!(ci.is_acyclic());
        let bad = GradedMap::zero(&s, &t, 1);
        assert!(Complex::cone(&bad).is_err());
    }

    #[test]
    fn tensor_and_hom_units() {
        let c = Complex::two_term(-1, Matrix::from_ints(q(), &[&[1, 2], &[0, 0]])).unwrap();
        let k = Complex::concentrated(q(), 0, 1);
        assert_eq!(Complex::tensor(&c, &k), c);
        assert_eq!(Complex::hom_complex(&k, &c), c);
        let acyc = Complex::two_term(0, Matrix::identity(q(), 2)).unwrap();
        assert!(Complex::hom_complex(&acyc, &acyc).is_acyclic());
    }
}
