//! Twisted complexes over a dg category.
//!
//! A shifted object `A[k]` has `hom(A[k], B[l]) = hom(A, B)[l-k]` with
//! differential `(-1)^l d`; composition is unchanged. A morphism between
//! twisted complexes is a matrix `f[j][i]` from source term `i` to target
//! term `j`. `δ[(i, j)]` with `i < j` maps term `j` to term `i`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::Complex;
use crate::dgcat::{basis_vec, materialize, DgCat, DgCategory};
use crate::error::{input, invariant, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{axpy, is_zero_vec, Matrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftedObject {
    pub obj: usize,
    pub shift: i32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedComplex {
    pub terms: Vec<ShiftedObject>,
    /// `delta[(i, j)]`, `i < j`: element of `hom(obj_j, obj_i)` of degree `1 + s_i - s_j`.
    pub delta: BTreeMap<(usize, usize), Vec<Scalar>>,
}

impl TwistedComplex {
    /// A single term `A[shift]`.
    pub fn object(obj: usize, shift: i32) -> TwistedComplex {
        TwistedComplex { terms: vec![ShiftedObject { obj, shift }], delta: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `T[n]`: every term shifted by `n`, δ multiplied by `(-1)^n`.
    pub fn shift(&self, field: Field, n: i32) -> TwistedComplex {
        let s = field.sign(n as i64);
        TwistedComplex {
            terms: self.terms.iter().map(|t| ShiftedObject { obj: t.obj, shift: t.shift + n }).collect(),
            delta: self.delta.iter().map(|(k, v)| (*k, v.iter().map(|x| x * &s).collect())).collect(),
        }
    }

    /// Concatenation with block-diagonal δ.
    pub fn concat(&self, o: &TwistedComplex) -> TwistedComplex {
        let n = self.terms.len();
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        let mut delta = self.delta.clone();
        for ((i, j), v) in &o.delta {
            delta.insert((i + n, j + n), v.clone());
        }
        TwistedComplex { terms, delta }
    }
}

/// A homogeneous morphism of twisted complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwMor {
    pub degree: i32,
    /// `blocks[j][i]` is a total vector of `hom(src_i, tgt_j)`.
    pub blocks: Vec<Vec<Vec<Scalar>>>,
}

impl TwMor {
    pub fn zero<C: DgCat + ?Sized>(c: &C, s: &TwistedComplex, t: &TwistedComplex, degree: i32) -> TwMor {
        let blocks =
            t.terms.iter().map(|tj| s.terms.iter().map(|si| vec![c.field().zero(); c.hom(si.obj, tj.obj).total_dim()]).collect()).collect();
        TwMor { degree, blocks }
    }

    pub fn add(&self, o: &TwMor) -> TwMor {
        assert_eq!(self.degree, o.degree, "adding morphisms of different degrees");
        let blocks = self
            .blocks
            .iter()
            .zip(&o.blocks)
            .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect())
            .collect();
        TwMor { degree: self.degree, blocks }
    }

    pub fn scale(&self, s: &Scalar) -> TwMor {
        let blocks = self.blocks.iter().map(|r| r.iter().map(|a| a.iter().map(|x| x * s).collect()).collect()).collect();
        TwMor { degree: self.degree, blocks }
    }

    pub fn sub(&self, o: &TwMor) -> TwMor {
        let f = self.blocks.iter().flatten().flatten().next().or_else(|| o.blocks.iter().flatten().flatten().next());
        match f {
            Some(x) => self.add(&o.scale(&x.field().int(-1))),
            None => self.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().all(|b| is_zero_vec(b))
    }
}

/// `hom(A[k], B[l]) = hom(A, B)[l - k]` with differential `(-1)^l d`.
pub fn shift_hom<C: DgCat + ?Sized>(c: &C, x: &ShiftedObject, y: &ShiftedObject) -> Complex {
    let h = c.hom(x.obj, y.obj);
    h.shift(y.shift - x.shift).scaled(&c.field().sign(x.shift as i64))
}

/// Base degree of block `(j, i)` of a morphism of degree `m`.
fn block_degree(s: &TwistedComplex, t: &TwistedComplex, m: i32, i: usize, j: usize) -> i32 {
    m + t.terms[j].shift - s.terms[i].shift
}

/// δ as a degree-one endomorphism.
pub fn delta_mor<C: DgCat + ?Sized>(c: &C, t: &TwistedComplex) -> TwMor {
    let mut m = TwMor::zero(c, t, t, 1);
    for ((i, j), v) in &t.delta {
        m.blocks[*i][*j] = v.clone();
    }
    m
}

/// `d_Σ f`: blockwise `(-1)^{t_j} d`.
fn d_sigma<C: DgCat + ?Sized>(c: &C, s: &TwistedComplex, t: &TwistedComplex, f: &TwMor) -> TwMor {
    let field = c.field();
    let blocks = t
        .terms
        .iter()
        .enumerate()
        .map(|(j, tj)| {
            s.terms
                .iter()
                .enumerate()
                .map(|(i, si)| {
                    let d = c.hom(si.obj, tj.obj).apply_d(&f.blocks[j][i]);
                    d.iter().map(|x| x * &field.sign(tj.shift as i64)).collect()
                })
                .collect()
        })
        .collect();
    TwMor { degree: f.degree + 1, blocks }
}

/// `g ∘ f` for `f: r -> s`, `g: s -> t`; matrix product without signs.
pub fn tw_compose<C: DgCat + ?Sized>(c: &C, r: &TwistedComplex, s: &TwistedComplex, t: &TwistedComplex, g: &TwMor, f: &TwMor) -> TwMor {
    let mut out = TwMor::zero(c, r, t, g.degree + f.degree);
    for (k, tk) in t.terms.iter().enumerate() {
        for (i, ri) in r.terms.iter().enumerate() {
            let acc = &mut out.blocks[k][i];
            for (j, sj) in s.terms.iter().enumerate() {
                let (gb, fb) = (&g.blocks[k][j], &f.blocks[j][i]);
                if is_zero_vec(gb) || is_zero_vec(fb) {
                    continue;
                }
                let p = c.compose(ri.obj, sj.obj, tk.obj, gb, fb);
                axpy(acc, &c.field().one(), &p);
            }
        }
    }
    out
}

/// `d_tw f = d_Σ f + δ_t f - (-1)^{|f|} f δ_s`.
pub fn tw_d<C: DgCat + ?Sized>(c: &C, s: &TwistedComplex, t: &TwistedComplex, f: &TwMor) -> TwMor {
    let field = c.field();
    let mut out = d_sigma(c, s, t, f);
    if !t.delta.is_empty() {
        out = out.add(&tw_compose(c, s, t, t, &delta_mor(c, t), f));
    }
    if !s.delta.is_empty() {
        let fd = tw_compose(c, s, s, t, f, &delta_mor(c, s));
        out = out.add(&fd.scale(&field.sign(f.degree as i64 + 1)));
    }
    out
}

pub fn tw_identity<C: DgCat + ?Sized>(c: &C, t: &TwistedComplex) -> TwMor {
    let mut m = TwMor::zero(c, t, t, 0);
    for (i, ti) in t.terms.iter().enumerate() {
        m.blocks[i][i] = c.identity(ti.obj);
    }
    m
}

/// Checks indices, degrees, strict upper triangularity and `d_Σ δ + δ² = 0`.
pub fn validate_twisted<C: DgCat + ?Sized>(c: &C, t: &TwistedComplex) -> Result<()> {
    let n = t.terms.len();
    for term in &t.terms {
        if term.obj >= c.num_objects() {
            return input(format!("twisted complex refers to missing object {}", term.obj));
        }
    }
    for ((i, j), v) in &t.delta {
        if *i >= *j || *j >= n {
            return input(format!("δ entry ({i},{j}) is not strictly upper triangular"));
        }
        let h = c.hom(t.terms[*j].obj, t.terms[*i].obj);
        if v.len() != h.total_dim() {
            return input(format!("δ entry ({i},{j}) has the wrong length"));
        }
        let want = 1 + t.terms[*i].shift - t.terms[*j].shift;
        if (0..v.len()).any(|k| !v[k].is_zero() && h.degree_of(k) != want) {
            return input(format!("δ entry ({i},{j}) is not of degree {want} in the base"));
        }
    }
    let d = delta_mor(c, t);
    let lhs = d_sigma(c, t, t, &d).add(&tw_compose(c, t, t, t, &d, &d));
    if !lhs.is_zero() {
        return invariant("twisted complex violates dδ + δ² = 0");
    }
    Ok(())
}

/// The hom complex between two twisted complexes, with its coordinate layout.
///
/// Degree `m` is `⊕_{j, i} hom(src_i, tgt_j)^{m + t_j - s_i}` with `j` outer.
#[derive(Clone, Debug)]
pub struct TwHom {
    pub source: TwistedComplex,
    pub target: TwistedComplex,
    pub complex: Complex,
}

impl TwHom {
    fn layout<C: DgCat + ?Sized>(c: &C, s: &TwistedComplex, t: &TwistedComplex, m: i32) -> Vec<(usize, usize, usize)> {
        // (j, i, dim) in order
        let mut out = Vec::new();
        for j in 0..t.terms.len() {
            for i in 0..s.terms.len() {
                let h = c.hom(s.terms[i].obj, t.terms[j].obj);
                out.push((j, i, h.dim(block_degree(s, t, m, i, j))));
            }
        }
        out
    }

    pub fn new<C: DgCat + ?Sized>(c: &C, s: &TwistedComplex, t: &TwistedComplex) -> TwHom {
        let field = c.field();
        let mut lo = i32::MAX;
        let mut hi = i32::MIN;
        for tj in &t.terms {
            for si in &s.terms {
                let h = c.hom(si.obj, tj.obj);
                if h.total_dim() == 0 {
                    continue;
                }
                let trimmed = h.trimmed();
                lo = lo.min(trimmed.lo() - tj.shift + si.shift);
                hi = hi.max(trimmed.hi() - tj.shift + si.shift);
            }
        }
        if lo > hi {
            return TwHom { source: s.clone(), target: t.clone(), complex: Complex::zero(field) };
        }
        let dims: Vec<usize> = (lo..=hi).map(|m| Self::layout(c, s, t, m).iter().map(|x| x.2).sum()).collect();
        let mut diffs = Vec::new();
        let stub = TwHom { source: s.clone(), target: t.clone(), complex: Complex::zero(field) };
        for m in lo..hi {
            let (n0, n1) = (dims[(m - lo) as usize], dims[(m + 1 - lo) as usize]);
            let mut mat = Matrix::zeros(field, n1, n0);
            for col in 0..n0 {
                let f = stub.mor_from_coords(c, m, &basis_vec(field, n0, col));
                let df = tw_d(c, s, t, &f);
                for (r, x) in stub.coords_of(c, &df).into_iter().enumerate() {
                    if !x.is_zero() {
                        mat.set(r, col, x);
                    }
                }
            }
            diffs.push(mat);
        }
        let complex = Complex::new_unchecked(field, lo, dims, diffs).expect("shapes are consistent by construction");
        TwHom { source: s.clone(), target: t.clone(), complex }
    }

    /// Coordinates of a homogeneous morphism in the degree piece `f.degree`.
    pub fn coords_of<C: DgCat + ?Sized>(&self, c: &C, f: &TwMor) -> Vec<Scalar> {
        let (s, t) = (&self.source, &self.target);
        let mut out = Vec::new();
        for (j, i, dim) in Self::layout(c, s, t, f.degree) {
            let h = c.hom(s.terms[i].obj, t.terms[j].obj);
            let k = block_degree(s, t, f.degree, i, j);
            let b = &f.blocks[j][i];
            let o = h.offset(k);
            debug_assert!(b.iter().enumerate().all(|(x, v)| v.is_zero() || (x >= o && x < o + dim)), "block has the wrong degree");
            out.extend_from_slice(&b[o..o + dim]);
        }
        out
    }

    /// Morphism of degree `m` from coordinates in the degree piece `m`.
    pub fn mor_from_coords<C: DgCat + ?Sized>(&self, c: &C, m: i32, v: &[Scalar]) -> TwMor {
        let (s, t) = (&self.source, &self.target);
        let mut f = TwMor::zero(c, s, t, m);
        let mut pos = 0;
        for (j, i, dim) in Self::layout(c, s, t, m) {
            let h = c.hom(s.terms[i].obj, t.terms[j].obj);
            let o = h.offset(block_degree(s, t, m, i, j));
            f.blocks[j][i][o..o + dim].clone_from_slice(&v[pos..pos + dim]);
            pos += dim;
        }
        f
    }

    /// Total-basis vector of a homogeneous morphism.
    pub fn total_of<C: DgCat + ?Sized>(&self, c: &C, f: &TwMor) -> Vec<Scalar> {
        let mut out = vec![c.field().zero(); self.complex.total_dim()];
        let coords = self.coords_of(c, f);
        let o = self.complex.offset(f.degree);
        if self.complex.dim(f.degree) > 0 {
            out[o..o + coords.len()].clone_from_slice(&coords);
        }
        out
    }

    /// Total index of basis element `idx` of the base hom inside block `(j, i)`.
    pub fn position<C: DgCat + ?Sized>(&self, c: &C, j: usize, i: usize, idx: usize) -> usize {
        let (s, t) = (&self.source, &self.target);
        let h = c.hom(s.terms[i].obj, t.terms[j].obj);
        let k = h.degree_of(idx);
        let m = k - t.terms[j].shift + s.terms[i].shift;
        let mut pos = self.complex.offset(m);
        for (jj, ii, dim) in Self::layout(c, s, t, m) {
            if (jj, ii) == (j, i) {
                return pos + idx - h.offset(k);
            }
            pos += dim;
        }
        unreachable!("block ({j},{i}) is part of every layout")
    }

    /// Splits a total-basis vector into homogeneous morphisms.
    pub fn mors_of_total<C: DgCat + ?Sized>(&self, c: &C, v: &[Scalar]) -> Vec<TwMor> {
        let mut out = Vec::new();
        for m in self.complex.degrees() {
            let o = self.complex.offset(m);
            let part = &v[o..o + self.complex.dim(m)];
            if !is_zero_vec(part) {
                out.push(self.mor_from_coords(c, m, part));
            }
        }
        out
    }
}

/// The full subcategory of twisted complexes on `objs`, computed lazily.
pub struct TwCategory<'a, C: DgCat + ?Sized> {
    pub base: &'a C,
    pub objs: Vec<TwistedComplex>,
    homs: Vec<TwHom>,
}

impl<'a, C: DgCat + ?Sized> TwCategory<'a, C> {
    pub fn new(base: &'a C, objs: Vec<TwistedComplex>) -> Result<TwCategory<'a, C>> {
        for t in &objs {
            validate_twisted(base, t)?;
        }
        let n = objs.len();
        let homs = (0..n * n).map(|k| TwHom::new(base, &objs[k / n], &objs[k % n])).collect();
        Ok(TwCategory { base, objs, homs })
    }

    pub fn tw_hom(&self, a: usize, b: usize) -> &TwHom {
        &self.homs[a * self.objs.len() + b]
    }
}

impl<C: DgCat + ?Sized> DgCat for TwCategory<'_, C> {
    fn field(&self) -> Field {
        self.base.field()
    }
    fn num_objects(&self) -> usize {
        self.objs.len()
    }
    fn label(&self, a: usize) -> String {
        format!("tw{a}")
    }
    fn hom(&self, a: usize, b: usize) -> &Complex {
        &self.tw_hom(a, b).complex
    }
    fn compose(&self, a: usize, b: usize, cc: usize, g: &[Scalar], f: &[Scalar]) -> Vec<Scalar> {
        let (hf, hg, hgf) = (self.tw_hom(a, b), self.tw_hom(b, cc), self.tw_hom(a, cc));
        let mut out = vec![self.field().zero(); hgf.complex.total_dim()];
        for gm in hg.mors_of_total(self.base, g) {
            for fm in hf.mors_of_total(self.base, f) {
                let p = tw_compose(self.base, &self.objs[a], &self.objs[b], &self.objs[cc], &gm, &fm);
                axpy(&mut out, &self.field().one(), &hgf.total_of(self.base, &p));
            }
        }
        out
    }
    fn identity(&self, a: usize) -> Vec<Scalar> {
        let h = self.tw_hom(a, a);
        h.total_of(self.base, &tw_identity(self.base, &self.objs[a]))
    }
}

/// The twisted-complex category on the listed objects, as a tabulated dg category.
pub fn tw_category<C: DgCat + ?Sized>(c: &C, objs: Vec<TwistedComplex>) -> Result<DgCategory> {
    let tw = TwCategory::new(c, objs)?;
    Ok(materialize(&tw))
}

/// The cone of a closed degree-0 map with its structure maps.
#[derive(Clone, Debug)]
pub struct ConeData {
    /// `T ⊕ S[1]` with δ = `[[δ_T, f], [0, -δ_S]]`.
    pub cone: TwistedComplex,
    /// `S[1] -> C`
    pub i: TwMor,
    /// `C -> S[1]`
    pub p: TwMor,
    /// `T -> C`
    pub j: TwMor,
    /// `C -> T`
    pub s: TwMor,
}

pub fn cone_tw<C: DgCat + ?Sized>(c: &C, src: &TwistedComplex, tgt: &TwistedComplex, f: &TwMor) -> Result<ConeData> {
    if f.degree != 0 {
        return input(format!("cone of a morphism of degree {}", f.degree));
    }
    if !tw_d(c, src, tgt, f).is_zero() {
        return input("cone of a morphism that is not closed");
    }
    let field = c.field();
    let s1 = src.shift(field, 1);
    let mut cone = tgt.concat(&s1);
    let nt = tgt.terms.len();
    for j in 0..nt {
        for i in 0..src.terms.len() {
            if !is_zero_vec(&f.blocks[j][i]) {
                cone.delta.insert((j, nt + i), f.blocks[j][i].clone());
            }
        }
    }
    let one = |m: &mut TwMor, r: usize, col: usize, obj: usize| m.blocks[r][col] = c.identity(obj);
    let mut i = TwMor::zero(c, &s1, &cone, 0);
    let mut p = TwMor::zero(c, &cone, &s1, 0);
    for (k, t) in s1.terms.iter().enumerate() {
        one(&mut i, nt + k, k, t.obj);
        one(&mut p, k, nt + k, t.obj);
    }
    let mut j = TwMor::zero(c, tgt, &cone, 0);
    let mut s = TwMor::zero(c, &cone, tgt, 0);
    for (k, t) in tgt.terms.iter().enumerate() {
        one(&mut j, k, k, t.obj);
        one(&mut s, k, k, t.obj);
    }
    Ok(ConeData { cone, i, p, j, s })
}

/// `ε: T[1] -> T`, the closed degree-one map with identity blocks.
pub fn epsilon<C: DgCat + ?Sized>(c: &C, t: &TwistedComplex) -> TwMor {
    let t1 = t.shift(c.field(), 1);
    let mut m = TwMor::zero(c, &t1, t, 1);
    for (k, term) in t.terms.iter().enumerate() {
        m.blocks[k][k] = c.identity(term.obj);
    }
    m
}

/// `ε^{-1}: T -> T[1]` of degree −1.
pub fn epsilon_inv<C: DgCat + ?Sized>(c: &C, t: &TwistedComplex) -> TwMor {
    let t1 = t.shift(c.field(), 1);
    let mut m = TwMor::zero(c, t, &t1, -1);
    for (k, term) in t.terms.iter().enumerate() {
        m.blocks[k][k] = c.identity(term.obj);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcat::validate_category;

    #[test]
    fn shift_hom_examples() {
        let q = Field::Rational;
        let a2 = DgCategory::a2_quiver(q);
        let x = ShiftedObject { obj: 0, shift: 0 };
        assert_eq!(shift_hom(&a2, &x, &x), *a2.hom(0, 0));
        let y = ShiftedObject { obj: 1, shift: 1 };
        let h = shift_hom(&a2, &x, &y);
        assert_eq!((h.lo(), h.total_dim()), (-1, 1));
    }

    #[test]
    fn cone_of_identity() {
        let q = Field::Rational;
        let a2 = DgCategory::a2_quiver(q);
        let a = TwistedComplex::object(0, 0);
        let id = tw_identity(&a2, &a);
        let cd = cone_tw(&a2, &a, &a, &id).unwrap();
        assert_eq!(cd.cone.terms, vec![ShiftedObject { obj: 0, shift: 0 }, ShiftedObject { obj: 0, shift: 1 }]);
        assert_eq!(cd.cone.delta, BTreeMap::from([((0, 1), vec![q.one()])]));
        validate_twisted(&a2, &cd.cone).unwrap();
        assert!(TwHom::new(&a2, &cd.cone, &cd.cone).complex.is_acyclic());
    }

    #[test]
    fn cone_of_arrow_and_category() {
        let q = Field::Rational;
        let a2 = DgCategory::a2_quiver(q);
        let (a, b) = (TwistedComplex::object(0, 0), TwistedComplex::object(1, 0));
        let mut f = TwMor::zero(&a2, &a, &b, 0);
        f.blocks[0][0] = vec![q.one()];
        let cd = cone_tw(&a2, &a, &b, &f).unwrap();
        let end = TwHom::new(&a2, &cd.cone, &cd.cone).complex;
        assert_eq!(end.cohomology(), BTreeMap::from([(0, 1)]));
        let cat = tw_category(&a2, vec![a, b, cd.cone]).unwrap();
        assert!(validate_category(&cat).ok);
    }
}
