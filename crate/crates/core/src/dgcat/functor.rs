use serde::Serialize;

use super::{basis_vec, degree_of_vec, DgCat, Violation};
use crate::error::{input, Result};
use crate::field::Scalar;
use crate::linalg::Matrix;

/// A dg functor given by an object map and one matrix per source object pair.
///
/// `hom[a * n + b]` maps the total basis of `src.hom(a, b)` to that of
/// `tgt.hom(F a, F b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgFunctor {
    pub obj_map: Vec<usize>,
    pub hom: Vec<Matrix>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FunctorReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl DgFunctor {
    pub fn identity<C: DgCat + ?Sized>(c: &C) -> DgFunctor {
        let n = c.num_objects();
        let hom = (0..n * n).map(|i| Matrix::identity(c.field(), c.hom(i / n, i % n).total_dim())).collect();
        DgFunctor { obj_map: (0..n).collect(), hom }
    }

    /// Builds a functor from a closure on source object pairs; shapes are checked.
    pub fn from_fn<S: DgCat + ?Sized, T: DgCat + ?Sized>(
        src: &S,
        tgt: &T,
        obj_map: Vec<usize>,
        f: impl Fn(usize, usize) -> Matrix,
    ) -> Result<DgFunctor> {
        let n = src.num_objects();
        if obj_map.len() != n || obj_map.iter().any(|&x| x >= tgt.num_objects()) {
            return input("object map does not fit the categories");
        }
        let mut hom = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let m = f(a, b);
                let want = (tgt.hom(obj_map[a], obj_map[b]).total_dim(), src.hom(a, b).total_dim());
                if m.shape() != want {
                    return input(format!("functor matrix on ({a},{b}) has shape {:?}, expected {want:?}", m.shape()));
                }
                hom.push(m);
            }
        }
        Ok(DgFunctor { obj_map, hom })
    }

    pub fn num_source_objects(&self) -> usize {
        self.obj_map.len()
    }

    pub fn matrix(&self, a: usize, b: usize) -> &Matrix {
        &self.hom[a * self.obj_map.len() + b]
    }

    pub fn apply(&self, a: usize, b: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.matrix(a, b).mul_vec(v)
    }

    /// `g ∘ f` (apply `f` first).
    pub fn compose(g: &DgFunctor, f: &DgFunctor) -> DgFunctor {
        let n = f.obj_map.len();
        let obj_map = f.obj_map.iter().map(|&x| g.obj_map[x]).collect();
        let hom = (0..n * n)
            .map(|i| {
                let (a, b) = (i / n, i % n);
                g.matrix(f.obj_map[a], f.obj_map[b]).mul(f.matrix(a, b))
            })
            .collect();
        DgFunctor { obj_map, hom }
    }
}

/// Checks degree preservation, compatibility with d, composition and units.
pub fn validate_functor<S: DgCat + ?Sized, T: DgCat + ?Sized>(src: &S, tgt: &T, f: &DgFunctor) -> FunctorReport {
    let n = src.num_objects();
    let field = src.field();
    let mut v = Vec::new();
    let lab = |a: usize| src.label(a);
    if f.obj_map.len() != n || f.obj_map.iter().any(|&x| x >= tgt.num_objects()) || f.hom.len() != n * n {
        v.push(Violation { axiom: "shape".into(), objects: vec![], basis: vec![] });
        return FunctorReport { ok: false, violations: v };
    }
    for a in 0..n {
        for b in 0..n {
            let (hs, ht) = (src.hom(a, b), tgt.hom(f.obj_map[a], f.obj_map[b]));
            if f.matrix(a, b).shape() != (ht.total_dim(), hs.total_dim()) {
                v.push(Violation { axiom: "shape".into(), objects: vec![lab(a), lab(b)], basis: vec![] });
                continue;
            }
            for i in 0..hs.total_dim() {
                let e = basis_vec(field, hs.total_dim(), i);
                let img = f.apply(a, b, &e);
                if let Some(dg) = degree_of_vec(ht, &img) {
                    if dg != hs.degree_of(i) {
                        v.push(Violation { axiom: "degree".into(), objects: vec![lab(a), lab(b)], basis: vec![i] });
                    }
                } else if !img.iter().all(Scalar::is_zero) {
                    v.push(Violation { axiom: "degree".into(), objects: vec![lab(a), lab(b)], basis: vec![i] });
                }
                if f.apply(a, b, &hs.apply_d(&e)) != ht.apply_d(&img) {
                    v.push(Violation { axiom: "differential".into(), objects: vec![lab(a), lab(b)], basis: vec![i] });
                }
            }
        }
    }
    if !v.is_empty() {
        return FunctorReport { ok: false, violations: v };
    }
    for a in 0..n {
        if f.apply(a, a, &src.identity(a)) != tgt.identity(f.obj_map[a]) {
            v.push(Violation { axiom: "identity".into(), objects: vec![lab(a)], basis: vec![] });
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (hf, hg) = (src.hom(a, b), src.hom(b, c));
                for gi in 0..hg.total_dim() {
                    let g = basis_vec(field, hg.total_dim(), gi);
                    let fg = f.apply(b, c, &g);
                    for fi in 0..hf.total_dim() {
                        let x = basis_vec(field, hf.total_dim(), fi);
                        let lhs = f.apply(a, c, &src.compose(a, b, c, &g, &x));
                        let rhs = tgt.compose(f.obj_map[a], f.obj_map[b], f.obj_map[c], &fg, &f.apply(a, b, &x));
                        if lhs != rhs {
                            v.push(Violation { axiom: "composition".into(), objects: vec![lab(a), lab(b), lab(c)], basis: vec![gi, fi] });
                        }
                    }
                }
            }
        }
    }
    FunctorReport { ok: v.is_empty(), violations: v.into_iter().take(super::MAX_WITNESSES).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcat::DgCategory;
    use crate::field::Field;

    #[test]
    fn unit_inclusion_is_a_functor() {
        let q = Field::Rational;
        let k = DgCategory::unit(q);
        let d = DgCategory::truncated_polynomial(q, 2);
        let f = DgFunctor::from_fn(&k, &d, vec![0], |_, _| Matrix::from_ints(q, &[&[1], &[0]])).unwrap();
        assert!(validate_functor(&k, &d, &f).ok);
        let bad = DgFunctor::from_fn(&k, &d, vec![0], |_, _| Matrix::from_ints(q, &[&[0], &[1]])).unwrap();
        assert!(!validate_functor(&k, &d, &bad).ok);
        let id = DgFunctor::identity(&d);
        assert_eq!(DgFunctor::compose(&id, &f), f);
    }
}
