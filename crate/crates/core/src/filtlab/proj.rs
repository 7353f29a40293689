use std::collections::{BTreeMap, HashMap};

use super::algebra::{check_filtered_map, ensure_valid, FilteredAlgebra, Quot};
use crate::complex::Complex;
use crate::dgcat::{to_sparse, DgCategory, DgFunctor, Table};
use crate::error::{input, invariant, Result};
use crate::hypercube::DgCube;
use crate::linalg::Matrix;

fn proj_hom(r: &FilteredAlgebra, i: usize, j: usize) -> Quot {
    let n = r.n() as i64;
    Quot::new(&r.f(j as i64 - i as i64), &r.f(j as i64 - n))
}

/// The projectives `P_0, …, P_{n-1}` with `hom(P_i, P_j) = F^{j-i} / F^{j-n}` in degree 0.
pub fn proj_dgcat(r: &FilteredAlgebra) -> Result<DgCategory> {
    ensure_valid(r)?;
    let n = r.n();
    let field = r.field;
    let q: Vec<Quot> = (0..n * n).map(|t| proj_hom(r, t / n, t % n)).collect();
    let lmul: Vec<Vec<Matrix>> = q.iter().map(|h| (0..h.dim()).map(|i| r.left_mul(&h.rep(i))).collect()).collect();
    let homs = q.iter().map(|h| Complex::concentrated(field, 0, h.dim())).collect();
    let mut comp = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (g, f, out) = (&q[b * n + c], &q[a * n + b], &q[a * n + c]);
                let mut entries = Vec::with_capacity(g.dim() * f.dim());
                for gi in 0..g.dim() {
                    let m = out.coord.mul(&lmul[b * n + c][gi]).mul(&f.reps);
                    entries.extend((0..f.dim()).map(|fi| to_sparse(&m.col(fi))));
                }
                comp.insert((a, b, c), Table { n1: g.dim(), n2: f.dim(), out: out.dim(), entries });
            }
        }
    }
    let ids = (0..n).map(|a| q[a * n + a].coords(&r.unit)).collect();
    DgCategory::new(field, (0..n).map(|i| format!("P{i}")).collect(), homs, comp, ids)
}

/// `P_i ↦ P_{di}` from `proj(F)` to `proj(G)` for a `d`-refinement `G` of `F`.
pub fn refinement_functor(f: &FilteredAlgebra, g: &FilteredAlgebra, d: usize) -> Result<DgFunctor> {
    if g.n() != d * f.n() || g.dim() != f.dim() || g.mult != f.mult {
        return input("not a refinement of the same algebra");
    }
    for i in 0..=f.n() {
        if !f.same_space(&g.f(-((d * i) as i64)), &f.f(-(i as i64))) {
            return invariant(format!("G^{} differs from F^{}", -((d * i) as i64), -(i as i64)));
        }
    }
    let (src, tgt) = (proj_dgcat(f)?, proj_dgcat(g)?);
    let obj_map = (0..f.n()).map(|i| d * i).collect();
    DgFunctor::from_fn(&src, &tgt, obj_map, |a, b| {
        let (qs, qt) = (proj_hom(f, a, b), proj_hom(g, d * a, d * b));
        let cols: Vec<_> = (0..qs.dim()).map(|c| qt.coords(&qs.rep(c))).collect();
        Matrix::from_cols(f.field, qt.dim(), &cols)
    })
}

/// The functor `proj(r) -> proj(s)` induced by a filtered algebra map `f`.
pub fn algebra_map_functor(r: &FilteredAlgebra, s: &FilteredAlgebra, f: &Matrix) -> Result<DgFunctor> {
    check_filtered_map(r, s, f)?;
    let (src, tgt) = (proj_dgcat(r)?, proj_dgcat(s)?);
    DgFunctor::from_fn(&src, &tgt, (0..r.n()).collect(), |a, b| {
        let (qs, qt) = (proj_hom(r, a, b), proj_hom(s, a, b));
        let cols: Vec<_> = (0..qs.dim()).map(|c| qt.coords(&f.mul_vec(&qs.rep(c)))).collect();
        Matrix::from_cols(r.field, qt.dim(), &cols)
    })
}

/// Inputs of a refinement square.
#[derive(Clone, Debug)]
pub struct RefinementData {
    pub r: FilteredAlgebra,
    pub s: FilteredAlgebra,
    /// Columns are the images of the basis of `r`.
    pub f: Matrix,
    pub ideal_r: Matrix,
    pub ideal_s: Matrix,
    pub d: usize,
}

/// Vertices `proj(F)`, `proj(G)` (direction 0), `proj(F')` (direction 1), `proj(G')`.
pub fn refinement_square(data: &RefinementData) -> Result<DgCube> {
    let RefinementData { r, s, f, ideal_r, ideal_s, d } = data;
    let image = f.mul(ideal_r);
    if !s.subspace_of(&image, ideal_s) {
        return invariant("f(I) is not inside I'");
    }
    let g = super::algebra::refine(r, ideal_r, *d)?;
    let g2 = super::algebra::refine(s, ideal_s, *d)?;
    let vertices = BTreeMap::from([(0, proj_dgcat(r)?), (1, proj_dgcat(&g)?), (2, proj_dgcat(s)?), (3, proj_dgcat(&g2)?)]);
    let edges = BTreeMap::from([
        ((0, 0), refinement_functor(r, &g, *d)?),
        ((2, 0), refinement_functor(s, &g2, *d)?),
        ((0, 1), algebra_map_functor(r, s, f)?),
        ((1, 1), algebra_map_functor(&g, &g2, f)?),
    ]);
    DgCube::new(2, vertices, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcat::{validate_category, validate_functor};
    use crate::field::Field;

    #[test]
    fn refinement_of_x4() {
        let q = Field::Rational;
        let r = FilteredAlgebra::truncated_polynomial(q, 4, &[0, 2, 4]).unwrap();
        let x = Matrix::from_cols(q, 4, &[r.basis_vec(1)]);
        let ideal = r.product(&r.whole(), &x);
        let data = RefinementData { r: r.clone(), s: r.clone(), f: Matrix::identity(q, 4), ideal_r: ideal.clone(), ideal_s: ideal, d: 2 };
        let cube = refinement_square(&data).unwrap();
        for m in 0..4 {
            assert!(validate_category(cube.vertex(m)).ok);
        }
        let g = super::super::algebra::refine(&r, &data.ideal_r, 2).unwrap();
        let fun = refinement_functor(&r, &g, 2).unwrap();
        assert!(validate_functor(&proj_dgcat(&r).unwrap(), &proj_dgcat(&g).unwrap(), &fun).ok);
    }
}
