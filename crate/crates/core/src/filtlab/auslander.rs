use std::collections::HashMap;

use serde::Serialize;

use super::algebra::{ensure_valid, FilteredAlgebra, Quot};
use super::free::truncated_free;
use super::module::{intertwiners, is_module_map, module_hom, GradedModule, ModuleMap};
use crate::complex::Complex;
use crate::dgcat::{to_sparse, DgCategory};
use crate::error::{input, Result};
use crate::field::Scalar;
use crate::linalg::Matrix;

/// Block `(i, j)` is `F^{i-j} / F^{i-n}`; products are matrix products of blocks.
#[derive(Clone, Debug)]
pub struct AuslanderAlgebra {
    pub n: usize,
    pub blocks: Vec<Vec<Quot>>,
    /// The algebra as a one-object category, basis ordered by `(i, j, index)`.
    pub algebra: DgCategory,
}

impl AuslanderAlgebra {
    pub fn block_dims(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|row| row.iter().map(Quot::dim).collect()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().flatten().map(Quot::dim).sum()
    }

    pub fn offset(&self, i: usize, j: usize) -> usize {
        (0..i * self.n + j).map(|t| self.blocks[t / self.n][t % self.n].dim()).sum()
    }

    /// `(i, j, representative)` for every basis element.
    pub fn basis(&self) -> Vec<(usize, usize, Vec<Scalar>)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                for c in 0..self.blocks[i][j].dim() {
                    out.push((i, j, self.blocks[i][j].rep(c)));
                }
            }
        }
        out
    }
}

pub fn auslander(r: &FilteredAlgebra) -> Result<AuslanderAlgebra> {
    ensure_valid(r)?;
    let n = r.n();
    let blocks: Vec<Vec<Quot>> =
        (0..n).map(|i| (0..n).map(|j| Quot::new(&r.f(i as i64 - j as i64), &r.f(i as i64 - n as i64))).collect()).collect();
    let mut a = AuslanderAlgebra { n, blocks, algebra: DgCategory::unit(r.field) };
    let basis = a.basis();
    let dim = basis.len();
    let mut mult = Vec::with_capacity(dim);
    for (i, j, x) in &basis {
        let mut row = Vec::with_capacity(dim);
        for (j2, l, y) in &basis {
            if j != j2 {
                row.push(Vec::new());
                continue;
            }
            let c = a.blocks[*i][*l].coords(&r.mul(x, y));
            let mut v = vec![r.field.zero(); dim];
            let off = a.offset(*i, *l);
            for (k, s) in c.into_iter().enumerate() {
                v[off + k] = s;
            }
            row.push(to_sparse(&v));
        }
        mult.push(row);
    }
    let mut unit = vec![r.field.zero(); dim];
    for i in 0..n {
        let c = a.blocks[i][i].coords(&r.unit);
        let off = a.offset(i, i);
        for (k, s) in c.into_iter().enumerate() {
            unit[off + k] = s;
        }
    }
    a.algebra = DgCategory::algebra(r.field, "A", Complex::concentrated(r.field, 0, dim), mult, unit)?;
    Ok(a)
}

/// `E(M)`: the row `(M^0, M^{-1}, …, M^{-n+1})` with block `(i, j)` acting `M^{-i} -> M^{-j}`.
#[derive(Clone, Debug)]
pub struct RowModule {
    pub dims: Vec<usize>,
    /// One entry per Auslander basis element: `(i, j, matrix)`.
    pub actions: Vec<(usize, usize, Matrix)>,
}

pub fn row_module(r: &FilteredAlgebra, a: &AuslanderAlgebra, m: &GradedModule) -> Result<RowModule> {
    if m.len() != a.n {
        return input("module length differs from the filtration length");
    }
    let actions = a.basis().into_iter().map(|(i, j, x)| (i, j, m.action(r, &x, j as i64 - i as i64, i))).collect();
    Ok(RowModule { dims: m.dims.clone(), actions })
}

/// Dimension of right-module maps between rows.
pub fn row_module_hom_dim(r: &FilteredAlgebra, e1: &RowModule, e2: &RowModule) -> usize {
    let ops: Vec<(usize, usize, Matrix, Matrix)> =
        e1.actions.iter().zip(&e2.actions).map(|((i, j, a1), (_, _, a2))| (*i, *j, a1.clone(), a2.clone())).collect();
    intertwiners(r.field, &e1.dims, &e2.dims, &ops).len()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndReport {
    pub auslander_total_dim: usize,
    pub end_total_dim: usize,
    pub maps_are_homs: bool,
    pub bijective: bool,
    pub multiplicative: bool,
    pub unital: bool,
    pub ok: bool,
}

/// Compares `End(⊕ P_i)`, computed by solving for module maps, with the Auslander algebra.
pub fn end_comparison(r: &FilteredAlgebra) -> Result<EndReport> {
    let a = auslander(r)?;
    let n = a.n;
    let field = r.field;
    let frees: Vec<_> = (0..n).map(|i| truncated_free(r, i, n)).collect();
    // multiplication by x ∈ block (i, j) as a map P_j -> P_i
    let mult_map = |i: usize, j: usize, x: &[Scalar]| -> ModuleMap {
        (0..n)
            .map(|k| {
                let (src, tgt) = (&frees[j].comps[k], &frees[i].comps[k]);
                let cols: Vec<Vec<Scalar>> = (0..src.dim()).map(|c| tgt.coords(&r.mul(x, &src.rep(c)))).collect();
                Matrix::from_cols(field, tgt.dim(), &cols)
            })
            .collect()
    };
    let flat = |f: &ModuleMap| -> Vec<Scalar> { f.iter().flat_map(|m| m.data().to_vec()).collect() };
    let mut end_total = 0;
    let mut homs_ok = true;
    let mut bijective = true;
    let mut images: HashMap<(usize, usize), Vec<ModuleMap>> = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            let hom = module_hom(r, &frees[j].module, &frees[i].module)?;
            end_total += hom.len();
            let maps: Vec<ModuleMap> = (0..a.blocks[i][j].dim()).map(|c| mult_map(i, j, &a.blocks[i][j].rep(c))).collect();
            homs_ok &= maps.iter().all(|f| is_module_map(r, &frees[j].module, &frees[i].module, f));
            let len = flat(&mult_map(i, j, &r.unit)).len();
            let span = Matrix::from_cols(field, len, &hom.iter().map(flat).collect::<Vec<_>>());
            let ims = Matrix::from_cols(field, len, &maps.iter().map(flat).collect::<Vec<_>>());
            let both = Matrix::hstack(field, len, &[&span, &ims]);
            bijective &= hom.len() == maps.len() && ims.rank() == maps.len() && both.rank() == span.rank();
            images.insert((i, j), maps);
        }
    }
    let mut multiplicative = true;
    let basis = a.basis();
    for (i, j, x) in &basis {
        for (j2, l, y) in &basis {
            if j != j2 {
                continue;
            }
            let lhs: ModuleMap = mult_map(*i, *j, x).iter().zip(mult_map(*j, *l, y).iter()).map(|(f, g)| f.mul(g)).collect();
            let prod = a.blocks[*i][*l].coords(&r.mul(x, y));
            let mut rhs: ModuleMap = images[&(*i, *l)].first().map_or_else(
                || (0..n).map(|k| Matrix::zeros(field, frees[*i].comps[k].dim(), frees[*l].comps[k].dim())).collect(),
                |f| f.iter().map(|m| Matrix::zeros(field, m.rows(), m.cols())).collect(),
            );
            for (c, s) in prod.iter().enumerate() {
                rhs = rhs.iter().zip(&images[&(*i, *l)][c]).map(|(acc, f)| acc.add(&f.scale(s))).collect();
            }
            multiplicative &= lhs == rhs;
        }
    }
    let unital = (0..n).all(|i| {
        let id: ModuleMap = frees[i].module.dims.iter().map(|&d| Matrix::identity(field, d)).collect();
        mult_map(i, i, &r.unit) == id
    });
    let ok = homs_ok && bijective && multiplicative && unital && end_total == a.total_dim();
    Ok(EndReport {
        auslander_total_dim: a.total_dim(),
        end_total_dim: end_total,
        maps_are_homs: homs_ok,
        bijective,
        multiplicative,
        unital,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcat::validate_category;
    use crate::field::Field;

    #[test]
    fn dual_numbers_and_cubic() {
        for field in [Field::Rational, Field::Prime(7)] {
            let r = FilteredAlgebra::adic(field, 2);
            let a = auslander(&r).unwrap();
            assert_eq!(a.total_dim(), 5);
            assert!(validate_category(&a.algebra).ok);
            assert!(end_comparison(&r).unwrap().ok);
            let r = FilteredAlgebra::adic(field, 3);
            let a = auslander(&r).unwrap();
            assert_eq!(a.total_dim(), 14);
            assert!(validate_category(&a.algebra).ok);
            assert!(end_comparison(&r).unwrap().ok);
        }
    }

    #[test]
    fn rows_of_frees() {
        let r = FilteredAlgebra::adic(Field::Rational, 3);
        let a = auslander(&r).unwrap();
        let p: Vec<_> = (0..3).map(|i| truncated_free(&r, i, 3).module).collect();
        for i in 0..3 {
            for j in 0..3 {
                let e = (row_module(&r, &a, &p[i]).unwrap(), row_module(&r, &a, &p[j]).unwrap());
                assert_eq!(row_module_hom_dim(&r, &e.0, &e.1), module_hom(&r, &p[i], &p[j]).unwrap().len());
            }
        }
    }
}
