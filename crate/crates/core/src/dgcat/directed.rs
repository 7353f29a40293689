use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::{to_sparse, validate_bimodule, validate_category, Bimodule, DgCat, DgCategory, Table};
use crate::complex::Complex;
use crate::error::{input, invariant, Result};
use crate::linalg::Matrix;

/// Data of a directed dg category: components, cross bimodules and products.
///
/// `cross[(i, j)]` for `i < j` has `B = components[i]` and `A = components[j]`,
/// so its value at `(x, y)` is the hom complex from `x ∈ A_i` to `y ∈ A_j`.
/// `mult[(i, j, k)][(x, y, z)]` is `φ_jk(y, z) × φ_ij(x, y) -> φ_ik(x, z)`.
#[derive(Clone, Debug, Default)]
pub struct DirectedInput {
    pub components: Vec<DgCategory>,
    pub cross: BTreeMap<(usize, usize), Bimodule>,
    pub mult: BTreeMap<(usize, usize, usize), HashMap<(usize, usize, usize), Table>>,
}

/// Assembles the lower-triangular category: no morphisms from `A_i` to `A_j` when `i > j`.
pub fn directed_assemble(d: &DirectedInput) -> Result<DgCategory> {
    let nc = d.components.len();
    if nc == 0 {
        return input("no components");
    }
    let field = d.components[0].field();
    if nc == 1 && d.cross.is_empty() {
        return Ok(d.components[0].clone());
    }
    for (i, c) in d.components.iter().enumerate() {
        let r = validate_category(c);
        if !r.ok {
            return invariant(format!("component {i} fails {}", r.violations[0].axiom));
        }
    }
    for (&(i, j), m) in &d.cross {
        if i >= j || j >= nc {
            return input(format!("cross bimodule ({i},{j}) is not below the diagonal"));
        }
        if m.nb != d.components[i].num_objects() || m.na != d.components[j].num_objects() {
            return input(format!("cross bimodule ({i},{j}) has the wrong object counts"));
        }
        let r = validate_bimodule(&d.components[i], &d.components[j], m);
        if !r.ok {
            return invariant(format!("cross bimodule ({i},{j}) fails {}", r.violations[0].axiom));
        }
    }
    let mut offs = vec![0];
    for c in &d.components {
        offs.push(offs.last().unwrap() + c.num_objects());
    }
    let n = offs[nc];
    let block = |x: usize| (0..nc).find(|&i| x < offs[i + 1]).unwrap();
    let local = |x: usize| x - offs[block(x)];
    let labels: Vec<String> = (0..n).map(|x| format!("{}:{}", block(x), d.components[block(x)].label(local(x)))).collect();
    let zero = Complex::zero(field);
    let hom_of = |x: usize, y: usize| -> Complex {
        let (i, j) = (block(x), block(y));
        if i == j {
            d.components[i].hom(local(x), local(y)).clone()
        } else if i < j {
            d.cross.get(&(i, j)).map_or(zero.clone(), |m| m.value(local(x), local(y)).clone())
        } else {
            zero.clone()
        }
    };
    let homs: Vec<Complex> = (0..n * n).map(|t| hom_of(t / n, t % n)).collect();
    let ids = (0..n).map(|x| d.components[block(x)].identity(local(x))).collect();
    let mut comp = HashMap::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (i, j, k) = (block(x), block(y), block(z));
                if !(i <= j && j <= k) {
                    continue;
                }
                let (lx, ly, lz) = (local(x), local(y), local(z));
                let t = if i == j && j == k {
                    d.components[i].table(lx, ly, lz).cloned()
                } else if i == j {
                    // hom(y, z) ⊂ φ_ik, hom(x, y) ⊂ A_i: precomposition
                    d.cross.get(&(i, k)).and_then(|m| m.pre.get(&(lx, ly, lz))).cloned()
                } else if j == k {
                    d.cross.get(&(i, j)).and_then(|m| m.post.get(&(ly, lz, lx))).cloned()
                } else {
                    d.mult.get(&(i, j, k)).and_then(|m| m.get(&(lx, ly, lz))).cloned()
                };
                if let Some(t) = t {
                    comp.insert((x, y, z), t);
                }
            }
        }
    }
    let c = DgCategory::new(field, labels, homs, comp, ids)?;
    let r = validate_category(&c);
    if !r.ok {
        return invariant(format!("assembled category fails {} at {:?}", r.violations[0].axiom, r.violations[0].objects));
    }
    Ok(c)
}

/// True iff every hom from a later block to an earlier block is acyclic.
pub fn check_directed<C: DgCat + ?Sized>(c: &C, partition: &[Vec<usize>]) -> Result<bool> {
    let n = c.num_objects();
    let mut seen = vec![false; n];
    for x in partition.iter().flatten() {
        if *x >= n || seen[*x] {
            return input("partition does not list every object exactly once");
        }
        seen[*x] = true;
    }
    if seen.iter().any(|s| !s) {
        return input("partition does not cover every object");
    }
    for (bi, later) in partition.iter().enumerate() {
        for earlier in &partition[..bi] {
            for &x in later {
                for &y in earlier {
                    if !c.hom(x, y).is_acyclic() {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Cohomology dimensions of every hom complex.
pub fn ext_table<C: DgCat + ?Sized>(c: &C) -> BTreeMap<(usize, usize), BTreeMap<i32, usize>> {
    let n = c.num_objects();
    (0..n * n).into_par_iter().map(|t| ((t / n, t % n), c.hom(t / n, t % n).cohomology())).collect()
}

/// Degree-zero cohomology category with induced composition.
pub fn h0_category<C: DgCat + ?Sized>(c: &C) -> Result<DgCategory> {
    let n = c.num_objects();
    let field = c.field();
    // per pair: representatives (total vectors) and a coordinate solver
    struct H0 {
        reps: Vec<Vec<crate::field::Scalar>>,
        solver: Matrix,
        nb: usize,
        off: usize,
        d0: usize,
    }
    let h0s: Vec<H0> = (0..n * n)
        .map(|t| {
            let h = c.hom(t / n, t % n);
            let (d0, off) = (h.dim(0), h.offset(0));
            let z = h.d(0).kernel_basis();
            let b = h.d(-1).column_basis();
            let both = Matrix::hstack(field, d0, &[&b, &z]);
            let piv = both.pivot_cols();
            let rep_cols: Vec<usize> = piv.iter().filter(|&&p| p >= b.cols()).map(|p| p - b.cols()).collect();
            let r = z.select_cols(&rep_cols);
            let reps = (0..r.cols())
                .map(|k| {
                    let mut v = vec![field.zero(); h.total_dim()];
                    for (i, x) in r.col(k).into_iter().enumerate() {
                        v[off + i] = x;
                    }
                    v
                })
                .collect();
            let solver = Matrix::hstack(field, d0, &[&b, &r]);
            H0 { reps, solver, nb: b.cols(), off, d0 }
        })
        .collect();
    let coords = |t: usize, v: &[crate::field::Scalar]| -> Result<Vec<crate::field::Scalar>> {
        let h = &h0s[t];
        let x = h
            .solver
            .solve(&v[h.off..h.off + h.d0])
            .ok_or_else(|| crate::error::Error::Invariant("composite of cocycles is not a cocycle".into()))?;
        Ok(x[h.nb..].to_vec())
    };
    let homs: Vec<Complex> = h0s.iter().map(|h| Complex::concentrated(field, 0, h.reps.len())).collect();
    let mut comp = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                let (tf, tg, tgf) = (a * n + b, b * n + cc, a * n + cc);
                let (nf, ng, ngf) = (h0s[tf].reps.len(), h0s[tg].reps.len(), h0s[tgf].reps.len());
                if nf * ng * ngf == 0 {
                    continue;
                }
                let mut entries = Vec::with_capacity(ng * nf);
                for g in &h0s[tg].reps {
                    for f in &h0s[tf].reps {
                        entries.push(to_sparse(&coords(tgf, &c.compose(a, b, cc, g, f))?));
                    }
                }
                comp.insert((a, b, cc), Table { n1: ng, n2: nf, out: ngf, entries });
            }
        }
    }
    let mut ids = Vec::new();
    for a in 0..n {
        ids.push(coords(a * n + a, &c.identity(a))?);
    }
    let labels = (0..n).map(|a| c.label(a)).collect();
    DgCategory::new(field, labels, homs, comp, ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcat::restricted_diagonal;
    use crate::dgcat::DgFunctor;
    use crate::field::Field;

    fn k_k_bimodule(q: Field) -> DirectedInput {
        let k = DgCategory::unit(q);
        let a2 = DgCategory::a2_quiver(q);
        let f1 = DgFunctor::from_fn(&k, &a2, vec![1], |_, _| Matrix::identity(q, 1)).unwrap();
        let f0 = DgFunctor::from_fn(&k, &a2, vec![0], |_, _| Matrix::identity(q, 1)).unwrap();
        let m = restricted_diagonal(&a2, &k, &f1, &k, &f0).unwrap();
        DirectedInput { components: vec![k.clone(), k], cross: BTreeMap::from([((0, 1), m)]), mult: BTreeMap::new() }
    }

    #[test]
    fn assemble_a2() {
        let q = Field::Rational;
        let c = directed_assemble(&k_k_bimodule(q)).unwrap();
        assert_eq!(c.hom(0, 1).total_dim(), 1);
        assert_eq!(c.hom(1, 0).total_dim(), 0);
        assert!(check_directed(&c, &[vec![0], vec![1]]).unwrap());
        assert!(!check_directed(&c, &[vec![1], vec![0]]).unwrap());
        let e = ext_table(&c);
        assert_eq!(e[&(0, 1)], BTreeMap::from([(0, 1)]));
        assert!(e[&(1, 0)].is_empty());
    }

    #[test]
    fn zero_bimodules_give_direct_sum() {
        let q = Field::Rational;
        let k = DgCategory::truncated_polynomial(q, 2);
        let c = directed_assemble(&DirectedInput { components: vec![k.clone(), k.clone()], ..Default::default() }).unwrap();
        assert_eq!(c.hom(0, 1).total_dim() + c.hom(1, 0).total_dim(), 0);
        assert_eq!(c.hom(1, 1), k.hom(0, 0));
        let single = directed_assemble(&DirectedInput { components: vec![k.clone()], ..Default::default() }).unwrap();
        assert_eq!(single, k);
    }

    #[test]
    fn h0_examples() {
        let q = Field::Rational;
        let c = DgCategory::truncated_polynomial(q, 3);
        assert_eq!(h0_category(&c).unwrap(), c);
        // hom 0 → k → k → 0 with d = 1 in degrees −1, 0
        let h = Complex::two_term(-1, Matrix::identity(q, 1)).unwrap();
        let e = Complex::concentrated(q, 0, 1);
        let x = DgCategory::new(
            q,
            vec!["a".into(), "b".into()],
            vec![e.clone(), h, Complex::zero(q), e],
            HashMap::from([
                ((0, 0, 0), Table::build(q, 1, 1, 1, |_, _| vec![q.one()])),
                ((1, 1, 1), Table::build(q, 1, 1, 1, |_, _| vec![q.one()])),
                ((0, 0, 1), Table::build(q, 2, 1, 2, |g, _| g.to_vec())),
                ((0, 1, 1), Table::build(q, 1, 2, 2, |_, f| f.to_vec())),
            ]),
            vec![vec![q.one()], vec![q.one()]],
        )
        .unwrap();
        assert!(validate_category(&x).ok);
        let h0 = h0_category(&x).unwrap();
        assert_eq!(h0.hom(0, 1).total_dim(), 0);
    }
}
