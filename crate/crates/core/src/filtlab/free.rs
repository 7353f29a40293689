use super::algebra::{FilteredAlgebra, Quot};
use super::module::{direct_sum, generate, is_isomorphism, is_module_map, quotient, GradedModule, ModuleMap};
use crate::error::{input, Result};
use crate::field::Scalar;
use crate::linalg::Matrix;

/// `l^len(Õ(i))`: components `F^{i-k} / F^{i-len}` with their quotient bases.
#[derive(Clone, Debug)]
pub struct TruncatedFree {
    pub index: usize,
    pub comps: Vec<Quot>,
    pub module: GradedModule,
}

pub fn truncated_free(r: &FilteredAlgebra, i: usize, len: usize) -> TruncatedFree {
    let i = i as i64;
    let den = r.f(i - len as i64);
    let comps: Vec<Quot> = (0..len).map(|k| Quot::new(&r.f(i - k as i64), &den)).collect();
    let ad = r.adapted();
    let module = GradedModule::from_fn(
        r,
        comps.iter().map(Quot::dim).collect(),
        |k| comps[k].coord.mul(&comps[k + 1].reps),
        |b, k| {
            let e = ad.element(b);
            let q = &comps[k + ad.level[b]];
            let cols: Vec<Vec<Scalar>> = (0..comps[k].dim()).map(|c| q.coords(&r.mul(&e, &comps[k].rep(c)))).collect();
            Matrix::from_cols(r.field, q.dim(), &cols)
        },
    );
    TruncatedFree { index: i as usize, comps, module }
}

/// The untruncated `Õ(i)` on a window of length `len`: components `F^{i-k}`.
pub fn rees_window(r: &FilteredAlgebra, i: usize, len: usize) -> GradedModule {
    let zero = r.zero_space();
    let comps: Vec<Quot> = (0..len).map(|k| Quot::new(&r.f(i as i64 - k as i64), &zero)).collect();
    let ad = r.adapted();
    GradedModule::from_fn(
        r,
        comps.iter().map(Quot::dim).collect(),
        |k| comps[k].coord.mul(&comps[k + 1].reps),
        |b, k| {
            let e = ad.element(b);
            let q = &comps[k + ad.level[b]];
            let cols: Vec<Vec<Scalar>> = (0..comps[k].dim()).map(|c| q.coords(&r.mul(&e, &comps[k].rep(c)))).collect();
            Matrix::from_cols(r.field, q.dim(), &cols)
        },
    )
}

/// `⊕_g P_{k_g}` with conversions between coordinates and tuples of representatives.
#[derive(Clone, Debug)]
pub struct FreeSum {
    pub parts: Vec<TruncatedFree>,
    pub module: GradedModule,
}

impl FreeSum {
    pub fn new(r: &FilteredAlgebra, indices: &[usize], len: usize) -> FreeSum {
        let parts: Vec<TruncatedFree> = indices.iter().map(|&i| truncated_free(r, i, len)).collect();
        let module =
            if parts.is_empty() { GradedModule::zero(r, len) } else { direct_sum(r, &parts.iter().map(|p| &p.module).collect::<Vec<_>>()) };
        FreeSum { parts, module }
    }

    pub fn coords_of(&self, k: usize, reps: &[Vec<Scalar>]) -> Vec<Scalar> {
        self.parts.iter().zip(reps).flat_map(|(p, v)| p.comps[k].coords(v)).collect()
    }

    pub fn reps_of(&self, r: &FilteredAlgebra, k: usize, v: &[Scalar]) -> Vec<Vec<Scalar>> {
        let mut pos = 0;
        self.parts
            .iter()
            .map(|p| {
                let q = &p.comps[k];
                let out = if q.dim() == 0 { vec![r.field.zero(); r.dim()] } else { q.reps.mul_vec(&v[pos..pos + q.dim()]) };
                pos += q.dim();
                out
            })
            .collect()
    }
}

/// `M = coker(⊕ P_{k_rel} -> ⊕ P_{k_g})` with generator images `x_g ∈ M^{-k_g}`.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub len: usize,
    pub gens: Vec<usize>,
    pub images: Vec<Vec<Scalar>>,
    /// `(index, one representative per generator)`.
    pub relations: Vec<(usize, Vec<Vec<Scalar>>)>,
}

/// Greedy choice of elements spanning `m` as a submodule, lowest degree first.
fn greedy_generators(r: &FilteredAlgebra, m: &GradedModule, within: &[Matrix]) -> Vec<(usize, Vec<Scalar>)> {
    let mut chosen: Vec<(usize, Vec<Scalar>)> = Vec::new();
    for k in (0..m.len()).rev() {
        loop {
            let span = generate(r, m, &chosen)[k].clone();
            let both = Matrix::hstack(r.field, m.dims[k], &[&span, &within[k]]);
            match both.pivot_cols().into_iter().find(|&p| p >= span.cols()) {
                Some(p) => chosen.push((k, within[k].col(p - span.cols()))),
                None => break,
            }
        }
    }
    chosen
}

/// The surjection from the free module on the generators, per index.
fn free_map(r: &FilteredAlgebra, m: &GradedModule, free: &FreeSum, gens: &[usize], images: &[Vec<Scalar>]) -> ModuleMap {
    (0..m.len())
        .map(|k| {
            let mut cols = Vec::new();
            for (g, part) in free.parts.iter().enumerate() {
                let j = k as i64 - gens[g] as i64;
                for c in 0..part.comps[k].dim() {
                    cols.push(m.action(r, &part.comps[k].rep(c), j, gens[g]).mul_vec(&images[g]));
                }
            }
            Matrix::from_cols(r.field, m.dims[k], &cols)
        })
        .collect()
}

pub fn presentation(r: &FilteredAlgebra, m: &GradedModule) -> Presentation {
    let field = r.field;
    let len = m.len();
    let all: Vec<Matrix> = m.dims.iter().map(|&d| Matrix::identity(field, d)).collect();
    let gens = greedy_generators(r, m, &all);
    let (idx, images): (Vec<usize>, Vec<Vec<Scalar>>) = gens.into_iter().unzip();
    let free = FreeSum::new(r, &idx, len);
    let phi = free_map(r, m, &free, &idx, &images);
    let kernel: Vec<Matrix> = phi.iter().map(Matrix::kernel_basis).collect();
    let rels = greedy_generators(r, &free.module, &kernel);
    let relations = rels.into_iter().map(|(k, v)| (k, free.reps_of(r, k, &v))).collect();
    Presentation { len, gens: idx, images, relations }
}

/// The cokernel of a presentation, as a quotient of the free module.
pub fn cokernel(r: &FilteredAlgebra, p: &Presentation) -> (FreeSum, super::module::Quotient) {
    let free = FreeSum::new(r, &p.gens, p.len);
    let rels: Vec<(usize, Vec<Scalar>)> = p.relations.iter().map(|(k, reps)| (*k, free.coords_of(*k, reps))).collect();
    let sub = generate(r, &free.module, &rels);
    let q = quotient(r, &free.module, &sub);
    (free, q)
}

/// `l^n(M ⊗ N)` from presentations, with `P_i ⊗ P_j = P_{i+j}`.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub module: GradedModule,
    pub pairs: Vec<(usize, usize)>,
    pub free: FreeSum,
    pub reps: Vec<Matrix>,
    pub proj: Vec<Matrix>,
}

pub fn tensor_n(r: &FilteredAlgebra, m1: &GradedModule, m2: &GradedModule, n: usize) -> Result<TensorProduct> {
    if n == 0 || n > m1.len() || n > m2.len() {
        return input(format!("cannot truncate lengths {} and {} to {n}", m1.len(), m2.len()));
    }
    let (p1, p2) = (presentation(r, m1), presentation(r, m2));
    tensor_from_presentations(r, &p1, &p2, n)
}

pub fn tensor_from_presentations(r: &FilteredAlgebra, p1: &Presentation, p2: &Presentation, n: usize) -> Result<TensorProduct> {
    let field = r.field;
    let mut pairs = Vec::new();
    for (g, &kg) in p1.gens.iter().enumerate() {
        for (h, &kh) in p2.gens.iter().enumerate() {
            if kg + kh < n {
                pairs.push((g, h));
            }
        }
    }
    let idx: Vec<usize> = pairs.iter().map(|&(g, h)| p1.gens[g] + p2.gens[h]).collect();
    let free = FreeSum::new(r, &idx, n);
    let zero = vec![field.zero(); r.dim()];
    let mut rels: Vec<(usize, Vec<Scalar>)> = Vec::new();
    for (ky, y) in &p1.relations {
        for (h, &kh) in p2.gens.iter().enumerate() {
            let k = ky + kh;
            if k >= n {
                continue;
            }
            let reps: Vec<Vec<Scalar>> = pairs.iter().map(|&(g, h2)| if h2 == h { y[g].clone() } else { zero.clone() }).collect();
            rels.push((k, free.coords_of(k, &reps)));
        }
    }
    for (kz, z) in &p2.relations {
        for (g, &kg) in p1.gens.iter().enumerate() {
            let k = kz + kg;
            if k >= n {
                continue;
            }
            let reps: Vec<Vec<Scalar>> = pairs.iter().map(|&(g2, h)| if g2 == g { z[h].clone() } else { zero.clone() }).collect();
            rels.push((k, free.coords_of(k, &reps)));
        }
    }
    let sub = generate(r, &free.module, &rels);
    let q = quotient(r, &free.module, &sub);
    Ok(TensorProduct { module: q.module, pairs, free, reps: q.reps, proj: q.proj })
}

/// Checks `P_0 ⊗ M ≅ M` through the map sending `e_0 ⊗ x_g` to `x_g`.
pub fn unit_law(r: &FilteredAlgebra, m: &GradedModule) -> Result<bool> {
    let n = m.len();
    let p0_free = truncated_free(r, 0, n);
    let pm = presentation(r, m);
    let pp = presentation(r, &p0_free.module);
    let t = tensor_from_presentations(r, &pp, &pm, n)?;
    // images of the tensor generators e ⊗ x_g, where e runs over P_0's generators
    let images: Vec<Vec<Scalar>> = t
        .pairs
        .iter()
        .map(|&(g, h)| {
            let rep = p0_free.comps[pp.gens[g]].reps.mul_vec(&pp.images[g]);
            m.action(r, &rep, pp.gens[g] as i64, pm.gens[h]).mul_vec(&pm.images[h])
        })
        .collect();
    let idx: Vec<usize> = t.pairs.iter().map(|&(g, h)| pp.gens[g] + pm.gens[h]).collect();
    let phi = free_map(r, m, &t.free, &idx, &images);
    let f: ModuleMap = (0..n).map(|k| phi[k].mul(&t.reps[k])).collect();
    Ok(is_module_map(r, &t.module, m, &f) && is_isomorphism(&f))
}

/// `V ⊗ P_i` for a vector space of dimension `dim`.
pub fn induce(r: &FilteredAlgebra, dim: usize, i: usize, len: usize) -> Result<GradedModule> {
    if i >= len {
        return input(format!("index {i} outside the window of length {len}"));
    }
    Ok(FreeSum::new(r, &vec![i; dim], len).module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::filtlab::module::truncate;

    #[test]
    fn tensor_with_frees() {
        let r = FilteredAlgebra::adic(Field::Rational, 3);
        let p: Vec<_> = (0..3).map(|i| truncated_free(&r, i, 3).module).collect();
        for i in 0..3 {
            for j in 0..3 {
                let t = tensor_n(&r, &p[i], &p[j], 3).unwrap();
                let want = if i + j < 3 { p[i + j].dims.clone() } else { vec![0; 3] };
                assert_eq!(t.module.dims, want, "P{i} ⊗ P{j}");
            }
            assert!(unit_law(&r, &p[i]).unwrap());
        }
        let big = truncated_free(&r, 1, 5).module;
        let t = tensor_n(&r, &big, &p[1], 3).unwrap();
        let t2 = tensor_n(&r, &truncate(&r, &big, 3).unwrap(), &p[1], 3).unwrap();
        assert_eq!(t.module.dims, t2.module.dims);
    }
}
